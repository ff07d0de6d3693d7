#pragma once

// Null and example process generators.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordpat/contrasts.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/series.hpp"

namespace ordpat {

enum class ProcessKind { white_noise, symmetric_random_walk, geometric_bm, ar1 };
enum class Noise { normal, uniform, bernoulli, triangular, exponential };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::white_noise;
  Noise noise = Noise::normal;
  double phi = 0.5;  // AR(1) coefficient
  std::uint64_t seed = 0;
};

inline std::string_view to_string(ProcessKind k) {
  switch (k) {
    case ProcessKind::white_noise: return "white_noise";
    case ProcessKind::symmetric_random_walk: return "random_walk";
    case ProcessKind::geometric_bm: return "geometric_bm";
    case ProcessKind::ar1: return "ar1";
  }
  return "?";
}

inline std::string_view to_string(Noise n) {
  switch (n) {
    case Noise::normal: return "normal";
    case Noise::uniform: return "uniform";
    case Noise::bernoulli: return "bernoulli";
    case Noise::triangular: return "triangular";
    case Noise::exponential: return "exponential";
  }
  return "?";
}

inline ProcessKind parse_process_kind(std::string_view s) {
  if (s == "white_noise" || s == "iid") return ProcessKind::white_noise;
  if (s == "random_walk" || s == "rw" || s == "symmetric_random_walk") return ProcessKind::symmetric_random_walk;
  if (s == "geometric_bm" || s == "gbm") return ProcessKind::geometric_bm;
  if (s == "ar1") return ProcessKind::ar1;
  throw InvalidArgument("unknown process '" + std::string(s) + "'");
}

inline Noise parse_noise(std::string_view s) {
  if (s == "normal") return Noise::normal;
  if (s == "uniform") return Noise::uniform;
  if (s == "bernoulli") return Noise::bernoulli;
  if (s == "triangular") return Noise::triangular;
  if (s == "exponential") return Noise::exponential;
  throw InvalidArgument("unknown noise '" + std::string(s) + "'");
}

/// Draws i.i.d. noise. Triangular noise is min(u1, u2); exponential noise is 1 + log(u).
class NoiseSource {
 public:
  NoiseSource(Noise kind, std::uint64_t seed) : kind_(kind), rng_(seed) {}

  double operator()() {
    switch (kind_) {
      case Noise::normal: return normal_(rng_);
      case Noise::uniform: return open_uniform();
      case Noise::bernoulli: return (rng_() >> 63) != 0 ? 1.0 : -1.0;
      case Noise::triangular: {
        const double u1 = open_uniform();
        const double u2 = open_uniform();
        return std::min(u1, u2);
      }
      case Noise::exponential: return 1.0 + std::log(open_uniform());
    }
    return 0.0;
  }

  void fill(std::span<double> out) {
    for (double& v : out) v = (*this)();
  }

 private:
  // Uniform on (0, 1) with 53 random bits.
  double open_uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  Noise kind_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Writes T samples of the process into out; deterministic in spec.seed.
inline void generate_into(const ProcessSpec& spec, std::span<double> out) {
  NoiseSource noise(spec.noise, spec.seed);
  switch (spec.kind) {
    case ProcessKind::white_noise:
      noise.fill(out);
      return;
    case ProcessKind::symmetric_random_walk:
    case ProcessKind::geometric_bm: {
      // X_0 = 0 is not emitted; X_k is the sum of the first k increments.
      double x = 0.0;
      for (double& v : out) {
        x += noise();
        v = x;
      }
      if (spec.kind == ProcessKind::geometric_bm) {
        for (double& v : out) {
          v = std::exp(v);
          if (!std::isfinite(v) || v == 0.0) {
            throw InvalidArgument("geometric Brownian motion left the double range; use a shorter series");
          }
        }
      }
      return;
    }
    case ProcessKind::ar1: {
      constexpr int kBurnIn = 200;
      double x = 0.0;
      for (int i = 0; i < kBurnIn; ++i) x = spec.phi * x + noise();
      for (double& v : out) {
        x = spec.phi * x + noise();
        v = x;
      }
      return;
    }
  }
}

inline TimeSeries generate(const ProcessSpec& spec, std::size_t T) {
  if (T < 1) throw InvalidArgument("series length must be >= 1");
  std::vector<double> v(T);
  generate_into(spec, v);
  return TimeSeries(std::move(v));
}

/// Contrasts of a simulated AR(1) series X_t = phi X_{t-1} + e_t, phi = 1/2.
inline ContrastVector ar1_contrasts(Noise noise, std::size_t T, std::uint64_t seed) {
  ProcessSpec spec{ProcessKind::ar1, noise, 0.5, seed};
  std::vector<double> v(T);
  generate_into(spec, v);
  return contrast_vector(PatternDistribution::from_counts(count_patterns(v, WindowSpec{3, 1})));
}

}  // namespace ordpat
