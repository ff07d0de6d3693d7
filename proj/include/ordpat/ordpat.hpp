#pragma once

#include "ordpat/coin_tossing.hpp"
#include "ordpat/contrasts.hpp"
#include "ordpat/entropy.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/measure.hpp"
#include "ordpat/nulls.hpp"
#include "ordpat/orders.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/processes.hpp"
#include "ordpat/quadratic_surd.hpp"
#include "ordpat/quantile_cache.hpp"
#include "ordpat/rational.hpp"
#include "ordpat/series.hpp"
