#pragma once

// Dobric-Ojeda process toolkit: simulation, quadratic variation, parameter
// estimation, option pricing, and rolling backtests.

#include "doq/backtest.hpp"
#include "doq/calendar.hpp"
#include "doq/csv.hpp"
#include "doq/errors.hpp"
#include "doq/fbm.hpp"
#include "doq/grid.hpp"
#include "doq/hurst_constants.hpp"
#include "doq/param_est.hpp"
#include "doq/parallel.hpp"
#include "doq/path_sim.hpp"
#include "doq/pricing.hpp"
#include "doq/quad_var.hpp"
#include "doq/rng.hpp"
#include "doq/special_functions.hpp"
