#pragma once

#include "mrrfso/analytic_strong.hpp"
#include "mrrfso/analytic_weak.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/config.hpp"
#include "mrrfso/experiments/optimize.hpp"
#include "mrrfso/experiments/output.hpp"
#include "mrrfso/experiments/recipes.hpp"
#include "mrrfso/experiments/runner.hpp"
#include "mrrfso/experiments/spec.hpp"
#include "mrrfso/experiments/tables.hpp"
#include "mrrfso/meijer_g.hpp"
#include "mrrfso/montecarlo.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/parallel.hpp"
#include "mrrfso/quadrature.hpp"
#include "mrrfso/random.hpp"
#include "mrrfso/specfun.hpp"
#include "mrrfso/version.hpp"
