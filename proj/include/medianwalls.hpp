#pragma once

// Everything in one include.

#include "medianwalls/audit.hpp"
#include "medianwalls/errors.hpp"
#include "medianwalls/io/cli.hpp"
#include "medianwalls/io/corpus.hpp"
#include "medianwalls/io/experiments.hpp"
#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/io/json.hpp"
#include "medianwalls/lab/complex_ball.hpp"
#include "medianwalls/lab/crofton.hpp"
#include "medianwalls/lab/hyperbolic.hpp"
#include "medianwalls/lab/l1.hpp"
#include "medianwalls/lab/models.hpp"
#include "medianwalls/lab/rng.hpp"
#include "medianwalls/lab/snowflake.hpp"
#include "medianwalls/medianization.hpp"
#include "medianwalls/metric_space.hpp"
#include "medianwalls/point_set.hpp"
#include "medianwalls/rational.hpp"
#include "medianwalls/wallspace.hpp"
