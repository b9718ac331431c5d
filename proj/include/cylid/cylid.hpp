#pragma once

#include "cylid/benchmark.hpp"
#include "cylid/config.hpp"
#include "cylid/costs.hpp"
#include "cylid/csv_io.hpp"
#include "cylid/estimators.hpp"
#include "cylid/matrix.hpp"
#include "cylid/pso.hpp"
#include "cylid/report.hpp"
#include "cylid/rng.hpp"
#include "cylid/robot.hpp"
#include "cylid/sampling.hpp"
