#pragma once

#include "restartls/bench.hpp"
#include "restartls/directions.hpp"
#include "restartls/emit.hpp"
#include "restartls/io.hpp"
#include "restartls/linesearch.hpp"
#include "restartls/noise.hpp"
#include "restartls/problem.hpp"
#include "restartls/profiles.hpp"
#include "restartls/rng.hpp"
#include "restartls/solver.hpp"
#include "restartls/svg.hpp"
#include "restartls/testbed.hpp"
#include "restartls/theory.hpp"
#include "restartls/vec.hpp"
