#pragma once

#include "mgplan/benchmark.hpp"
#include "mgplan/dataset.hpp"
#include "mgplan/errors.hpp"
#include "mgplan/estimator.hpp"
#include "mgplan/grid_world.hpp"
#include "mgplan/losses.hpp"
#include "mgplan/map_io.hpp"
#include "mgplan/pipeline.hpp"
#include "mgplan/planner.hpp"
#include "mgplan/rng.hpp"
#include "mgplan/svg.hpp"
#include "mgplan/tsp.hpp"
#include "mgplan/weight_matrix.hpp"
