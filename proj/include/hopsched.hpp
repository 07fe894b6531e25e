#pragma once

#include "hopsched/bench.hpp"
#include "hopsched/cpm.hpp"
#include "hopsched/energy.hpp"
#include "hopsched/errors.hpp"
#include "hopsched/generator.hpp"
#include "hopsched/network.hpp"
#include "hopsched/pert.hpp"
#include "hopsched/project_io.hpp"
#include "hopsched/random.hpp"
#include "hopsched/solver.hpp"
