#pragma once

#include "herdsim/averaging.hpp"
#include "herdsim/confinement.hpp"
#include "herdsim/dynamics.hpp"
#include "herdsim/export.hpp"
#include "herdsim/graph.hpp"
#include "herdsim/integrate.hpp"
#include "herdsim/linalg.hpp"
#include "herdsim/params.hpp"
#include "herdsim/rng.hpp"
#include "herdsim/scenarios.hpp"
#include "herdsim/state.hpp"
#include "herdsim/trajectory.hpp"
#include "herdsim/vec2.hpp"
