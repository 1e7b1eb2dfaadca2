#pragma once

// Umbrella header.
#include "dtc/dtc_core.hpp"
#include "dtc/errors.hpp"
#include "dtc/estimator.hpp"
#include "dtc/frames.hpp"
#include "dtc/fuzzy_optimizer.hpp"
#include "dtc/inverter.hpp"
#include "dtc/machine.hpp"
#include "dtc/metrics.hpp"
#include "dtc/report.hpp"
#include "dtc/scenario_io.hpp"
#include "dtc/sim.hpp"
