#pragma once

#include "rach/config.hpp"
#include "rach/kmc.hpp"
#include "rach/metrics.hpp"

namespace rach {

struct Analysis {
  TransitionMatrix matrix;
  PopulationGrid populations;
  MetricsReport metrics;
};

/// Runs the analytical engine end to end for one scenario.
Analysis analyze(const ScenarioConfig& config);

/// Expected new arrivals per slot for both classes of a scenario.
NewArrivals scenario_arrivals(const ScenarioConfig& config);

}  // namespace rach
