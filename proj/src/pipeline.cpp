#include "rach/pipeline.hpp"

namespace rach {

NewArrivals scenario_arrivals(const ScenarioConfig& config) {
  const SlotGrid grid = config.grid();
  return {expected_new_arrivals(config.h2h_model(), grid),
          expected_new_arrivals(config.m2m_model(), grid)};
}

Analysis analyze(const ScenarioConfig& config) {
  validate(config);
  const SlotGrid grid = config.grid();
  const BackoffGeometry geom = config.geometry();
  TransitionMatrix matrix = build_matrix(geom, grid);
  PopulationGrid pop = propagate(config.allocation(), matrix, scenario_arrivals(config),
                                 config.rach.W, config.model.ja_mode,
                                 config.model.m2m_success);
  MetricsReport metrics = analyze_metrics(pop, matrix, geom, grid, config.rach.M, config.model.lag_mode);
  return {std::move(matrix), std::move(pop), std::move(metrics)};
}

}  // namespace rach
