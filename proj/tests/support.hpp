#pragma once

#include <string>

#include "rach/config.hpp"

namespace rach::testing {

/// Reference geometry with the given machine load and a shared pool.
inline ScenarioConfig reference(long n_mtc, double h2h_per_second = -1.0) {
  ScenarioConfig c = table_one_config();
  c.traffic.n_mtc = n_mtc;
  c.traffic.h2h_lambda_per_second = h2h_per_second;
  return c;
}

/// One RA-TS (T = delta_sf), uniform arrivals, everything else reference.
inline ScenarioConfig single_slot(long n_ues, int M, int W) {
  ScenarioConfig c = table_one_config();
  c.horizon_ms = c.rach.delta_sf_ms;
  c.rach.M = M;
  c.rach.W = W;
  c.traffic.m2m_type = TrafficConfig::M2MType::Type1;
  c.traffic.n_mtc = n_ues;
  c.model.m2m_success = SuccessForm::Tagged;
  return c;
}

inline ScenarioConfig with_policy(ScenarioConfig c, PolicyKind kind, int split) {
  c.policy.kind = kind;
  if (kind == PolicyKind::Disjoint) c.policy.a = split;
  if (kind == PolicyKind::Joint) c.policy.x = split;
  return c;
}

}  // namespace rach::testing
