#pragma once

#include <cstdint>
#include <vector>

#include "rach/config.hpp"
#include "rach/types.hpp"

namespace rach {

struct Attempt {
  int slot = 0;
  int preamble = 0;
  bool success = false;
};

enum class FinalState { Success, Blocked, InFlight };

std::string_view to_string(FinalState s);

struct UeRecord {
  int ue_id = 0;
  UeClass cls = UeClass::M2M;
  double arrival_ms = 0.0;
  std::vector<Attempt> attempts;
  FinalState final_state = FinalState::InFlight;
  double delay_ms = 0.0;  ///< meaningful when final_state == Success
};

/// One RA-TS: a preamble succeeds iff exactly one UE picked it.
struct SlotOutcome {
  int slot = 0;
  std::vector<int> preamble_counts;
  int contenders = 0;
  int successes = 0;
  int collided = 0;
};

struct SimTrace {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<UeRecord> ues;
  std::vector<SlotOutcome> slots;
};

}  // namespace rach
