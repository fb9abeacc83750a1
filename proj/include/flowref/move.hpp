/*
Copyright 2026 The flowref authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <vector>

#include "flowref/types.hpp"

namespace flowref {

struct Move {
  NodeID node = kInvalidNode;
  PartitionID from = kInvalidPartition;
  PartitionID to = kInvalidPartition;
};

/// Ordered move list plus the gain the producing search expects.
/// The expected gain is advisory; the gain recomputed while applying
/// the sequence is authoritative.
struct MoveSequence {
  std::vector<Move> moves;
  Gain expected_gain = 0;
};

enum class ApplyStatus : uint8_t {
  APPLIED,   // all surviving moves applied, gain >= 0
  REJECTED,  // would violate the balance constraint, nothing applied
  REVERTED   // applied gain was negative, rolled back
};

struct ApplyResult {
  ApplyStatus status = ApplyStatus::APPLIED;
  Gain gain = 0;
  size_t dropped_moves = 0;  // vertices no longer in their expected block
};

}  // namespace flowref
