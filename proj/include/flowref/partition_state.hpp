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

#include <memory>
#include <vector>

#include "flowref/hypergraph.hpp"
#include "flowref/move.hpp"
#include "flowref/types.hpp"

namespace flowref {

class QuotientGraph;

/// Mutable k-way partition with incrementally maintained block weights,
/// per-net per-block pin counts Phi(e, V_i) and connectivities lambda(e).
///
/// Concurrency contract: reads may run concurrently with move application;
/// all maintained counters are updated with indivisible read-modify-write
/// operations, so readers see consistent individual values (possibly stale).
/// applyMoveSequence itself holds a global mutual-exclusion region, i.e.
/// at most one sequence is applied at a time.
class PartitionState {
 public:
  PartitionState(const Hypergraph& hg, PartitionID k, double epsilon,
                 const std::vector<PartitionID>& assignment);

  PartitionState(const PartitionState&) = delete;
  PartitionState& operator=(const PartitionState&) = delete;

  const Hypergraph& hypergraph() const { return *_hg; }
  PartitionID k() const { return _k; }
  double epsilon() const { return _epsilon; }
  BlockWeight maxBlockWeight() const { return _max_block_weight; }

  PartitionID blockOf(const NodeID v) const { return _part[v].load(std::memory_order_relaxed); }
  BlockWeight blockWeight(const PartitionID i) const { return _block_weight[i].load(std::memory_order_relaxed); }
  uint32_t pinCount(const NetID e, const PartitionID i) const {
    return _pin_count[static_cast<size_t>(e) * _k + i].load(std::memory_order_relaxed);
  }
  uint32_t connectivity(const NetID e) const { return _connectivity[e].load(std::memory_order_relaxed); }

  bool isBalanced() const;

  /// sum over all nets of (lambda(e) - 1) * omega(e), recomputed from the
  /// maintained connectivities.
  Gain connectivityMetric() const;

  /// Applies a move sequence under the global move lock. Moves whose vertex
  /// is no longer in the expected from-block are dropped first; the sequence
  /// is rejected if the surviving moves would violate the balance constraint
  /// and reverted if their recomputed gain is negative. Nets entering the
  /// cut of a block pair are registered with the quotient graph (if given).
  ApplyResult applyMoveSequence(MoveSequence& sequence, QuotientGraph* qg = nullptr);

  std::vector<PartitionID> assignmentSnapshot() const;

  /// Recomputes Phi, lambda and block weights from scratch and compares with
  /// the maintained values. Returns false on the first mismatch.
  bool validateConsistency() const;

 private:
  // Moves u from 'from' to 'to', maintaining all counters and feeding
  // cut-net changes to the quotient graph.
  Gain moveVertex(NodeID u, PartitionID from, PartitionID to, QuotientGraph* qg);

  const Hypergraph* _hg;
  PartitionID _k;
  double _epsilon;
  BlockWeight _max_block_weight;
  std::unique_ptr<std::atomic<PartitionID>[]> _part;
  std::unique_ptr<std::atomic<BlockWeight>[]> _block_weight;
  std::unique_ptr<std::atomic<uint32_t>[]> _pin_count;
  std::unique_ptr<std::atomic<uint32_t>[]> _connectivity;
  SpinLock _move_lock;
};

}  // namespace flowref
