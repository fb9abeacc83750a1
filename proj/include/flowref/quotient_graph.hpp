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

#include <atomic>
#include <vector>

#include "flowref/hypergraph.hpp"
#include "flowref/partition_state.hpp"
#include "flowref/types.hpp"

namespace flowref {

/// Block-pair adjacency with an explicit cut-net list per unordered pair.
/// Lists may contain stale entries (nets that no longer connect both
/// blocks) and duplicates from reverted sequences; both are filtered when
/// a pair's list is consumed. Cut weights are maintained exactly through
/// the move-application callbacks.
class QuotientGraph {
 public:
  QuotientGraph(const Hypergraph& hg, const PartitionState& partition);

  PartitionID k() const { return _k; }
  size_t numPairs() const { return _pairs.size(); }

  size_t pairIndex(PartitionID i, PartitionID j) const {
    if (i > j) std::swap(i, j);
    return static_cast<size_t>(i) * _k - static_cast<size_t>(i) * (i + 1) / 2 + (j - i - 1);
  }

  BlockWeight cutWeight(const PartitionID i, const PartitionID j) const {
    return _pairs[pairIndex(i, j)].cut_weight.load(std::memory_order_relaxed);
  }
  bool isAdjacent(const PartitionID i, const PartitionID j) const { return cutWeight(i, j) > 0; }

  /// Snapshot of the pair's cut nets with stale entries and duplicates
  /// filtered out; the stored list is compacted to the returned set
  /// (lazy removal happens here).
  std::vector<NetID> consumeCutNets(PartitionID i, PartitionID j, const PartitionState& partition);

  /// Registers net e with pair {i, j} (called when Phi(e, V_j) rises to one
  /// for some j with i remaining in the connectivity set).
  void addCutNet(NetID e, PartitionID i, PartitionID j, NetWeight weight);

  /// Cut-weight maintenance for a net leaving the cut of pair {i, j}.
  void retireCutNet(PartitionID i, PartitionID j, NetWeight weight);

  // Scheduling metadata, owned here so that improvements survive between
  // refinement invocations.
  struct PairStats {
    std::atomic<Gain> improvement_current{0};
    std::atomic<Gain> improvement_previous{0};
    std::atomic<uint32_t> num_improvements{0};
  };
  PairStats& stats(const PartitionID i, const PartitionID j) { return _stats[pairIndex(i, j)]; }
  const PairStats& stats(const PartitionID i, const PartitionID j) const { return _stats[pairIndex(i, j)]; }

  bool everImproved(const PartitionID i, const PartitionID j) const {
    const PairStats& s = stats(i, j);
    return s.num_improvements.load(std::memory_order_relaxed) > 0 ||
           s.improvement_previous.load(std::memory_order_relaxed) > 0;
  }

  /// Rolls current improvements over into the previous-invocation slot.
  void startNewInvocation();

 private:
  struct PairData {
    SpinLock lock;
    std::vector<NetID> cut_nets;
    std::atomic<BlockWeight> cut_weight{0};
  };

  PartitionID _k;
  std::vector<PairData> _pairs;
  std::vector<PairStats> _stats;
};

}  // namespace flowref
