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

#include "flowref/quotient_graph.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>

namespace flowref {

QuotientGraph::QuotientGraph(const Hypergraph& hg, const PartitionState& partition)
    : _k(partition.k()),
      _pairs(static_cast<size_t>(_k) * (_k - 1) / 2),
      _stats(static_cast<size_t>(_k) * (_k - 1) / 2) {
  tbb::parallel_for(NetID(0), hg.numNets(), [&](const NetID e) {
    if (partition.connectivity(e) <= 1) return;
    for (PartitionID i = 0; i < _k; ++i) {
      if (partition.pinCount(e, i) == 0) continue;
      for (PartitionID j = i + 1; j < _k; ++j) {
        if (partition.pinCount(e, j) == 0) continue;
        addCutNet(e, i, j, hg.netWeight(e));
      }
    }
  });
}

std::vector<NetID> QuotientGraph::consumeCutNets(const PartitionID i, const PartitionID j,
                                                 const PartitionState& partition) {
  PairData& pair = _pairs[pairIndex(i, j)];
  pair.lock.lock();
  std::vector<NetID> nets;
  nets.reserve(pair.cut_nets.size());
  std::sort(pair.cut_nets.begin(), pair.cut_nets.end());
  NetID last = kInvalidNet;
  for (const NetID e : pair.cut_nets) {
    if (e == last) continue;  // duplicate from re-registration
    last = e;
    if (partition.pinCount(e, i) > 0 && partition.pinCount(e, j) > 0) {
      nets.push_back(e);
    }
  }
  pair.cut_nets = nets;
  pair.lock.unlock();
  return nets;
}

void QuotientGraph::addCutNet(const NetID e, const PartitionID i, const PartitionID j,
                              const NetWeight weight) {
  PairData& pair = _pairs[pairIndex(i, j)];
  pair.lock.lock();
  pair.cut_nets.push_back(e);
  pair.lock.unlock();
  pair.cut_weight.fetch_add(weight, std::memory_order_relaxed);
}

void QuotientGraph::retireCutNet(const PartitionID i, const PartitionID j, const NetWeight weight) {
  _pairs[pairIndex(i, j)].cut_weight.fetch_sub(weight, std::memory_order_relaxed);
}

void QuotientGraph::startNewInvocation() {
  for (PairStats& s : _stats) {
    s.improvement_previous.store(s.improvement_current.load(std::memory_order_relaxed),
                                 std::memory_order_relaxed);
    s.improvement_current.store(0, std::memory_order_relaxed);
    s.num_improvements.store(0, std::memory_order_relaxed);
  }
}

}  // namespace flowref
