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

#include "flowref/region.hpp"

#include <cmath>
#include <deque>

namespace flowref {

RegionGrower::RegionGrower(const Hypergraph& hg)
    : _hg(&hg), _vertex_mark(hg.numVertices(), 0), _net_mark(hg.numNets(), 0) {}

std::optional<Region> RegionGrower::grow(const PartitionState& partition, const PartitionID block_i,
                                         const PartitionID block_j, const std::vector<NetID>& cut_nets,
                                         const double alpha, const uint32_t delta) {
  Region region;
  region.block_i = block_i;
  region.block_j = block_j;
  for (const NetID e : cut_nets) {
    if (partition.pinCount(e, block_i) > 0 && partition.pinCount(e, block_j) > 0) {
      region.cut_nets.push_back(e);
      region.cut_weight += _hg->netWeight(e);
    }
  }
  if (region.cut_nets.empty()) {
    return std::nullopt;
  }

  // Pair-local balance bound: c(B1) <= (1 + alpha*eps) * ceil(c(V')/2) - c(V_j')
  // with V' restricted to the two blocks.
  const BlockWeight pair_weight = partition.blockWeight(block_i) + partition.blockWeight(block_j);
  const double scaled = (1.0 + alpha * partition.epsilon()) *
                        std::ceil(static_cast<double>(pair_weight) / 2.0);
  const BlockWeight bound = static_cast<BlockWeight>(std::floor(scaled + 1e-9));

  growSide(partition, block_i, region.cut_nets, bound - partition.blockWeight(block_j), delta,
           region.side_i, region.dist_i, region.weight_i);
  growSide(partition, block_j, region.cut_nets, bound - partition.blockWeight(block_i), delta,
           region.side_j, region.dist_j, region.weight_j);
  return region;
}

void RegionGrower::growSide(const PartitionState& partition, const PartitionID block,
                            const std::vector<NetID>& cut_nets, const BlockWeight budget,
                            const uint32_t delta, std::vector<NodeID>& out_vertices,
                            std::vector<uint32_t>& out_dist, BlockWeight& out_weight) {
  ++_mark;
  out_weight = 0;
  std::deque<std::pair<NodeID, uint32_t>> queue;

  auto tryAdd = [&](const NodeID v, const uint32_t dist) {
    if (_vertex_mark[v] == _mark) return;
    _vertex_mark[v] = _mark;
    if (partition.blockOf(v) != block) return;
    const VertexWeight w = _hg->vertexWeight(v);
    // Too-heavy vertices are skipped, not truncated; the BFS keeps going.
    if (out_weight + static_cast<BlockWeight>(w) > budget) return;
    out_weight += w;
    out_vertices.push_back(v);
    out_dist.push_back(dist);
    queue.emplace_back(v, dist);
  };

  // Boundary vertices sit at distance 1.
  for (const NetID e : cut_nets) {
    _net_mark[e] = _mark;
    for (const NodeID v : _hg->pins(e)) {
      tryAdd(v, 1);
    }
  }

  while (!queue.empty()) {
    const auto [v, dist] = queue.front();
    queue.pop_front();
    if (dist >= delta) continue;
    for (const NetID e : _hg->incidentNets(v)) {
      if (_net_mark[e] == _mark) continue;
      _net_mark[e] = _mark;
      for (const NodeID u : _hg->pins(e)) {
        tryAdd(u, dist + 1);
      }
    }
  }
}

}  // namespace flowref
