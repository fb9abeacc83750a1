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

#include <optional>
#include <vector>

#include "flowref/hypergraph.hpp"
#include "flowref/partition_state.hpp"
#include "flowref/types.hpp"

namespace flowref {

/// Distance-bounded, weight-bounded neighborhood of a block pair's cut.
/// Distances are BFS layers seeded at the boundary vertices (distance 1).
struct Region {
  PartitionID block_i = kInvalidPartition;
  PartitionID block_j = kInvalidPartition;
  std::vector<NodeID> side_i, side_j;            // B1 and B2
  std::vector<uint32_t> dist_i, dist_j;          // parallel to side_i/side_j
  BlockWeight weight_i = 0, weight_j = 0;
  std::vector<NetID> cut_nets;                   // non-stale seed cut nets
  BlockWeight cut_weight = 0;
};

/// Grows regions for block pairs. One grower per worker; holds reusable
/// scratch marks over the vertex and net ID spaces.
class RegionGrower {
 public:
  explicit RegionGrower(const Hypergraph& hg);

  /// Returns std::nullopt if every given cut-net entry turned out stale
  /// (the pair should be descheduled).
  std::optional<Region> grow(const PartitionState& partition, PartitionID block_i, PartitionID block_j,
                             const std::vector<NetID>& cut_nets, double alpha, uint32_t delta);

 private:
  void growSide(const PartitionState& partition, PartitionID block, const std::vector<NetID>& cut_nets,
                BlockWeight budget, uint32_t delta, std::vector<NodeID>& out_vertices,
                std::vector<uint32_t>& out_dist, BlockWeight& out_weight);

  const Hypergraph* _hg;
  std::vector<uint32_t> _vertex_mark;
  std::vector<uint32_t> _net_mark;
  uint32_t _mark = 0;
};

}  // namespace flowref
