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

#include "flowref/flow_hypergraph.hpp"
#include "flowref/hypergraph.hpp"
#include "flowref/partition_state.hpp"
#include "flowref/region.hpp"

namespace flowref {

enum class ConstructionAlgorithm : uint8_t { NET_SCAN, NODE_SORT };

/// NODE_SORT pays off on sparse hypergraphs (density <= 0.5) or when nets
/// are huge on average (>= 100 pins); NET_SCAN otherwise.
ConstructionAlgorithm selectConstruction(const Hypergraph& hg);

struct NetworkBuildOptions {
  bool merge_identical_nets = true;
  size_t num_workers = 1;
};

/// Builds the contracted flow hypergraph for a region: everything in
/// V_i \ B1 becomes the source, V_j \ B2 the sink, pins of other blocks are
/// dropped. Single-pin nets and nets containing both terminals are removed;
/// identical nets are merged via fingerprints.
class FlowNetworkBuilder {
 public:
  explicit FlowNetworkBuilder(const Hypergraph& hg);

  FlowHypergraph construct(const PartitionState& partition, const Region& region,
                           ConstructionAlgorithm algorithm, const NetworkBuildOptions& options = {});

 private:
  struct RawNets {
    std::vector<std::vector<NodeID>> pin_lists;  // each sorted ascending
    std::vector<NetWeight> weights;
    NetWeight dropped_st_weight = 0;
  };

  RawNets netScan(const PartitionState& partition, const Region& region, size_t num_workers);
  RawNets nodeSort(const PartitionState& partition, const Region& region, size_t num_workers);
  static void mergeIdenticalNets(RawNets& nets, size_t num_workers);

  const Hypergraph* _hg;
  std::vector<NodeID> _flow_node_of;  // stamped map original vertex -> flow node
  std::vector<uint32_t> _vertex_stamp;
  std::vector<uint32_t> _net_stamp;
  uint32_t _stamp = 0;
};

}  // namespace flowref
