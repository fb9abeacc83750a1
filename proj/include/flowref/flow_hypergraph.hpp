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

#include <span>
#include <vector>

#include "flowref/types.hpp"

namespace flowref {

/// Contracted sub-hypergraph with distinguished source (node 0) and sink
/// (node 1). Flow solvers simulate the Lawler expansion on top of it, so
/// pins are addressable: pin p of net e is the pair (pins()[p], e) with p
/// in [netBegin(e), netEnd(e)).
class FlowHypergraph {
 public:
  static constexpr NodeID kSource = 0;
  static constexpr NodeID kSink = 1;

  struct IncidentPin {
    NetID net;
    uint32_t pin_index;  // flattened pin slot, addresses per-pin flow
  };

  FlowHypergraph() = default;
  /// node_weights[0] is the contracted source weight, node_weights[1] the
  /// contracted sink weight. Single-pin nets and nets containing both
  /// terminals must already be gone; weights of dropped source-sink nets
  /// are carried in dropped_st_weight.
  FlowHypergraph(std::vector<BlockWeight> node_weights,
                 const std::vector<std::vector<NodeID>>& nets,
                 std::vector<NetWeight> net_weights,
                 NetWeight dropped_st_weight = 0);

  NodeID numNodes() const { return static_cast<NodeID>(_node_weights.size()); }
  NetID numNets() const { return static_cast<NetID>(_net_weights.size()); }
  size_t numPins() const { return _pins.size(); }

  // Simulated Lawler node space: hypernodes, then (e_in, e_out) per net.
  size_t numSimulatedNodes() const { return numNodes() + 2 * static_cast<size_t>(numNets()); }
  NodeID eIn(const NetID e) const { return numNodes() + 2 * e; }
  NodeID eOut(const NetID e) const { return numNodes() + 2 * e + 1; }
  bool isHypernode(const NodeID u) const { return u < numNodes(); }
  NetID netOfSimulated(const NodeID u) const { return (u - numNodes()) / 2; }
  bool isEIn(const NodeID u) const { return u >= numNodes() && (u - numNodes()) % 2 == 0; }

  size_t netBegin(const NetID e) const { return _net_offsets[e]; }
  size_t netEnd(const NetID e) const { return _net_offsets[e + 1]; }
  std::span<const NodeID> pins(const NetID e) const {
    return {_pins.data() + _net_offsets[e], _net_offsets[e + 1] - _net_offsets[e]};
  }
  std::span<const IncidentPin> incidentPins(const NodeID u) const {
    return {_incidence.data() + _inc_offsets[u], _inc_offsets[u + 1] - _inc_offsets[u]};
  }

  NetWeight netWeight(const NetID e) const { return _net_weights[e]; }
  BlockWeight nodeWeight(const NodeID u) const { return _node_weights[u]; }
  BlockWeight totalNodeWeight() const { return _total_node_weight; }
  NetWeight droppedStWeight() const { return _dropped_st_weight; }

  // Refinement back-mapping (unset for standalone networks).
  NodeID originalVertex(const NodeID u) const { return _original_vertex[u]; }
  bool onSourceSideOriginally(const NodeID u) const { return _original_side[u] == 0; }
  uint32_t distanceFromCut(const NodeID u) const { return _distance_from_cut[u]; }

  void setOrigin(std::vector<NodeID> original_vertex, std::vector<uint8_t> original_side,
                 std::vector<uint32_t> distance_from_cut);

 private:
  std::vector<BlockWeight> _node_weights;
  std::vector<size_t> _net_offsets{0};
  std::vector<NodeID> _pins;
  std::vector<NetWeight> _net_weights;
  std::vector<size_t> _inc_offsets{0};
  std::vector<IncidentPin> _incidence;
  BlockWeight _total_node_weight = 0;
  NetWeight _dropped_st_weight = 0;

  std::vector<NodeID> _original_vertex;
  std::vector<uint8_t> _original_side;
  std::vector<uint32_t> _distance_from_cut;
};

}  // namespace flowref
