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

#include "flowref/flow_hypergraph.hpp"

#include <stdexcept>

namespace flowref {

FlowHypergraph::FlowHypergraph(std::vector<BlockWeight> node_weights,
                               const std::vector<std::vector<NodeID>>& nets,
                               std::vector<NetWeight> net_weights,
                               const NetWeight dropped_st_weight)
    : _node_weights(std::move(node_weights)),
      _net_weights(std::move(net_weights)),
      _dropped_st_weight(dropped_st_weight) {
  if (_node_weights.size() < 2) throw std::invalid_argument("flow hypergraph: needs source and sink");
  if (_net_weights.size() != nets.size()) throw std::invalid_argument("flow hypergraph: weight mismatch");

  for (const BlockWeight w : _node_weights) _total_node_weight += w;

  const NodeID n = numNodes();
  std::vector<size_t> degrees(n, 0);
  size_t num_pins = 0;
  for (const auto& net : nets) num_pins += net.size();
  _pins.reserve(num_pins);
  for (const auto& net : nets) {
    bool has_source = false, has_sink = false;
    for (const NodeID v : net) {
      if (v >= n) throw std::invalid_argument("flow hypergraph: pin out of range");
      has_source |= (v == kSource);
      has_sink |= (v == kSink);
      _pins.push_back(v);
      ++degrees[v];
    }
    if (net.size() < 2) throw std::invalid_argument("flow hypergraph: single-pin net");
    if (has_source && has_sink) throw std::invalid_argument("flow hypergraph: net spans both terminals");
    _net_offsets.push_back(_pins.size());
  }

  _inc_offsets.assign(n + 1, 0);
  for (NodeID v = 0; v < n; ++v) _inc_offsets[v + 1] = _inc_offsets[v] + degrees[v];
  _incidence.resize(num_pins);
  std::vector<size_t> cursor(_inc_offsets.begin(), _inc_offsets.end() - 1);
  for (NetID e = 0; e < numNets(); ++e) {
    for (size_t p = netBegin(e); p < netEnd(e); ++p) {
      _incidence[cursor[_pins[p]]++] = IncidentPin{e, static_cast<uint32_t>(p)};
    }
  }

  _original_vertex.assign(n, kInvalidNode);
  _original_side.assign(n, 0);
  _distance_from_cut.assign(n, 0);
}

void FlowHypergraph::setOrigin(std::vector<NodeID> original_vertex, std::vector<uint8_t> original_side,
                               std::vector<uint32_t> distance_from_cut) {
  _original_vertex = std::move(original_vertex);
  _original_side = std::move(original_side);
  _distance_from_cut = std::move(distance_from_cut);
}

}  // namespace flowref
