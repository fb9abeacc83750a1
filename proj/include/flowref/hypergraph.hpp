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

/// Immutable weighted hypergraph in pin-list/incidence (CSR) form.
/// Vertex and net IDs are 0-based. Incidence symmetry (v in e <=> e in I(v))
/// holds by construction.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(NodeID num_vertices,
             const std::vector<std::vector<NodeID>>& nets,
             std::vector<NetWeight> net_weights = {},
             std::vector<VertexWeight> vertex_weights = {});

  NodeID numVertices() const { return _num_vertices; }
  NetID numNets() const { return static_cast<NetID>(_net_offsets.empty() ? 0 : _net_offsets.size() - 1); }
  size_t numPins() const { return _pins.size(); }

  std::span<const NodeID> pins(const NetID e) const {
    return {_pins.data() + _net_offsets[e], _net_offsets[e + 1] - _net_offsets[e]};
  }
  std::span<const NetID> incidentNets(const NodeID v) const {
    return {_incident_nets.data() + _inc_offsets[v], _inc_offsets[v + 1] - _inc_offsets[v]};
  }

  size_t netSize(const NetID e) const { return _net_offsets[e + 1] - _net_offsets[e]; }
  size_t degree(const NodeID v) const { return _inc_offsets[v + 1] - _inc_offsets[v]; }

  VertexWeight vertexWeight(const NodeID v) const { return _vertex_weights[v]; }
  NetWeight netWeight(const NetID e) const { return _net_weights[e]; }
  BlockWeight totalVertexWeight() const { return _total_vertex_weight; }

  double density() const {
    return _num_vertices == 0 ? 0.0 : static_cast<double>(numNets()) / _num_vertices;
  }
  double averageNetSize() const {
    return numNets() == 0 ? 0.0 : static_cast<double>(numPins()) / numNets();
  }

 private:
  NodeID _num_vertices = 0;
  std::vector<size_t> _net_offsets{0};
  std::vector<NodeID> _pins;
  std::vector<size_t> _inc_offsets{0};
  std::vector<NetID> _incident_nets;
  std::vector<VertexWeight> _vertex_weights;
  std::vector<NetWeight> _net_weights;
  BlockWeight _total_vertex_weight = 0;
};

}  // namespace flowref
