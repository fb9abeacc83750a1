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

#include "flowref/hypergraph.hpp"

#include <numeric>
#include <stdexcept>

namespace flowref {

Hypergraph::Hypergraph(const NodeID num_vertices,
                       const std::vector<std::vector<NodeID>>& nets,
                       std::vector<NetWeight> net_weights,
                       std::vector<VertexWeight> vertex_weights)
    : _num_vertices(num_vertices) {
  if (net_weights.empty()) {
    net_weights.assign(nets.size(), 1);
  }
  if (vertex_weights.empty()) {
    vertex_weights.assign(num_vertices, 1);
  }
  if (net_weights.size() != nets.size() || vertex_weights.size() != num_vertices) {
    throw std::invalid_argument("hypergraph: weight vector size mismatch");
  }
  for (const VertexWeight w : vertex_weights) {
    if (w == 0) throw std::invalid_argument("hypergraph: vertex weights must be positive");
  }
  for (const NetWeight w : net_weights) {
    if (w == 0) throw std::invalid_argument("hypergraph: net weights must be positive");
  }

  _net_weights = std::move(net_weights);
  _vertex_weights = std::move(vertex_weights);
  _total_vertex_weight = std::accumulate(_vertex_weights.begin(), _vertex_weights.end(), BlockWeight(0));

  size_t num_pins = 0;
  for (const auto& net : nets) num_pins += net.size();

  _net_offsets.assign(nets.size() + 1, 0);
  _pins.reserve(num_pins);
  std::vector<size_t> degrees(num_vertices, 0);
  for (size_t e = 0; e < nets.size(); ++e) {
    for (const NodeID v : nets[e]) {
      if (v >= num_vertices) throw std::invalid_argument("hypergraph: pin out of range");
      _pins.push_back(v);
      ++degrees[v];
    }
    _net_offsets[e + 1] = _pins.size();
  }

  _inc_offsets.assign(num_vertices + 1, 0);
  for (NodeID v = 0; v < num_vertices; ++v) {
    _inc_offsets[v + 1] = _inc_offsets[v] + degrees[v];
  }
  _incident_nets.resize(num_pins);
  std::vector<size_t> cursor(_inc_offsets.begin(), _inc_offsets.end() - 1);
  for (NetID e = 0; e < nets.size(); ++e) {
    for (const NodeID v : pins(e)) {
      _incident_nets[cursor[v]++] = e;
    }
  }
}

}  // namespace flowref
