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

#include "flowref/partition_state.hpp"

#include <stdexcept>

#include "flowref/quotient_graph.hpp"

namespace flowref {

PartitionState::PartitionState(const Hypergraph& hg, const PartitionID k, const double epsilon,
                               const std::vector<PartitionID>& assignment)
    : _hg(&hg),
      _k(k),
      _epsilon(epsilon),
      _max_block_weight(flowref::maxBlockWeight(hg.totalVertexWeight(), k, epsilon)) {
  if (k < 1) throw std::invalid_argument("partition: k must be >= 1");
  if (assignment.size() != hg.numVertices()) {
    throw std::invalid_argument("partition: assignment size mismatch");
  }

  _part = std::make_unique<std::atomic<PartitionID>[]>(hg.numVertices());
  _block_weight = std::make_unique<std::atomic<BlockWeight>[]>(k);
  _pin_count = std::make_unique<std::atomic<uint32_t>[]>(static_cast<size_t>(hg.numNets()) * k);
  _connectivity = std::make_unique<std::atomic<uint32_t>[]>(hg.numNets());

  for (PartitionID i = 0; i < k; ++i) _block_weight[i].store(0, std::memory_order_relaxed);
  for (size_t i = 0; i < static_cast<size_t>(hg.numNets()) * k; ++i) {
    _pin_count[i].store(0, std::memory_order_relaxed);
  }

  for (NodeID v = 0; v < hg.numVertices(); ++v) {
    const PartitionID b = assignment[v];
    if (b < 0 || b >= k) throw std::invalid_argument("partition: block id out of range");
    _part[v].store(b, std::memory_order_relaxed);
    _block_weight[b].fetch_add(hg.vertexWeight(v), std::memory_order_relaxed);
  }
  for (NetID e = 0; e < hg.numNets(); ++e) {
    uint32_t lambda = 0;
    for (const NodeID v : hg.pins(e)) {
      const size_t idx = static_cast<size_t>(e) * k + assignment[v];
      if (_pin_count[idx].fetch_add(1, std::memory_order_relaxed) == 0) ++lambda;
    }
    _connectivity[e].store(lambda, std::memory_order_relaxed);
  }
}

bool PartitionState::isBalanced() const {
  for (PartitionID i = 0; i < _k; ++i) {
    if (blockWeight(i) > _max_block_weight) return false;
  }
  return true;
}

Gain PartitionState::connectivityMetric() const {
  Gain metric = 0;
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    metric += static_cast<Gain>(connectivity(e) - 1) * _hg->netWeight(e);
  }
  return metric;
}

Gain PartitionState::moveVertex(const NodeID u, const PartitionID from, const PartitionID to,
                                QuotientGraph* qg) {
  Gain gain = 0;
  _part[u].store(to, std::memory_order_relaxed);
  const VertexWeight vw = _hg->vertexWeight(u);
  _block_weight[from].fetch_sub(vw, std::memory_order_relaxed);
  _block_weight[to].fetch_add(vw, std::memory_order_relaxed);
  for (const NetID e : _hg->incidentNets(u)) {
    const size_t base = static_cast<size_t>(e) * _k;
    const bool dropped = _pin_count[base + from].fetch_sub(1, std::memory_order_relaxed) == 1;
    const bool rose = _pin_count[base + to].fetch_add(1, std::memory_order_relaxed) == 0;
    const NetWeight w = _hg->netWeight(e);
    if (dropped) {
      gain += w;
      _connectivity[e].fetch_sub(1, std::memory_order_relaxed);
    }
    if (rose) {
      gain -= w;
      _connectivity[e].fetch_add(1, std::memory_order_relaxed);
    }
    if (qg != nullptr && (dropped || rose)) {
      // e left the cut of {from, x} for every block x it still touches
      // (except 'to' if it only entered there now), and entered the cut of
      // {to, x} for every other touched block.
      for (PartitionID x = 0; x < _k; ++x) {
        if (pinCount(e, x) == 0) continue;
        if (dropped && x != from && !(rose && x == to)) {
          qg->retireCutNet(from, x, w);
        }
        if (rose && x != to) {
          qg->addCutNet(e, to, x, w);
        }
      }
    }
  }
  return gain;
}

ApplyResult PartitionState::applyMoveSequence(MoveSequence& sequence, QuotientGraph* qg) {
  _move_lock.lock();
  ApplyResult result;

  // Drop moves whose vertex is no longer in the expected block.
  std::vector<Move> moves;
  moves.reserve(sequence.moves.size());
  for (const Move& m : sequence.moves) {
    if (blockOf(m.node) == m.from && m.from != m.to) {
      moves.push_back(m);
    } else {
      ++result.dropped_moves;
    }
  }

  // Simulate the resulting block weights before touching anything.
  std::vector<BlockWeight> weight_delta(_k, 0);
  for (const Move& m : moves) {
    const VertexWeight w = _hg->vertexWeight(m.node);
    weight_delta[m.from] -= w;
    weight_delta[m.to] += w;
  }
  for (PartitionID i = 0; i < _k; ++i) {
    if (blockWeight(i) + weight_delta[i] > _max_block_weight) {
      result.status = ApplyStatus::REJECTED;
      _move_lock.unlock();
      return result;
    }
  }

  Gain gain = 0;
  for (const Move& m : moves) {
    gain += moveVertex(m.node, m.from, m.to, qg);
  }

  if (gain < 0) {
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
      moveVertex(it->node, it->to, it->from, qg);
    }
    result.status = ApplyStatus::REVERTED;
    result.gain = gain;
  } else {
    result.status = ApplyStatus::APPLIED;
    result.gain = gain;
  }

  _move_lock.unlock();
  return result;
}

std::vector<PartitionID> PartitionState::assignmentSnapshot() const {
  std::vector<PartitionID> snapshot(_hg->numVertices());
  for (NodeID v = 0; v < _hg->numVertices(); ++v) snapshot[v] = blockOf(v);
  return snapshot;
}

bool PartitionState::validateConsistency() const {
  std::vector<BlockWeight> weights(_k, 0);
  std::vector<uint32_t> counts(static_cast<size_t>(_hg->numNets()) * _k, 0);
  for (NodeID v = 0; v < _hg->numVertices(); ++v) {
    const PartitionID b = blockOf(v);
    if (b < 0 || b >= _k) return false;
    weights[b] += _hg->vertexWeight(v);
  }
  for (PartitionID i = 0; i < _k; ++i) {
    if (weights[i] != blockWeight(i)) return false;
  }
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    for (const NodeID v : _hg->pins(e)) {
      ++counts[static_cast<size_t>(e) * _k + blockOf(v)];
    }
    uint32_t lambda = 0;
    uint32_t total = 0;
    for (PartitionID i = 0; i < _k; ++i) {
      const uint32_t c = counts[static_cast<size_t>(e) * _k + i];
      if (c != pinCount(e, i)) return false;
      if (c > 0) ++lambda;
      total += c;
    }
    if (total != _hg->netSize(e)) return false;
    if (lambda != connectivity(e) || lambda < 1) return false;
  }
  return true;
}

}  // namespace flowref
