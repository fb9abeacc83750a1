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

#include "flowref/flow_solver.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <stdexcept>

namespace flowref {

namespace {
constexpr FlowValue kInfiniteCapacity = std::numeric_limits<FlowValue>::max() / 4;
constexpr size_t kLocalBufferFlushSize = 256;
}  // namespace

FlowSolver::FlowSolver(const FlowHypergraph& hg, FlowSolverOptions options)
    : _hg(&hg), _options(options) {
  _n = hg.numSimulatedNodes();
  _num_arcs = 2 * hg.numPins() + hg.numNets();
  _pin_in_flow.assign(hg.numPins(), 0);
  _pin_out_flow.assign(hg.numPins(), 0);
  _bridge_flow.assign(hg.numNets(), 0);
  _excess.assign(_n, 0);
  _excess_delta.assign(_n, 0);
  _label.assign(_n, 0);
  _next_label.assign(_n, 0);
  _is_source.assign(_n, 0);
  _is_sink.assign(_n, 0);
  _active.reserve(_n);
  _next_active.assign(_n, kInvalidNode);
  _active_stamp.assign(_n, 0);
  _in_queue.assign(_n, 0);
  _t_mark.assign(_n, 0);
  _s_mark.assign(_n, 0);
  _bfs_queue.reserve(_n);
}

void FlowSolver::initialize() {
  const NodeID s = FlowHypergraph::kSource;
  const NodeID t = FlowHypergraph::kSink;
  initialize({&s, 1}, {&t, 1});
}

void FlowSolver::initialize(std::span<const NodeID> sources, std::span<const NodeID> sinks) {
  std::fill(_pin_in_flow.begin(), _pin_in_flow.end(), 0);
  std::fill(_pin_out_flow.begin(), _pin_out_flow.end(), 0);
  std::fill(_bridge_flow.begin(), _bridge_flow.end(), 0);
  std::fill(_excess.begin(), _excess.end(), 0);
  std::fill(_excess_delta.begin(), _excess_delta.end(), 0);
  std::fill(_label.begin(), _label.end(), 0);
  std::fill(_is_source.begin(), _is_source.end(), 0);
  std::fill(_is_sink.begin(), _is_sink.end(), 0);
  _flow_value = 0;
  _work_since_relabel = 0;
  _stall_round_counter = 0;
  _stall_flow_value = 0;
  _t_marks_current = false;
  ++_round_stamp;
  _active.clear();

  for (const NodeID t : sinks) {
    _is_sink[t] = 1;
  }
  for (const NodeID s : sources) {
    if (_is_sink[s]) throw std::invalid_argument("flow solver: source and sink sets overlap");
    _is_source[s] = 1;
    _label[s] = static_cast<uint32_t>(_n);
  }
  for (const NodeID s : sources) {
    saturateSourcePins(s);
  }
  _need_mandatory_relabel = true;
}

void FlowSolver::saturateSourcePins(const NodeID u) {
  for (const auto& ip : _hg->incidentPins(u)) {
    const FlowValue amount = static_cast<FlowValue>(netCapacity(ip.net)) - _pin_in_flow[ip.pin_index];
    if (amount <= 0) continue;
    _pin_in_flow[ip.pin_index] += amount;
    const NodeID e_in = _hg->eIn(ip.net);
    _excess[e_in] += amount;
    if (_active_stamp[e_in] != _round_stamp && dischargeable(e_in)) {
      _active_stamp[e_in] = _round_stamp;
      _active.push_back(e_in);
    }
  }
}

void FlowSolver::growSource(std::span<const NodeID> nodes) {
  for (const NodeID u : nodes) {
    if (isSource(u)) continue;
    if (isSink(u)) throw std::invalid_argument("flow solver: growing source over a sink");
    _is_source[u] = 1;
    _label[u] = static_cast<uint32_t>(_n);
    _excess[u] = 0;  // reclaimed by the source side
    saturateSourcePins(u);
  }
  // Stranded excess elsewhere keeps its (saturated) label; regular global
  // relabels collect it if it becomes relevant.
  _t_marks_current = false;
}

void FlowSolver::growSink(std::span<const NodeID> nodes) {
  for (const NodeID u : nodes) {
    if (isSink(u)) continue;
    if (isSource(u)) throw std::invalid_argument("flow solver: growing sink over a source");
    _is_sink[u] = 1;
    _flow_value += _excess[u];
    _excess[u] = 0;
    _label[u] = 0;
  }
  // Labels are lower bounds on the distance to the sink set and are now
  // invalid; relabel before the next discharge loop.
  _need_mandatory_relabel = true;
  _t_marks_current = false;
}

void FlowSolver::activateSequential(const NodeID v) {
  if (!_in_queue[v] && dischargeable(v)) {
    _in_queue[v] = 1;
    _fifo.push_back(v);
  }
}

void FlowSolver::flushLocalBuffer(std::vector<NodeID>& buffer) {
  if (buffer.empty()) return;
  const size_t idx = _next_active_size.fetch_add(buffer.size(), std::memory_order_relaxed);
  std::copy(buffer.begin(), buffer.end(), _next_active.begin() + idx);
  buffer.clear();
}

void FlowSolver::insertNextActive(const NodeID v, std::vector<NodeID>* local_buffer) {
  const uint32_t next_stamp = _round_stamp + 1;
  std::atomic_ref<uint32_t> stamp(_active_stamp[v]);
  uint32_t seen = stamp.load(std::memory_order_relaxed);
  while (seen != next_stamp) {
    if (stamp.compare_exchange_weak(seen, next_stamp, std::memory_order_relaxed)) {
      local_buffer->push_back(v);
      if (local_buffer->size() >= kLocalBufferFlushSize) flushLocalBuffer(*local_buffer);
      return;
    }
  }
}

void FlowSolver::rebuildActiveFromExcess() {
  ++_round_stamp;
  _active.clear();
  for (NodeID u = 0; u < _n; ++u) {
    if (dischargeable(u)) {
      _active_stamp[u] = _round_stamp;
      _active.push_back(u);
    }
  }
}

template <bool kParallel>
void FlowSolver::dischargeImpl(const NodeID u, std::vector<NodeID>* local_buffer) {
  const uint32_t du = _label[u];
  FlowValue exc_rem = _excess[u];
  uint32_t min_label = std::numeric_limits<uint32_t>::max();
  bool lost_push = false;
  size_t scanned = 0;
  FlowValue pushed_total = 0;

  auto credit = [&](const NodeID v, const FlowValue delta) {
    if (isSource(v)) return;  // returned to the source side, vanishes
    if constexpr (kParallel) {
      std::atomic_ref<FlowValue>(_excess_delta[v]).fetch_add(delta, std::memory_order_relaxed);
      insertNextActive(v, local_buffer);
    } else {
      if (isSink(v)) {
        _flow_value += delta;
        return;
      }
      _excess[v] += delta;
      activateSequential(v);
    }
  };

  // One residual arc (u -> v) backed by *flow_var; sign tells whether a push
  // raises or lowers the stored flow value.
  auto tryArc = [&](const NodeID v, const FlowValue residual, FlowValue* flow_var, const int sign) {
    ++scanned;
    if (residual <= 0) return;
    if (du == _label[v] + 1 && exc_rem > 0) {
      if constexpr (kParallel) {
        const bool target_active = _active_stamp[v] == _round_stamp && dischargeable(v);
        if (target_active && !winsPush(du, _label[v], u, v)) {
          lost_push = true;
          return;
        }
      }
      const FlowValue delta = std::min(exc_rem, residual);
      if constexpr (kParallel) {
        std::atomic_ref<FlowValue>(*flow_var).fetch_add(sign * delta, std::memory_order_relaxed);
      } else {
        *flow_var += sign * delta;
      }
      exc_rem -= delta;
      pushed_total += delta;
      credit(v, delta);
      if (delta < residual) min_label = std::min(min_label, _label[v]);
    } else {
      min_label = std::min(min_label, _label[v]);
    }
  };

  const bool restricted = _options.restrict_pin_capacities;
  if (_hg->isHypernode(u)) {
    // hypernode -> e_in (restricted capacity) and hypernode -> e_out
    // (reverse of the out-arc) per incident net.
    for (const auto& ip : _hg->incidentPins(u)) {
      const FlowValue cap = restricted
          ? static_cast<FlowValue>(netCapacity(ip.net)) - _pin_in_flow[ip.pin_index]
          : kInfiniteCapacity;
      tryArc(_hg->eIn(ip.net), cap, &_pin_in_flow[ip.pin_index], +1);
      tryArc(_hg->eOut(ip.net), _pin_out_flow[ip.pin_index], &_pin_out_flow[ip.pin_index], -1);
      if (exc_rem == 0) break;
    }
  } else {
    const NetID e = _hg->netOfSimulated(u);
    const auto pins = _hg->pins(e);
    const size_t begin = _hg->netBegin(e);
    if (_hg->isEIn(u)) {
      // e_in -> e_out bridge, then reverse pin arcs e_in -> u.
      tryArc(_hg->eOut(e), static_cast<FlowValue>(netCapacity(e)) - _bridge_flow[e],
             &_bridge_flow[e], +1);
      for (size_t i = 0; i < pins.size(); ++i) {
        tryArc(pins[i], _pin_in_flow[begin + i], &_pin_in_flow[begin + i], -1);
        if (exc_rem == 0) break;
      }
    } else {
      // e_out -> e_in reverse bridge, then e_out -> pin arcs (infinite).
      tryArc(_hg->eIn(e), _bridge_flow[e], &_bridge_flow[e], -1);
      for (size_t i = 0; i < pins.size(); ++i) {
        tryArc(pins[i], kInfiniteCapacity, &_pin_out_flow[begin + i], +1);
        if (exc_rem == 0) break;
      }
    }
  }

  uint32_t new_label = du;
  if (exc_rem > 0 && !lost_push) {
    if (min_label == std::numeric_limits<uint32_t>::max()) {
      new_label = static_cast<uint32_t>(_n);  // no residual arc left
    } else {
      new_label = static_cast<uint32_t>(std::min<size_t>(min_label + 1, 2 * _n));
    }
    // Labels stay monotone; stale-label rounds can otherwise compute a
    // smaller minimum than the current label.
    new_label = std::max(new_label, du);
    ++scanned;
  }

  if constexpr (kParallel) {
    _next_label[u] = new_label;
    if (pushed_total > 0) {
      std::atomic_ref<FlowValue>(_excess_delta[u]).fetch_sub(pushed_total, std::memory_order_relaxed);
    }
    if (exc_rem > 0 && new_label < _n) {
      insertNextActive(u, local_buffer);
    }
    std::atomic_ref<size_t>(_work_since_relabel).fetch_add(scanned, std::memory_order_relaxed);
  } else {
    _label[u] = new_label;
    _excess[u] = exc_rem;
    _work_since_relabel += scanned;
  }
}

void FlowSolver::dischargeOnce(const NodeID u) { dischargeImpl<false>(u, nullptr); }

AugmentResult FlowSolver::augment() {
  if (_need_mandatory_relabel) {
    globalRelabel();
    _need_mandatory_relabel = false;
  }
  return _options.num_workers > 1 ? runParallelRounds() : runSequential();
}

AugmentResult FlowSolver::runSequential() {
  _fifo.clear();
  std::fill(_in_queue.begin(), _in_queue.end(), 0);
  for (const NodeID u : _active) {
    activateSequential(u);
  }
  _active.clear();

  const size_t relabel_threshold = _options.global_relabel_work_factor * std::max<size_t>(_num_arcs, 1);
  while (!_fifo.empty()) {
    if (_options.flow_bound && _flow_value > *_options.flow_bound) {
      return AugmentResult::FLOW_BOUND_EXCEEDED;
    }
    if (_work_since_relabel > relabel_threshold) {
      globalRelabel();
      _fifo.clear();
      std::fill(_in_queue.begin(), _in_queue.end(), 0);
      for (const NodeID u : _active) activateSequential(u);
      _active.clear();
      continue;
    }
    const NodeID u = _fifo.front();
    _fifo.pop_front();
    _in_queue[u] = 0;
    if (!dischargeable(u)) continue;
    _t_marks_current = false;
    dischargeImpl<false>(u, nullptr);
    if (dischargeable(u)) {
      _in_queue[u] = 1;
      _fifo.push_back(u);
    }
  }
  return AugmentResult::MAX_PREFLOW;
}

AugmentResult FlowSolver::runParallelRounds() {
  const size_t relabel_threshold = _options.global_relabel_work_factor * std::max<size_t>(_num_arcs, 1);
  while (true) {
    if (_options.flow_bound && _flow_value > *_options.flow_bound) {
      return AugmentResult::FLOW_BOUND_EXCEEDED;
    }
    if (_active.empty()) {
      if (_options.terminal_global_relabel) {
        // The relabel both repairs mislabeled excess nodes (resuming the
        // loop if it finds any) and leaves the sink-side cut marks behind.
        globalRelabel();
        if (_active.empty()) return AugmentResult::MAX_PREFLOW;
        continue;
      }
      return AugmentResult::MAX_PREFLOW;
    }
    if (_work_since_relabel > relabel_threshold) {
      globalRelabel();
      continue;
    }
    if (_stall_round_counter >= _options.stall_rounds) {
      globalRelabel();
      _stall_round_counter = 0;
      continue;
    }

    _t_marks_current = false;
    _next_active_size.store(0, std::memory_order_relaxed);

    tbb::parallel_for(tbb::blocked_range<size_t>(0, _active.size(), 64), [&](const auto& range) {
      std::vector<NodeID> local_buffer;
      local_buffer.reserve(kLocalBufferFlushSize);
      for (size_t i = range.begin(); i != range.end(); ++i) {
        const NodeID u = _active[i];
        _next_label[u] = _label[u];
        if (!dischargeable(u)) continue;  // sinks are only harvested
        dischargeImpl<true>(u, &local_buffer);
      }
      flushLocalBuffer(local_buffer);
    });

    // Barrier passed: apply new labels, then excess deltas (sinks feed the
    // flow value, sources discard).
    const size_t next_size = _next_active_size.load(std::memory_order_relaxed);
    tbb::parallel_for(size_t(0), _active.size(), [&](const size_t i) {
      const NodeID u = _active[i];
      _label[u] = _next_label[u];
    });
    auto applyDelta = [&](const NodeID u) {
      const FlowValue delta =
          std::atomic_ref<FlowValue>(_excess_delta[u]).exchange(0, std::memory_order_relaxed);
      if (delta == 0) return;
      if (isSink(u)) {
        std::atomic_ref<FlowValue>(_flow_value).fetch_add(delta, std::memory_order_relaxed);
      } else {
        std::atomic_ref<FlowValue>(_excess[u]).fetch_add(delta, std::memory_order_relaxed);
      }
    };
    tbb::parallel_for(size_t(0), _active.size(), [&](const size_t i) { applyDelta(_active[i]); });
    tbb::parallel_for(size_t(0), next_size, [&](const size_t i) { applyDelta(_next_active[i]); });

    _active.assign(_next_active.begin(), _next_active.begin() + next_size);
    ++_round_stamp;

    if (_flow_value == _stall_flow_value && _active.size() < _options.stall_active_threshold) {
      ++_stall_round_counter;
    } else {
      _stall_round_counter = 0;
      _stall_flow_value = _flow_value;
    }
  }
}

void FlowSolver::globalRelabel() {
  // Reverse residual BFS from the sink set. Reached nodes get exact labels,
  // unreached non-terminals are parked at n; the visit marks double as the
  // sink-side cut.
  ++_t_epoch;
  std::vector<NodeID> frontier, next;
  frontier.reserve(_n);
  next.reserve(_n);
  for (NodeID u = 0; u < _n; ++u) {
    if (isSink(u)) {
      _t_mark[u] = _t_epoch;
      _label[u] = 0;
      frontier.push_back(u);
    }
  }

  const bool parallel = _options.num_workers > 1;
  uint32_t layer = 0;
  std::atomic<size_t> next_size{0};
  std::vector<NodeID> next_slots(_n, kInvalidNode);
  while (!frontier.empty()) {
    ++layer;
    next_size.store(0, std::memory_order_relaxed);
    auto expand = [&](const NodeID x) {
      forEachReverseBfsPredecessor(x, [&](const NodeID y) {
        if (isSource(y) || isSink(y)) return;
        std::atomic_ref<uint32_t> mark(_t_mark[y]);
        uint32_t seen = mark.load(std::memory_order_relaxed);
        while (seen != _t_epoch) {
          if (mark.compare_exchange_weak(seen, _t_epoch, std::memory_order_relaxed)) {
            _label[y] = layer;
            next_slots[next_size.fetch_add(1, std::memory_order_relaxed)] = y;
            return;
          }
        }
      });
    };
    if (parallel && frontier.size() > 256) {
      tbb::parallel_for(size_t(0), frontier.size(), [&](const size_t i) { expand(frontier[i]); });
    } else {
      for (const NodeID x : frontier) expand(x);
    }
    frontier.assign(next_slots.begin(), next_slots.begin() + next_size.load(std::memory_order_relaxed));
  }

  for (NodeID u = 0; u < _n; ++u) {
    if (_t_mark[u] != _t_epoch && !isSource(u) && !isSink(u)) {
      _label[u] = static_cast<uint32_t>(_n);
    }
  }

  rebuildActiveFromExcess();
  _work_since_relabel = 0;
  _stall_round_counter = 0;
  _stall_flow_value = _flow_value;
  _t_marks_current = true;
}

CutSides FlowSolver::deriveCuts() {
  if (!_t_marks_current) {
    globalRelabel();
  }

  // Forward residual BFS seeded with the sources plus every non-sink node
  // with leftover excess.
  ++_s_epoch;
  _bfs_queue.clear();
  for (NodeID u = 0; u < _n; ++u) {
    if (isSource(u) || (!isSink(u) && _excess[u] > 0)) {
      if (_s_mark[u] != _s_epoch) {
        _s_mark[u] = _s_epoch;
        _bfs_queue.push_back(u);
      }
    }
  }
  for (size_t i = 0; i < _bfs_queue.size(); ++i) {
    const NodeID x = _bfs_queue[i];
    forEachForwardBfsSuccessor(x, [&](const NodeID y) {
      if (_s_mark[y] != _s_epoch) {
        _s_mark[y] = _s_epoch;
        _bfs_queue.push_back(y);
      }
    });
  }

  CutSides cuts;
  for (NodeID u = 0; u < _hg->numNodes(); ++u) {
    if (inSourceSide(u)) {
      cuts.source_side_weight += _hg->nodeWeight(u);
      cuts.source_side_nodes.push_back(u);
    }
    if (inSinkSide(u)) {
      cuts.sink_side_weight += _hg->nodeWeight(u);
      cuts.sink_side_nodes.push_back(u);
    }
  }
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    const NodeID e_in = _hg->eIn(e);
    const NodeID e_out = _hg->eOut(e);
    if (inSourceSide(e_in) && !inSourceSide(e_out)) cuts.source_cut_nets.push_back(e);
    if (inSinkSide(e_out) && !inSinkSide(e_in)) cuts.sink_cut_nets.push_back(e);
  }
  return cuts;
}

bool FlowSolver::checkPreflowInvariants() const {
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    const FlowValue cap = netCapacity(e);
    if (_bridge_flow[e] < 0 || _bridge_flow[e] > cap) return false;
    for (size_t p = _hg->netBegin(e); p < _hg->netEnd(e); ++p) {
      if (_pin_in_flow[p] < 0 || _pin_out_flow[p] < 0) return false;
      if (_options.restrict_pin_capacities && _pin_in_flow[p] > cap) return false;
    }
  }

  std::vector<FlowValue> balance(_n, 0);  // inflow - outflow
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    const NodeID e_in = _hg->eIn(e);
    const NodeID e_out = _hg->eOut(e);
    balance[e_in] += -_bridge_flow[e];
    balance[e_out] += _bridge_flow[e];
    const auto pins = _hg->pins(e);
    for (size_t i = 0; i < pins.size(); ++i) {
      const size_t p = _hg->netBegin(e) + i;
      balance[pins[i]] += _pin_out_flow[p] - _pin_in_flow[p];
      balance[e_in] += _pin_in_flow[p];
      balance[e_out] += -_pin_out_flow[p];
    }
  }

  FlowValue sink_absorbed = 0;
  for (NodeID u = 0; u < _n; ++u) {
    if (isSource(u)) {
      if (_excess[u] != 0) return false;
    } else if (isSink(u)) {
      if (_excess[u] != 0) return false;
      sink_absorbed += balance[u];
    } else {
      if (_excess[u] < 0) return false;
      if (_excess[u] != balance[u]) return false;
    }
  }
  return sink_absorbed == _flow_value;
}

bool FlowSolver::checkLabelValidity() const {
  const bool restricted = _options.restrict_pin_capacities;
  auto valid = [&](const NodeID u, const NodeID v) { return _label[u] <= _label[v] + 1; };
  for (NetID e = 0; e < _hg->numNets(); ++e) {
    const NodeID e_in = _hg->eIn(e);
    const NodeID e_out = _hg->eOut(e);
    const FlowValue cap = netCapacity(e);
    if (_bridge_flow[e] < cap && !valid(e_in, e_out)) return false;
    if (_bridge_flow[e] > 0 && !valid(e_out, e_in)) return false;
    const auto pins = _hg->pins(e);
    for (size_t i = 0; i < pins.size(); ++i) {
      const size_t p = _hg->netBegin(e) + i;
      const NodeID u = pins[i];
      if (!isSource(u)) {
        const bool residual_to_e_in = restricted ? _pin_in_flow[p] < cap : true;
        if (residual_to_e_in && !valid(u, e_in)) return false;
        if (_pin_out_flow[p] > 0 && !valid(u, e_out)) return false;
      }
      if (_pin_in_flow[p] > 0 && !valid(e_in, u)) return false;
      if (!valid(e_out, u)) return false;  // infinite capacity arc
    }
  }
  return true;
}

}  // namespace flowref
