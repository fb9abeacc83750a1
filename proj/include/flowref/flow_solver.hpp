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

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "flowref/flow_hypergraph.hpp"
#include "flowref/types.hpp"

namespace flowref {

struct FlowSolverOptions {
  // Bound the flow on pin->e_in arcs by the net weight. Pure performance
  // optimization, never changes the max preflow value.
  bool restrict_pin_capacities = true;
  // Run a global relabeling when the active set drains and resume if it
  // uncovers mislabeled excess nodes. Disabling exposes the parallel
  // relabeling race; only tests do that.
  bool terminal_global_relabel = true;
  // > 1 switches augment() to synchronous parallel rounds.
  size_t num_workers = 1;
  // Global relabel after this many multiples of the simulated arc count of
  // push/relabel/scan work.
  size_t global_relabel_work_factor = 1;
  // Extra relabel when the flow value stalls across many small rounds.
  uint32_t stall_rounds = 500;
  size_t stall_active_threshold = 1500;
  // Early abort once the flow value exceeds this bound (refinement can no
  // longer profit).
  std::optional<FlowValue> flow_bound;
};

enum class AugmentResult : uint8_t { MAX_PREFLOW, FLOW_BOUND_EXCEEDED };

/// Source-/sink-side cut information derived from a maximum preflow.
struct CutSides {
  BlockWeight source_side_weight = 0;  // hypernode weight of S_r
  BlockWeight sink_side_weight = 0;    // hypernode weight of T_r
  std::vector<NodeID> source_side_nodes;  // hypernodes in S_r (incl. sources)
  std::vector<NodeID> sink_side_nodes;    // hypernodes in T_r (incl. sinks)
  std::vector<NetID> source_cut_nets;
  std::vector<NetID> sink_cut_nets;
};

/// Maximum-preflow solver on the simulated Lawler expansion of a
/// FlowHypergraph. Simulated node space: hypernodes, then e_in/e_out per
/// net; distance labels live on the expansion, so the saturation label n
/// counts |nodes| + 2|nets|.
///
/// Supports the incremental source/sink growth required by FlowCutter. The
/// parallel mode runs synchronous rounds: discharges read labels and
/// excesses of the previous round, excess deltas are accumulated with
/// atomic additions, new labels are applied at the round barrier.
class FlowSolver {
 public:
  explicit FlowSolver(const FlowHypergraph& hg, FlowSolverOptions options = {});

  /// Resets all state. Throws std::invalid_argument if sources and sinks
  /// overlap. Labels: n on sources, 0 elsewhere; all source pin arcs are
  /// saturated up to the restricted capacities.
  void initialize(std::span<const NodeID> sources, std::span<const NodeID> sinks);
  void initialize();  // S = {source node}, T = {sink node}

  AugmentResult augment();

  void growSource(std::span<const NodeID> nodes);
  void growSink(std::span<const NodeID> nodes);

  FlowValue flowValue() const { return _flow_value; }
  bool isSource(const NodeID u) const { return _is_source[u] != 0; }
  bool isSink(const NodeID u) const { return _is_sink[u] != 0; }

  CutSides deriveCuts();
  bool inSourceSide(const NodeID u) const { return _s_mark[u] == _s_epoch; }
  bool inSinkSide(const NodeID u) const { return _t_mark[u] == _t_epoch; }

  const FlowHypergraph& network() const { return *_hg; }
  size_t numSimulatedNodes() const { return _n; }
  uint32_t label(const NodeID u) const { return _label[u]; }
  FlowValue excess(const NodeID u) const { return _excess[u]; }

  /// Single sequential discharge of one node: one scan over its simulated
  /// arcs, pushes on admissible ones, relabel at scan end if excess remains.
  void dischargeOnce(NodeID u);

  static bool winsPush(const uint32_t label_u, const uint32_t label_v, const NodeID u, const NodeID v) {
    return label_u > label_v || (label_u == label_v && u < v);
  }

  // Debug validation passes.
  bool checkPreflowInvariants() const;
  bool checkLabelValidity() const;  // d(u) <= d(v)+1 over residual arcs (non-source tails)

  // Residual traversal used for cut derivation and piercing closures: the
  // forward direction ignores the restricted pin capacities and always
  // visits e_in nodes, so cut nets are exactly the nets whose e_in and
  // e_out land on different sides.
  template <typename F>
  void forEachForwardBfsSuccessor(const NodeID u, F&& f) const {
    if (_hg->isHypernode(u)) {
      for (const auto& ip : _hg->incidentPins(u)) {
        f(_hg->eIn(ip.net));
        if (_pin_out_flow[ip.pin_index] > 0) f(_hg->eOut(ip.net));
      }
    } else {
      const NetID e = _hg->netOfSimulated(u);
      if (_hg->isEIn(u)) {
        if (_bridge_flow[e] < netCapacity(e)) f(_hg->eOut(e));
        for (size_t p = _hg->netBegin(e); p < _hg->netEnd(e); ++p) {
          if (_pin_in_flow[p] > 0) f(_hg->pins(e)[p - _hg->netBegin(e)]);
        }
      } else {
        if (_bridge_flow[e] > 0) f(_hg->eIn(e));
        for (const NodeID v : _hg->pins(e)) f(v);
      }
    }
  }

  template <typename F>
  void forEachReverseBfsPredecessor(const NodeID u, F&& f) const {
    if (_hg->isHypernode(u)) {
      for (const auto& ip : _hg->incidentPins(u)) {
        f(_hg->eOut(ip.net));
        if (_pin_in_flow[ip.pin_index] > 0) f(_hg->eIn(ip.net));
      }
    } else {
      const NetID e = _hg->netOfSimulated(u);
      if (_hg->isEIn(u)) {
        if (_bridge_flow[e] > 0) f(_hg->eOut(e));
        for (size_t p = _hg->netBegin(e); p < _hg->netEnd(e); ++p) {
          if (!_options.restrict_pin_capacities ||
              _pin_in_flow[p] < static_cast<FlowValue>(netCapacity(e))) {
            f(_hg->pins(e)[p - _hg->netBegin(e)]);
          }
        }
      } else {
        if (_bridge_flow[e] < netCapacity(e)) f(_hg->eIn(e));
        for (size_t p = _hg->netBegin(e); p < _hg->netEnd(e); ++p) {
          if (_pin_out_flow[p] > 0) f(_hg->pins(e)[p - _hg->netBegin(e)]);
        }
      }
    }
  }

 private:
  NetWeight netCapacity(const NetID e) const { return _hg->netWeight(e); }

  void saturateSourcePins(NodeID u);

  template <bool kParallel>
  void dischargeImpl(NodeID u, std::vector<NodeID>* local_buffer);

  void runSequential();
  void runParallelRounds();

  // Reverse residual BFS from all sinks: exact labels for reached nodes,
  // n for unreached non-sources; marks the sink side; rebuilds the active
  // set from nodes with excess and corrected label < n.
  void globalRelabel();

  void activateSequential(NodeID v);
  void flushLocalBuffer(std::vector<NodeID>& buffer);
  void insertNextActive(NodeID v, std::vector<NodeID>* local_buffer);
  void rebuildActiveFromExcess();

  bool dischargeable(const NodeID u) const {
    return _excess[u] > 0 && _label[u] < _n && !isSink(u) && !isSource(u);
  }

  const FlowHypergraph* _hg;
  FlowSolverOptions _options;
  size_t _n = 0;          // simulated node count (label saturation value)
  size_t _num_arcs = 0;   // simulated arc count, relabel cadence unit

  std::vector<FlowValue> _pin_in_flow;   // flow on (u, e_in) per pin
  std::vector<FlowValue> _pin_out_flow;  // flow on (e_out, u) per pin
  std::vector<FlowValue> _bridge_flow;   // flow on (e_in, e_out) per net
  std::vector<FlowValue> _excess;
  std::vector<FlowValue> _excess_delta;
  std::vector<uint32_t> _label;
  std::vector<uint32_t> _next_label;
  std::vector<uint8_t> _is_source;
  std::vector<uint8_t> _is_sink;
  FlowValue _flow_value = 0;

  // Active set: array plus insertion timestamps; thread-local buffers are
  // flushed in blocks during parallel rounds.
  std::vector<NodeID> _active;
  std::vector<NodeID> _next_active;
  std::vector<uint32_t> _active_stamp;
  uint32_t _round_stamp = 1;
  std::atomic<size_t> _next_active_size{0};

  // Sequential FIFO queue.
  std::deque<NodeID> _fifo;
  std::vector<uint8_t> _in_queue;

  // BFS scratch and cut-side marks.
  std::vector<uint32_t> _bfs_mark;
  uint32_t _bfs_epoch = 0;
  std::vector<NodeID> _bfs_queue;
  std::vector<uint32_t> _s_mark, _t_mark;
  uint32_t _s_epoch = 0, _t_epoch = 0;
  bool _t_marks_current = false;

  size_t _work_since_relabel = 0;
  bool _need_mandatory_relabel = false;
  uint32_t _stall_round_counter = 0;
  FlowValue _stall_flow_value = 0;
};

}  // namespace flowref
