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

#include "flowref/network_builder.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>

namespace flowref {

ConstructionAlgorithm selectConstruction(const Hypergraph& hg) {
  if (hg.density() <= 0.5 || hg.averageNetSize() >= 100.0) {
    return ConstructionAlgorithm::NODE_SORT;
  }
  return ConstructionAlgorithm::NET_SCAN;
}

FlowNetworkBuilder::FlowNetworkBuilder(const Hypergraph& hg)
    : _hg(&hg),
      _flow_node_of(hg.numVertices(), kInvalidNode),
      _vertex_stamp(hg.numVertices(), 0),
      _net_stamp(hg.numNets(), 0) {}

FlowHypergraph FlowNetworkBuilder::construct(const PartitionState& partition, const Region& region,
                                             const ConstructionAlgorithm algorithm,
                                             const NetworkBuildOptions& options) {
  ++_stamp;
  const NodeID num_region_nodes = static_cast<NodeID>(region.side_i.size() + region.side_j.size());
  std::vector<BlockWeight> node_weights(2 + num_region_nodes);
  std::vector<NodeID> original_vertex(2 + num_region_nodes, kInvalidNode);
  std::vector<uint8_t> original_side(2 + num_region_nodes, 0);
  std::vector<uint32_t> distance(2 + num_region_nodes, 0);

  node_weights[FlowHypergraph::kSource] = partition.blockWeight(region.block_i) - region.weight_i;
  node_weights[FlowHypergraph::kSink] = partition.blockWeight(region.block_j) - region.weight_j;
  original_side[FlowHypergraph::kSink] = 1;

  NodeID next = 2;
  for (size_t idx = 0; idx < region.side_i.size(); ++idx, ++next) {
    const NodeID v = region.side_i[idx];
    _flow_node_of[v] = next;
    _vertex_stamp[v] = _stamp;
    node_weights[next] = _hg->vertexWeight(v);
    original_vertex[next] = v;
    original_side[next] = 0;
    distance[next] = region.dist_i[idx];
  }
  for (size_t idx = 0; idx < region.side_j.size(); ++idx, ++next) {
    const NodeID v = region.side_j[idx];
    _flow_node_of[v] = next;
    _vertex_stamp[v] = _stamp;
    node_weights[next] = _hg->vertexWeight(v);
    original_vertex[next] = v;
    original_side[next] = 1;
    distance[next] = region.dist_j[idx];
  }

  RawNets raw = algorithm == ConstructionAlgorithm::NET_SCAN
                    ? netScan(partition, region, options.num_workers)
                    : nodeSort(partition, region, options.num_workers);
  if (options.merge_identical_nets) {
    mergeIdenticalNets(raw, options.num_workers);
  }

  FlowHypergraph network(std::move(node_weights), raw.pin_lists, std::move(raw.weights),
                         raw.dropped_st_weight);
  network.setOrigin(std::move(original_vertex), std::move(original_side), std::move(distance));
  return network;
}

namespace {

// Contracts one original net onto the region. Returns false if the result
// is degenerate (single pin) or spans both terminals (recorded by caller).
struct ContractedNet {
  std::vector<NodeID> pins;
  bool spans_terminals = false;
};

}  // namespace

FlowNetworkBuilder::RawNets FlowNetworkBuilder::netScan(const PartitionState& partition,
                                                        const Region& region,
                                                        const size_t num_workers) {
  // E_B: every net with at least one pin in the region, in region order.
  std::vector<NetID> region_nets;
  auto collect = [&](const std::vector<NodeID>& side) {
    for (const NodeID v : side) {
      for (const NetID e : _hg->incidentNets(v)) {
        if (_net_stamp[e] != _stamp) {
          _net_stamp[e] = _stamp;
          region_nets.push_back(e);
        }
      }
    }
  };
  collect(region.side_i);
  collect(region.side_j);

  const PartitionID block_i = region.block_i;
  const PartitionID block_j = region.block_j;

  auto contractNet = [&](const NetID e, std::vector<std::vector<NodeID>>& pin_lists,
                         std::vector<NetWeight>& weights, NetWeight& dropped) {
    std::vector<NodeID> pins;
    bool has_source = false, has_sink = false;
    for (const NodeID p : _hg->pins(e)) {
      if (_vertex_stamp[p] == _stamp) {
        pins.push_back(_flow_node_of[p]);
      } else {
        const PartitionID b = partition.blockOf(p);
        if (b == block_i && !has_source) {
          has_source = true;
          pins.push_back(FlowHypergraph::kSource);
        } else if (b == block_j && !has_sink) {
          has_sink = true;
          pins.push_back(FlowHypergraph::kSink);
        }
      }
    }
    if (has_source && has_sink) {
      dropped += _hg->netWeight(e);
      return;
    }
    if (pins.size() < 2) return;
    std::sort(pins.begin(), pins.end());
    pin_lists.push_back(std::move(pins));
    weights.push_back(_hg->netWeight(e));
  };

  RawNets result;
  if (num_workers <= 1) {
    for (const NetID e : region_nets) {
      contractNet(e, result.pin_lists, result.weights, result.dropped_st_weight);
    }
    return result;
  }

  // Parallel variant: shard E_B, thread-local pin-list buffers, then a
  // prefix-sum style concatenation in shard order.
  const size_t num_chunks = std::min(num_workers * 4, std::max<size_t>(region_nets.size(), 1));
  const size_t chunk_size = (region_nets.size() + num_chunks - 1) / num_chunks;
  std::vector<RawNets> chunks(num_chunks);
  tbb::parallel_for(size_t(0), num_chunks, [&](const size_t c) {
    const size_t begin = c * chunk_size;
    const size_t end = std::min(begin + chunk_size, region_nets.size());
    for (size_t idx = begin; idx < end; ++idx) {
      contractNet(region_nets[idx], chunks[c].pin_lists, chunks[c].weights,
                  chunks[c].dropped_st_weight);
    }
  });
  for (RawNets& chunk : chunks) {
    result.dropped_st_weight += chunk.dropped_st_weight;
    std::move(chunk.pin_lists.begin(), chunk.pin_lists.end(), std::back_inserter(result.pin_lists));
    result.weights.insert(result.weights.end(), chunk.weights.begin(), chunk.weights.end());
  }
  return result;
}

FlowNetworkBuilder::RawNets FlowNetworkBuilder::nodeSort(const PartitionState& partition,
                                                         const Region& region,
                                                         const size_t num_workers) {
  const NodeID first_sink_side_node = static_cast<NodeID>(2 + region.side_i.size());
  const PartitionID block_i = region.block_i;
  const PartitionID block_j = region.block_j;

  // (net, flow node) pairs over the region's incidences.
  std::vector<std::pair<NetID, NodeID>> pairs;
  auto emitPairs = [&](const std::vector<NodeID>& side) {
    for (const NodeID v : side) {
      const NodeID fv = _flow_node_of[v];
      for (const NetID e : _hg->incidentNets(v)) {
        pairs.emplace_back(e, fv);
      }
    }
  };
  emitPairs(region.side_i);
  emitPairs(region.side_j);

  auto emitGroup = [&](std::span<const std::pair<NetID, NodeID>> group,
                       std::vector<std::vector<NodeID>>& pin_lists, std::vector<NetWeight>& weights,
                       NetWeight& dropped) {
    const NetID e = group.front().first;
    uint32_t in_b1 = 0, in_b2 = 0;
    std::vector<NodeID> pins;
    pins.reserve(group.size() + 2);
    for (const auto& [net, fv] : group) {
      pins.push_back(fv);
      if (fv < first_sink_side_node) ++in_b1; else ++in_b2;
    }
    const bool add_source = in_b1 < partition.pinCount(e, block_i);
    const bool add_sink = in_b2 < partition.pinCount(e, block_j);
    if (add_source && add_sink) {
      dropped += _hg->netWeight(e);
      return;
    }
    if (add_source) pins.push_back(FlowHypergraph::kSource);
    if (add_sink) pins.push_back(FlowHypergraph::kSink);
    if (pins.size() < 2) return;
    std::sort(pins.begin(), pins.end());
    pin_lists.push_back(std::move(pins));
    weights.push_back(_hg->netWeight(e));
  };

  RawNets result;
  if (num_workers <= 1) {
    std::sort(pairs.begin(), pairs.end());
    size_t begin = 0;
    while (begin < pairs.size()) {
      size_t end = begin;
      while (end < pairs.size() && pairs[end].first == pairs[begin].first) ++end;
      emitGroup({pairs.data() + begin, end - begin}, result.pin_lists, result.weights,
                result.dropped_st_weight);
      begin = end;
    }
    return result;
  }

  // Parallel variant: distribute pairs to net-hashed buckets, sort and emit
  // each bucket independently, concatenate in bucket order.
  const size_t num_buckets = std::max<size_t>(num_workers * 4, 1);
  std::vector<std::vector<std::pair<NetID, NodeID>>> buckets(num_buckets);
  for (const auto& pr : pairs) {
    buckets[hashSeed(pr.first, 0x9d2c5680ULL) % num_buckets].push_back(pr);
  }
  std::vector<RawNets> bucket_results(num_buckets);
  tbb::parallel_for(size_t(0), num_buckets, [&](const size_t b) {
    auto& bucket = buckets[b];
    std::sort(bucket.begin(), bucket.end());
    size_t begin = 0;
    while (begin < bucket.size()) {
      size_t end = begin;
      while (end < bucket.size() && bucket[end].first == bucket[begin].first) ++end;
      emitGroup({bucket.data() + begin, end - begin}, bucket_results[b].pin_lists,
                bucket_results[b].weights, bucket_results[b].dropped_st_weight);
      begin = end;
    }
  });
  for (RawNets& br : bucket_results) {
    result.dropped_st_weight += br.dropped_st_weight;
    std::move(br.pin_lists.begin(), br.pin_lists.end(), std::back_inserter(result.pin_lists));
    result.weights.insert(result.weights.end(), br.weights.begin(), br.weights.end());
  }
  return result;
}

namespace {

uint64_t fingerprint(const std::vector<NodeID>& pins) {
  uint64_t f = 0;
  for (const NodeID v : pins) {
    f += static_cast<uint64_t>(v) * static_cast<uint64_t>(v);
  }
  return f;
}

}  // namespace

void FlowNetworkBuilder::mergeIdenticalNets(RawNets& nets, const size_t num_workers) {
  const size_t n = nets.pin_lists.size();
  if (n <= 1) return;

  size_t table_size = 1;
  while (table_size < 2 * n) table_size <<= 1;

  // Chained hash table keyed by fingerprint; buckets are append-only.
  struct Bucket {
    SpinLock lock;
    std::vector<size_t> entries;
  };
  std::vector<Bucket> table(table_size);
  std::vector<uint64_t> prints(n);
  std::vector<std::atomic<NetWeight>> weight(n);
  std::vector<std::atomic<uint8_t>> duplicate(n);
  for (size_t i = 0; i < n; ++i) {
    prints[i] = fingerprint(nets.pin_lists[i]);
    weight[i].store(nets.weights[i], std::memory_order_relaxed);
    duplicate[i].store(0, std::memory_order_relaxed);
  }

  auto insert = [&](const size_t i) {
    Bucket& bucket = table[prints[i] & (table_size - 1)];
    bucket.lock.lock();
    for (const size_t other : bucket.entries) {
      if (prints[other] == prints[i] &&
          nets.pin_lists[other].size() == nets.pin_lists[i].size() &&
          nets.pin_lists[other] == nets.pin_lists[i]) {
        bucket.lock.unlock();
        weight[other].fetch_add(nets.weights[i], std::memory_order_relaxed);
        duplicate[i].store(1, std::memory_order_relaxed);
        return;
      }
    }
    bucket.entries.push_back(i);
    bucket.lock.unlock();
  };

  if (num_workers <= 1) {
    for (size_t i = 0; i < n; ++i) insert(i);
  } else {
    tbb::parallel_for(size_t(0), n, [&](const size_t i) { insert(i); });
  }

  RawNets merged;
  merged.dropped_st_weight = nets.dropped_st_weight;
  for (size_t i = 0; i < n; ++i) {
    if (duplicate[i].load(std::memory_order_relaxed)) continue;
    merged.pin_lists.push_back(std::move(nets.pin_lists[i]));
    merged.weights.push_back(weight[i].load(std::memory_order_relaxed));
  }
  nets = std::move(merged);
}

}  // namespace flowref
