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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>

namespace flowref {

using NodeID = uint32_t;
using NetID = uint32_t;
using PartitionID = int32_t;

// Vertex/net weights are strictly positive 32-bit integers; every
// accumulated quantity (block weights, metric, gains, flow values)
// is 64-bit to survive instances with ~1e9 pins.
using VertexWeight = uint32_t;
using NetWeight = uint32_t;
using BlockWeight = int64_t;
using Gain = int64_t;
using FlowValue = int64_t;

constexpr NodeID kInvalidNode = std::numeric_limits<NodeID>::max();
constexpr NetID kInvalidNet = std::numeric_limits<NetID>::max();
constexpr PartitionID kInvalidPartition = -1;

class SpinLock {
 public:
  void lock() {
    while (_flag.test_and_set(std::memory_order_acquire)) {
      std::this_thread::yield();
    }
  }
  bool try_lock() { return !_flag.test_and_set(std::memory_order_acquire); }
  void unlock() { _flag.clear(std::memory_order_release); }

 private:
  std::atomic_flag _flag = ATOMIC_FLAG_INIT;
};

// L_max = (1+eps) * ceil(total/k), evaluated against integer block weights.
// The tiny nudge keeps e.g. (1+0.03)*100 from flooring to 102.
inline BlockWeight maxBlockWeight(const BlockWeight total_weight, const PartitionID k, const double epsilon) {
  const double per_block = std::ceil(static_cast<double>(total_weight) / static_cast<double>(k));
  return static_cast<BlockWeight>(std::floor((1.0 + epsilon) * per_block + 1e-9));
}

inline uint64_t hashSeed(const uint64_t seed, const uint64_t salt) {
  uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + salt * 0xbf58476d1ce4e5b9ULL);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace flowref
