// Copyright 2026 The qdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace qd {

/// Philox4x32-10 block function: maps a 128-bit counter under a 64-bit key to
/// 128 pseudorandom bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based stream keyed by (seed, stream). Draw `i` of a stream depends
/// only on (seed, stream, i), never on what other streams have produced.
class PhiloxStream {
   public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    /// The `index`-th 64-bit word of the stream; does not advance the cursor.
    std::uint64_t word_at(std::uint64_t index) const;

    std::uint64_t next_u64() { return word_at(cursor_++); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, consumes two words).
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t cursor_ = 0;
};

/// Maps a 64-bit word to [0, 1) using its top 53 bits.
inline double unit_interval(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace qd
