/*
   Copyright 2026 The etcsim Authors

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

#include <cstdint>

namespace etcsim {

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z);

/// Stream tags; each run draws noise and channel outcomes from separate keys.
enum class StreamTag : std::uint64_t { noise = 1, channel = 2, aux = 3 };

/// Counter-based random stream: the i-th draw is a pure function of
/// (seed, run, tag, i), so runs can be generated in any order or in parallel.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t run, StreamTag tag);

    std::uint64_t bits(std::uint64_t counter) const;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter) const;

    /// Standard normal via Box-Muller on counters 2i and 2i+1.
    double normal(std::uint64_t index) const;

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

}  // namespace etcsim
