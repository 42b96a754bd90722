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

#include "etcsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace etcsim {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t run, StreamTag tag)
    : key_(mix64(mix64(seed + kGamma) ^ mix64(run * kGamma + static_cast<std::uint64_t>(tag))))
{
}

std::uint64_t CounterStream::bits(std::uint64_t counter) const
{
    return mix64(key_ + (counter + 1) * kGamma);
}

double CounterStream::uniform(std::uint64_t counter) const
{
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterStream::normal(std::uint64_t index) const
{
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace etcsim
