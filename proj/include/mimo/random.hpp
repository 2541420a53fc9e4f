// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The mimo-precoding Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_RANDOM_HPP
#define MIMO_RANDOM_HPP

#include <cstdint>
#include <random>

namespace mimo {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Key of the stream with the given index under a master seed. Depends only on
// (seed, index), so trials can be generated in any order or on any thread.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(index ^ 0x632be59bd9b4e019ULL));
}

inline Rng derive_stream(std::uint64_t seed, std::uint64_t index)
{
    return Rng(stream_key(seed, index));
}

// Reserved stream index for positions shared by all trials.
inline constexpr std::uint64_t kFrozenPositionStream = ~std::uint64_t{0};

} // namespace mimo

#endif
