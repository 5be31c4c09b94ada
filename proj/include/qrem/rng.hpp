// Copyright 2026 The qrem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QREM_RNG_HPP_
#define QREM_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace qrem {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Seed split scheme shared by every component that needs independent
// streams: derive_seed(master, tag, index) =
//   splitmix64(splitmix64(master ^ fnv1a(tag)) + index).
// Workers build their own Rng from a derived seed, so results do not depend
// on thread count or scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0);

std::string hex64(std::uint64_t v);

}  // namespace qrem

#endif  // QREM_RNG_HPP_
