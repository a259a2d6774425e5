/*
 * Copyright 2026 The misspred Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace misspred {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed for one stage of one Monte-Carlo
// iterate. Pure: the result depends only on the three arguments.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t iterate,
                          std::string_view stage_tag);

// Child stream for an indexed sub-task (tree t of a forest, column j of a
// sweep, ...).
std::uint64_t derive_seed(std::uint64_t parent_seed, std::uint64_t index);

}  // namespace misspred
