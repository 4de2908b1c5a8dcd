// Copyright 2026 The capalloc Authors
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

#ifndef CAPALLOC_PARALLEL_HPP_
#define CAPALLOC_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace capalloc {

/// Worker count: CAPALLOC_THREADS when set to a positive integer, otherwise
/// the machine's hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Runs body(0) ... body(n - 1) on up to `workers` threads (0 = default).
/// Indices are independent; if any body throws, the exception from the
/// lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

}  // namespace capalloc

#endif  // CAPALLOC_PARALLEL_HPP_
