// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace robsem {

/// Worker count: ROBSEM_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// is visited exactly once; body must not touch shared mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace robsem
