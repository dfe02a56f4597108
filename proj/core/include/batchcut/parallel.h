/*******************************************************************************
 * @file:   parallel.h
 * @brief:  Minimal static-chunked parallel loop.
 *
 * Thread count comes from BATCHCUT_THREADS (if set and positive), otherwise
 * std::thread::hardware_concurrency(). Every index is processed by exactly one
 * thread, so loops writing disjoint outputs are deterministic.
 ******************************************************************************/
#pragma once

#include <cstddef>
#include <functional>

namespace batchcut {

std::size_t num_threads();

// Overrides the environment; 0 restores it.
void set_num_threads(std::size_t threads);

// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
void parallel_for(std::size_t n, std::size_t grain, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace batchcut
