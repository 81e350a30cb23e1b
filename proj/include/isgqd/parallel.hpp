#pragma once

#include <cstddef>
#include <functional>

namespace isgqd {

/// Worker count: ISGQD_THREADS when set (minimum 1), otherwise the hardware
/// concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// must only write to its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace isgqd
