#pragma once

#include <cstddef>
#include <functional>

namespace relreg {

//! Worker count: RELREG_THREADS when set to a positive integer, otherwise
//! the hardware concurrency.
std::size_t thread_count();

//! Runs body(i) for i in [0, count) on up to thread_count() threads. Each
//! index must write only its own output slot. If any call throws, the
//! exception of the smallest failing index is rethrown after all workers
//! finish, so failures are reported deterministically.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

} // namespace relreg
