#pragma once

#include <cstddef>
#include <functional>

namespace gymtrack {

/// Calls body(i) for i in [0, n) on up to `threads` workers. Work items are
/// independent and must write only to their own result slot. The first
/// exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gymtrack
