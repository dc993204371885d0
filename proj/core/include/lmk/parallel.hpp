#pragma once

#include <cstddef>
#include <functional>

namespace lmk {

/// Runs body(begin, end) over disjoint chunks of [0, count), on up to
/// n_threads workers. Callers must write results to per-index slots;
/// chunk boundaries depend only on (count, n_threads), never on timing.
void parallel_for(std::size_t count, int n_threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lmk
