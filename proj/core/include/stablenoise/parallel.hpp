#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace stablenoise {

// Thread count from STABLENOISE_THREADS, else 1.
int default_threads();

// Runs body on contiguous chunks of [0, n). threads <= 0 uses default_threads().
// The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

// out[i] = f(first + i); each replica owns its slot, so the result does not
// depend on the thread count.
std::vector<double> replicate(std::size_t n, int threads, const std::function<double(std::uint64_t)>& f,
                              std::uint64_t first = 0);

}  // namespace stablenoise
