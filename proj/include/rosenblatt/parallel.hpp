#pragma once

#include <cstddef>
#include <functional>

namespace rosen {

// Number of worker threads used when a caller passes 0.
unsigned default_threads();
void set_default_threads(unsigned n);

// Runs body(chunk_begin, chunk_end) over [0, count) in fixed chunks of
// `chunk` items. Chunk boundaries do not depend on the thread count, so
// any per-chunk floating point work is reproducible across thread counts.
void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body,
                     unsigned threads = 0);

}  // namespace rosen
