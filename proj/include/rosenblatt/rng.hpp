#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rosen {

// Counter-based generator (Philox4x32-10). A draw is a pure function of
// (seed, stream, index), so any subset of variates can be regenerated
// without replaying the sequence and without depending on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    // Standard normal number `index` of this stream (inverse-CDF transform).
    double normal(std::uint64_t index) const;
    // Uniform on the open interval (0, 1).
    double uniform(std::uint64_t index) const;
    void fill_normal(std::span<double> out, std::uint64_t first_index = 0) const;
    void fill_uniform(std::span<double> out, std::uint64_t first_index = 0) const;

    std::uint64_t bits(std::uint64_t index) const;

private:
    std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

    std::uint64_t seed_;
    std::uint32_t stream_;
};

// Streams used across the library so that different consumers of one
// seed never share variates.
namespace stream {
inline constexpr std::uint32_t brownian = 0;
inline constexpr std::uint32_t compensation = 1;
inline constexpr std::uint32_t nclt = 2;
inline constexpr std::uint32_t bootstrap = 3;
inline constexpr std::uint32_t qmc_shift = 4;
inline constexpr std::uint32_t plain_mc = 5;
inline constexpr std::uint32_t initial_value = 6;
}  // namespace stream

// Deterministic derived seed for sub-experiments, e.g. SPDE mode n.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace rosen
