#include "rosenblatt/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace rosen {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint64_t bits) {
    // 53 random bits, shifted off zero by half an ulp.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t counter) const {
    std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(counter),
                                   static_cast<std::uint32_t>(counter >> 32), stream_, 0u};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

std::uint64_t CounterRng::bits(std::uint64_t index) const {
    auto b = block(index >> 1);
    if (index & 1u) return (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
}

double CounterRng::uniform(std::uint64_t index) const { return to_open_unit(bits(index)); }

double CounterRng::normal(std::uint64_t index) const {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform(index));
}

void CounterRng::fill_uniform(std::span<double> out, std::uint64_t first_index) const {
    std::size_t i = 0;
    std::uint64_t idx = first_index;
    if ((idx & 1u) && i < out.size()) out[i++] = uniform(idx++);
    for (; i + 1 < out.size(); i += 2, idx += 2) {
        auto b = block(idx >> 1);
        out[i] = to_open_unit((static_cast<std::uint64_t>(b[1]) << 32) | b[0]);
        out[i + 1] = to_open_unit((static_cast<std::uint64_t>(b[3]) << 32) | b[2]);
    }
    if (i < out.size()) out[i] = uniform(idx);
}

void CounterRng::fill_normal(std::span<double> out, std::uint64_t first_index) const {
    fill_uniform(out, first_index);
    for (double& v : out) v = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * v);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    // SplitMix64 finalizer on a tagged combination.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace rosen
