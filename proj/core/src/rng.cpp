#include "stablenoise/rng.hpp"

#include <cmath>
#include <numbers>

namespace stablenoise {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

philox_block philox4x32_10(philox_block c, philox_key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ key.k0, lo1, hi0 ^ c[3] ^ key.k1, lo0};
        key.k0 += kWeyl0;
        key.k1 += kWeyl1;
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

philox_key derive_key(std::uint64_t seed, std::uint64_t replica) {
    const std::uint64_t h = mix64(mix64(seed) ^ (replica * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    return {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
}

std::uint64_t pack_index(std::span<const std::int64_t> k) {
    constexpr std::int64_t lim = std::int64_t{1} << 20;
    bool fits = k.size() <= 3;
    for (auto v : k) fits = fits && v > -lim && v < lim;
    if (fits) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            const auto biased = static_cast<std::uint64_t>(k[i] + lim) & 0x1FFFFFull;
            w |= biased << (21 * i);
        }
        return w;
    }
    std::uint64_t h = 0x243F6A8885A308D3ull ^ (k.size() << 56);
    for (auto v : k) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return h | (std::uint64_t{1} << 63);
}

counter_stream::counter_stream(philox_key key, std::uint64_t index, stream_tag tag)
    : key_(key),
      ctr_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
           static_cast<std::uint32_t>(tag), 0u} {}

void counter_stream::refill() {
    buf_ = philox4x32_10(ctr_, key_);
    ++ctr_[3];
    pos_ = 0;
}

counter_stream::result_type counter_stream::operator()() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

std::uint64_t counter_stream::next_u64() {
    const std::uint64_t lo = (*this)();
    const std::uint64_t hi = (*this)();
    return (hi << 32) | lo;
}

double counter_stream::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double counter_stream::exponential() { return -std::log(uniform()); }

double counter_stream::normal() {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace stablenoise
