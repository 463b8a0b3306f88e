#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace stablenoise {

struct philox_key {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
};

using philox_block = std::array<std::uint32_t, 4>;

// Philox4x32 with 10 rounds.
philox_block philox4x32_10(philox_block ctr, philox_key key);

std::uint64_t mix64(std::uint64_t x);

// Key for one replica of one run.
philox_key derive_key(std::uint64_t seed, std::uint64_t replica);

// Lattice index to a 64-bit counter word. Exact packing for d <= 3 and
// |k_i| < 2^20, hashed otherwise.
std::uint64_t pack_index(std::span<const std::int64_t> k);

enum class stream_tag : std::uint32_t {
    innovation = 1,
    count = 2,
    location = 3,
    mark = 4,
    oracle = 5,
    lump = 6,
    arrival = 7,
    direction = 8,
    fine = 9,
};

// Sequence of draws addressed by (key, index, tag). Two streams with the
// same address produce the same values; nothing is shared between them.
class counter_stream {
public:
    using result_type = std::uint32_t;

    counter_stream(philox_key key, std::uint64_t index, stream_tag tag);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();
    std::uint64_t next_u64();
    // Uniform on the open interval (0,1).
    double uniform();
    double exponential();
    double normal();

private:
    void refill();

    philox_key key_;
    philox_block ctr_;
    philox_block buf_{};
    int pos_ = 4;
};

}  // namespace stablenoise
