#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sdelb {

// Philox4x64-10 block function. Stateless: the output is a pure function of
// (counter, key), so any worker can regenerate any block of any stream.
struct Philox4x64 {
    static constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ull;
    static constexpr std::uint64_t M1 = 0xCA5A826395121157ull;
    static constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t W1 = 0xBB67AE8584CAA73Bull;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(M0) * ctr[0];
            const unsigned __int128 p1 = static_cast<unsigned __int128>(M1) * ctr[2];
            const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
            const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
            const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// A logical random stream identified by (seed, stream id). Streams with
// distinct ids occupy disjoint counter ranges, so parallel workers can draw
// from unrelated streams without coordination and results do not depend on
// the execution schedule.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{seed, splitmix64(seed)}, stream_(stream) {}

    std::uint64_t next_u64() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1).
    double uniform() {
        const std::uint64_t bits = next_u64() >> 11;  // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; generated in pairs, one cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Derive an unrelated child stream; independent of draw position.
    RngStream substream(std::uint64_t index) const {
        return RngStream(key_[0], mix(stream_, index));
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        return splitmix64(a ^ splitmix64(b));
    }
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        return mix(mix(a, b), c);
    }

private:
    void refill() {
        buf_ = Philox4x64::block({block_++, stream_, 0, 0}, key_);
        pos_ = 0;
    }

    std::array<std::uint64_t, 4> buf_{};
    std::array<std::uint64_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sdelb
