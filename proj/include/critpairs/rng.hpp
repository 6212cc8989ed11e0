#pragma once

#include <cstdint>

namespace critpairs {

// SplitMix64 finalizer.  Used both as the counter-mode output function and
// as the hash behind stream splitting.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

// Counter-based stream: the k-th output is mix64(key + k*golden), so a
// stream is identified by its key alone.  Streams for parallel trials are
// derived by hashing (master seed, trial coordinates); outputs are
// bit-reproducible on every platform, independent of draw interleaving.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    static RngStream from(std::uint64_t master, std::uint64_t a) {
        return RngStream(hash_combine(master, a));
    }
    static RngStream from(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
        return RngStream(hash_combine(hash_combine(master, a), b));
    }

    // Independent child stream; does not disturb this stream's counter.
    RngStream split(std::uint64_t tag) const {
        return RngStream(hash_combine(key_, tag ^ 0x5851f42d4c957f2dull));
    }

    std::uint64_t next_u64() {
        return mix64(key_ + 0x9e3779b97f4a7c15ull * counter_++);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace critpairs
