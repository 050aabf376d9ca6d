#ifndef GLRT_RNG_HPP
#define GLRT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace glrt {

// splitmix64; used to expand a user seed into independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++ with a Box-Muller Gaussian layer.  The Gaussian path is spelled
// out (rather than std::normal_distribution) so results are bitwise
// reproducible across standard libraries.
class rng_stream {
public:
    explicit rng_stream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_)
            word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1]
    double next_uniform_pos() {
        return ((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform on [0, 1)
    double next_uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller, one spare cached
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform_pos();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// deterministic stream seed for shard i of a run with base seed
inline std::uint64_t shard_seed(std::uint64_t base, std::uint64_t shard) {
    std::uint64_t sm = base ^ (0xa0761d6478bd642full + shard * 0xe7037ed1a0b428dbull);
    return splitmix64(sm);
}

} // namespace glrt

#endif
