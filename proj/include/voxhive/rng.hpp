// Deterministic seeded randomness. All stochastic code takes an explicit Rng
// so a single master seed pins every downstream draw; distributions are
// implemented here rather than via std:: distribution objects, whose output
// is implementation-defined.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace voxhive {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable seed derivation for independent streams: mix the parent seed with a
// sequence of stream tags.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = seed;
    std::uint64_t out = splitmix64(s);
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ULL;
        out ^= splitmix64(s);
    }
    return out;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

    // [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    Rng child(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
        return Rng(derive_seed(base_draw(), {a, b, c}));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // A stable per-instance tag for child derivation that does not disturb
    // the main stream.
    std::uint64_t base_draw() {
        std::mt19937_64 copy = eng_;
        return copy();
    }

    std::mt19937_64 eng_;
};

} // namespace voxhive
