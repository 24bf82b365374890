#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dppriv {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seedable random stream with explicit, implementation-independent
// conversions (uniform doubles and normals are produced from raw bits, not
// from std:: distributions, so identical seeds give identical sequences).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), gen_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are cached.
    double normal();

    // Uniform integer in [0, bound), rejection sampling (unbiased).
    std::uint64_t bounded(std::uint64_t bound);

    // Independent child stream; depends only on this stream's seed and the
    // tag, not on how much of the parent has been consumed.
    RandomStream derive(std::uint64_t tag) const {
        return RandomStream(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1))));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& values, RandomStream& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(values[i - 1], values[j]);
    }
}

// k distinct indices drawn from {0, ..., population-1}, ascending order.
std::vector<int> sample_without_replacement(int population, int k, RandomStream& rng);

} // namespace dppriv
