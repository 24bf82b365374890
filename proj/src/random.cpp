#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace dppriv {

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t RandomStream::bounded(std::uint64_t bound) {
    if (bound == 0) fail(errc::invalid_argument, "bounded: bound must be positive");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

std::vector<int> sample_without_replacement(int population, int k, RandomStream& rng) {
    if (k < 0 || k > population)
        fail(errc::invalid_argument, "sample_without_replacement: k out of range");
    std::vector<int> pool(static_cast<std::size_t>(population));
    for (int i = 0; i < population; ++i) pool[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first k positions become the sample.
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(population - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace dppriv
