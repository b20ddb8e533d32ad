#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace codesign {

// mt19937_64 output is fixed by the standard; the distributions below are
// hand-rolled so sample streams do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double normal();                        // Box-Muller, cached pair
    std::uint64_t below(std::uint64_t n);   // [0, n), rejection sampled
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
// Stable derived seed for (seed, salt) pairs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace codesign
