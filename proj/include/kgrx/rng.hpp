#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kgrx/errors.hpp"

namespace kgrx {

// Seeded generator with hand-rolled draw helpers. The standard distributions
// are implementation-defined, so ranking output would stop being reproducible
// across toolchains; everything here is pinned to the raw mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n) by rejection sampling, so every value is
    // exactly equally likely.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ValidationError("Rng::below called with n = 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    bool coin() { return (gen_() & 1u) != 0; }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent child stream (per worker, per epoch, ...).
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = gen_() ^ (salt * 0x9e3779b97f4a7c15ull);
        return Rng(s);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace kgrx
