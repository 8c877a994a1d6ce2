#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sopbench {

// Deterministic RNG wrapper. std::mt19937_64 output is standardized, but the
// std distributions and std::shuffle are not; the draws here are hand-rolled
// so that seeded runs are byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n). n must be > 0.
    size_t index(size_t n) {
        // multiply-shift; bias is < 2^-64 per draw, irrelevant at our scales
        return static_cast<size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform integer in [lo, hi] inclusive.
    int range(int lo, int hi) {
        return lo + static_cast<int>(index(static_cast<size_t>(hi - lo) + 1));
    }

    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

constexpr uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sopbench
