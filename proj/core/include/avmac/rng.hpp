#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace avmac {

// Mixes one 64-bit word into a seed state (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and up to two tags.
// Every simulation trial gets its own stream so that aggregates do not depend
// on scheduling or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ (tag_a + 0x1234567800000001ULL));
    s = mix64(s ^ (tag_b + 0x9876543200000002ULL));
    return s;
}

// Deterministic random stream. mt19937_64 output is fixed by the standard and
// all derived draws below avoid std::*_distribution (whose mappings are
// implementation-defined), so sequences are identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), rejection sampled.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("next_below: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Standard normal via Box-Muller; caches the second variate.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), ascending.
    std::vector<int> sample_subset(int n, int k) {
        if (k > n) throw std::invalid_argument("sample_subset: k > n");
        std::vector<int> picked;
        picked.reserve(static_cast<std::size_t>(k));
        // Floyd's algorithm keeps the draw count at k regardless of n.
        for (int j = n - k; j < n; ++j) {
            const int t = static_cast<int>(next_below(static_cast<std::uint64_t>(j) + 1));
            bool seen = false;
            for (int p : picked) {
                if (p == t) {
                    seen = true;
                    break;
                }
            }
            picked.push_back(seen ? j : t);
        }
        std::sort(picked.begin(), picked.end());
        return picked;
    }

    // Draw from a pmf given as contiguous weights (need not be normalized).
    std::size_t sample_pmf(const double* w, std::size_t n) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += w[i];
        double r = next_unit() * total;
        for (std::size_t i = 0; i < n; ++i) {
            r -= w[i];
            if (r < 0.0) return i;
        }
        return n - 1;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace avmac
