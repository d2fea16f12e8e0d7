#pragma once

#include <limits>
#include <span>

#include "avmac/distribution.hpp"

namespace avmac {

// All information quantities are in bits (log base 2). An infinite divergence
// is reported as +infinity, which compares greater than every finite real.
inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

double log2_safe(double x);  // log2 with the 0 -> -inf convention

// Shannon entropy H(P) in bits; 0 log 0 = 0.
double entropy(const JointDistribution& d);

// D(p || q) in bits over identically shaped tables. Conventions:
// 0 log(0/q) = 0; p > 0 with q = 0 yields +infinity.
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

// Conditional mutual information I(A;B|C) in bits; `c` may be empty.
// The index sets must be pairwise disjoint. Result is clamped at 0 to absorb
// rounding in the entropy combination.
double cond_mutual_information(const JointDistribution& d, std::span<const int> a,
                               std::span<const int> b, std::span<const int> c);

}  // namespace avmac
