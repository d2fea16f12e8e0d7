#pragma once

#include <array>
#include <utility>
#include <vector>

#include "avmac/channel.hpp"
#include "avmac/distribution.hpp"
#include "avmac/information.hpp"
#include "avmac/symmetrization.hpp"

namespace avmac {

enum class JammerObjective { rate1, rate2, sum_rate };

struct FwOptions {
    int max_iterations = 500;
    double gap_tol = 1e-8;
    int line_search_iters = 100;
};

struct JammerResult {
    double value_bits = 0.0;
    CondDistribution ps_given_u;
    double fw_gap = 0.0;
    int iterations = 0;
};

// Minimizes the requested conditional mutual information over budgeted
// jamming laws P_{s|u} with Frank-Wolfe (the objective is convex in the
// channel mixture that P_{s|u} induces). Throws when even the cheapest state
// violates the budget.
JammerResult worst_case_jammer(const DiscreteAVMAC& ch, const FactorizedInput& input,
                               JammerObjective objective, const FwOptions& opts = {});

// Evaluates the objective at a fixed jamming law; used to re-check witnesses.
double jammer_objective_value(const DiscreteAVMAC& ch, const FactorizedInput& input,
                              JammerObjective objective, const CondDistribution& ps_given_u);

struct Pentagon {
    double r1 = 0.0, r2 = 0.0, r12 = 0.0;  // bits per channel use
    FactorizedInput input;
    std::array<CondDistribution, 3> jammer_witnesses;  // r1, r2, r12 minimizers
};

Pentagon make_pentagon(const DiscreteAVMAC& ch, const FactorizedInput& input,
                       const FwOptions& opts = {});

// (0,0), (r1,0), (r1, min(r2, r12-r1)), (min(r1, r12-r2), r2), (0, r2),
// clipped to the nonnegative quadrant.
std::vector<std::pair<double, double>> pentagon_corners(const Pentagon& p);

enum class RegionMode { inner, outer };

struct RegionBound {
    int list_size = 1;
    RegionMode mode = RegionMode::inner;
    std::vector<Pentagon> pentagons;
    std::vector<std::pair<double, double>> boundary;  // Pareto frontier, x ascending
    double grid_step = 0.1;
    int u_card = 2;
    int list_cap = 4;
};

struct RegionOptions {
    double grid_step = 0.1;
    int u_card = 2;
    int list_cap = 4;
    int threads = 1;
    FwOptions fw;
};

RegionBound inner_region(const DiscreteAVMAC& ch, int list_size, const RegionOptions& opts = {});
RegionBound outer_region(const DiscreteAVMAC& ch, int list_size, const RegionOptions& opts = {});

// Inner region with all budgets saturated; asserts that the inner and outer
// admissibility filters and frontiers coincide in that regime.
RegionBound unconstrained_region(const DiscreteAVMAC& ch, int list_size,
                                 const RegionOptions& opts = {});

bool region_contains(const RegionBound& region, double r1, double r2, double tol = 1e-9);

// Pareto-maximal subset followed by the upper concave hull chain.
std::vector<std::pair<double, double>> frontier_of_corners(
    std::vector<std::pair<double, double>> corners);

}  // namespace avmac
