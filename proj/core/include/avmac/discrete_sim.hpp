#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "avmac/channel.hpp"
#include "avmac/distribution.hpp"
#include "avmac/graph.hpp"

namespace avmac {

// Counts per symbol after largest-remainder rounding of n * probs; ties go to
// the lower symbol index so the result is deterministic.
std::vector<int> largest_remainder_counts(std::span<const double> probs, int n);

// Deterministic sequence of exact type (sorted symbol blocks).
std::vector<int> timesharing_sequence(std::span<const double> pu, int n);

// Constant-composition codewords: each is an independent uniformly random
// arrangement of the per-u symbol multiset determined by rounding
// n_u * P(x|u). Reproducible from the seed.
std::vector<std::vector<int>> constant_composition_codebook(const std::vector<int>& u_seq,
                                                            const CondDistribution& px_given_u,
                                                            int codeword_count,
                                                            std::uint64_t seed);

struct DiscreteCodebookPair {
    int n = 0;
    std::vector<int> u_seq;
    std::vector<std::vector<int>> c1;  // M codewords over X
    std::vector<std::vector<int>> c2;  // W codewords over Y
    FactorizedInput composition;       // realized (rounded) types

    int message_count_1() const { return static_cast<int>(c1.size()); }
    int message_count_2() const { return static_cast<int>(c2.size()); }
};

// Builds both codebooks; throws when the rounded composition violates an
// input budget at this blocklength.
DiscreteCodebookPair make_codebook_pair(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                        int n, int messages1, int messages2, std::uint64_t seed);

struct AttackOutcome {
    std::vector<int> state;
    bool used_fallback = false;
    std::vector<int> sampled_s;  // spoofed user-1 message indices (ascending)
    std::vector<int> sampled_t;  // spoofed user-2 message indices (ascending)
};

// I.i.d. states from ps; redraws on budget violation (up to 100 times) and
// then falls back to the constant cheapest-state word, so the returned state
// always meets the budget. Takes no message arguments: the jammer is
// oblivious by construction.
AttackOutcome iid_attack_state(std::span<const double> ps, const DiscreteAVMAC& ch, int n,
                               std::uint64_t seed);

// Converse attack: samples spoofed message subsets and draws each state letter
// from the symmetrizing family conditioned on the spoofed codeword letters.
AttackOutcome symmetrizing_attack_state(const DiscreteCodebookPair& cb, const BipartiteGraph& graph,
                                        const std::vector<CondDistribution>& q_family,
                                        const DiscreteAVMAC& ch, std::uint64_t seed);

struct DecoderParams {
    double eta = 0.05;        // divergence slack (bits)
    double eta_prime = 0.05;  // retained knob; disambiguation is rank-based
    int list_size = 1;
    int fit_iterations = 40;  // alternating-minimization iterations per candidate
};

// Consistency score of one candidate pair: the smallest divergence over
// budgeted state-explanation laws (+infinity when inexplicable).
double decoding_divergence(const DiscreteCodebookPair& cb, const DiscreteAVMAC& ch,
                           std::span<const int> z, int m, int w, const DecoderParams& params);

// Typicality list decoder; returns at most `list_size` pairs, ranked by
// achieved divergence with lexicographic tie-breaking.
std::vector<std::pair<int, int>> typicality_list_decode(const DiscreteCodebookPair& cb,
                                                        const DiscreteAVMAC& ch,
                                                        std::span<const int> z,
                                                        const DecoderParams& params);

struct DiscreteJammerSpec {
    enum class Kind { iid, symmetrizing } kind = Kind::iid;
    std::vector<double> ps;  // iid
    BipartiteGraph graph;    // symmetrizing
    std::vector<CondDistribution> q_family;
};

struct TrialReport {
    int sent_m = 0, sent_w = 0;
    std::vector<std::pair<int, int>> decoded;
    bool error = false;
    double state_cost = 0.0;
    bool used_fallback = false;
    std::uint64_t trial_seed = 0;
};

struct DiscreteAggregates {
    long trials = 0;
    double error_rate = 0.0;
    double error_se = 0.0;  // binomial standard error
    double fallback_rate = 0.0;
    double mean_list_size = 0.0;
    std::vector<TrialReport> reports;
};

// Uniform message pair per trial; the jammer sees only the codebooks. Each
// trial derives its own random streams from (seed, trial index), so
// aggregates are bitwise identical for any thread count.
DiscreteAggregates run_discrete_trials(const DiscreteAVMAC& ch, const DiscreteCodebookPair& cb,
                                       const DiscreteJammerSpec& jammer,
                                       const DecoderParams& decoder, int trials,
                                       std::uint64_t seed, int threads = 1);

}  // namespace avmac
