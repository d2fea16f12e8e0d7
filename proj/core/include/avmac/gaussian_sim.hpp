#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace avmac {

struct GaussianParams {
    double p1 = 1.0, p2 = 1.0;   // input powers
    double state_power = 1.0;    // jammer power budget N
    double noise_var = 1.0;      // ambient noise variance
    int n = 2;                   // blocklength
    int list_size = 1;
    double r1 = 0.0, r2 = 0.0;   // rates in bits/use; message counts are L*2^(n*R)

    int messages1() const;
    int messages2() const;
    void validate() const;
};

// Rate that yields exactly `messages` codewords at this blocklength.
double rate_for_messages(int messages, int list_size, int n);

// Achievable-rate checks for the power-constrained model.
double gaussian_rate1_bound(const GaussianParams& p);
double gaussian_rate2_bound(const GaussianParams& p);
double gaussian_sum_rate_bound(const GaussianParams& p);
bool rates_inside_gaussian_region(const GaussianParams& p);

struct SphericalCodebook {
    std::vector<std::vector<double>> vectors;
    double power = 0.0;  // every vector has squared norm n * power
};

// M i.i.d. vectors uniform on the radius-sqrt(nP) sphere (normal draws
// rescaled to the exact norm), reproducible from the seed.
SphericalCodebook spherical_codebook(int n, int codeword_count, double power, std::uint64_t seed);

// The L pairs minimizing ||z - (x_m + y_w)||, exhaustive over all pairs,
// distance ties broken by lexicographic (m, w).
std::vector<std::pair<int, int>> min_distance_list_decode(const SphericalCodebook& c1,
                                                          const SphericalCodebook& c2,
                                                          std::span<const double> z, int list_size);

// Honest jammer: i.i.d. N(0, N - eta) rescaled onto the power ball when the
// draw lands outside.
std::vector<double> gaussian_jammer_state(double state_power, double eta, int n,
                                          std::uint64_t seed);

// Tilt radius of the superposition attack: the unique positive root of
// gamma/2 + (L-1)*sqrt(gamma*(eta_star + gamma/2)) = delta/2, clamped at
// eta_star. L = 1 degenerates to min(delta, eta_star).
double compute_gamma(double delta, int list_size, double eta_star);

struct EtaStarEstimate {
    double eta_star = 1.0;  // smallest grid radius whose best center covers enough codewords
    double epsilon = 0.0;   // covered fraction at that radius
    std::vector<double> shift;
};

// Scans candidate centers (defaults: origin and codebook centroid) over an
// eta grid (default step 0.01 on [0,1]) for the smallest radius covering at
// least `coverage_floor` of the codebook.
EtaStarEstimate estimate_eta_star(const SphericalCodebook& c,
                                  std::span<const std::vector<double>> candidate_centers = {},
                                  std::span<const double> radius_grid = {},
                                  double coverage_floor = 0.01);

struct SuperpositionAttackConfig {
    int target = 0;  // 0 forges user-1 codewords, 1 forges user-2 codewords
    int list_size = 1;
    std::vector<double> shift;
    double eta_star = 1.0;
    double epsilon = 0.0;
    double gamma = 0.0;
    double delta = 0.0;  // N/(L*P) - 1, must be positive

    void validate() const;
};

// Builds the per-side attack configuration from the targeted codebook.
// Throws unless L * power < state_power (the regime the attack needs).
SuperpositionAttackConfig make_superposition_config(const SphericalCodebook& target_codebook,
                                                    double power, double state_power,
                                                    int list_size, int target);

struct SuperpositionDraw {
    std::vector<double> state;
    int coin = 0;  // 1: user-1 side, 0: user-2 side
    std::vector<int> sampled;
    bool fallback = false;  // transmitted the zero vector
    std::vector<double> shift_used;
};

// Fair coin picks the side; L codewords are sampled i.i.d. uniform from that
// side's codebook and the shifted sum is transmitted unless it violates the
// power budget (then the zero vector goes out). The coin uses a dedicated
// stream so downstream draws cannot perturb it. No message argument exists:
// the jammer is oblivious by construction.
SuperpositionDraw superposition_attack_state(const SuperpositionAttackConfig& cfg_user1,
                                             const SuperpositionAttackConfig& cfg_user2,
                                             const SphericalCodebook& c1,
                                             const SphericalCodebook& c2, double state_power,
                                             int n, std::uint64_t seed);

// True iff the L+1 candidate codewords (transmitted plus sampled) are pairwise
// distinct and every leave-one-out shifted sum meets the power budget; when
// true any decoder errs with conditional probability at least 1/(L+1).
bool confusability_certificate(const SphericalCodebook& c1, const SphericalCodebook& c2,
                               const SuperpositionDraw& draw, std::pair<int, int> transmitted,
                               double state_power, int n);

struct GaussianJammerSpec {
    enum class Kind { none, gaussian, superposition } kind = Kind::none;
    double eta = 0.0;  // honest-jammer variance shortfall
};

struct GaussianTrialReport {
    int sent_m = 0, sent_w = 0;
    bool error = false;
    bool certificate = false;
    bool fallback = false;
    bool collision = false;  // the L+1 candidate codewords were not distinct
    int coin = -1;
    int list_size = 0;
};

struct GaussianAggregates {
    long trials = 0;
    double error_rate = 0.0;
    double error_se = 0.0;
    double cert_rate = 0.0;
    double fallback_rate = 0.0;
    double mean_list_size = 0.0;
    // Measured attack-geometry quantities (superposition runs only).
    double delta_n_hat = 0.0;      // collision frequency among the L+1 candidates
    double delta_prime_hat = 0.0;  // pairwise concentration-defect frequency
    double eps_hat_user1 = 0.0, eps_hat_user2 = 0.0;
    double eta_hat_user1 = 0.0, eta_hat_user2 = 0.0;
    std::vector<GaussianTrialReport> reports;
};

struct GaussianRunOptions {
    int threads = 1;
    bool fresh_codebooks_per_trial = false;
};

// z = x + y + s + g with g ~ N(0, noise_var I); uniform message pair per
// trial, oblivious jammer, per-trial derived streams (bitwise reproducible
// aggregates under any thread count).
GaussianAggregates run_gaussian_trials(const GaussianParams& params,
                                       const GaussianJammerSpec& jammer, int trials,
                                       std::uint64_t seed, const GaussianRunOptions& opts = {});

}  // namespace avmac
