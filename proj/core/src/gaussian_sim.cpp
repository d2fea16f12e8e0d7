#include "avmac/gaussian_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avmac/parallel.hpp"
#include "avmac/rng.hpp"

namespace avmac {

namespace {

int message_count(double rate, int list_size, int n) {
    const double count = list_size * std::exp2(rate * n);
    if (count > (1 << 24))
        throw std::invalid_argument("gaussian params: codebook too large for exhaustive decoding");
    return std::max(1, static_cast<int>(std::llround(count)));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
    return d;
}

double norm2(std::span<const double> a) { return dot(a, a); }

}  // namespace

int GaussianParams::messages1() const { return message_count(r1, list_size, n); }
int GaussianParams::messages2() const { return message_count(r2, list_size, n); }

void GaussianParams::validate() const {
    if (!(p1 > 0.0 && p2 > 0.0 && state_power > 0.0))
        throw std::invalid_argument("gaussian params: powers must be positive");
    if (noise_var < 0.0) throw std::invalid_argument("gaussian params: negative noise variance");
    if (n < 2) throw std::invalid_argument("gaussian params: blocklength must be >= 2");
    if (list_size < 1) throw std::invalid_argument("gaussian params: list size must be >= 1");
    if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("gaussian params: negative rate");
}

double rate_for_messages(int messages, int list_size, int n) {
    if (messages < list_size) return 0.0;
    return std::log2(static_cast<double>(messages) / list_size) / n;
}

double gaussian_rate1_bound(const GaussianParams& p) {
    return 0.5 * std::log2(1.0 + p.p1 / (p.state_power + p.noise_var));
}
double gaussian_rate2_bound(const GaussianParams& p) {
    return 0.5 * std::log2(1.0 + p.p2 / (p.state_power + p.noise_var));
}
double gaussian_sum_rate_bound(const GaussianParams& p) {
    return 0.5 * std::log2(1.0 + (p.p1 + p.p2) / (p.state_power + p.noise_var));
}
bool rates_inside_gaussian_region(const GaussianParams& p) {
    return p.r1 < gaussian_rate1_bound(p) && p.r2 < gaussian_rate2_bound(p) &&
           p.r1 + p.r2 < gaussian_sum_rate_bound(p);
}

SphericalCodebook spherical_codebook(int n, int codeword_count, double power, std::uint64_t seed) {
    if (n < 1 || codeword_count < 1 || power <= 0.0)
        throw std::invalid_argument("spherical_codebook: bad parameters");
    SphericalCodebook cb;
    cb.power = power;
    cb.vectors.resize(static_cast<std::size_t>(codeword_count));
    const double target = std::sqrt(n * power);
    for (int m = 0; m < codeword_count; ++m) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
        auto& v = cb.vectors[static_cast<std::size_t>(m)];
        double nrm = 0.0;
        do {
            v.resize(static_cast<std::size_t>(n));
            for (double& x : v) x = rng.next_gaussian();
            nrm = std::sqrt(norm2(v));
        } while (nrm <= 0.0);
        for (double& x : v) x *= target / nrm;
    }
    return cb;
}

std::vector<std::pair<int, int>> min_distance_list_decode(const SphericalCodebook& c1,
                                                          const SphericalCodebook& c2,
                                                          std::span<const double> z,
                                                          int list_size) {
    const int m_count = static_cast<int>(c1.vectors.size());
    const int w_count = static_cast<int>(c2.vectors.size());
    if (list_size < 1 || static_cast<long>(m_count) * w_count < list_size)
        throw std::invalid_argument("min_distance_list_decode: list larger than the codebook product");

    struct Entry {
        double dist2;
        int m, w;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(m_count) * w_count);
    std::vector<double> diff(z.size());
    for (int m = 0; m < m_count; ++m)
        for (int w = 0; w < w_count; ++w) {
            const auto& xv = c1.vectors[static_cast<std::size_t>(m)];
            const auto& yv = c2.vectors[static_cast<std::size_t>(w)];
            double d2 = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double d = z[i] - xv[i] - yv[i];
                d2 += d * d;
            }
            entries.push_back({d2, m, w});
        }
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        if (a.m != b.m) return a.m < b.m;
        return a.w < b.w;
    };
    std::partial_sort(entries.begin(), entries.begin() + list_size, entries.end(), cmp);
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(list_size));
    for (int k = 0; k < list_size; ++k) out.emplace_back(entries[static_cast<std::size_t>(k)].m,
                                                         entries[static_cast<std::size_t>(k)].w);
    return out;
}

std::vector<double> gaussian_jammer_state(double state_power, double eta, int n,
                                          std::uint64_t seed) {
    if (!(eta > 0.0 && eta < state_power))
        throw std::invalid_argument("gaussian_jammer_state: eta must lie in (0, N)");
    Rng rng(seed);
    std::vector<double> s(static_cast<std::size_t>(n));
    const double sd = std::sqrt(state_power - eta);
    for (double& x : s) x = sd * rng.next_gaussian();
    const double radius = std::sqrt(n * state_power);
    const double nrm = std::sqrt(norm2(s));
    if (nrm > radius)
        for (double& x : s) x *= radius / nrm;
    return s;
}

double compute_gamma(double delta, int list_size, double eta_star) {
    if (!(delta > 0.0)) throw std::invalid_argument("compute_gamma: delta must be positive");
    if (!(eta_star > 0.0 && eta_star <= 1.0))
        throw std::invalid_argument("compute_gamma: eta_star must be in (0,1]");
    if (list_size < 1) throw std::invalid_argument("compute_gamma: list size must be >= 1");
    if (list_size == 1) return std::min(delta, eta_star);

    const double l = static_cast<double>(list_size);
    const double a = 2.0 * l * l - 4.0 * l + 1.0;
    const double beta = delta + 2.0 * eta_star - 4.0 * l * eta_star + 2.0 * l * l * eta_star;
    const double root = (std::sqrt(beta * beta + a * delta * delta) - beta) / a;
    return std::min(root, eta_star);
}

EtaStarEstimate estimate_eta_star(const SphericalCodebook& c,
                                  std::span<const std::vector<double>> candidate_centers,
                                  std::span<const double> radius_grid, double coverage_floor) {
    if (c.vectors.empty()) throw std::invalid_argument("estimate_eta_star: empty codebook");
    const std::size_t n = c.vectors.front().size();

    std::vector<std::vector<double>> default_centers;
    if (candidate_centers.empty()) {
        default_centers.emplace_back(n, 0.0);  // origin
        std::vector<double> centroid(n, 0.0);
        for (const auto& v : c.vectors)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += v[i] / c.vectors.size();
        default_centers.push_back(std::move(centroid));
        candidate_centers = default_centers;
    }
    std::vector<double> default_grid;
    if (radius_grid.empty()) {
        for (int k = 0; k <= 100; ++k) default_grid.push_back(k / 100.0);
        radius_grid = default_grid;
    }

    // Coverage is monotone in the radius, so scan the grid from below.
    EtaStarEstimate best;
    std::vector<std::vector<double>> dist2(candidate_centers.size(),
                                           std::vector<double>(c.vectors.size()));
    for (std::size_t ci = 0; ci < candidate_centers.size(); ++ci)
        for (std::size_t m = 0; m < c.vectors.size(); ++m) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = c.vectors[m][i] - candidate_centers[ci][i];
                d2 += d * d;
            }
            dist2[ci][m] = d2;
        }
    for (double eta : radius_grid) {
        const double r2 = static_cast<double>(n) * c.power * eta;
        double best_cov = 0.0;
        std::size_t best_center = 0;
        for (std::size_t ci = 0; ci < candidate_centers.size(); ++ci) {
            std::size_t covered = 0;
            for (double d2 : dist2[ci])
                if (d2 <= r2 + 1e-9) ++covered;
            const double cov = static_cast<double>(covered) / c.vectors.size();
            if (cov > best_cov) {
                best_cov = cov;
                best_center = ci;
            }
        }
        best.eta_star = eta;
        best.epsilon = best_cov;
        best.shift = candidate_centers[best_center];
        if (best_cov >= coverage_floor) break;
    }
    return best;
}

void SuperpositionAttackConfig::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("superposition config: delta must be positive");
    const double expected = compute_gamma(delta, list_size, eta_star);
    if (std::abs(gamma - expected) > 1e-9)
        throw std::invalid_argument("superposition config: gamma does not solve the root equation");
    if (gamma > eta_star + 1e-12)
        throw std::invalid_argument("superposition config: gamma exceeds eta_star");
}

SuperpositionAttackConfig make_superposition_config(const SphericalCodebook& target_codebook,
                                                    double power, double state_power,
                                                    int list_size, int target) {
    const double delta = state_power / (list_size * power) - 1.0;
    if (!(delta > 0.0))
        throw std::invalid_argument(
            "make_superposition_config: requires L * power < state_power");
    const EtaStarEstimate est = estimate_eta_star(target_codebook);
    SuperpositionAttackConfig cfg;
    cfg.target = target;
    cfg.list_size = list_size;
    cfg.shift = est.shift;
    cfg.eta_star = est.eta_star;
    cfg.epsilon = est.epsilon;
    cfg.delta = delta;
    cfg.gamma = compute_gamma(delta, list_size, est.eta_star);
    cfg.validate();
    return cfg;
}

SuperpositionDraw superposition_attack_state(const SuperpositionAttackConfig& cfg_user1,
                                             const SuperpositionAttackConfig& cfg_user2,
                                             const SphericalCodebook& c1,
                                             const SphericalCodebook& c2, double state_power,
                                             int n, std::uint64_t seed) {
    SuperpositionDraw draw;
    // Dedicated stream bit for the coin, independent of the sampling stream.
    draw.coin = static_cast<int>(Rng(derive_seed(seed, 0xC011)).next_u64() & 1);
    Rng rng(derive_seed(seed, 0x5A3B));

    const SphericalCodebook& pool = draw.coin == 1 ? c1 : c2;
    const SuperpositionAttackConfig& cfg = draw.coin == 1 ? cfg_user1 : cfg_user2;
    const int l = cfg.list_size;

    draw.shift_used = cfg.shift;
    draw.sampled.reserve(static_cast<std::size_t>(l));
    std::vector<double> s(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < l; ++k) {
        const int idx = static_cast<int>(rng.next_below(pool.vectors.size()));
        draw.sampled.push_back(idx);
        const auto& v = pool.vectors[static_cast<std::size_t>(idx)];
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] -= l * cfg.shift[static_cast<std::size_t>(i)];

    if (norm2(s) <= static_cast<double>(n) * state_power + 1e-9) {
        draw.state = std::move(s);
    } else {
        draw.state.assign(static_cast<std::size_t>(n), 0.0);
        draw.fallback = true;
    }
    return draw;
}

bool confusability_certificate(const SphericalCodebook& c1, const SphericalCodebook& c2,
                               const SuperpositionDraw& draw, std::pair<int, int> transmitted,
                               double state_power, int n) {
    const SphericalCodebook& pool = draw.coin == 1 ? c1 : c2;
    const int own = draw.coin == 1 ? transmitted.first : transmitted.second;
    std::vector<int> candidates = {own};
    candidates.insert(candidates.end(), draw.sampled.begin(), draw.sampled.end());

    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j)
            if (candidates[i] == candidates[j]) return false;

    const int l = static_cast<int>(draw.sampled.size());
    const double budget = static_cast<double>(n) * state_power + 1e-9;
    // Every leave-one-out subset of the L+1 candidates.
    for (std::size_t skip = 0; skip < candidates.size(); ++skip) {
        std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            if (k == skip) continue;
            const auto& v = pool.vectors[static_cast<std::size_t>(candidates[k])];
            for (int i = 0; i < n; ++i) sum[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i)
            sum[static_cast<std::size_t>(i)] -= l * draw.shift_used[static_cast<std::size_t>(i)];
        if (norm2(sum) > budget) return false;
    }
    return true;
}

GaussianAggregates run_gaussian_trials(const GaussianParams& params,
                                       const GaussianJammerSpec& jammer, int trials,
                                       std::uint64_t seed, const GaussianRunOptions& opts) {
    params.validate();
    if (trials < 1) throw std::invalid_argument("run_gaussian_trials: trials must be >= 1");
    const int m_count = params.messages1();
    const int w_count = params.messages2();

    GaussianAggregates agg;
    agg.trials = trials;
    agg.reports.resize(static_cast<std::size_t>(trials));

    struct SharedSetup {
        SphericalCodebook c1, c2;
        SuperpositionAttackConfig cfg1, cfg2;
        // Cross inner products for the fast decoder path.
        std::vector<double> xy_dot;  // [m * w_count + w] = <x_m, y_w>
    };
    auto build_setup = [&](std::uint64_t cb_seed) {
        SharedSetup s;
        s.c1 = spherical_codebook(params.n, m_count, params.p1, derive_seed(cb_seed, 0xA1));
        s.c2 = spherical_codebook(params.n, w_count, params.p2, derive_seed(cb_seed, 0xA2));
        if (jammer.kind == GaussianJammerSpec::Kind::superposition) {
            s.cfg1 = make_superposition_config(s.c1, params.p1, params.state_power,
                                               params.list_size, 0);
            s.cfg2 = make_superposition_config(s.c2, params.p2, params.state_power,
                                               params.list_size, 1);
        }
        s.xy_dot.resize(static_cast<std::size_t>(m_count) * w_count);
        for (int m = 0; m < m_count; ++m)
            for (int w = 0; w < w_count; ++w)
                s.xy_dot[static_cast<std::size_t>(m) * w_count + w] =
                    dot(s.c1.vectors[static_cast<std::size_t>(m)], s.c2.vectors[static_cast<std::size_t>(w)]);
        return s;
    };

    std::optional<SharedSetup> shared;
    if (!opts.fresh_codebooks_per_trial) shared.emplace(build_setup(derive_seed(seed, 0xCB00)));

    // Pairwise-geometry measurements for the converse floor, pooled over trials.
    std::vector<long> pair_checks(static_cast<std::size_t>(trials), 0);
    std::vector<long> pair_defects(static_cast<std::size_t>(trials), 0);

    parallel_for_index(static_cast<std::size_t>(trials), opts.threads, [&](std::size_t t) {
        const SharedSetup local =
            shared ? SharedSetup{} : build_setup(derive_seed(seed, 0xCB00, t));
        const SharedSetup& setup = shared ? *shared : local;
        GaussianTrialReport& rep = agg.reports[t];

        Rng msg_rng(derive_seed(seed, t, 1));
        rep.sent_m = static_cast<int>(msg_rng.next_below(static_cast<std::uint64_t>(m_count)));
        rep.sent_w = static_cast<int>(msg_rng.next_below(static_cast<std::uint64_t>(w_count)));

        std::vector<double> state(static_cast<std::size_t>(params.n), 0.0);
        SuperpositionDraw draw;
        const std::uint64_t jam_seed = derive_seed(seed, t, 2);
        switch (jammer.kind) {
            case GaussianJammerSpec::Kind::none:
                break;
            case GaussianJammerSpec::Kind::gaussian:
                state = gaussian_jammer_state(params.state_power, jammer.eta, params.n, jam_seed);
                break;
            case GaussianJammerSpec::Kind::superposition:
                draw = superposition_attack_state(setup.cfg1, setup.cfg2, setup.c1, setup.c2,
                                                  params.state_power, params.n, jam_seed);
                state = draw.state;
                rep.fallback = draw.fallback;
                rep.coin = draw.coin;
                break;
        }

        Rng noise_rng(derive_seed(seed, t, 3));
        const auto& xv = setup.c1.vectors[static_cast<std::size_t>(rep.sent_m)];
        const auto& yv = setup.c2.vectors[static_cast<std::size_t>(rep.sent_w)];
        std::vector<double> z(static_cast<std::size_t>(params.n));
        const double sd = std::sqrt(params.noise_var);
        for (int i = 0; i < params.n; ++i)
            z[static_cast<std::size_t>(i)] = xv[static_cast<std::size_t>(i)] +
                                             yv[static_cast<std::size_t>(i)] +
                                             state[static_cast<std::size_t>(i)] +
                                             sd * noise_rng.next_gaussian();

        // Fast exhaustive decode via the dot-product expansion:
        // ||z-x-y||^2 = ||z||^2 - 2<z,x> - 2<z,y> + ||x||^2 + ||y||^2 + 2<x,y>.
        std::vector<double> zx(static_cast<std::size_t>(m_count)), zy(static_cast<std::size_t>(w_count));
        for (int m = 0; m < m_count; ++m) zx[static_cast<std::size_t>(m)] = dot(z, setup.c1.vectors[static_cast<std::size_t>(m)]);
        for (int w = 0; w < w_count; ++w) zy[static_cast<std::size_t>(w)] = dot(z, setup.c2.vectors[static_cast<std::size_t>(w)]);
        struct Entry {
            double key;
            int m, w;
        };
        std::vector<Entry> entries;
        entries.reserve(static_cast<std::size_t>(m_count) * w_count);
        for (int m = 0; m < m_count; ++m)
            for (int w = 0; w < w_count; ++w)
                entries.push_back({-2.0 * zx[static_cast<std::size_t>(m)] - 2.0 * zy[static_cast<std::size_t>(w)] +
                                       2.0 * setup.xy_dot[static_cast<std::size_t>(m) * w_count + w],
                                   m, w});
        auto cmp = [](const Entry& a, const Entry& b) {
            if (a.key != b.key) return a.key < b.key;
            if (a.m != b.m) return a.m < b.m;
            return a.w < b.w;
        };
        std::partial_sort(entries.begin(), entries.begin() + params.list_size, entries.end(), cmp);
        bool hit = false;
        for (int k = 0; k < params.list_size; ++k)
            hit = hit || (entries[static_cast<std::size_t>(k)].m == rep.sent_m &&
                          entries[static_cast<std::size_t>(k)].w == rep.sent_w);
        rep.error = !hit;
        rep.list_size = params.list_size;

        if (jammer.kind == GaussianJammerSpec::Kind::superposition) {
            rep.certificate = confusability_certificate(setup.c1, setup.c2, draw,
                                                        {rep.sent_m, rep.sent_w},
                                                        params.state_power, params.n);
            // Pairwise concentration defects among the L+1 candidates.
            const SphericalCodebook& pool = draw.coin == 1 ? setup.c1 : setup.c2;
            const SuperpositionAttackConfig& cfg = draw.coin == 1 ? setup.cfg1 : setup.cfg2;
            const double power = draw.coin == 1 ? params.p1 : params.p2;
            const double eta = cfg.eta_star + cfg.gamma / 2.0;
            const double ball2 = params.n * power * eta + 1e-9;
            const double ip_threshold = params.n * power * std::sqrt(cfg.gamma * eta);
            std::vector<int> cand = {draw.coin == 1 ? rep.sent_m : rep.sent_w};
            cand.insert(cand.end(), draw.sampled.begin(), draw.sampled.end());
            for (std::size_t i = 0; i < cand.size() && !rep.collision; ++i)
                for (std::size_t j = i + 1; j < cand.size(); ++j)
                    if (cand[i] == cand[j]) rep.collision = true;
            for (std::size_t i = 0; i < cand.size(); ++i)
                for (std::size_t j = i + 1; j < cand.size(); ++j) {
                    const auto& vi = pool.vectors[static_cast<std::size_t>(cand[i])];
                    const auto& vj = pool.vectors[static_cast<std::size_t>(cand[j])];
                    double di = 0.0, dj = 0.0, ip = 0.0;
                    for (int x = 0; x < params.n; ++x) {
                        const double a = vi[static_cast<std::size_t>(x)] - cfg.shift[static_cast<std::size_t>(x)];
                        const double b = vj[static_cast<std::size_t>(x)] - cfg.shift[static_cast<std::size_t>(x)];
                        di += a * a;
                        dj += b * b;
                        ip += a * b;
                    }
                    ++pair_checks[t];
                    if (di <= ball2 && dj <= ball2 && ip > ip_threshold) ++pair_defects[t];
                }
        }
    });

    long errors = 0, certs = 0, fallbacks = 0, collisions = 0;
    long checks = 0, defects = 0;
    double list_total = 0.0;
    for (std::size_t t = 0; t < agg.reports.size(); ++t) {
        const GaussianTrialReport& rep = agg.reports[t];
        errors += rep.error ? 1 : 0;
        certs += rep.certificate ? 1 : 0;
        fallbacks += rep.fallback ? 1 : 0;
        collisions += rep.collision ? 1 : 0;
        list_total += rep.list_size;
        checks += pair_checks[t];
        defects += pair_defects[t];
    }
    agg.delta_n_hat = static_cast<double>(collisions) / trials;
    agg.error_rate = static_cast<double>(errors) / trials;
    agg.cert_rate = static_cast<double>(certs) / trials;
    agg.fallback_rate = static_cast<double>(fallbacks) / trials;
    agg.mean_list_size = list_total / trials;
    agg.error_se = std::sqrt(std::max(agg.error_rate * (1.0 - agg.error_rate), 0.0) / trials);
    agg.delta_prime_hat = checks > 0 ? static_cast<double>(defects) / checks : 0.0;
    if (shared && jammer.kind == GaussianJammerSpec::Kind::superposition) {
        agg.eps_hat_user1 = shared->cfg1.epsilon;
        agg.eps_hat_user2 = shared->cfg2.epsilon;
        agg.eta_hat_user1 = shared->cfg1.eta_star;
        agg.eta_hat_user2 = shared->cfg2.eta_star;
    }
    return agg;
}

}  // namespace avmac
