#include "avmac/discrete_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "avmac/information.hpp"
#include "avmac/parallel.hpp"
#include "avmac/rng.hpp"

namespace avmac {

std::vector<int> largest_remainder_counts(std::span<const double> probs, int n) {
    if (n <= 0) throw std::invalid_argument("largest_remainder_counts: n must be positive");
    std::vector<int> counts(probs.size());
    std::vector<std::pair<double, int>> by_remainder;  // (-remainder, index)
    int assigned = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double exact = probs[i] * n;
        counts[i] = static_cast<int>(std::floor(exact + 1e-12));
        assigned += counts[i];
        by_remainder.emplace_back(-(exact - counts[i]), static_cast<int>(i));
    }
    std::sort(by_remainder.begin(), by_remainder.end());
    for (int k = 0; k < n - assigned; ++k) ++counts[static_cast<std::size_t>(by_remainder[k % by_remainder.size()].second)];
    return counts;
}

std::vector<int> timesharing_sequence(std::span<const double> pu, int n) {
    const std::vector<int> counts = largest_remainder_counts(pu, n);
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(n));
    for (std::size_t u = 0; u < counts.size(); ++u)
        seq.insert(seq.end(), static_cast<std::size_t>(counts[u]), static_cast<int>(u));
    return seq;
}

std::vector<std::vector<int>> constant_composition_codebook(const std::vector<int>& u_seq,
                                                            const CondDistribution& px_given_u,
                                                            int codeword_count,
                                                            std::uint64_t seed) {
    const int n = static_cast<int>(u_seq.size());
    const int u_card = static_cast<int>(px_given_u.row_count());
    const int x_card = px_given_u.target_arity();

    std::vector<std::vector<int>> positions(static_cast<std::size_t>(u_card));
    for (int i = 0; i < n; ++i) {
        if (u_seq[static_cast<std::size_t>(i)] < 0 || u_seq[static_cast<std::size_t>(i)] >= u_card)
            throw std::out_of_range("constant_composition_codebook: u symbol out of range");
        positions[static_cast<std::size_t>(u_seq[static_cast<std::size_t>(i)])].push_back(i);
    }

    // Per-u symbol multiset from rounded counts.
    std::vector<std::vector<int>> base(static_cast<std::size_t>(u_card));
    for (int u = 0; u < u_card; ++u) {
        const int nu = static_cast<int>(positions[static_cast<std::size_t>(u)].size());
        if (nu == 0) continue;
        std::vector<double> row(static_cast<std::size_t>(x_card));
        for (int x = 0; x < x_card; ++x) row[static_cast<std::size_t>(x)] = px_given_u.at(u, x);
        const std::vector<int> counts = largest_remainder_counts(row, nu);
        for (int x = 0; x < x_card; ++x)
            base[static_cast<std::size_t>(u)].insert(base[static_cast<std::size_t>(u)].end(),
                                                     static_cast<std::size_t>(counts[x]), x);
    }

    std::vector<std::vector<int>> codebook(static_cast<std::size_t>(codeword_count));
    for (int m = 0; m < codeword_count; ++m) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
        std::vector<int>& word = codebook[static_cast<std::size_t>(m)];
        word.assign(static_cast<std::size_t>(n), 0);
        for (int u = 0; u < u_card; ++u) {
            std::vector<int> symbols = base[static_cast<std::size_t>(u)];
            rng.shuffle(symbols);
            const auto& pos = positions[static_cast<std::size_t>(u)];
            for (std::size_t k = 0; k < pos.size(); ++k)
                word[static_cast<std::size_t>(pos[k])] = symbols[k];
        }
    }
    return codebook;
}

DiscreteCodebookPair make_codebook_pair(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                        int n, int messages1, int messages2, std::uint64_t seed) {
    require_valid(ch);
    input.validate();
    if (n < 1 || messages1 < 1 || messages2 < 1)
        throw std::invalid_argument("make_codebook_pair: n and message counts must be positive");

    DiscreteCodebookPair cb;
    cb.n = n;
    cb.u_seq = timesharing_sequence(input.pu, n);
    cb.c1 = constant_composition_codebook(cb.u_seq, input.px_given_u, messages1,
                                          derive_seed(seed, 0xC0DEB001ULL));
    cb.c2 = constant_composition_codebook(cb.u_seq, input.py_given_u, messages2,
                                          derive_seed(seed, 0xC0DEB002ULL));

    // Record the realized (rounded) composition.
    const int u_card = input.u_card();
    std::vector<double> pu_realized(static_cast<std::size_t>(u_card), 0.0);
    for (int u : cb.u_seq) pu_realized[static_cast<std::size_t>(u)] += 1.0 / n;
    CondDistribution px = input.px_given_u;
    CondDistribution py = input.py_given_u;
    std::vector<int> nu(static_cast<std::size_t>(u_card), 0);
    for (int u : cb.u_seq) ++nu[static_cast<std::size_t>(u)];
    for (int u = 0; u < u_card; ++u) {
        if (nu[static_cast<std::size_t>(u)] == 0) continue;  // design row is moot
        std::vector<double> rowx(static_cast<std::size_t>(ch.card_x));
        for (int x = 0; x < ch.card_x; ++x) rowx[static_cast<std::size_t>(x)] = input.px_given_u.at(u, x);
        const auto cx = largest_remainder_counts(rowx, nu[static_cast<std::size_t>(u)]);
        for (int x = 0; x < ch.card_x; ++x)
            px.at(u, x) = static_cast<double>(cx[static_cast<std::size_t>(x)]) / nu[static_cast<std::size_t>(u)];
        std::vector<double> rowy(static_cast<std::size_t>(ch.card_y));
        for (int y = 0; y < ch.card_y; ++y) rowy[static_cast<std::size_t>(y)] = input.py_given_u.at(u, y);
        const auto cy = largest_remainder_counts(rowy, nu[static_cast<std::size_t>(u)]);
        for (int y = 0; y < ch.card_y; ++y)
            py.at(u, y) = static_cast<double>(cy[static_cast<std::size_t>(y)]) / nu[static_cast<std::size_t>(u)];
    }
    cb.composition = FactorizedInput{std::move(pu_realized), std::move(px), std::move(py)};

    if (!cb.c1.empty() && average_cost(cb.c1[0], ch.f1) > ch.gamma1 + kDerivedTol)
        throw std::invalid_argument(
            "make_codebook_pair: rounded composition violates the user-1 budget at this n");
    if (!cb.c2.empty() && average_cost(cb.c2[0], ch.f2) > ch.gamma2 + kDerivedTol)
        throw std::invalid_argument(
            "make_codebook_pair: rounded composition violates the user-2 budget at this n");
    return cb;
}

AttackOutcome iid_attack_state(std::span<const double> ps, const DiscreteAVMAC& ch, int n,
                               std::uint64_t seed) {
    if (static_cast<int>(ps.size()) != ch.card_s)
        throw std::invalid_argument("iid_attack_state: pmf size mismatch");
    Rng rng(seed);
    AttackOutcome out;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<int> state(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            state[static_cast<std::size_t>(i)] = static_cast<int>(rng.sample_pmf(ps.data(), ps.size()));
        if (average_cost(state, ch.g) <= ch.lambda + 1e-15) {
            out.state = std::move(state);
            return out;
        }
    }
    out.state.assign(static_cast<std::size_t>(n), ch.arg_g_min());
    out.used_fallback = true;
    return out;
}

AttackOutcome symmetrizing_attack_state(const DiscreteCodebookPair& cb, const BipartiteGraph& graph,
                                        const std::vector<CondDistribution>& q_family,
                                        const DiscreteAVMAC& ch, std::uint64_t seed) {
    const int spoof_x = graph.left_count - 1;
    const int spoof_y = graph.right_count - 1;
    const int m_count = cb.message_count_1();
    const int w_count = cb.message_count_2();
    if (spoof_x > m_count || spoof_y > w_count)
        throw std::invalid_argument("symmetrizing_attack_state: codebook smaller than spoof set");
    if (q_family.size() != cb.composition.pu.size())
        throw std::invalid_argument("symmetrizing_attack_state: one table per u-symbol required");

    Rng rng(seed);
    AttackOutcome out;
    out.sampled_s = rng.sample_subset(m_count, spoof_x);
    out.sampled_t = rng.sample_subset(w_count, spoof_y);

    const int n = cb.n;
    const int card_s = ch.card_s;
    std::vector<double> row(static_cast<std::size_t>(card_s));
    std::vector<int> state(static_cast<std::size_t>(n));
    const int y_tuples = static_cast<int>(std::llround(
        std::pow(static_cast<double>(ch.card_y), static_cast<double>(spoof_y))));
    for (int i = 0; i < n; ++i) {
        const int u = cb.u_seq[static_cast<std::size_t>(i)];
        int xt = 0;
        for (int k = 0; k < spoof_x; ++k)
            xt = xt * ch.card_x + cb.c1[static_cast<std::size_t>(out.sampled_s[static_cast<std::size_t>(k)])]
                                       [static_cast<std::size_t>(i)];
        int yt = 0;
        for (int k = 0; k < spoof_y; ++k)
            yt = yt * ch.card_y + cb.c2[static_cast<std::size_t>(out.sampled_t[static_cast<std::size_t>(k)])]
                                       [static_cast<std::size_t>(i)];
        const std::size_t cond = static_cast<std::size_t>(xt) * y_tuples + yt;
        for (int s = 0; s < card_s; ++s) row[static_cast<std::size_t>(s)] = q_family[static_cast<std::size_t>(u)].at(cond, s);
        state[static_cast<std::size_t>(i)] = static_cast<int>(rng.sample_pmf(row.data(), row.size()));
    }
    if (average_cost(state, ch.g) <= ch.lambda + 1e-15) {
        out.state = std::move(state);
    } else {
        out.state.assign(static_cast<std::size_t>(n), ch.arg_g_min());
        out.used_fallback = true;
    }
    return out;
}

namespace {

struct CandidateCells {
    // Nonzero cells of the empirical (u,x,y,z) type.
    struct Cell {
        int u, x, y, z;
        double tau;
    };
    std::vector<Cell> cells;
    std::vector<double> tau_u;  // type of the time-sharing sequence
};

CandidateCells count_cells(const DiscreteCodebookPair& cb, const DiscreteAVMAC& ch,
                           std::span<const int> z, int m, int w) {
    const int cu = cb.composition.u_card();
    const std::size_t span = static_cast<std::size_t>(cu) * ch.card_x * ch.card_y * ch.card_z;
    std::vector<double> counts(span, 0.0);
    const auto& xw = cb.c1[static_cast<std::size_t>(m)];
    const auto& yw = cb.c2[static_cast<std::size_t>(w)];
    CandidateCells out;
    out.tau_u.assign(static_cast<std::size_t>(cu), 0.0);
    const double inv_n = 1.0 / cb.n;
    for (int i = 0; i < cb.n; ++i) {
        const int u = cb.u_seq[static_cast<std::size_t>(i)];
        const std::size_t idx =
            ((static_cast<std::size_t>(u) * ch.card_x + xw[static_cast<std::size_t>(i)]) * ch.card_y +
             yw[static_cast<std::size_t>(i)]) *
                ch.card_z +
            z[static_cast<std::size_t>(i)];
        counts[idx] += inv_n;
        out.tau_u[static_cast<std::size_t>(u)] += inv_n;
    }
    for (int u = 0; u < cu; ++u)
        for (int x = 0; x < ch.card_x; ++x)
            for (int y = 0; y < ch.card_y; ++y)
                for (int zz = 0; zz < ch.card_z; ++zz) {
                    const std::size_t idx =
                        ((static_cast<std::size_t>(u) * ch.card_x + x) * ch.card_y + y) * ch.card_z + zz;
                    if (counts[idx] > 0.0) out.cells.push_back({u, x, y, zz, counts[idx]});
                }
    return out;
}

}  // namespace

double decoding_divergence(const DiscreteCodebookPair& cb, const DiscreteAVMAC& ch,
                           std::span<const int> z, int m, int w, const DecoderParams& params) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const CandidateCells cc = count_cells(cb, ch, z, m, w);
    const FactorizedInput& comp = cb.composition;
    const int cu = comp.u_card();
    const int cs = ch.card_s;
    const std::size_t n_cells = cc.cells.size();

    // Design input law and per-cell channel rows.
    std::vector<double> log2_a(n_cells);
    std::vector<double> wrow(n_cells * static_cast<std::size_t>(cs));
    for (std::size_t c = 0; c < n_cells; ++c) {
        const auto& cell = cc.cells[c];
        const double a = comp.pu[cell.u] * comp.px_given_u.at(cell.u, cell.x) *
                         comp.py_given_u.at(cell.u, cell.y);
        if (a <= 0.0) return kInf;  // cell impossible under the design law
        log2_a[c] = std::log2(a);
        double wmax = 0.0;
        for (int s = 0; s < cs; ++s) {
            const double p = ch.transition(cell.x, cell.y, s, cell.z);
            wrow[c * cs + s] = p;
            wmax = std::max(wmax, p);
        }
        if (wmax <= 0.0) return kInf;  // no state explains this output letter
    }

    // Cheap lower bound: even the best per-cell explanation cannot do better.
    double lower = 0.0;
    for (std::size_t c = 0; c < n_cells; ++c) {
        const auto& cell = cc.cells[c];
        double wmax = 0.0;
        for (int s = 0; s < cs; ++s) wmax = std::max(wmax, wrow[c * cs + s]);
        lower += cell.tau * (std::log2(cell.tau) - log2_a[c] - std::log2(wmax));
    }
    if (lower > params.eta + 1e-12) return lower;

    // Cheapest state cost achievable with per-cell supports; if that already
    // exceeds the budget no feasible explanation exists.
    {
        double min_cost = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c) {
            double cheapest = kInf;
            for (int s = 0; s < cs; ++s)
                if (wrow[c * cs + s] > 0.0) cheapest = std::min(cheapest, ch.g[s]);
            min_cost += cc.cells[c].tau * cheapest;
        }
        if (min_cost > ch.lambda + 1e-12) return kInf;
    }

    // Alternating minimization over explanation laws V(s|cell) with the
    // budget enforced through an exponential tilt, and the reference state
    // law R(s|u) refreshed from the current fit.
    std::vector<double> r(static_cast<std::size_t>(cu) * cs, 1.0 / cs);
    std::vector<double> v(n_cells * static_cast<std::size_t>(cs), 0.0);

    auto v_step_cost = [&](double tilt) {
        // Fills v for the given tilt; returns expected state cost. Exponents
        // are taken relative to the cheapest in-support state of each cell
        // (the shift cancels in the normalization) so large tilts cannot
        // underflow an entire cell.
        double cost = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c) {
            const auto& cell = cc.cells[c];
            double g_ref = std::numeric_limits<double>::infinity();
            for (int s = 0; s < cs; ++s) {
                const double base = r[static_cast<std::size_t>(cell.u) * cs + s] * wrow[c * cs + s];
                if (base > 0.0) g_ref = std::min(g_ref, ch.g[s]);
            }
            const bool use_fallback = !std::isfinite(g_ref);
            if (use_fallback) {
                // Reference law lost the support; fall back to the channel row.
                for (int s = 0; s < cs; ++s)
                    if (wrow[c * cs + s] > 0.0) g_ref = std::min(g_ref, ch.g[s]);
            }
            double norm = 0.0;
            for (int s = 0; s < cs; ++s) {
                const double base = use_fallback
                                        ? wrow[c * cs + s]
                                        : r[static_cast<std::size_t>(cell.u) * cs + s] * wrow[c * cs + s];
                const double val = base > 0.0 ? base * std::exp2(-tilt * (ch.g[s] - g_ref)) : 0.0;
                v[c * cs + s] = val;
                norm += val;
            }
            double cell_cost = 0.0;
            for (int s = 0; s < cs; ++s) {
                v[c * cs + s] /= norm;
                cell_cost += v[c * cs + s] * ch.g[s];
            }
            cost += cell.tau * cell_cost;
        }
        return cost;
    };

    auto objective = [&]() {
        // D(tau*V || A * R * W) with R the s|u conditional induced by the fit.
        std::vector<double> pus(static_cast<std::size_t>(cu) * cs, 0.0);
        for (std::size_t c = 0; c < n_cells; ++c)
            for (int s = 0; s < cs; ++s)
                pus[static_cast<std::size_t>(cc.cells[c].u) * cs + s] += cc.cells[c].tau * v[c * cs + s];
        double f = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c) {
            const auto& cell = cc.cells[c];
            for (int s = 0; s < cs; ++s) {
                const double p = cell.tau * v[c * cs + s];
                if (p <= 0.0) continue;
                const double r_su = pus[static_cast<std::size_t>(cell.u) * cs + s] /
                                    cc.tau_u[static_cast<std::size_t>(cell.u)];
                const double denom = r_su * wrow[c * cs + s];
                if (denom <= 0.0) return kInf;
                f += p * (std::log2(p) - log2_a[c] - std::log2(denom));
            }
        }
        return std::max(f, 0.0);
    };

    double best = kInf;
    for (int iter = 0; iter < params.fit_iterations; ++iter) {
        double cost = v_step_cost(0.0);
        if (cost > ch.lambda + 1e-12) {
            // Bisect the tilt until the budget binds.
            double lo = 0.0, hi = 1.0;
            while (v_step_cost(hi) > ch.lambda && hi < 1e12) hi *= 2.0;
            if (hi >= 1e12) return kInf;
            for (int b = 0; b < 80; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (v_step_cost(mid) > ch.lambda)
                    lo = mid;
                else
                    hi = mid;
            }
            v_step_cost(hi);
        }
        // R-step: refresh the induced s|u law. The iterate is floored away
        // from exact zero so the search cannot lock a state out of support;
        // the reported value below always uses the true induced law.
        std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t c = 0; c < n_cells; ++c)
            for (int s = 0; s < cs; ++s)
                r[static_cast<std::size_t>(cc.cells[c].u) * cs + s] += cc.cells[c].tau * v[c * cs + s];
        for (int u = 0; u < cu; ++u) {
            const double tu = cc.tau_u[static_cast<std::size_t>(u)];
            if (tu <= 0.0) continue;
            double total = 0.0;
            for (int s = 0; s < cs; ++s) {
                double& ru = r[static_cast<std::size_t>(u) * cs + s];
                ru = std::max(ru / tu, 1e-30);
                total += ru;
            }
            for (int s = 0; s < cs; ++s) r[static_cast<std::size_t>(u) * cs + s] /= total;
        }
        const double f = objective();
        if (f >= best - 1e-10) {
            best = std::min(best, f);
            break;
        }
        best = f;
    }
    return std::max(best, lower);
}

std::vector<std::pair<int, int>> typicality_list_decode(const DiscreteCodebookPair& cb,
                                                        const DiscreteAVMAC& ch,
                                                        std::span<const int> z,
                                                        const DecoderParams& params) {
    struct Scored {
        double score;
        int m, w;
    };
    std::vector<Scored> passing;
    for (int m = 0; m < cb.message_count_1(); ++m)
        for (int w = 0; w < cb.message_count_2(); ++w) {
            const double d = decoding_divergence(cb, ch, z, m, w, params);
            if (d <= params.eta + 1e-12) passing.push_back({d, m, w});
        }
    std::sort(passing.begin(), passing.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score < b.score;
        if (a.m != b.m) return a.m < b.m;
        return a.w < b.w;
    });
    if (static_cast<int>(passing.size()) > params.list_size)
        passing.resize(static_cast<std::size_t>(params.list_size));
    std::vector<std::pair<int, int>> out;
    out.reserve(passing.size());
    for (const Scored& s : passing) out.emplace_back(s.m, s.w);
    return out;
}

DiscreteAggregates run_discrete_trials(const DiscreteAVMAC& ch, const DiscreteCodebookPair& cb,
                                       const DiscreteJammerSpec& jammer,
                                       const DecoderParams& decoder, int trials,
                                       std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("run_discrete_trials: trials must be >= 1");
    require_valid(ch);

    DiscreteAggregates agg;
    agg.trials = trials;
    agg.reports.resize(static_cast<std::size_t>(trials));

    parallel_for_index(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        TrialReport& rep = agg.reports[t];
        rep.trial_seed = derive_seed(seed, t, 0xF00D);
        Rng msg_rng(derive_seed(seed, t, 1));
        rep.sent_m = static_cast<int>(msg_rng.next_below(static_cast<std::uint64_t>(cb.message_count_1())));
        rep.sent_w = static_cast<int>(msg_rng.next_below(static_cast<std::uint64_t>(cb.message_count_2())));

        // The jammer stream never sees the transmitted pair.
        const std::uint64_t jam_seed = derive_seed(seed, t, 2);
        AttackOutcome attack;
        if (jammer.kind == DiscreteJammerSpec::Kind::iid)
            attack = iid_attack_state(jammer.ps, ch, cb.n, jam_seed);
        else
            attack = symmetrizing_attack_state(cb, jammer.graph, jammer.q_family, ch, jam_seed);
        rep.state_cost = average_cost(attack.state, ch.g);
        rep.used_fallback = attack.used_fallback;

        Rng noise_rng(derive_seed(seed, t, 3));
        std::vector<int> z(static_cast<std::size_t>(cb.n));
        std::vector<double> row(static_cast<std::size_t>(ch.card_z));
        const auto& xw = cb.c1[static_cast<std::size_t>(rep.sent_m)];
        const auto& yw = cb.c2[static_cast<std::size_t>(rep.sent_w)];
        for (int i = 0; i < cb.n; ++i) {
            for (int zz = 0; zz < ch.card_z; ++zz)
                row[static_cast<std::size_t>(zz)] =
                    ch.transition(xw[static_cast<std::size_t>(i)], yw[static_cast<std::size_t>(i)],
                                  attack.state[static_cast<std::size_t>(i)], zz);
            z[static_cast<std::size_t>(i)] = static_cast<int>(noise_rng.sample_pmf(row.data(), row.size()));
        }

        rep.decoded = typicality_list_decode(cb, ch, z, decoder);
        rep.error = std::find(rep.decoded.begin(), rep.decoded.end(),
                              std::make_pair(rep.sent_m, rep.sent_w)) == rep.decoded.end();
    });

    long errors = 0, fallbacks = 0;
    double list_total = 0.0;
    for (const TrialReport& rep : agg.reports) {
        errors += rep.error ? 1 : 0;
        fallbacks += rep.used_fallback ? 1 : 0;
        list_total += static_cast<double>(rep.decoded.size());
    }
    agg.error_rate = static_cast<double>(errors) / trials;
    agg.fallback_rate = static_cast<double>(fallbacks) / trials;
    agg.mean_list_size = list_total / trials;
    agg.error_se = std::sqrt(std::max(agg.error_rate * (1.0 - agg.error_rate), 0.0) / trials);
    return agg;
}

}  // namespace avmac
