#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "avmac/discrete_sim.hpp"
#include "avmac/gaussian_sim.hpp"
#include "avmac/region.hpp"
#include "avmac/symmetrization.hpp"
#include "channel_io.hpp"
#include "manifest.hpp"

namespace avmac::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

int threads_default() {
    if (const char* env = std::getenv("AVMAC_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json input_to_json(const FactorizedInput& fi) {
    json j;
    j["pu"] = fi.pu;
    json px = json::array(), py = json::array();
    for (int u = 0; u < fi.u_card(); ++u) {
        json rowx = json::array(), rowy = json::array();
        for (int x = 0; x < fi.x_card(); ++x) rowx.push_back(fi.px_given_u.at(u, x));
        for (int y = 0; y < fi.y_card(); ++y) rowy.push_back(fi.py_given_u.at(u, y));
        px.push_back(std::move(rowx));
        py.push_back(std::move(rowy));
    }
    j["px_given_u"] = std::move(px);
    j["py_given_u"] = std::move(py);
    return j;
}

FactorizedInput input_from_json(const json& j) {
    if (!j.contains("pu") || !j.contains("px_given_u") || !j.contains("py_given_u"))
        throw UsageError("input distribution document needs pu, px_given_u, py_given_u");
    FactorizedInput fi;
    fi.pu = j.at("pu").get<std::vector<double>>();
    const auto px = j.at("px_given_u").get<std::vector<std::vector<double>>>();
    const auto py = j.at("py_given_u").get<std::vector<std::vector<double>>>();
    const int u_card = static_cast<int>(fi.pu.size());
    if (static_cast<int>(px.size()) != u_card || static_cast<int>(py.size()) != u_card)
        throw UsageError("input distribution: one conditional row per u-symbol required");
    std::vector<double> rx, ry;
    for (const auto& row : px) rx.insert(rx.end(), row.begin(), row.end());
    for (const auto& row : py) ry.insert(ry.end(), row.begin(), row.end());
    fi.px_given_u = CondDistribution({u_card}, static_cast<int>(px.front().size()), std::move(rx));
    fi.py_given_u = CondDistribution({u_card}, static_cast<int>(py.front().size()), std::move(ry));
    fi.validate(1e-9);
    return fi;
}

FactorizedInput load_input_or_uniform(const std::string& path, const DiscreteAVMAC& ch) {
    if (path.empty())
        return FactorizedInput{{1.0},
                               CondDistribution::uniform({1}, ch.card_x),
                               CondDistribution::uniform({1}, ch.card_y)};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(path + ": cannot open input distribution");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
    FactorizedInput fi = input_from_json(doc);
    if (fi.x_card() != ch.card_x || fi.y_card() != ch.card_y)
        throw UsageError(path + ": alphabets do not match the channel");
    return fi;
}

json graph_to_json(const BipartiteGraph& g) {
    json j;
    j["left"] = g.left_count;
    j["right"] = g.right_count;
    json edges = json::array();
    for (const auto& [a, b] : g.edges) edges.push_back(json::array({a, b}));
    j["edges"] = std::move(edges);
    return j;
}

json witness_to_json(const SymmetrizabilityReport& rep) {
    json j;
    if (!rep.witness_graph) return j;
    j["graph"] = graph_to_json(*rep.witness_graph);
    j["cost"] = *rep.witness_cost;
    json fam = json::array();
    for (const auto& q : rep.witness_q) {
        json table = json::array();
        for (std::size_t r = 0; r < q.row_count(); ++r) {
            json row = json::array();
            for (int s = 0; s < q.target_arity(); ++s) row.push_back(q.at(r, s));
            table.push_back(std::move(row));
        }
        fam.push_back(std::move(table));
    }
    j["q_per_u"] = std::move(fam);
    return j;
}

void write_result_doc(const std::string& path, const json& manifest, const json& result) {
    json doc;
    doc["manifest"] = manifest;
    doc["result"] = result;
    write_text_file(path, doc.dump(2) + "\n");
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------- symmetrizability

struct SymmOpts {
    std::string channel_path;
    std::string mode = "weak";
    int max_list = 4;
    double grid = 0.25;
    int u_card = 1;
    std::string out = "symmetrizability.json";
};

int cmd_symmetrizability(const SymmOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const DiscreteAVMAC ch = parse_channel_file(o.channel_path);
    const SymmMode mode = o.mode == "strong" ? SymmMode::strong : SymmMode::weak;

    const MinSymmetrizability min_res = min_symmetrizability(ch, mode, o.grid, o.u_card, o.max_list);
    SymmetrizabilityReport rep;
    if (min_res.order > 0)
        rep = mode == SymmMode::weak ? weak_symmetrizability(ch, min_res.minimizer, o.max_list)
                                     : strong_symmetrizability(ch, min_res.minimizer, o.max_list);

    json params;
    params["channel"] = o.channel_path;
    params["mode"] = o.mode;
    params["max_list"] = o.max_list;
    params["grid"] = o.grid;
    params["u_card"] = o.u_card;
    params["out"] = o.out;
    const json manifest =
        make_manifest("symmetrizability", params, kDefaultSeed, file_digest(o.channel_path));

    json result;
    result["mode"] = o.mode;
    result["order"] = min_res.order;
    result["minimizing_input"] = input_to_json(min_res.minimizer);
    if (min_res.order > 0) result["witness"] = witness_to_json(rep);
    write_result_doc(o.out, manifest, result);

    std::cout << "symmetrizability mode=" << o.mode << " order=" << min_res.order;
    if (rep.witness_cost) std::cout << " witness_cost=" << *rep.witness_cost;
    std::cout << " -> " << o.out << "  (" << elapsed_seconds(start) << " s)\n";
    return 0;
}

// ------------------------------------------------------------------------ region

struct RegionCmdOpts {
    std::string channel_path;
    int list_size = 2;
    double grid = 0.1;
    int u_card = 2;
    int list_cap = 4;
    std::string mode = "both";
    int threads = threads_default();
    std::string out = "region.json";
    std::string csv;
};

json boundary_to_json(const RegionBound& r) {
    json j;
    j["pentagon_count"] = r.pentagons.size();
    json pts = json::array();
    for (const auto& [a, b] : r.boundary) pts.push_back(json::array({a, b}));
    j["boundary"] = std::move(pts);
    return j;
}

int cmd_region(const RegionCmdOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const DiscreteAVMAC ch = parse_channel_file(o.channel_path);
    RegionOptions ropts;
    ropts.grid_step = o.grid;
    ropts.u_card = o.u_card;
    ropts.list_cap = o.list_cap;
    ropts.threads = o.threads;

    std::optional<RegionBound> inner, outer;
    if (o.mode == "inner" || o.mode == "both") inner = inner_region(ch, o.list_size, ropts);
    if (o.mode == "outer" || o.mode == "both") outer = outer_region(ch, o.list_size, ropts);

    json params;
    params["channel"] = o.channel_path;
    params["list_size"] = o.list_size;
    params["grid"] = o.grid;
    params["u_card"] = o.u_card;
    params["list_cap"] = o.list_cap;
    params["mode"] = o.mode;
    params["out"] = o.out;
    params["csv"] = o.csv;
    const json manifest = make_manifest("region", params, kDefaultSeed, file_digest(o.channel_path));

    json result;
    result["list_size"] = o.list_size;
    result["grid_step"] = o.grid;
    result["u_card"] = o.u_card;
    result["list_cap"] = o.list_cap;
    result["approximation"] = "finite input grid; union reported without closure";
    if (inner) result["inner"] = boundary_to_json(*inner);
    if (outer) result["outer"] = boundary_to_json(*outer);
    write_result_doc(o.out, manifest, result);

    if (!o.csv.empty()) {
        std::string csv = "R1,R2,mode\n";
        if (inner)
            for (const auto& [a, b] : inner->boundary)
                csv += csv_double(a) + "," + csv_double(b) + ",inner\n";
        if (outer)
            for (const auto& [a, b] : outer->boundary)
                csv += csv_double(a) + "," + csv_double(b) + ",outer\n";
        write_text_file(o.csv, csv);
    }

    std::cout << "region list_size=" << o.list_size;
    if (inner) std::cout << " inner_pentagons=" << inner->pentagons.size();
    if (outer) std::cout << " outer_pentagons=" << outer->pentagons.size();
    std::cout << " -> " << o.out << "  (" << elapsed_seconds(start) << " s)\n";
    return 0;
}

// -------------------------------------------------------------- simulate discrete

struct DiscreteSimOpts {
    std::string channel_path;
    std::string input_path;
    int list_size = 2;
    int blocklength = 48;
    int messages1 = 16;
    int messages2 = 16;
    std::string jammer = "iid";
    std::vector<double> state_dist;
    int max_list = 4;
    double eta = 0.05;
    double eta_prime = 0.05;
    int trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    int threads = threads_default();
    std::string out = "simulate_discrete.json";
    std::string csv;
};

int cmd_simulate_discrete(const DiscreteSimOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const DiscreteAVMAC ch = parse_channel_file(o.channel_path);
    const FactorizedInput input = load_input_or_uniform(o.input_path, ch);

    const DiscreteCodebookPair cb =
        make_codebook_pair(ch, input, o.blocklength, o.messages1, o.messages2, o.seed);

    DiscreteJammerSpec jammer;
    json jammer_meta;
    if (o.jammer == "iid") {
        jammer.kind = DiscreteJammerSpec::Kind::iid;
        jammer.ps = o.state_dist;
        if (jammer.ps.empty()) {
            jammer.ps.assign(static_cast<std::size_t>(ch.card_s), 0.0);
            jammer.ps[static_cast<std::size_t>(ch.arg_g_min())] = 1.0;
        }
        if (static_cast<int>(jammer.ps.size()) != ch.card_s)
            throw UsageError("--state-dist length must equal |S|");
        jammer_meta["kind"] = "iid";
        jammer_meta["state_dist"] = jammer.ps;
    } else if (o.jammer == "symmetrizing") {
        const SymmetrizabilityReport rep = weak_symmetrizability(ch, cb.composition, o.max_list);
        if (rep.order == 0)
            throw UsageError(
                "no symmetrizing witness below the state budget at this composition; "
                "the symmetrizing jammer is unavailable");
        jammer.kind = DiscreteJammerSpec::Kind::symmetrizing;
        jammer.graph = *rep.witness_graph;
        jammer.q_family = rep.witness_q;
        jammer_meta["kind"] = "symmetrizing";
        jammer_meta["graph"] = graph_to_json(jammer.graph);
        jammer_meta["witness_cost"] = *rep.witness_cost;
    } else {
        throw UsageError("--jammer must be iid or symmetrizing");
    }

    DecoderParams dec;
    dec.list_size = o.list_size;
    dec.eta = o.eta;
    dec.eta_prime = o.eta_prime;

    const DiscreteAggregates agg =
        run_discrete_trials(ch, cb, jammer, dec, o.trials, o.seed, o.threads);

    json params;
    params["channel"] = o.channel_path;
    params["input"] = o.input_path;
    params["list_size"] = o.list_size;
    params["blocklength"] = o.blocklength;
    params["messages1"] = o.messages1;
    params["messages2"] = o.messages2;
    params["jammer"] = o.jammer;
    params["state_dist"] = o.state_dist;
    params["max_list"] = o.max_list;
    params["eta"] = o.eta;
    params["eta_prime"] = o.eta_prime;
    params["trials"] = o.trials;
    params["threads"] = o.threads;
    params["out"] = o.out;
    params["csv"] = o.csv;
    const json manifest =
        make_manifest("simulate discrete", params, o.seed, file_digest(o.channel_path));

    json result;
    result["trials"] = agg.trials;
    result["error_rate"] = agg.error_rate;
    result["error_se"] = agg.error_se;
    result["fallback_rate"] = agg.fallback_rate;
    result["mean_list_size"] = agg.mean_list_size;
    result["rate1_bits"] = rate_for_messages(o.messages1, o.list_size, o.blocklength);
    result["rate2_bits"] = rate_for_messages(o.messages2, o.list_size, o.blocklength);
    result["jammer"] = jammer_meta;
    result["metadata"] = {
        {"condition2", "divergence-ranked truncation to the list size"},
        {"decoder_relaxation",
         "state sequences relaxed to conditional explanation laws; gap O(log n / n)"}};
    write_result_doc(o.out, manifest, result);

    if (!o.csv.empty()) {
        std::string csv = "trial,error,fallback,cert\n";
        for (std::size_t t = 0; t < agg.reports.size(); ++t)
            csv += std::to_string(t) + "," + std::to_string(agg.reports[t].error ? 1 : 0) + "," +
                   std::to_string(agg.reports[t].used_fallback ? 1 : 0) + ",0\n";
        write_text_file(o.csv, csv);
    }

    std::cout << "simulate discrete trials=" << agg.trials << " error_rate=" << agg.error_rate
              << " fallback_rate=" << agg.fallback_rate << " -> " << o.out << "  ("
              << elapsed_seconds(start) << " s)\n";
    return 0;
}

// -------------------------------------------------------------- simulate gaussian

struct GaussianSimOpts {
    double p1 = 1.0, p2 = 1.0;
    double state_power = 1.0;
    double noise_var = 0.1;
    int blocklength = 64;
    int list_size = 2;
    double rate1 = -1.0, rate2 = -1.0;
    int messages1 = 0, messages2 = 0;  // override rates when positive
    std::string jammer = "none";
    double jammer_eta = -1.0;
    bool fresh_codebooks = false;
    int trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    int threads = threads_default();
    std::string out = "simulate_gaussian.json";
    std::string csv;
};

int cmd_simulate_gaussian(const GaussianSimOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    GaussianParams params;
    params.p1 = o.p1;
    params.p2 = o.p2;
    params.state_power = o.state_power;
    params.noise_var = o.noise_var;
    params.n = o.blocklength;
    params.list_size = o.list_size;
    params.r1 = o.messages1 > 0 ? rate_for_messages(o.messages1, o.list_size, o.blocklength)
                                : std::max(o.rate1, 0.0);
    params.r2 = o.messages2 > 0 ? rate_for_messages(o.messages2, o.list_size, o.blocklength)
                                : std::max(o.rate2, 0.0);
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    GaussianJammerSpec jammer;
    if (o.jammer == "none") {
        jammer.kind = GaussianJammerSpec::Kind::none;
    } else if (o.jammer == "gaussian") {
        jammer.kind = GaussianJammerSpec::Kind::gaussian;
        jammer.eta = o.jammer_eta > 0.0 ? o.jammer_eta : o.state_power / 10.0;
    } else if (o.jammer == "superposition") {
        jammer.kind = GaussianJammerSpec::Kind::superposition;
    } else {
        throw UsageError("--jammer must be none, gaussian or superposition");
    }

    GaussianRunOptions ropts;
    ropts.threads = o.threads;
    ropts.fresh_codebooks_per_trial = o.fresh_codebooks;
    const GaussianAggregates agg = run_gaussian_trials(params, jammer, o.trials, o.seed, ropts);

    json jparams;
    jparams["p1"] = o.p1;
    jparams["p2"] = o.p2;
    jparams["state_power"] = o.state_power;
    jparams["noise_var"] = o.noise_var;
    jparams["blocklength"] = o.blocklength;
    jparams["list_size"] = o.list_size;
    jparams["rate1"] = params.r1;
    jparams["rate2"] = params.r2;
    jparams["messages1"] = params.messages1();
    jparams["messages2"] = params.messages2();
    jparams["jammer"] = o.jammer;
    jparams["jammer_eta"] = jammer.eta;
    jparams["fresh_codebooks"] = o.fresh_codebooks;
    jparams["trials"] = o.trials;
    jparams["threads"] = o.threads;
    jparams["out"] = o.out;
    jparams["csv"] = o.csv;
    const json manifest = make_manifest("simulate gaussian", jparams, o.seed, "");

    json result;
    result["trials"] = agg.trials;
    result["error_rate"] = agg.error_rate;
    result["error_se"] = agg.error_se;
    result["cert_rate"] = agg.cert_rate;
    result["fallback_rate"] = agg.fallback_rate;
    result["mean_list_size"] = agg.mean_list_size;
    result["rate1_bound_bits"] = gaussian_rate1_bound(params);
    result["rate2_bound_bits"] = gaussian_rate2_bound(params);
    result["sum_rate_bound_bits"] = gaussian_sum_rate_bound(params);
    result["rates_inside_region"] = rates_inside_gaussian_region(params);
    if (jammer.kind == GaussianJammerSpec::Kind::superposition) {
        result["delta_n_hat"] = agg.delta_n_hat;
        result["delta_prime_hat"] = agg.delta_prime_hat;
        result["eps_hat_user1"] = agg.eps_hat_user1;
        result["eps_hat_user2"] = agg.eps_hat_user2;
        result["eta_hat_user1"] = agg.eta_hat_user1;
        result["eta_hat_user2"] = agg.eta_hat_user2;
        const int lp1 = params.list_size;
        const double eps = std::min(agg.eps_hat_user1, agg.eps_hat_user2);
        double floor = std::pow(eps / 2.0, lp1 + 1) -
                       0.5 * (lp1 + 1) * lp1 * agg.delta_prime_hat - agg.delta_n_hat;
        result["cert_floor"] = floor;
        result["error_floor"] = 0.5 * agg.cert_rate / (lp1 + 1) - 3.0 * agg.error_se;
        result["metadata"] = {
            {"eta_star", "desk-scale estimate of an asymptotic quantity"},
            {"epsilon", "coverage fraction at the estimated radius"}};
    }
    write_result_doc(o.out, manifest, result);

    if (!o.csv.empty()) {
        std::string csv = "trial,error,fallback,cert\n";
        for (std::size_t t = 0; t < agg.reports.size(); ++t)
            csv += std::to_string(t) + "," + std::to_string(agg.reports[t].error ? 1 : 0) + "," +
                   std::to_string(agg.reports[t].fallback ? 1 : 0) + "," +
                   std::to_string(agg.reports[t].certificate ? 1 : 0) + "\n";
        write_text_file(o.csv, csv);
    }

    std::cout << "simulate gaussian trials=" << agg.trials << " error_rate=" << agg.error_rate
              << " cert_rate=" << agg.cert_rate << " -> " << o.out << "  ("
              << elapsed_seconds(start) << " s)\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"avmac: symmetrizability, capacity bounds and Monte Carlo simulation "
                 "for two-user adversarial multiple-access channels"};
    app.require_subcommand(1);

    SymmOpts so;
    CLI::App* symm = app.add_subcommand("symmetrizability",
                                        "list-size orders from the symmetrizing LP");
    symm->add_option("--channel", so.channel_path, "channel document")->required();
    symm->add_option("--mode", so.mode, "weak|strong")
        ->check(CLI::IsMember({"weak", "strong"}));
    symm->add_option("--max-list", so.max_list, "largest edge count to test")
        ->check(CLI::Range(1, 6));
    symm->add_option("--grid", so.grid, "input simplex grid step")->check(CLI::Range(1e-3, 1.0));
    symm->add_option("--u-card", so.u_card, "time-sharing cardinality")->check(CLI::Range(1, 3));
    symm->add_option("--out", so.out, "result document path");

    RegionCmdOpts ro;
    CLI::App* reg = app.add_subcommand("region", "inner/outer capacity-region bounds");
    reg->add_option("--channel", ro.channel_path, "channel document")->required();
    reg->add_option("--list-size", ro.list_size, "decoder list size")->check(CLI::Range(1, 8));
    reg->add_option("--grid", ro.grid, "input simplex grid step")->check(CLI::Range(1e-3, 1.0));
    reg->add_option("--u-card", ro.u_card, "time-sharing cardinality")->check(CLI::Range(1, 3));
    reg->add_option("--list-cap", ro.list_cap, "symmetrizability search cap")
        ->check(CLI::Range(1, 6));
    reg->add_option("--mode", ro.mode, "inner|outer|both")
        ->check(CLI::IsMember({"inner", "outer", "both"}));
    reg->add_option("--threads", ro.threads, "worker threads");
    reg->add_option("--out", ro.out, "result document path");
    reg->add_option("--csv", ro.csv, "frontier CSV path");

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo simulation");
    sim->require_subcommand(1);

    DiscreteSimOpts dso;
    CLI::App* simd = sim->add_subcommand("discrete", "discrete-channel trials");
    simd->add_option("--channel", dso.channel_path, "channel document")->required();
    simd->add_option("--input", dso.input_path, "factorized input distribution document");
    simd->add_option("--list-size", dso.list_size, "decoder list size")->check(CLI::Range(1, 64));
    simd->add_option("--blocklength", dso.blocklength, "codeword length")
        ->check(CLI::Range(1, 100000));
    simd->add_option("--messages1", dso.messages1, "user-1 codebook size")
        ->check(CLI::Range(1, 4096));
    simd->add_option("--messages2", dso.messages2, "user-2 codebook size")
        ->check(CLI::Range(1, 4096));
    simd->add_option("--jammer", dso.jammer, "iid|symmetrizing")
        ->check(CLI::IsMember({"iid", "symmetrizing"}));
    simd->add_option("--state-dist", dso.state_dist, "iid jammer pmf over S");
    simd->add_option("--max-list", dso.max_list, "witness search cap")->check(CLI::Range(1, 6));
    simd->add_option("--eta", dso.eta, "typicality slack (bits)");
    simd->add_option("--eta-prime", dso.eta_prime, "disambiguation slack (bits)");
    simd->add_option("--trials", dso.trials, "trial count")->check(CLI::PositiveNumber);
    simd->add_option("--seed", dso.seed, "master seed");
    simd->add_option("--threads", dso.threads, "worker threads");
    simd->add_option("--out", dso.out, "result document path");
    simd->add_option("--csv", dso.csv, "per-trial CSV path");

    GaussianSimOpts gso;
    CLI::App* simg = sim->add_subcommand("gaussian", "power-constrained channel trials");
    simg->add_option("--p1", gso.p1, "user-1 power");
    simg->add_option("--p2", gso.p2, "user-2 power");
    simg->add_option("--state-power", gso.state_power, "jammer power budget N");
    simg->add_option("--noise-var", gso.noise_var, "ambient noise variance");
    simg->add_option("--blocklength", gso.blocklength, "dimension n")->check(CLI::Range(2, 4096));
    simg->add_option("--list-size", gso.list_size, "decoder list size")->check(CLI::Range(1, 16));
    simg->add_option("--rate1", gso.rate1, "user-1 rate (bits/use)");
    simg->add_option("--rate2", gso.rate2, "user-2 rate (bits/use)");
    simg->add_option("--messages1", gso.messages1, "user-1 codebook size (overrides --rate1)");
    simg->add_option("--messages2", gso.messages2, "user-2 codebook size (overrides --rate2)");
    simg->add_option("--jammer", gso.jammer, "none|gaussian|superposition")
        ->check(CLI::IsMember({"none", "gaussian", "superposition"}));
    simg->add_option("--jammer-eta", gso.jammer_eta, "honest jammer variance shortfall");
    simg->add_flag("--fresh-codebooks", gso.fresh_codebooks, "new codebooks every trial");
    simg->add_option("--trials", gso.trials, "trial count")->check(CLI::PositiveNumber);
    simg->add_option("--seed", gso.seed, "master seed");
    simg->add_option("--threads", gso.threads, "worker threads");
    simg->add_option("--out", gso.out, "result document path");
    simg->add_option("--csv", gso.csv, "per-trial CSV path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (symm->parsed()) return cmd_symmetrizability(so);
        if (reg->parsed()) return cmd_region(ro);
        if (sim->parsed()) {
            if (simd->parsed()) return cmd_simulate_discrete(dso);
            if (simg->parsed()) return cmd_simulate_gaussian(gso);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ChannelFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace avmac::cli
