#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "avmac/channel.hpp"
#include "avmac/discrete_sim.hpp"
#include "avmac/distribution.hpp"
#include "avmac/information.hpp"
#include "avmac/rng.hpp"
#include "oracles.hpp"

using namespace avmac;

TEST_CASE("validate_channel accepts the xor-adder channel") {
    const DiscreteAVMAC ch = binary_xor_channel({0.0, 1.0}, 1.0);
    const ChannelValidation v = validate_channel(ch);
    CHECK(v.ok);
}

TEST_CASE("validate_channel flags a non-stochastic row") {
    DiscreteAVMAC ch = binary_xor_channel({0.0, 1.0}, 1.0);
    ch.w[ch.w_index(1, 0, 1, 0)] -= 0.1;  // row (1,0,1) now sums to 0.9
    const ChannelValidation v = validate_channel(ch);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("non-stochastic row") != std::string::npos);
    CHECK(v.message.find("x=1") != std::string::npos);
}

TEST_CASE("validate_channel flags an infeasible input budget") {
    DiscreteAVMAC ch = binary_xor_channel({0.0, 1.0}, 1.0, {0.5, 1.0}, {0.0, 1.0}, 0.0, 1.0);
    const ChannelValidation v = validate_channel(ch);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("user 1") != std::string::npos);
}

TEST_CASE("validate_channel flags negative costs") {
    DiscreteAVMAC ch = binary_xor_channel({0.0, -0.25}, 1.0);
    const ChannelValidation v = validate_channel(ch);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("negative cost") != std::string::npos);
}

TEST_CASE("marginalize uniform pair and diagonal") {
    const JointDistribution u2 = JointDistribution::uniform({2, 2});
    const JointDistribution mx = u2.marginalize(std::array{0});
    CHECK(mx[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mx[1] == doctest::Approx(0.5).epsilon(1e-15));

    const JointDistribution diag({2, 2}, {0.5, 0.0, 0.0, 0.5});
    const JointDistribution my = diag.marginalize(std::array{1});
    CHECK(my[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(my[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("marginalize matches the direct-summation oracle on random tables") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const JointDistribution d = oracle::random_joint({2, 3}, seed);
        const JointDistribution kept = d.marginalize(std::array{0});
        const JointDistribution want = oracle::marginalize_direct(d, std::array{0});
        for (std::size_t i = 0; i < kept.cell_count(); ++i)
            CHECK(kept[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

TEST_CASE("marginals over any subset remain valid distributions") {
    const JointDistribution d = oracle::random_joint({2, 3, 2}, 9);
    for (const auto& keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 1}, {2, 0}, {1, 2, 0}})
        CHECK_NOTHROW(d.marginalize(keep).validate(1e-9));
}

TEST_CASE("marginalize rejects an empty keep set") {
    const JointDistribution d = JointDistribution::uniform({2, 2});
    CHECK_THROWS_AS((void)d.marginalize(std::span<const int>{}), std::invalid_argument);
}

TEST_CASE("kl divergence basic values") {
    const JointDistribution p({2}, {1.0, 0.0});
    const JointDistribution fair({2}, {0.5, 0.5});
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
    CHECK(kl_divergence(fair, fair) == doctest::Approx(0.0));
    CHECK(kl_divergence(p, fair) == doctest::Approx(1.0).epsilon(1e-12));

    // D(Bern(0.25) || Bern(0.5)), frozen from the direct-summation oracle.
    const JointDistribution q({2}, {0.75, 0.25});
    const double direct = oracle::kl_direct(q, fair);
    CHECK(direct == doctest::Approx(0.18872187554086717).epsilon(1e-12));
    CHECK(kl_divergence(q, fair) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("kl divergence is +infinity off the support") {
    const JointDistribution p({2}, {0.5, 0.5});
    const JointDistribution q({2}, {1.0, 0.0});
    const double d = kl_divergence(p, q);
    CHECK(std::isinf(d));
    CHECK(d > 1e300);  // sentinel compares above all finite reals
}

TEST_CASE("kl divergence rejects shape mismatch") {
    const JointDistribution p({2}, {0.5, 0.5});
    const JointDistribution q({3}, {0.4, 0.3, 0.3});
    CHECK_THROWS_AS((void)kl_divergence(p, q), std::invalid_argument);
}

TEST_CASE("conditional mutual information on hand cases") {
    // Independent bits: I = 0.
    const JointDistribution indep = JointDistribution::uniform({2, 2});
    CHECK(cond_mutual_information(indep, std::array{0}, std::array{1}, {}) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // z = x xor y with uniform independent inputs: I(x; z | y) = 1 bit.
    std::vector<double> probs(8, 0.0);
    JointDistribution xor_d({2, 2, 2}, [&] {
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) probs[static_cast<std::size_t>(((x * 2) + y) * 2 + (x ^ y))] = 0.25;
        return probs;
    }());
    CHECK(cond_mutual_information(xor_d, std::array{0}, std::array{2}, std::array{1}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // z = x + y over {0,1,2}: I(x,y; z) = H(z) = 1.5 bits.
    std::vector<double> padd(static_cast<std::size_t>(2 * 2 * 3), 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) padd[static_cast<std::size_t>((x * 2 + y) * 3 + x + y)] = 0.25;
    const JointDistribution adder({2, 2, 3}, padd);
    CHECK(cond_mutual_information(adder, std::array{0, 1}, std::array{2}, {}) ==
          doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("conditional mutual information rejects overlapping sets") {
    const JointDistribution d = JointDistribution::uniform({2, 2, 2});
    CHECK_THROWS_AS(
        (void)cond_mutual_information(d, std::array{0}, std::array{0}, std::array{1}),
        std::invalid_argument);
}

TEST_CASE("cond MI matches the direct-formula oracle and is symmetric") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const JointDistribution d = oracle::random_joint({2, 3, 2}, seed);
        const double i_ab = cond_mutual_information(d, std::array{0}, std::array{1}, std::array{2});
        const double i_ba = cond_mutual_information(d, std::array{1}, std::array{0}, std::array{2});
        const double want = oracle::cond_mi_direct(d, std::array{0}, std::array{1}, std::array{2});
        CHECK(i_ab == doctest::Approx(want).epsilon(1e-9));
        CHECK(i_ab == doctest::Approx(i_ba).epsilon(1e-12));
        CHECK(i_ab >= 0.0);
    }
}

TEST_CASE("chain rule I(x,y;z|u) = I(x;z|u) + I(y;z|x,u)") {
    for (std::uint64_t seed = 3; seed <= 18; ++seed) {
        const JointDistribution d = oracle::random_joint({2, 2, 2, 2}, seed);  // u,x,y,z
        const double lhs = cond_mutual_information(d, std::array{1, 2}, std::array{3}, std::array{0});
        const double rhs = cond_mutual_information(d, std::array{1}, std::array{3}, std::array{0}) +
                           cond_mutual_information(d, std::array{2}, std::array{3}, std::array{0, 1});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("KL to the product of marginals equals mutual information") {
    for (std::uint64_t seed = 5; seed <= 20; ++seed) {
        const JointDistribution d = oracle::random_joint({3, 4}, seed);
        const JointDistribution prod =
            d.product_of_group_marginals(std::array{0}, std::array{1});
        const double mi = cond_mutual_information(d, std::array{0}, std::array{1}, {});
        CHECK(kl_divergence(d, prod) == doctest::Approx(mi).epsilon(1e-9));
    }
}

TEST_CASE("empirical joint type hand cases and counting oracle") {
    const std::vector<std::vector<int>> seqs{{0, 0, 1, 1}, {0, 1, 0, 1}};
    const EmpiricalType t = empirical_joint_type(seqs, std::array{2, 2});
    t.validate();
    for (std::size_t i = 0; i < 4; ++i) CHECK(t.dist[i] == doctest::Approx(0.25));

    const std::vector<std::vector<int>> single{{0, 0, 0}};
    const EmpiricalType t2 = empirical_joint_type(single, std::array{2});
    CHECK(t2.dist[0] == doctest::Approx(1.0));
    CHECK(t2.dist[1] == doctest::Approx(0.0));

    // Random pair against an independent count.
    Rng rng(99);
    std::vector<int> a(20), b(20);
    for (int i = 0; i < 20; ++i) {
        a[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(2));
        b[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(3));
    }
    const std::vector<std::vector<int>> pair{a, b};
    const EmpiricalType t3 = empirical_joint_type(pair, std::array{2, 3});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y) {
            int count = 0;
            for (int i = 0; i < 20; ++i)
                if (a[static_cast<std::size_t>(i)] == x && b[static_cast<std::size_t>(i)] == y) ++count;
            CHECK(t3.dist[static_cast<std::size_t>(x * 3 + y)] ==
                  doctest::Approx(count / 20.0).epsilon(1e-12));
        }
}

TEST_CASE("empirical joint type rejects malformed input") {
    CHECK_THROWS_AS(
        (void)empirical_joint_type(std::vector<std::vector<int>>{{0, 1}, {0}}, std::array{2, 2}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)empirical_joint_type(std::vector<std::vector<int>>{{0, 5}}, std::array{2}),
        std::out_of_range);
}

TEST_CASE("average cost") {
    const std::vector<double> g{0.0, 1.0};
    CHECK(average_cost(std::vector<int>{0, 0, 0}, g) == doctest::Approx(0.0));
    CHECK(average_cost(std::vector<int>{1, 1, 0, 0}, g) == doctest::Approx(0.5));
    Rng rng(7);
    std::vector<int> seq(37);
    double total = 0.0;
    for (int& s : seq) {
        s = static_cast<int>(rng.next_below(2));
        total += g[static_cast<std::size_t>(s)];
    }
    CHECK(average_cost(seq, g) == doctest::Approx(total / 37.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)average_cost(std::vector<int>{0, 2}, g), std::out_of_range);
}

TEST_CASE("empirical type of iid draws concentrates (statistical)") {
    // TV gap <= 0.05 at n = 1e4 in at least 99 of 100 seeded runs.
    const std::vector<double> p{0.2, 0.5, 0.3};
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(1234, seed));
        std::vector<int> seq(10000);
        for (int& s : seq) s = static_cast<int>(rng.sample_pmf(p.data(), p.size()));
        const EmpiricalType t = empirical_joint_type(std::vector<std::vector<int>>{seq}, std::array{3});
        double tv = 0.0;
        for (int s = 0; s < 3; ++s) tv += std::abs(t.dist[static_cast<std::size_t>(s)] - p[static_cast<std::size_t>(s)]);
        if (tv / 2.0 <= 0.05) ++ok;
    }
    CHECK(ok >= 99);
}

TEST_CASE("type count matches the multiset-coefficient closed form") {
    for (int cells : {2, 3, 4, 6})
        for (int n : {1, 2, 5, 9, 16})
            CHECK(oracle::count_types_enumerated(cells, n) == oracle::multiset_coefficient(cells, n));
    // Polynomial growth spot check: 6-cell alphabet at n=50 is far below 2^n.
    CHECK(oracle::multiset_coefficient(6, 50) == oracle::count_types_enumerated(6, 50));
}

TEST_CASE("factorize_input round-trips factored joints and rejects coupled ones") {
    const FactorizedInput fi = oracle::random_factorized_input(2, 2, 3, 77);
    const FactorizedInput back = factorize_input(fi.joint_uxy());
    for (std::size_t i = 0; i < fi.pu.size(); ++i)
        CHECK(back.pu[i] == doctest::Approx(fi.pu[i]).epsilon(1e-12));

    JointDistribution coupled({1, 2, 2}, {0.5, 0.0, 0.0, 0.5});  // x = y, not a product
    CHECK_THROWS_AS((void)factorize_input(coupled), std::invalid_argument);
}

TEST_CASE("simplex grid enumerates compositions") {
    const auto pts = simplex_grid(2, 0.5);
    CHECK(pts.size() == 3);  // (0,1), (1/2,1/2), (1,0)
    const auto pts3 = simplex_grid(3, 0.5);
    CHECK(pts3.size() == 6);
    for (const auto& p : pts3) {
        double total = 0.0;
        for (double v : p) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("input grid honors cost budgets") {
    const DiscreteAVMAC ch = binary_xor_channel({0.0, 1.0}, 1.0, {0.0, 1.0}, {0.0, 1.0}, 0.25, 1.0);
    const auto grid = input_grid(1, 2, 2, 0.25, ch.f1, ch.gamma1, ch.f2, ch.gamma2);
    CHECK_FALSE(grid.empty());
    for (const auto& fi : grid) {
        CHECK(fi.expected_cost_x(ch.f1) <= 0.25 + 1e-9);
        CHECK(fi.expected_cost_y(ch.f2) <= 1.0 + 1e-9);
    }
}
