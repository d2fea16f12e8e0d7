#include "avmac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avmac {

namespace {
constexpr double kRowTol = 1e-12;

bool finite_nonneg(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x) || x < 0.0) return false;
    return true;
}
}  // namespace

double DiscreteAVMAC::g_min() const { return *std::min_element(g.begin(), g.end()); }
double DiscreteAVMAC::g_max() const { return *std::max_element(g.begin(), g.end()); }
int DiscreteAVMAC::arg_g_min() const {
    return static_cast<int>(std::min_element(g.begin(), g.end()) - g.begin());
}

ChannelValidation validate_channel(const DiscreteAVMAC& ch) {
    if (ch.card_x <= 0 || ch.card_y <= 0 || ch.card_s <= 0 || ch.card_z <= 0)
        return {false, "alphabet sizes must be positive"};
    const std::size_t expected = static_cast<std::size_t>(ch.card_x) * ch.card_y * ch.card_s * ch.card_z;
    if (ch.w.size() != expected)
        return {false, "transition table has " + std::to_string(ch.w.size()) + " entries, expected " +
                           std::to_string(expected)};
    if (ch.f1.size() != static_cast<std::size_t>(ch.card_x)) return {false, "f1 length mismatch"};
    if (ch.f2.size() != static_cast<std::size_t>(ch.card_y)) return {false, "f2 length mismatch"};
    if (ch.g.size() != static_cast<std::size_t>(ch.card_s)) return {false, "g length mismatch"};

    for (int x = 0; x < ch.card_x; ++x)
        for (int y = 0; y < ch.card_y; ++y)
            for (int s = 0; s < ch.card_s; ++s) {
                double row = 0.0;
                for (int z = 0; z < ch.card_z; ++z) {
                    const double p = ch.transition(x, y, s, z);
                    if (!std::isfinite(p) || p < 0.0)
                        return {false, "negative entry in W row (x=" + std::to_string(x) + ",y=" +
                                           std::to_string(y) + ",s=" + std::to_string(s) + ")"};
                    row += p;
                }
                if (std::abs(row - 1.0) > kRowTol)
                    return {false, "non-stochastic row (x=" + std::to_string(x) + ",y=" +
                                       std::to_string(y) + ",s=" + std::to_string(s) + "), sum=" +
                                       std::to_string(row)};
            }

    if (!finite_nonneg(ch.f1)) return {false, "negative cost in f1"};
    if (!finite_nonneg(ch.f2)) return {false, "negative cost in f2"};
    if (!finite_nonneg(ch.g)) return {false, "negative cost in g"};
    if (!std::isfinite(ch.gamma1) || ch.gamma1 < 0.0) return {false, "negative budget gamma1"};
    if (!std::isfinite(ch.gamma2) || ch.gamma2 < 0.0) return {false, "negative budget gamma2"};
    if (!std::isfinite(ch.lambda) || ch.lambda < 0.0) return {false, "negative budget lambda"};

    if (*std::min_element(ch.f1.begin(), ch.f1.end()) > ch.gamma1)
        return {false, "infeasible input budget user 1 (min f1 > gamma1)"};
    if (*std::min_element(ch.f2.begin(), ch.f2.end()) > ch.gamma2)
        return {false, "infeasible input budget user 2 (min f2 > gamma2)"};
    return {};
}

void require_valid(const DiscreteAVMAC& ch) {
    const ChannelValidation v = validate_channel(ch);
    if (!v.ok) throw std::invalid_argument("invalid channel: " + v.message);
}

DiscreteAVMAC binary_xor_channel(std::vector<double> g, double lambda, std::vector<double> f1,
                                 std::vector<double> f2, double gamma1, double gamma2) {
    DiscreteAVMAC ch;
    ch.card_x = ch.card_y = ch.card_s = ch.card_z = 2;
    ch.w.assign(16, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int s = 0; s < 2; ++s) ch.w[ch.w_index(x, y, s, x ^ y ^ s)] = 1.0;
    ch.f1 = std::move(f1);
    ch.f2 = std::move(f2);
    ch.g = std::move(g);
    ch.gamma1 = gamma1;
    ch.gamma2 = gamma2;
    ch.lambda = lambda;
    ch.name = "binary-xor";
    return ch;
}

DiscreteAVMAC noiseless_adder_channel() {
    DiscreteAVMAC ch;
    ch.card_x = ch.card_y = 2;
    ch.card_s = 1;
    ch.card_z = 3;
    ch.w.assign(static_cast<std::size_t>(2) * 2 * 1 * 3, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) ch.w[ch.w_index(x, y, 0, x + y)] = 1.0;
    ch.f1 = {0.0, 1.0};
    ch.f2 = {0.0, 1.0};
    ch.g = {0.0};
    ch.gamma1 = 1.0;
    ch.gamma2 = 1.0;
    ch.lambda = 1.0;
    ch.name = "noiseless-adder";
    return ch;
}

}  // namespace avmac
