#pragma once

#include <string>
#include <vector>

namespace avmac {

// Two-user state-dependent discrete memoryless MAC with per-letter average
// cost budgets on both inputs and on the state.
struct DiscreteAVMAC {
    int card_x = 0, card_y = 0, card_s = 0, card_z = 0;
    // Transition law W(z|x,y,s), flattened with (x,y,s,z) row-major.
    std::vector<double> w;
    std::vector<double> f1, f2, g;  // per-symbol costs
    double gamma1 = 0.0, gamma2 = 0.0, lambda = 0.0;
    std::string name;

    std::size_t w_index(int x, int y, int s, int z) const {
        return ((static_cast<std::size_t>(x) * card_y + y) * card_s + s) * card_z + z;
    }
    double transition(int x, int y, int s, int z) const { return w[w_index(x, y, s, z)]; }

    double g_min() const;
    double g_max() const;
    int arg_g_min() const;
};

struct ChannelValidation {
    bool ok = true;
    std::string message;  // first violated invariant, with indices
};

// Checks stochasticity of every W row, nonnegative finite costs, and budget
// feasibility (some input symbol must be affordable for each user).
ChannelValidation validate_channel(const DiscreteAVMAC& ch);

// Throwing wrapper for call sites that require a valid channel.
void require_valid(const DiscreteAVMAC& ch);

// z = x XOR y XOR s over binary alphabets.
DiscreteAVMAC binary_xor_channel(std::vector<double> g, double lambda,
                                 std::vector<double> f1 = {0.0, 1.0},
                                 std::vector<double> f2 = {0.0, 1.0}, double gamma1 = 1.0,
                                 double gamma2 = 1.0);

// z = x + y over {0,1,2} with a singleton (inactive) state alphabet.
DiscreteAVMAC noiseless_adder_channel();

}  // namespace avmac
