#pragma once

#include <stdexcept>
#include <string>

#include "avmac/channel.hpp"

namespace avmac::cli {

// Channel documents are JSON with keys: card_x/card_y/card_s/card_z, the
// transition table "w" flattened (x,y,s,z) row-major, cost tables f1/f2/g,
// budgets gamma1/gamma2/lambda, and an optional name.
DiscreteAVMAC parse_channel_file(const std::string& path);
DiscreteAVMAC parse_channel_text(const std::string& text, const std::string& origin = "<memory>");

std::string channel_to_text(const DiscreteAVMAC& ch);
void write_channel_file(const std::string& path, const DiscreteAVMAC& ch);

// Thrown for missing keys, dimension mismatches and validation failures; the
// CLI maps it to exit code 2.
struct ChannelFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace avmac::cli
