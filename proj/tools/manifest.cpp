#include "manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace avmac::cli {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for digest");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << "fnv1a:" << std::hex << h;
    return out.str();
}

nlohmann::json make_manifest(const std::string& subcommand, nlohmann::json parameters,
                             std::uint64_t seed, const std::string& input_digest) {
    nlohmann::json m;
    m["subcommand"] = subcommand;
    m["parameters"] = std::move(parameters);
    m["seed"] = seed;
    m["version"] = kToolkitVersion;
    if (!input_digest.empty()) m["input_digest"] = input_digest;
    return m;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
}

}  // namespace avmac::cli
