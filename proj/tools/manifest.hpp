#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace avmac::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDULL;  // fixed so bare runs reproduce

// FNV-1a over the raw file bytes, as a hex string.
std::string file_digest(const std::string& path);

// Every result document carries a manifest sufficient to reproduce it
// bit-identically: subcommand, all parameters, the master seed, the toolkit
// version and the input digest. Wall-clock time goes to the stdout summary
// only, keeping output files byte-reproducible.
nlohmann::json make_manifest(const std::string& subcommand, nlohmann::json parameters,
                             std::uint64_t seed, const std::string& input_digest);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace avmac::cli
