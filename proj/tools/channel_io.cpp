#include "channel_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace avmac::cli {

using nlohmann::json;

namespace {

json require_key(const json& doc, const std::string& key, const std::string& origin) {
    if (!doc.contains(key)) throw ChannelFileError(origin + ": missing key \"" + key + "\"");
    return doc.at(key);
}

std::vector<double> number_array(const json& doc, const std::string& key,
                                 const std::string& origin) {
    const json arr = require_key(doc, key, origin);
    if (!arr.is_array()) throw ChannelFileError(origin + ": \"" + key + "\" must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw ChannelFileError(origin + ": \"" + key + "\" has a non-number entry");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

DiscreteAVMAC parse_channel_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ChannelFileError(origin + ": " + e.what());
    }
    DiscreteAVMAC ch;
    ch.card_x = require_key(doc, "card_x", origin).get<int>();
    ch.card_y = require_key(doc, "card_y", origin).get<int>();
    ch.card_s = require_key(doc, "card_s", origin).get<int>();
    ch.card_z = require_key(doc, "card_z", origin).get<int>();
    ch.w = number_array(doc, "w", origin);
    const std::size_t expected = static_cast<std::size_t>(ch.card_x) * ch.card_y * ch.card_s *
                                 ch.card_z;
    if (ch.w.size() != expected)
        throw ChannelFileError(origin + ": dimension mismatch: expected |X||Y||S||Z| = " +
                               std::to_string(expected) + " transition entries, got " +
                               std::to_string(ch.w.size()));
    ch.f1 = number_array(doc, "f1", origin);
    ch.f2 = number_array(doc, "f2", origin);
    ch.g = number_array(doc, "g", origin);
    ch.gamma1 = require_key(doc, "gamma1", origin).get<double>();
    ch.gamma2 = require_key(doc, "gamma2", origin).get<double>();
    ch.lambda = require_key(doc, "lambda", origin).get<double>();
    if (doc.contains("name")) ch.name = doc.at("name").get<std::string>();

    const ChannelValidation v = validate_channel(ch);
    if (!v.ok) throw ChannelFileError(origin + ": invalid channel: " + v.message);
    return ch;
}

DiscreteAVMAC parse_channel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ChannelFileError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_channel_text(buf.str(), path);
}

std::string channel_to_text(const DiscreteAVMAC& ch) {
    json doc;
    if (!ch.name.empty()) doc["name"] = ch.name;
    doc["card_x"] = ch.card_x;
    doc["card_y"] = ch.card_y;
    doc["card_s"] = ch.card_s;
    doc["card_z"] = ch.card_z;
    doc["w"] = ch.w;
    doc["f1"] = ch.f1;
    doc["f2"] = ch.f2;
    doc["g"] = ch.g;
    doc["gamma1"] = ch.gamma1;
    doc["gamma2"] = ch.gamma2;
    doc["lambda"] = ch.lambda;
    return doc.dump(2) + "\n";
}

void write_channel_file(const std::string& path, const DiscreteAVMAC& ch) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ChannelFileError(path + ": cannot open for writing");
    out << channel_to_text(ch);
}

}  // namespace avmac::cli
