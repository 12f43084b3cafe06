#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "honeygrid/error.hpp"

namespace honeygrid::detail {

// Object key order is preserved so that serialized artifacts are
// byte-stable across runs.
using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io-error", "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail("io-error", "read failure on '" + path + "'");
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("io-error", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail("io-error", "write failure on '" + path + "'");
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

inline Json parse_json(const std::string& text, const std::string& what) {
    Json parsed = Json::parse(text, nullptr, false);
    if (parsed.is_discarded()) fail("parse-error", "malformed JSON in " + what);
    return parsed;
}

inline std::string get_string(const Json& obj, const char* key, const std::string& what) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        fail("parse-error", what + ": missing or non-string field '" + key + "'");
    }
    return it->get<std::string>();
}

inline std::string get_string_or(const Json& obj, const char* key, const std::string& fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_string()) fail("parse-error", std::string("non-string field '") + key + "'");
    return it->get<std::string>();
}

} // namespace honeygrid::detail
