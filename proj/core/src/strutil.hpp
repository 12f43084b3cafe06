#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace honeygrid::detail {

inline std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

inline std::string_view trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

/// Case-insensitive substring test; `needle` must already be lowercase.
inline bool contains_lowered(std::string_view haystack_lower, std::string_view needle) {
    return haystack_lower.find(needle) != std::string_view::npos;
}

} // namespace honeygrid::detail
