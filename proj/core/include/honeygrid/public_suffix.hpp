#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace honeygrid {

/// Longest public suffix of `domain` per the bundled suffix table:
/// "shop.example.co.uk" -> "co.uk". Unknown final labels fall back to the
/// last label, mirroring the suffix list's implicit "*" rule. Input is
/// matched case-insensitively; the returned view points into `domain`.
std::string_view public_suffix(std::string_view domain);

/// The suffix plus one label: "shop.example.co.uk" -> "example.co.uk".
/// A domain that is itself a public suffix is returned unchanged.
std::string_view registrable_domain(std::string_view domain);

/// Labels to the left of the public suffix, left to right, lowercased:
/// "Sub.Example.com" -> {"sub", "example"}. Empty when the domain is
/// itself a suffix.
std::vector<std::string> domain_labels(std::string_view domain);

} // namespace honeygrid
