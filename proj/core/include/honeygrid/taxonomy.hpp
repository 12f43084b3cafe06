#pragma once

#include <string_view>

#include "honeygrid/error.hpp"

namespace honeygrid {

/// What an unrecognized email's content turned out to be, per manual
/// review (or per the simulator's planted behavior).
enum class ContentClass { Malicious, Unrelated, Functional };

/// Verdict of the manual disclosure test: is the sender's relationship
/// to the app disclosed anywhere on the app's site or policies?
enum class Disclosure { Disclosed, Unknown };

/// Severity ranking of a finding, most egregious first.
enum class SeverityQuadrant {
    MaliciousUnknown,
    UnrelatedUnknown,
    UnrelatedDisclosed,
    FunctionalDisclosed,
};

constexpr std::string_view content_class_name(ContentClass value) {
    switch (value) {
        case ContentClass::Malicious: return "malicious";
        case ContentClass::Unrelated: return "unrelated";
        case ContentClass::Functional: return "functional";
    }
    return "unknown";
}

constexpr std::string_view disclosure_name(Disclosure value) {
    return value == Disclosure::Disclosed ? "disclosed" : "unknown";
}

constexpr std::string_view quadrant_name(SeverityQuadrant value) {
    switch (value) {
        case SeverityQuadrant::MaliciousUnknown: return "malicious-unknown";
        case SeverityQuadrant::UnrelatedUnknown: return "unrelated-unknown";
        case SeverityQuadrant::UnrelatedDisclosed: return "unrelated-disclosed";
        case SeverityQuadrant::FunctionalDisclosed: return "functional-disclosed";
    }
    return "unknown";
}

inline ContentClass content_class_from_name(std::string_view name) {
    if (name == "malicious") return ContentClass::Malicious;
    if (name == "unrelated") return ContentClass::Unrelated;
    if (name == "functional") return ContentClass::Functional;
    fail("parse-error", "unknown content class '" + std::string(name) + "'");
}

inline Disclosure disclosure_from_name(std::string_view name) {
    if (name == "disclosed") return Disclosure::Disclosed;
    if (name == "unknown") return Disclosure::Unknown;
    fail("parse-error", "unknown disclosure verdict '" + std::string(name) + "'");
}

/// Collapses a (content class, disclosure) pair onto the four-quadrant
/// taxonomy. Malicious content is always the worst quadrant whatever
/// the disclosure verdict, and functional content is always benign.
constexpr SeverityQuadrant severity_quadrant(ContentClass content, Disclosure disclosure) {
    switch (content) {
        case ContentClass::Malicious: return SeverityQuadrant::MaliciousUnknown;
        case ContentClass::Unrelated:
            return disclosure == Disclosure::Unknown ? SeverityQuadrant::UnrelatedUnknown
                                                     : SeverityQuadrant::UnrelatedDisclosed;
        case ContentClass::Functional: return SeverityQuadrant::FunctionalDisclosed;
    }
    return SeverityQuadrant::UnrelatedUnknown;
}

/// Only functional-disclosed findings are benign.
constexpr bool is_misuse(SeverityQuadrant quadrant) {
    return quadrant != SeverityQuadrant::FunctionalDisclosed;
}

} // namespace honeygrid
