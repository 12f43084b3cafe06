#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace honeygrid {

/// Error with a stable machine-readable code next to the human message.
/// Codes are kebab-case strings ("capacity-exceeded", "parse-error", ...)
/// and are part of the library contract: the CLI maps them to exit codes
/// and tests assert on them.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace honeygrid
