#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace voxhive {

// Error with a stable machine-parsable code ("ConfigError", "UnknownAgent",
// ...). The CLI prints "error: <code>: <detail>" and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
    throw Error(code, detail);
}

inline void require(bool cond, const std::string& code, const std::string& detail) {
    if (!cond) fail(code, detail);
}

} // namespace voxhive
