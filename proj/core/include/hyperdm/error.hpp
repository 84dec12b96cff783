#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hyperdm {

// Runtime error carrying a stable machine-readable code such as
// "node-not-found" or "invalid-config". Tests match on code().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& detail) {
    throw Error(std::move(code), detail);
}

}  // namespace hyperdm
