#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace slq {

// Failure class drives the CLI exit code: precondition -> 1, numerical -> 2.
enum class ErrClass { Precondition, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrClass cls, std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), cls_(cls), code_(std::move(code)) {}

    ErrClass cls() const noexcept { return cls_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrClass cls_;
    std::string code_;
};

[[noreturn]] inline void fail_pre(const std::string& code, const std::string& msg) {
    throw Error(ErrClass::Precondition, code, msg);
}

[[noreturn]] inline void fail_num(const std::string& code, const std::string& msg) {
    throw Error(ErrClass::Numerical, code, msg);
}

} // namespace slq
