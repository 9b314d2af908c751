#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svf {

enum class ErrorKind {
    precision_exhausted,
    degenerate_crystal,
    window_unbounded,
    multiple_root,
    multiple_root_at_one,
    hypothesis_failed,
    not_type_i,
    budget_exceeded,
    unsupported,
    parse,
    inconsistent,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::precision_exhausted: return "precision-exhausted";
    case ErrorKind::degenerate_crystal: return "degenerate-crystal";
    case ErrorKind::window_unbounded: return "window-unbounded";
    case ErrorKind::multiple_root: return "multiple-root";
    case ErrorKind::multiple_root_at_one: return "multiple-root-at-1";
    case ErrorKind::hypothesis_failed: return "hypothesis-failed";
    case ErrorKind::not_type_i: return "not-type-I";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::inconsistent: return "inconsistent";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// that front ends can map it onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace svf
