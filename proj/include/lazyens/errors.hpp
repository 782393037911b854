#pragma once

#include <stdexcept>
#include <string>

namespace lazyens {

// Failure categories raised by the library. The CLI maps these onto its
// exit-code contract (input/validation errors -> 2, iteration caps -> 3).
enum class ErrorCode {
    bad_input,
    not_hermitian,
    not_unit_trace,
    not_positive,
    degenerate,
    not_unitary,
    no_convergence,
    infeasible_mean,
    degenerate_values,
    mismatched_state,
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::bad_input: return "bad_input";
        case ErrorCode::not_hermitian: return "not_hermitian";
        case ErrorCode::not_unit_trace: return "not_unit_trace";
        case ErrorCode::not_positive: return "not_positive";
        case ErrorCode::degenerate: return "degenerate";
        case ErrorCode::not_unitary: return "not_unitary";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::infeasible_mean: return "infeasible_mean";
        case ErrorCode::degenerate_values: return "degenerate_values";
        case ErrorCode::mismatched_state: return "mismatched_state";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lazyens
