#pragma once

#include <stdexcept>
#include <string>

namespace dppriv {

enum class errc {
    invalid_argument = 1,
    dimension_mismatch,
    insufficient_data,
    infeasible,
    budget_exhausted,
    parse,
    io,
    singular,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

} // namespace dppriv
