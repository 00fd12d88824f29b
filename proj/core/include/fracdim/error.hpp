#pragma once

#include <stdexcept>
#include <string>

namespace fracdim {

enum class ErrorKind {
    parameter_domain,
    dimension_mismatch,
    scale_order,
    center_domain,
    infeasible_window,
    grid_domain,
    numeric_range,
    config_conflict,
    io,
    format,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised when no (R, r) pair of the scale window is admissible for a theta.
// Carries the largest theta of the grid that does admit a pair (0 if none).
class InfeasibleWindowError : public Error {
public:
    InfeasibleWindowError(const std::string& what, double largest_feasible_theta)
        : Error(ErrorKind::infeasible_window, what),
          largest_feasible_theta_(largest_feasible_theta) {}

    double largest_feasible_theta() const noexcept { return largest_feasible_theta_; }

private:
    double largest_feasible_theta_;
};

}  // namespace fracdim
