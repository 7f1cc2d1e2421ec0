#pragma once

#include <stdexcept>
#include <string>

namespace netrecon {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown by solve_unique when P has eigenvalues below the rank tolerance.
struct SingularP : std::runtime_error {
    explicit SingularP(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by solve_affine when Q has mass in the kernel-kernel block,
/// i.e. (P, Q) cannot both come from one trajectory.
struct InconsistentRHS : std::runtime_error {
    explicit InconsistentRHS(const std::string& what) : std::runtime_error(what) {}
};

struct VariableBudgetExceeded : std::runtime_error {
    explicit VariableBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by the sampled-measurement front end when the recovered one-step
/// map is not positive definite.
struct NonPositiveEigenvalue : std::runtime_error {
    explicit NonPositiveEigenvalue(const std::string& what) : std::runtime_error(what) {}
};

struct EigenFailure : std::runtime_error {
    explicit EigenFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace netrecon
