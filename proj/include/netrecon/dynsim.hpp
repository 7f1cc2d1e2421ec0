#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "netrecon/errors.hpp"
#include "netrecon/netgraph.hpp"

namespace netrecon {

/// Orthogonal diagonalization X = U diag(eigenvalues) U^T,
/// eigenvalues ascending.
struct SymEig {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors; // columns
};

/// Spectral factorization of a symmetric matrix (tridiagonalization plus
/// implicit-shift QR underneath, ascending eigenvalue order). One
/// factorization serves the propagator, the exact Gramian, and the Lyapunov
/// solver.
inline SymEig sym_eig(const SymMatrix& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.dense());
    if (es.info() != Eigen::Success)
        throw EigenFailure("sym_eig: eigensolver did not converge within its sweep budget");
    return SymEig{es.eigenvalues(), es.eigenvectors()};
}

namespace detail {
inline SymMatrix expm_from_eig(const SymEig& ed, double t) {
    Eigen::VectorXd e = (ed.eigenvalues.array() * t).exp();
    Eigen::MatrixXd m = ed.eigenvectors * e.asDiagonal() * ed.eigenvectors.transpose();
    return SymMatrix::from_dense(m);
}
} // namespace detail

/// e^{Xt} via the spectral route: U e^{Lambda t} U^T.
inline SymMatrix expm_sym(const SymMatrix& x, double t) {
    if (t == 0.0) return SymMatrix::identity(x.size());
    return detail::expm_from_eig(sym_eig(x), t);
}

/// Uniformly sampled state trajectory on [0, T]. The grid is Simpson-ready:
/// K segments with K >= 2 and even.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;

    Trajectory(std::vector<double> ts, std::vector<Eigen::VectorXd> xs)
        : times(std::move(ts)), states(std::move(xs)) {
        if (times.size() != states.size())
            throw std::invalid_argument("trajectory: times/states length mismatch");
        if (times.size() < 3 || (times.size() - 1) % 2 != 0)
            throw std::invalid_argument("trajectory: needs an even number K >= 2 of segments");
        if (times.front() != 0.0)
            throw std::invalid_argument("trajectory: must start at t = 0");
        const std::size_t k = times.size() - 1;
        const double dt = times.back() / static_cast<double>(k);
        if (!(dt > 0)) throw std::invalid_argument("trajectory: horizon must be positive");
        const double tol = 1e-12 * std::max(1.0, times.back());
        for (std::size_t i = 0; i <= k; ++i)
            if (std::abs(times[i] - dt * static_cast<double>(i)) > tol)
                throw std::invalid_argument("trajectory: grid is not uniform");
        const auto n = states.front().size();
        for (const auto& s : states)
            if (s.size() != n) throw std::invalid_argument("trajectory: state dimension varies");
    }

    int dim() const { return static_cast<int>(states.front().size()); }
    int segments() const { return static_cast<int>(times.size()) - 1; }
    double horizon() const { return times.back(); }
};

/// Samples the solution of xdot = X x, x(0) = x0 on the uniform K-segment
/// grid over [0, T]. One eigendecomposition; states[k] = U e^{Lambda k dt} U^T x0,
/// with states[0] set to x0 exactly.
inline Trajectory simulate(const SymMatrix& x, const Eigen::VectorXd& x0, double t_final, int k) {
    if (x.size() != x0.size())
        throw DimensionMismatch("simulate: matrix/initial-state dimension mismatch");
    if (!(t_final > 0)) throw std::invalid_argument("simulate: T must be positive");
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("simulate: K must be even and >= 2");
    SymEig ed = sym_eig(x);
    Eigen::VectorXd y = ed.eigenvectors.transpose() * x0;
    const double dt = t_final / k;
    std::vector<double> times(k + 1);
    std::vector<Eigen::VectorXd> states(k + 1);
    times[0] = 0.0;
    states[0] = x0;
    for (int i = 1; i <= k; ++i) {
        times[i] = dt * i;
        Eigen::VectorXd e = (ed.eigenvalues.array() * times[i]).exp();
        states[i] = ed.eigenvectors * (e.asDiagonal() * y);
    }
    return Trajectory(std::move(times), std::move(states));
}

/// z(k) = M^k z0 for k = 0..steps, by repeated multiplication.
inline std::vector<Eigen::VectorXd> simulate_discrete(const SymMatrix& m,
                                                      const Eigen::VectorXd& z0, int steps) {
    if (m.size() != z0.size())
        throw DimensionMismatch("simulate_discrete: dimension mismatch");
    if (steps < 0) throw std::invalid_argument("simulate_discrete: steps must be >= 0");
    std::vector<Eigen::VectorXd> out;
    out.reserve(steps + 1);
    out.push_back(z0);
    Eigen::MatrixXd md = m.dense();
    for (int i = 0; i < steps; ++i) out.push_back(md * out.back());
    return out;
}

} // namespace netrecon
