#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/dynsim.hpp"
#include "netrecon/netgraph.hpp"

namespace netrecon {

/// Finite-horizon Gramian P with its right-hand side Q and the trajectory
/// endpoints they came from. Continuous case: P = int_0^T x(t) x(t)^T dt and
/// Q = x_T x_T^T - x0 x0^T; X solves X P + P X = Q. Discrete case: the
/// corresponding sums, horizon holds the step count.
struct GramPair {
    SymMatrix P;
    SymMatrix Q;
    double horizon = 0.0;
    Eigen::VectorXd x0;
    Eigen::VectorXd xT;

    int dim() const { return P.size(); }
};

/// Composite-Simpson Gramian from a measured trajectory (fourth-order in the
/// grid spacing). Q uses the endpoints only, so it carries no quadrature
/// error. P is symmetrized after accumulation.
inline GramPair gram_from_trajectory(const Trajectory& traj) {
    const int n = traj.dim();
    const int k = traj.segments();
    const double dt = traj.horizon() / k;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i <= k; ++i) {
        double w = (i == 0 || i == k) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc.noalias() += w * (traj.states[i] * traj.states[i].transpose());
    }
    acc *= dt / 3.0;
    GramPair gp;
    gp.P = SymMatrix::from_dense(acc);
    gp.x0 = traj.states.front();
    gp.xT = traj.states.back();
    gp.Q = SymMatrix::from_dense(gp.xT * gp.xT.transpose() - gp.x0 * gp.x0.transpose());
    gp.horizon = traj.horizon();
    return gp;
}

namespace detail {
/// phi(mu, T) = (e^{mu T} - 1)/mu with the exact phi(0, T) = T limit.
inline double phi(double mu, double t_final) {
    if (mu == 0.0) return t_final;
    return std::expm1(mu * t_final) / mu;
}
} // namespace detail

/// Closed-form Gramian for known dynamics: with X = U Lambda U^T and
/// y = U^T x0, (U^T P U)_ij = y_i y_j phi(lambda_i + lambda_j, T).
/// Testing oracle only -- it consumes the matrix the measurement-side
/// pipeline is trying to find.
inline GramPair gram_exact(const SymMatrix& x, const Eigen::VectorXd& x0, double t_final) {
    if (x.size() != x0.size()) throw DimensionMismatch("gram_exact: dimension mismatch");
    if (!(t_final > 0)) throw std::invalid_argument("gram_exact: T must be positive");
    SymEig ed = sym_eig(x);
    const int n = x.size();
    Eigen::VectorXd y = ed.eigenvectors.transpose() * x0;
    Eigen::MatrixXd pt(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pt(i, j) = y(i) * y(j) * detail::phi(ed.eigenvalues(i) + ed.eigenvalues(j), t_final);
    GramPair gp;
    gp.P = SymMatrix::from_dense(ed.eigenvectors * pt * ed.eigenvectors.transpose());
    gp.x0 = x0;
    gp.xT = ed.eigenvectors * ((ed.eigenvalues.array() * t_final).exp().matrix().asDiagonal() * y);
    gp.Q = SymMatrix::from_dense(gp.xT * gp.xT.transpose() - gp.x0 * gp.x0.transpose());
    gp.horizon = t_final;
    return gp;
}

/// Discrete-time pair from samples z(0..K), K >= n:
/// P = sum_{k<n} z(k) z(k)^T, Q = sum_{k<n} z(k+1) z(k)^T + z(k) z(k+1)^T,
/// so that M P + P M = Q for z(k+1) = M z(k).
inline GramPair gram_discrete(const std::vector<Eigen::VectorXd>& samples) {
    if (samples.empty()) throw std::invalid_argument("gram_discrete: no samples");
    const int n = static_cast<int>(samples.front().size());
    if (static_cast<int>(samples.size()) < n + 1)
        throw std::invalid_argument("gram_discrete: needs at least n+1 samples");
    for (const auto& z : samples)
        if (z.size() != n) throw DimensionMismatch("gram_discrete: sample dimension varies");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        p.noalias() += samples[k] * samples[k].transpose();
        q.noalias() += samples[k + 1] * samples[k].transpose();
        q.noalias() += samples[k] * samples[k + 1].transpose();
    }
    GramPair gp;
    gp.P = SymMatrix::from_dense(p);
    gp.Q = SymMatrix::from_dense(q);
    gp.horizon = static_cast<double>(n);
    gp.x0 = samples.front();
    gp.xT = samples[n];
    return gp;
}

/// || S P + P S - Q ||_F, the violation of the defining identity.
inline double residual(const SymMatrix& s, const GramPair& gp) {
    if (s.size() != gp.dim()) throw DimensionMismatch("residual: dimension mismatch");
    Eigen::MatrixXd sd = s.dense(), pd = gp.P.dense();
    return (sd * pd + pd * sd - gp.Q.dense()).norm();
}

} // namespace netrecon
