#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/dynsim.hpp"
#include "netrecon/gramian.hpp"

namespace netrecon {

/// The full solution set of S P + P S = Q over symmetric matrices, as one
/// particular solution plus a Frobenius-orthonormal basis of the symmetric
/// kernel of the operator S -> P S + S P. The kernel is spanned by the
/// symmetrized outer products of kernel vectors of P, so its dimension is
/// m(m+1)/2 for m = dim ker P.
struct AffineSolutionSet {
    SymMatrix particular;
    std::vector<SymMatrix> basis;
    int kernel_dim_P = 0;
};

namespace detail {
/// Indices of eigenvalues of P treated as kernel under the relative rank
/// tolerance. Eigenvalues ascending; P is PSD so tiny negatives are roundoff.
inline std::vector<int> kernel_indices(const Eigen::VectorXd& eigs, double eps_rank) {
    const double lam_max = std::max(eigs.size() > 0 ? eigs(eigs.size() - 1) : 0.0, 0.0);
    const double thresh = eps_rank * lam_max;
    std::vector<int> z;
    for (int i = 0; i < eigs.size(); ++i)
        if (eigs(i) <= thresh) z.push_back(i);
    return z;
}
} // namespace detail

/// n minus the numerical rank of P under eps_rank.
inline int kernel_dim(const GramPair& gp, double eps_rank = 1e-8) {
    SymEig ed = sym_eig(gp.P);
    return static_cast<int>(detail::kernel_indices(ed.eigenvalues, eps_rank).size());
}

/// Unique solution of S P + P S = Q for nonsingular P: diagonalize P once,
/// divide in the eigenbasis by lambda_i + lambda_j (all positive), rotate
/// back. Throws SingularP when P fails the rank tolerance.
inline SymMatrix solve_unique(const GramPair& gp, double eps_rank = 1e-8) {
    SymEig ed = sym_eig(gp.P);
    if (!detail::kernel_indices(ed.eigenvalues, eps_rank).empty())
        throw SingularP("solve_unique: P is singular under the rank tolerance; "
                        "use solve_affine");
    const int n = gp.dim();
    Eigen::MatrixXd qp = ed.eigenvectors.transpose() * gp.Q.dense() * ed.eigenvectors;
    Eigen::MatrixXd sp(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sp(i, j) = qp(i, j) / (ed.eigenvalues(i) + ed.eigenvalues(j));
    return SymMatrix::from_dense(ed.eigenvectors * sp * ed.eigenvectors.transpose());
}

/// Solution set of S P + P S = Q for PSD P of any rank. In the eigenbasis of
/// P the equation decouples: entries with at least one index outside the
/// kernel are determined (Q'_ij / (lambda_i + lambda_j)); the kernel-kernel
/// block is free and fixed to zero in the particular solution. The basis
/// holds the Frobenius-normalized symmetrized products u_i u_j^T + u_j u_i^T
/// of kernel eigenvectors, i <= j ascending.
///
/// Throws InconsistentRHS when Q has mass in the kernel-kernel block beyond
/// tol_consist * ||Q||_F: such a (P, Q) pair cannot come from one trajectory.
inline AffineSolutionSet solve_affine(const GramPair& gp, double eps_rank = 1e-8,
                                      double tol_consist = 1e-6) {
    SymEig ed = sym_eig(gp.P);
    const int n = gp.dim();
    std::vector<int> z = detail::kernel_indices(ed.eigenvalues, eps_rank);
    std::vector<bool> in_kernel(n, false);
    for (int i : z) in_kernel[i] = true;

    Eigen::MatrixXd qp = ed.eigenvectors.transpose() * gp.Q.dense() * ed.eigenvectors;
    const double qnorm = gp.Q.frobenius_norm();
    double worst = 0.0;
    for (int i : z)
        for (int j : z) worst = std::max(worst, std::abs(qp(i, j)));
    if (worst > tol_consist * qnorm)
        throw InconsistentRHS("solve_affine: Q has kernel-block mass " + std::to_string(worst) +
                              "; (P, Q) do not come from a common trajectory");

    Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (in_kernel[i] && in_kernel[j]) continue;
            sp(i, j) = qp(i, j) / (ed.eigenvalues(i) + ed.eigenvalues(j));
        }

    AffineSolutionSet out;
    out.kernel_dim_P = static_cast<int>(z.size());
    out.particular =
        SymMatrix::from_dense(ed.eigenvectors * sp * ed.eigenvectors.transpose());
    for (std::size_t a = 0; a < z.size(); ++a)
        for (std::size_t b = a; b < z.size(); ++b) {
            Eigen::VectorXd ui = ed.eigenvectors.col(z[a]);
            Eigen::VectorXd uj = ed.eigenvectors.col(z[b]);
            Eigen::MatrixXd bmat = ui * uj.transpose() + uj * ui.transpose();
            out.basis.push_back(SymMatrix::from_dense(bmat / bmat.norm()));
        }
    return out;
}

} // namespace netrecon
