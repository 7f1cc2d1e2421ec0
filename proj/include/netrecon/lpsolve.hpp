#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/errors.hpp"

namespace netrecon {

/// Equality-form linear program: feasible region {s : M s = b, s >= 0},
/// maximizing c_obj^T s when an objective is present.
struct StandardLP {
    Eigen::MatrixXd M;
    Eigen::VectorXd b;
    std::optional<Eigen::VectorXd> c_obj; // absent = pure feasibility
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Eigen::VectorXd solution;    // basic feasible point (valid when Optimal)
    double objective = 0.0;
    std::vector<int> basis;      // structural columns of the final basis, ascending
    double residual = 0.0;       // ||M s - b||_inf on the row-scaled system
};

struct SimplexOptions {
    double tol_pivot = 1e-11; // entries below this are treated as zero
    double tol_feas = 1e-9;   // per-row phase-1 infeasibility allowance (scaled rows)
};

namespace detail {

/// Row-scaled copy of (M | b): every kept row has unit inf-norm. Rows whose
/// coefficient part is pure roundoff relative to the system scale constrain
/// nothing; they are dropped when their right-hand side is negligible too,
/// and flagged as an outright inconsistency (0 = b with b visible at system
/// scale) otherwise. Normalizing such rows instead would manufacture hard
/// constraints out of noise.
struct ScaledRows {
    Eigen::MatrixXd m;
    Eigen::VectorXd b;
    bool zero_row_inconsistent = false;
};

inline ScaledRows scale_rows(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                             double tol_feas) {
    const int r0 = static_cast<int>(m.rows());
    double global = 0.0;
    for (int i = 0; i < r0; ++i)
        global = std::max(global, std::max(m.row(i).cwiseAbs().maxCoeff(), std::abs(b(i))));
    ScaledRows out;
    std::vector<int> kept;
    for (int i = 0; i < r0; ++i) {
        double mnorm = m.row(i).cwiseAbs().maxCoeff();
        if (mnorm <= 1e-14 * global) {
            if (std::abs(b(i)) > tol_feas * std::max(global, 1.0))
                out.zero_row_inconsistent = true;
            continue;
        }
        kept.push_back(i);
    }
    out.m.resize(kept.size(), m.cols());
    out.b.resize(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        int i = kept[k];
        double s = std::max(m.row(i).cwiseAbs().maxCoeff(), std::abs(b(i)));
        out.m.row(k) = m.row(i) / s;
        out.b(k) = b(i) / s;
    }
    return out;
}

/// Dense two-phase primal simplex on a row-scaled copy of the problem.
///
/// Entering rule: Dantzig (most negative reduced cost, smallest index on
/// ties) while the objective makes progress, falling back to Bland (smallest
/// eligible index) after a run of degenerate pivots, which keeps the
/// anti-cycling guarantee without Bland's pivot counts. Leaving rule:
/// minimum ratio, ties broken by smallest basic index. Deterministic
/// throughout.
///
/// The tableau is refactorized from the current basis at a fixed cadence and
/// again whenever optimality is declared, so roundoff accumulated by pivot
/// updates cannot stand as a termination claim. Gramian-derived systems are
/// heavily rank-deficient and drift fast without this.
class SimplexTableau {
public:
    SimplexTableau(const StandardLP& lp, const SimplexOptions& opt) : opt_(opt) {
        const int r0 = static_cast<int>(lp.M.rows());
        cols_ = static_cast<int>(lp.M.cols());
        if (r0 < 1 || cols_ < 1) throw std::invalid_argument("simplex: empty program");
        if (lp.b.size() != r0) throw DimensionMismatch("simplex: M rows vs b mismatch");
        if (lp.c_obj && lp.c_obj->size() != cols_)
            throw DimensionMismatch("simplex: M cols vs c mismatch");

        ScaledRows sr = scale_rows(lp.M, lp.b, opt.tol_feas);
        zero_row_inconsistent_ = sr.zero_row_inconsistent;
        scaled_m_ = std::move(sr.m);
        scaled_b_ = std::move(sr.b);
        rows_ = static_cast<int>(scaled_m_.rows());
        full_m_ = scaled_m_;
        full_b_ = scaled_b_;
    }

    LPResult run(const std::optional<Eigen::VectorXd>& c_obj) {
        LPResult out;
        if (zero_row_inconsistent_) {
            out.status = LPStatus::Infeasible;
            return out;
        }
        if (rows_ == 0) {
            // No effective constraints: 0 is feasible; any positive objective
            // direction is an unbounded ray.
            out.solution = Eigen::VectorXd::Zero(cols_);
            if (c_obj && (c_obj->array() > opt_.tol_pivot).any()) {
                out.status = LPStatus::Unbounded;
                return out;
            }
            out.status = LPStatus::Optimal;
            return out;
        }

        buildPhase1();
        phase_ = 1;
        solveVerified(/*allow_artificial_entering=*/true);
        double phase1_obj = -tab_(rows_, tab_.cols() - 1);
        if (phase1_obj > opt_.tol_feas * std::max(1.0, static_cast<double>(rows_))) {
            out.status = LPStatus::Infeasible;
            return out;
        }
        dropArtificials();

        if (c_obj) {
            phase_ = 2;
            cost_ = -*c_obj; // maximize c^T x == minimize (-c)^T x
            priceOut();
            if (!solveVerified(/*allow_artificial_entering=*/false)) {
                out.status = LPStatus::Unbounded;
                out.solution = extractSolution();
                return out;
            }
        }

        out.status = LPStatus::Optimal;
        out.solution = extractSolution();
        refine(out.solution);
        out.objective = c_obj ? c_obj->dot(out.solution) : 0.0;
        out.residual = (full_m_ * out.solution - full_b_).cwiseAbs().maxCoeff();
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < cols_) out.basis.push_back(basis_[i]);
        std::sort(out.basis.begin(), out.basis.end());
        return out;
    }

private:
    void buildPhase1() {
        // Columns: [structural | artificial | rhs]; objective row last.
        tab_.setZero(rows_ + 1, cols_ + rows_ + 1);
        basis_.resize(rows_);
        basic_flag_.assign(cols_ + rows_, 0);
        sign_.resize(rows_);
        for (int i = 0; i < rows_; ++i) {
            sign_(i) = scaled_b_(i) < 0 ? -1.0 : 1.0;
            tab_.block(i, 0, 1, cols_) = sign_(i) * scaled_m_.row(i);
            tab_(i, cols_ + i) = 1.0;
            tab_(i, cols_ + rows_) = sign_(i) * scaled_b_(i);
            basis_[i] = cols_ + i;
            basic_flag_[cols_ + i] = 1;
        }
        cost_.setZero(cols_);
        priceOut();
    }

    /// Rebuilds the reduced-cost row for the current phase's cost vector
    /// (phase 1: unit cost on artificials; phase 2: cost_ on structurals).
    void priceOut() {
        tab_.row(rows_).setZero();
        for (int j = 0; j < cols_; ++j) tab_(rows_, j) = phase_ == 1 ? 0.0 : cost_(j);
        if (phase_ == 1)
            for (int j = cols_; j < cols_ + rows_; ++j) tab_(rows_, j) = 1.0;
        for (int i = 0; i < rows_; ++i) {
            double cb = basisCost(basis_[i]);
            if (cb != 0.0) tab_.row(rows_) -= cb * tab_.row(i);
        }
    }

    double basisCost(int j) const {
        if (phase_ == 1) return j >= cols_ ? 1.0 : 0.0;
        return j < cols_ ? cost_(j) : 0.0;
    }

    /// Recomputes the tableau rows exactly from the current basis: solves
    /// B Y = [signed A | signed b] and rebuilds the objective row.
    void refactorize(bool with_artificials) {
        Eigen::MatrixXd basis_cols(rows_, rows_);
        for (int i = 0; i < rows_; ++i) {
            int j = basis_[i];
            if (j < cols_)
                basis_cols.col(i) = sign_.asDiagonal() * scaled_m_.col(j);
            else
                basis_cols.col(i) = Eigen::VectorXd::Unit(rows_, j - cols_);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_cols);
        Eigen::MatrixXd rhs(rows_, cols_ + (with_artificials ? rows_ : 0) + 1);
        rhs.leftCols(cols_) = sign_.asDiagonal() * scaled_m_;
        if (with_artificials) rhs.block(0, cols_, rows_, rows_).setIdentity();
        rhs.col(rhs.cols() - 1) = sign_.asDiagonal() * scaled_b_;
        Eigen::MatrixXd sol = lu.solve(rhs);
        // basis variable order: row i of the solved system is the multiplier
        // of basis column i, i.e. the tableau row with basis_[i] basic.
        tab_.topLeftCorner(rows_, cols_) = sol.leftCols(cols_);
        if (with_artificials)
            tab_.block(0, cols_, rows_, rows_) = sol.block(0, cols_, rows_, rows_);
        tab_.block(0, tab_.cols() - 1, rows_, 1) = sol.col(sol.cols() - 1);
        priceOut();
    }

    /// Runs the pivot loop, refactorizes, and re-verifies the termination
    /// claim; repeats until a refactorized tableau confirms it. Returns
    /// false for (confirmed) unboundedness.
    bool solveVerified(bool allow_artificial_entering) {
        for (int round = 0; round < 24; ++round) {
            bool bounded = solveCurrent(allow_artificial_entering);
            refactorize(allow_artificial_entering);
            if (!bounded) {
                // Unboundedness seen on a possibly drifted tableau; trust it
                // only if the refreshed tableau still has an improving column
                // with no blocking row.
                int entering = chooseEntering(allow_artificial_entering, false);
                if (entering < 0) continue;
                if (chooseLeaving(entering) < 0) return false;
                continue;
            }
            if (chooseEntering(allow_artificial_entering, false) < 0) return true;
        }
        throw std::runtime_error("simplex: refactorization did not stabilize");
    }

    int chooseEntering(bool allow_artificial_entering, bool bland) const {
        const int ncols = allow_artificial_entering ? cols_ + rows_ : cols_;
        int entering = -1;
        double most_negative = -opt_.tol_pivot;
        for (int j = 0; j < ncols; ++j) {
            double d = tab_(rows_, j);
            if (d >= most_negative || basic_flag_[j]) continue;
            entering = j;
            if (bland) break;
            most_negative = d;
        }
        return entering;
    }

    int chooseLeaving(int entering) const {
        int leave_row = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows_; ++i) {
            double a = tab_(i, entering);
            if (a <= opt_.tol_pivot) continue;
            double ratio = tab_(i, tab_.cols() - 1) / a;
            if (leave_row < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[leave_row])) {
                leave_row = i;
                best_ratio = ratio;
            }
        }
        return leave_row;
    }

    /// Pivot iterations until the (possibly drifted) tableau reports optimal
    /// (true) or unbounded (false); the caller re-verifies after a refactor.
    bool solveCurrent(bool allow_artificial_entering) {
        const long max_iters = 20000L * (rows_ + cols_) + 10000L;
        const int stall_limit = 4 * (rows_ + 2);
        const long refactor_period = 256;
        int stalled = 0;
        for (long iter = 0; iter < max_iters; ++iter) {
            if (iter > 0 && iter % refactor_period == 0)
                refactorize(allow_artificial_entering);
            int entering = chooseEntering(allow_artificial_entering, stalled > stall_limit);
            if (entering < 0) return true;
            int leave_row = chooseLeaving(entering);
            if (leave_row < 0) return false;
            double obj_before = tab_(rows_, tab_.cols() - 1);
            pivot(leave_row, entering);
            stalled = tab_(rows_, tab_.cols() - 1) != obj_before ? 0 : stalled + 1;
        }
        throw std::runtime_error("simplex: iteration budget exceeded");
    }

    void pivot(int p, int q) {
        tab_.row(p) /= tab_(p, q);
        for (int i = 0; i <= rows_; ++i) {
            if (i == p) continue;
            double f = tab_(i, q);
            if (f != 0.0) tab_.row(i) -= f * tab_.row(p);
        }
        basic_flag_[basis_[p]] = 0;
        basic_flag_[q] = 1;
        basis_[p] = q;
    }

    /// After phase 1: pivot basic artificials out where a structural column
    /// is available; rows that cannot be freed are redundant and removed.
    void dropArtificials() {
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) continue;
            for (int j = 0; j < cols_; ++j)
                if (!basic_flag_[j] && std::abs(tab_(i, j)) > opt_.tol_pivot) {
                    pivot(i, j);
                    break;
                }
        }
        std::vector<int> keep;
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < cols_) keep.push_back(i);
        if (static_cast<int>(keep.size()) != rows_) {
            const int nr = static_cast<int>(keep.size());
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
                nt(nr + 1, tab_.cols());
            Eigen::MatrixXd nm(nr, cols_);
            Eigen::VectorXd nb(nr), nsign(nr);
            std::vector<int> nbasis(nr);
            for (int k = 0; k < nr; ++k) {
                nt.row(k) = tab_.row(keep[k]);
                nm.row(k) = scaled_m_.row(keep[k]);
                nb(k) = scaled_b_(keep[k]);
                nsign(k) = sign_(keep[k]);
                nbasis[k] = basis_[keep[k]];
            }
            nt.row(nr) = tab_.row(rows_);
            tab_ = std::move(nt);
            scaled_m_ = std::move(nm);
            scaled_b_ = std::move(nb);
            sign_ = std::move(nsign);
            basis_ = std::move(nbasis);
            rows_ = nr;
            basic_flag_.assign(cols_ + rows_, 0);
            for (int i = 0; i < rows_; ++i) basic_flag_[basis_[i]] = 1;
        }
    }

    Eigen::VectorXd extractSolution() const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < cols_) x(basis_[i]) = tab_(i, tab_.cols() - 1);
        return x;
    }

    /// Final clean solve of the basis system against the scaled data.
    void refine(Eigen::VectorXd& x) const {
        if (rows_ == 0) return;
        std::vector<int> bcols;
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < cols_) bcols.push_back(basis_[i]);
        if (bcols.empty()) return;
        Eigen::MatrixXd mb(rows_, bcols.size());
        for (std::size_t k = 0; k < bcols.size(); ++k) mb.col(k) = scaled_m_.col(bcols[k]);
        Eigen::VectorXd xb = mb.colPivHouseholderQr().solve(scaled_b_);
        if (xb.minCoeff() < -1e-7) return; // keep tableau values on a bad solve
        Eigen::VectorXd refined = Eigen::VectorXd::Zero(cols_);
        for (std::size_t k = 0; k < bcols.size(); ++k) refined(bcols[k]) = xb(k);
        double res_new = (scaled_m_ * refined - scaled_b_).cwiseAbs().maxCoeff();
        double res_old = (scaled_m_ * x - scaled_b_).cwiseAbs().maxCoeff();
        if (res_new <= res_old) x = refined;
    }

    SimplexOptions opt_;
    int rows_ = 0, cols_ = 0;
    int phase_ = 1;
    bool zero_row_inconsistent_ = false;
    Eigen::VectorXd cost_;     // phase-2 minimization cost over structurals
    Eigen::MatrixXd scaled_m_; // working rows (redundant rows removed)
    Eigen::VectorXd scaled_b_;
    Eigen::VectorXd sign_;     // row flips that made the phase-1 rhs nonnegative
    Eigen::MatrixXd full_m_;   // all scaled rows, for the residual report
    Eigen::VectorXd full_b_;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tab_;
    std::vector<int> basis_;
    std::vector<char> basic_flag_; // over structural + artificial columns
};

} // namespace detail

/// Two-phase primal simplex. Infeasible/Unbounded are reported as statuses,
/// not exceptions. Deterministic: identical inputs give identical bases.
inline LPResult simplex(const StandardLP& lp, const SimplexOptions& opt = {}) {
    detail::SimplexTableau tableau(lp, opt);
    return tableau.run(lp.c_obj);
}

struct NNLSOptions {
    double tol_feas = 1e-9;  // per-row feasibility threshold on the scaled system
    long max_outer = 0;      // 0 = 6 * cols + 64
};

struct NNLSResult {
    Eigen::VectorXd solution;   // >= 0 elementwise
    double residual_l2 = 0.0;   // on the scaled kept rows
    double residual_inf = 0.0;
    std::vector<int> support;   // passive set, ascending; columns independent
    bool feasible = false;      // residual_inf within tol_feas and no 0 = b row
};

/// Nonnegative least squares min ||M s - b||_2 s.t. s >= 0 by the
/// Lawson-Hanson active-set method, on the row-scaled system. Every pass
/// re-solves the passive-set least-squares problem from the raw data with a
/// fresh orthogonal factorization, so there is no pivot-update drift: this
/// is what makes it the reliable feasibility engine for the Gramian-derived
/// systems, whose unique solutions sit at degenerate tangency points that
/// tableau methods cannot resolve in double precision. The passive set it
/// returns has independent columns, i.e. the solution is basic.
///
/// Deterministic: entering index is the largest dual, smallest index on
/// ties. warm_support seeds the passive set (used by the certificate's
/// repeated probes).
inline NNLSResult nnls(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                       const NNLSOptions& opt = {},
                       const std::vector<int>& warm_support = {}) {
    if (m.rows() != b.size()) throw DimensionMismatch("nnls: M rows vs b mismatch");
    const int c = static_cast<int>(m.cols());
    detail::ScaledRows sr = detail::scale_rows(m, b, opt.tol_feas);
    const int r = static_cast<int>(sr.m.rows());

    NNLSResult out;
    out.solution = Eigen::VectorXd::Zero(c);
    if (r == 0) {
        out.feasible = !sr.zero_row_inconsistent;
        return out;
    }

    std::vector<char> passive(c, 0);
    for (int j : warm_support)
        if (j >= 0 && j < c) passive[j] = 1;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(c);
    auto ls_on_passive = [&](std::vector<int>& cols) -> Eigen::VectorXd {
        cols.clear();
        for (int j = 0; j < c; ++j)
            if (passive[j]) cols.push_back(j);
        if (cols.empty()) return Eigen::VectorXd();
        Eigen::MatrixXd ap(r, cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) ap.col(k) = sr.m.col(cols[k]);
        return ap.colPivHouseholderQr().solve(sr.b);
    };

    const long max_outer = opt.max_outer > 0 ? opt.max_outer : 6L * c + 64;
    const double grad_tol = 1e-12 * std::max(1.0, (sr.m.transpose() * sr.b).cwiseAbs().maxCoeff());
    std::vector<int> cols;
    long ls_calls = 0;
    bool warm_pending = !warm_support.empty();
    long outer = 0;
    for (outer = 0; outer < max_outer; ++outer) {
        if (getenv("NETRECON_NNLS_DEBUG") && outer % 50 == 0) {
            int np = 0; for (int j = 0; j < c; ++j) np += passive[j];
            fprintf(stderr, "[nnls] outer=%ld passive=%d ls_calls=%ld res=%.3e\n",
                    outer, np, ls_calls, (sr.m * x - sr.b).norm());
        }
        if (!warm_pending) {
            Eigen::VectorXd w = sr.m.transpose() * (sr.b - sr.m * x);
            int enter = -1;
            double best = grad_tol;
            for (int j = 0; j < c; ++j)
                if (!passive[j] && w(j) > best) {
                    best = w(j);
                    enter = j;
                }
            if (enter < 0) break;
            passive[enter] = 1;
        }
        warm_pending = false;

        // Inner loop: restore feasibility of the passive least-squares point.
        for (int inner = 0; inner <= c + 1; ++inner) {
            ++ls_calls;
            Eigen::VectorXd z = ls_on_passive(cols);
            if (cols.empty()) break;
            double zmin = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) zmin = std::min(zmin, z(k));
            if (zmin > 0.0) {
                x.setZero();
                for (std::size_t k = 0; k < cols.size(); ++k) x(cols[k]) = z(k);
                break;
            }
            double alpha = 1.0;
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (z(k) <= 0.0) {
                    double xj = x(cols[k]);
                    if (xj - z(k) > 0) alpha = std::min(alpha, xj / (xj - z(k)));
                }
            for (std::size_t k = 0; k < cols.size(); ++k) {
                int j = cols[k];
                x(j) += alpha * (z(k) - x(j));
                if (x(j) <= 1e-14) {
                    x(j) = 0.0;
                    passive[j] = 0;
                }
            }
        }
    }

    out.solution = x;
    Eigen::VectorXd res = sr.m * x - sr.b;
    out.residual_l2 = res.norm();
    out.residual_inf = res.cwiseAbs().maxCoeff();
    for (int j = 0; j < c; ++j)
        if (passive[j]) out.support.push_back(j);
    out.feasible = !sr.zero_row_inconsistent && out.residual_inf <= opt.tol_feas;
    return out;
}

struct CertificateOptions {
    double tol_zero = 1e-7;       // entries of sbar at or below this count as zero
    double tol_obj = 1e-3;        // auxiliary optimum above this refutes uniqueness
    double residual_slack = 1e-9; // extra residual a probe may spend vs. the base point
    NNLSOptions nnls;
};

/// Uniqueness test for a basic feasible solution sbar of {M s = b, s >= 0},
/// via the auxiliary program max c^T s over the same region with c the
/// indicator of sbar's zero entries: sbar is the unique feasible point iff
/// that optimum is zero. A non-basic sbar (dependent support columns) is
/// never unique and returns false without solving.
///
/// The auxiliary optimum is not computed exactly; the verdict only needs the
/// comparison against tol_obj, which one nonnegative-least-squares probe of
/// the system augmented with the row c^T s = tol_obj decides: reachable
/// within residual_slack of the base residual means a second explanation
/// with that much mass on sbar's zero set exists (it is then written to
/// *witness). tol_obj separates the reachable-γ fuzz of a unique-but-
/// ill-conditioned instance (measured around 1e-4 at the default slack on
/// 30-node Gramian systems) from genuine alternative solutions, whose gap
/// sits at the data scale.
inline bool uniqueness_certificate(const StandardLP& lp, const Eigen::VectorXd& sbar,
                                   const CertificateOptions& opt = {},
                                   Eigen::VectorXd* witness = nullptr) {
    if (sbar.size() != lp.M.cols())
        throw DimensionMismatch("uniqueness_certificate: sbar dimension mismatch");

    std::vector<int> support;
    for (int j = 0; j < sbar.size(); ++j)
        if (sbar(j) > opt.tol_zero) support.push_back(j);
    if (!support.empty()) {
        Eigen::MatrixXd ms(lp.M.rows(), support.size());
        for (std::size_t k = 0; k < support.size(); ++k) ms.col(k) = lp.M.col(support[k]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ms);
        if (qr.rank() < static_cast<long>(support.size())) return false;
    }

    Eigen::VectorXd c = Eigen::VectorXd::Zero(sbar.size());
    int zeros = 0;
    for (int j = 0; j < sbar.size(); ++j)
        if (sbar(j) <= opt.tol_zero) {
            c(j) = 1.0;
            ++zeros;
        }
    if (zeros == 0) return true; // empty objective: the auxiliary optimum is 0

    detail::ScaledRows sr = detail::scale_rows(lp.M, lp.b, opt.nnls.tol_feas);
    if (sr.zero_row_inconsistent) return false; // cannot certify an inconsistent system
    const double base = (sr.m * sbar - sr.b).norm();

    Eigen::MatrixXd aug(sr.m.rows() + 1, lp.M.cols());
    aug.topRows(sr.m.rows()) = sr.m;
    aug.row(sr.m.rows()) = c.transpose();
    Eigen::VectorXd aug_b(sr.b.size() + 1);
    aug_b.head(sr.b.size()) = sr.b;
    aug_b(sr.b.size()) = opt.tol_obj;

    NNLSResult probe = nnls(aug, aug_b, opt.nnls, support);
    if (probe.residual_l2 > base + opt.residual_slack) return true;
    if (witness) *witness = probe.solution;
    return false;
}

struct BinaryOptions {
    int max_variables = 40;  // desk-scale guard
    double tol = 1e-9;       // row-match tolerance on the scaled system
    int relax_min_free = 10; // LP-relaxation pruning kicks in above this many free vars
    SimplexOptions simplex;
};

namespace detail {

class BinarySearch {
public:
    BinarySearch(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const BinaryOptions& opt)
        : opt_(opt), cols_(static_cast<int>(m.cols())) {
        ScaledRows sr = scale_rows(m, b, opt.tol);
        infeasible_ = sr.zero_row_inconsistent;
        m_ = std::move(sr.m);
        b_ = std::move(sr.b);
    }

    std::vector<Eigen::VectorXd> run() {
        if (infeasible_) return {};
        assign_.assign(cols_, 0);
        recurse(0);
        return found_;
    }

private:
    void recurse(int depth) {
        if (found_.size() >= 2) return;
        if (depth == cols_) {
            Eigen::VectorXd s(cols_);
            for (int j = 0; j < cols_; ++j) s(j) = assign_[j];
            if (m_.rows() == 0 || (m_ * s - b_).cwiseAbs().maxCoeff() <= opt_.tol)
                found_.push_back(s);
            return;
        }
        if (!rangeFeasible(depth)) return;
        if (cols_ - depth >= opt_.relax_min_free && !relaxFeasible(depth)) return;
        assign_[depth] = 0;
        recurse(depth + 1);
        assign_[depth] = 1;
        recurse(depth + 1);
        assign_[depth] = 0;
    }

    /// Per-row reachability: with the prefix fixed, the free variables move
    /// each row only within [lo, hi]; prune when b falls outside.
    bool rangeFeasible(int depth) const {
        for (int i = 0; i < m_.rows(); ++i) {
            double fixed = 0.0, lo = 0.0, hi = 0.0;
            for (int j = 0; j < depth; ++j) fixed += m_(i, j) * assign_[j];
            for (int j = depth; j < cols_; ++j) {
                double a = m_(i, j);
                if (a > 0) hi += a;
                else lo += a;
            }
            if (b_(i) < fixed + lo - opt_.tol || b_(i) > fixed + hi + opt_.tol) return false;
        }
        return true;
    }

    /// LP relaxation of the remaining subproblem, {M_f s' = b', 0 <= s' <= 1},
    /// in equality form with one slack per free variable.
    bool relaxFeasible(int depth) const {
        const int f = cols_ - depth;
        const int r = static_cast<int>(m_.rows());
        if (r == 0) return true;
        Eigen::VectorXd bp = b_;
        for (int j = 0; j < depth; ++j)
            if (assign_[j]) bp -= m_.col(j);
        StandardLP relax;
        relax.M = Eigen::MatrixXd::Zero(r + f, 2 * f);
        relax.b = Eigen::VectorXd::Zero(r + f);
        relax.M.block(0, 0, r, f) = m_.rightCols(f);
        relax.b.head(r) = bp;
        for (int j = 0; j < f; ++j) {
            relax.M(r + j, j) = 1.0;
            relax.M(r + j, f + j) = 1.0;
            relax.b(r + j) = 1.0;
        }
        return simplex(relax, opt_.simplex).status != LPStatus::Infeasible;
    }

    BinaryOptions opt_;
    int cols_ = 0;
    bool infeasible_ = false;
    Eigen::MatrixXd m_;
    Eigen::VectorXd b_;
    std::vector<int> assign_;
    std::vector<Eigen::VectorXd> found_;
};

} // namespace detail

/// All-binary feasibility M s = b, s in {0,1}^c, by depth-first search with
/// per-row range pruning and LP-relaxation pruning. Returns the first
/// solutions in lexicographic order, at most two: none = infeasible, one =
/// unique, two = a non-uniqueness witness pair.
inline std::vector<Eigen::VectorXd> binary_solve(const Eigen::MatrixXd& m,
                                                 const Eigen::VectorXd& b,
                                                 const BinaryOptions& opt = {}) {
    if (m.rows() != b.size()) throw DimensionMismatch("binary_solve: M rows vs b mismatch");
    if (m.cols() > opt.max_variables)
        throw VariableBudgetExceeded("binary_solve: " + std::to_string(m.cols()) +
                                     " variables exceeds the budget of " +
                                     std::to_string(opt.max_variables));
    detail::BinarySearch search(m, b, opt);
    return search.run();
}

} // namespace netrecon
