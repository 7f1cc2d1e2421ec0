#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/errors.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

/// Unordered vertex pair stored as (i, j) with i < j, 0-based.
/// All file formats and printed reports are 1-based; the offset is applied
/// at the I/O boundary only.
using Edge = std::pair<int, int>;
using EdgeWeights = std::map<Edge, double>;

inline Edge make_edge(int i, int j) {
    if (i == j) throw std::invalid_argument("edge endpoints must differ (no self-loops)");
    return i < j ? Edge{i, j} : Edge{j, i};
}

/// Simple undirected graph: vertex count plus a sorted edge set.
struct Graph {
    int n = 0;
    std::set<Edge> edges;

    Graph() = default;
    explicit Graph(int vertex_count) : n(vertex_count) {
        if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
    }

    void add_edge(int i, int j) {
        Edge e = make_edge(i, j);
        if (e.first < 0 || e.second >= n)
            throw std::invalid_argument("edge endpoint out of range");
        edges.insert(e);
    }

    bool has_edge(int i, int j) const {
        if (i == j) return false;
        return edges.count(make_edge(i, j)) > 0;
    }

    bool operator==(const Graph& other) const = default;
};

/// Dense real symmetric matrix. Storage holds the lower triangle only, so
/// symmetry is exact by construction; reads mirror across the diagonal.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), tri_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
        if (n < 1) throw std::invalid_argument("SymMatrix dimension must be positive");
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    /// Builds from a dense matrix, averaging the two triangles.
    static SymMatrix from_dense(const Eigen::MatrixXd& a) {
        if (a.rows() != a.cols()) throw DimensionMismatch("from_dense: matrix not square");
        SymMatrix m(static_cast<int>(a.rows()));
        for (int i = 0; i < m.n_; ++i)
            for (int j = 0; j <= i; ++j)
                m.tri_[idx(i, j)] = 0.5 * (a(i, j) + a(j, i));
        return m;
    }

    int size() const { return n_; }

    double operator()(int i, int j) const {
        return i >= j ? tri_[idx(i, j)] : tri_[idx(j, i)];
    }

    /// Sets entry (i, j) and its mirror.
    void set(int i, int j, double v) {
        if (i >= j) tri_[idx(i, j)] = v;
        else tri_[idx(j, i)] = v;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd a(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j <= i; ++j)
                a(i, j) = a(j, i) = tri_[idx(i, j)];
        return a;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j <= i; ++j) {
                double v = tri_[idx(i, j)];
                acc += (i == j ? 1.0 : 2.0) * v * v;
            }
        return std::sqrt(acc);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : tri_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    static std::size_t idx(int i, int j) {
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }

    int n_ = 0;
    std::vector<double> tri_;
};

/// Admissible state-matrix families. Laplacian variants describe the matrix
/// L itself; consensus state matrices are -L and callers flip the sign before
/// membership tests.
enum class MatrixClass {
    Qualitative,
    Laplacian,
    Adjacency,
    UnweightedLaplacian,
    UnweightedAdjacency,
};

inline std::string to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::Qualitative: return "qualitative";
        case MatrixClass::Laplacian: return "laplacian";
        case MatrixClass::Adjacency: return "adjacency";
        case MatrixClass::UnweightedLaplacian: return "unweighted-laplacian";
        case MatrixClass::UnweightedAdjacency: return "unweighted-adjacency";
    }
    throw std::logic_error("unreachable");
}

inline MatrixClass matrix_class_from_string(const std::string& s) {
    if (s == "qualitative") return MatrixClass::Qualitative;
    if (s == "laplacian") return MatrixClass::Laplacian;
    if (s == "adjacency") return MatrixClass::Adjacency;
    if (s == "unweighted-laplacian") return MatrixClass::UnweightedLaplacian;
    if (s == "unweighted-adjacency") return MatrixClass::UnweightedAdjacency;
    throw std::invalid_argument("unknown matrix class: " + s);
}

/// Row sum evaluated off-diagonals first (ascending j), diagonal last.
/// Laplacian construction below stores the diagonal as the same ascending
/// floating-point sum of weights, so this evaluation returns exactly 0.0
/// for constructed Laplacians.
inline double row_sum(const SymMatrix& x, int i) {
    double acc = 0.0;
    for (int j = 0; j < x.size(); ++j)
        if (j != i) acc += x(i, j);
    return acc + x(i, i);
}

/// Support graph of X: edge (i, j) iff |X_ij| > edge_threshold, diagonal ignored.
inline Graph graph_from_matrix(const SymMatrix& x, double edge_threshold) {
    if (edge_threshold < 0) throw std::invalid_argument("edge_threshold must be >= 0");
    Graph g(x.size());
    for (int i = 0; i < x.size(); ++i)
        for (int j = i + 1; j < x.size(); ++j)
            if (std::abs(x(i, j)) > edge_threshold) g.add_edge(i, j);
    return g;
}

/// Membership of X in the given class over graph G. One tolerance governs
/// both the sign/zero/row-sum constraints and the off-diagonal support match
/// (|X_ij| > tol iff (i,j) is an edge). For the Laplacian variants the test
/// applies to L itself; to test a consensus state matrix X = -L, pass -X.
inline bool is_member(const SymMatrix& x, const Graph& g, MatrixClass c, double tol) {
    if (x.size() != g.n) throw DimensionMismatch("is_member: matrix/graph dimension mismatch");
    if (tol < 0) throw std::invalid_argument("tol must be >= 0");
    const int n = x.size();

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool support = std::abs(x(i, j)) > tol;
            if (support != g.has_edge(i, j)) return false;
        }

    auto near = [tol](double v, double target) { return std::abs(v - target) <= tol; };

    switch (c) {
        case MatrixClass::Qualitative:
            return true;
        case MatrixClass::Laplacian:
        case MatrixClass::UnweightedLaplacian:
            for (int i = 0; i < n; ++i) {
                if (std::abs(row_sum(x, i)) > tol) return false;
                for (int j = 0; j < n; ++j)
                    if (j != i && x(i, j) > tol) return false;
            }
            if (c == MatrixClass::UnweightedLaplacian)
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (!near(x(i, j), 0.0) && !near(x(i, j), -1.0)) return false;
            return true;
        case MatrixClass::Adjacency:
        case MatrixClass::UnweightedAdjacency:
            for (int i = 0; i < n; ++i) {
                if (std::abs(x(i, i)) > tol) return false;
                for (int j = 0; j < n; ++j)
                    if (j != i && x(i, j) < -tol) return false;
            }
            if (c == MatrixClass::UnweightedAdjacency)
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (!near(x(i, j), 0.0) && !near(x(i, j), 1.0)) return false;
            return true;
    }
    throw std::logic_error("unreachable");
}

namespace detail {
inline void check_weight_keys(const Graph& g, const EdgeWeights& w) {
    for (const Edge& e : g.edges)
        if (!w.count(e)) throw std::invalid_argument("missing weight for an edge");
    for (const auto& [e, wt] : w) {
        if (!g.edges.count(e)) throw std::invalid_argument("weight given for a non-edge");
        if (!(wt > 0)) throw std::invalid_argument("weights must be positive");
    }
}
} // namespace detail

/// Weighted Laplacian of G. The diagonal is the ascending-order sum of the
/// incident weights, so row sums vanish exactly under row_sum().
inline SymMatrix laplacian_of(const Graph& g, const EdgeWeights& weights) {
    detail::check_weight_keys(g, weights);
    SymMatrix l(g.n);
    for (const auto& [e, w] : weights) {
        l.set(e.first, e.second, -w);
    }
    for (int i = 0; i < g.n; ++i) {
        double deg = 0.0;
        for (int j = 0; j < g.n; ++j)
            if (j != i && g.has_edge(i, j)) deg += -l(i, j);
        l.set(i, i, deg);
    }
    return l;
}

/// Weighted adjacency of G: A_ij = w(i,j) on edges, zero elsewhere.
inline SymMatrix adjacency_of(const Graph& g, const EdgeWeights& weights) {
    detail::check_weight_keys(g, weights);
    SymMatrix a(g.n);
    for (const auto& [e, w] : weights) a.set(e.first, e.second, w);
    return a;
}

inline EdgeWeights unit_weights(const Graph& g) {
    EdgeWeights w;
    for (const Edge& e : g.edges) w[e] = 1.0;
    return w;
}

struct GeometricGraph {
    Graph graph;
    std::vector<std::array<double, 2>> positions;
};

/// Geometric link model: n points uniform i.i.d. in [0, side]^2, edge iff
/// the Euclidean distance is strictly below radius. Deterministic per seed:
/// point i consumes two draws (x then y), i ascending.
inline GeometricGraph random_geometric_graph(int n, double side, double radius,
                                             std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(side > 0)) throw std::invalid_argument("side must be > 0");
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    Rng rng(seed);
    GeometricGraph out;
    out.graph = Graph(n);
    out.positions.reserve(n);
    for (int i = 0; i < n; ++i) {
        double x = rng.uniform(0.0, side);
        double y = rng.uniform(0.0, side);
        out.positions.push_back({x, y});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dx = out.positions[i][0] - out.positions[j][0];
            double dy = out.positions[i][1] - out.positions[j][1];
            if (std::sqrt(dx * dx + dy * dy) < radius) out.graph.add_edge(i, j);
        }
    return out;
}

/// Random member of the class over G. Weighted variants draw edge weights
/// uniform in (0, 1); unweighted variants use weight 1. The qualitative
/// variant draws off-diagonals uniform in [-1, 1] outside the dead zone
/// (-0.05, 0.05) (rejection sampling) and diagonals uniform in [-1, 1].
/// Draw order: edges in sorted order, then diagonal entries ascending.
inline SymMatrix random_in_class(const Graph& g, MatrixClass c, std::uint64_t seed) {
    Rng rng(seed);
    switch (c) {
        case MatrixClass::Laplacian: {
            EdgeWeights w;
            for (const Edge& e : g.edges) w[e] = rng.positive_unit();
            return laplacian_of(g, w);
        }
        case MatrixClass::Adjacency: {
            EdgeWeights w;
            for (const Edge& e : g.edges) w[e] = rng.positive_unit();
            return adjacency_of(g, w);
        }
        case MatrixClass::UnweightedLaplacian:
            return laplacian_of(g, unit_weights(g));
        case MatrixClass::UnweightedAdjacency:
            return adjacency_of(g, unit_weights(g));
        case MatrixClass::Qualitative: {
            SymMatrix x(g.n);
            for (const Edge& e : g.edges) {
                double v = rng.uniform(-1.0, 1.0);
                while (std::abs(v) < 0.05) v = rng.uniform(-1.0, 1.0);
                x.set(e.first, e.second, v);
            }
            for (int i = 0; i < g.n; ++i) x.set(i, i, rng.uniform(-1.0, 1.0));
            return x;
        }
    }
    throw std::logic_error("unreachable");
}

/// Named test topologies (1-based names in reports; 0-based internally).
inline Graph named_graph(const std::string& name, int n) {
    Graph g(n);
    if (name == "star") {
        for (int j = 1; j < n; ++j) g.add_edge(0, j);
    } else if (name == "path") {
        for (int j = 0; j + 1 < n; ++j) g.add_edge(j, j + 1);
    } else if (name == "ring") {
        if (n < 3) throw std::invalid_argument("ring needs n >= 3");
        for (int j = 0; j + 1 < n; ++j) g.add_edge(j, j + 1);
        g.add_edge(0, n - 1);
    } else {
        throw std::invalid_argument("unknown named graph: " + name);
    }
    return g;
}

} // namespace netrecon
