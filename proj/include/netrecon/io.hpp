#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netrecon/dynsim.hpp"
#include "netrecon/gramian.hpp"
#include "netrecon/lyap.hpp"
#include "netrecon/netgraph.hpp"
#include "netrecon/reconstruct.hpp"

namespace netrecon {

using nlohmann::json;

// ---- matrix: {"n": int, "rows": [[...], ...]} with full symmetric storage

inline json matrix_to_json(const SymMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"n", m.size()}, {"rows", std::move(rows)}};
}

/// Reader validates squareness and symmetry within 1e-12 relative to the
/// largest entry magnitude, then stores the averaged triangle.
inline SymMatrix matrix_from_json(const json& j) {
    int n = j.at("n").get<int>();
    if (n < 1) throw std::runtime_error("matrix json: n must be >= 1");
    const json& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != n) throw std::runtime_error("matrix json: row count != n");
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::runtime_error("matrix json: column count != n");
        for (int jj = 0; jj < n; ++jj) a(i, jj) = rows[i][jj].get<double>();
    }
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::runtime_error("matrix json: matrix is not symmetric within 1e-12 relative");
    return SymMatrix::from_dense(a);
}

// ---- graph: {"n": int, "edges": [[i, j], ...]}, 1-based, i < j

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges) edges.push_back(json::array({e.first + 1, e.second + 1}));
    return json{{"n", g.n}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) {
    Graph g(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) {
        if (e.size() != 2) throw std::runtime_error("graph json: edge must be a pair");
        int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 1 || b < 1 || a > g.n || b > g.n || a >= b)
            throw std::runtime_error("graph json: edges must satisfy 1 <= i < j <= n");
        if (g.has_edge(a - 1, b - 1)) throw std::runtime_error("graph json: duplicate edge");
        g.add_edge(a - 1, b - 1);
    }
    return g;
}

// ---- vector: {"n": int, "values": [...]}

inline json vector_to_json(const Eigen::VectorXd& v) {
    json vals = json::array();
    for (long i = 0; i < v.size(); ++i) vals.push_back(v(i));
    return json{{"n", v.size()}, {"values", std::move(vals)}};
}

inline Eigen::VectorXd vector_from_json(const json& j) {
    long n = j.at("n").get<long>();
    const json& vals = j.at("values");
    if (static_cast<long>(vals.size()) != n)
        throw std::runtime_error("vector json: length mismatch");
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v(i) = vals[i].get<double>();
    return v;
}

// ---- reconstruction outcome

inline json outcome_to_json(const ReconstructionOutcome& o) {
    json j{{"status", to_string(o.status)},
           {"rank_P", o.diagnostics.rank_P},
           {"kernel_dim", o.diagnostics.kernel_dim}};
    if (o.diagnostics.residual) j["residual"] = *o.diagnostics.residual;
    if (o.certificate) j["certificate"] = to_string(*o.certificate);
    if (o.X_hat) j["X_hat"] = matrix_to_json(*o.X_hat);
    if (o.G_hat) j["G_hat"] = graph_to_json(*o.G_hat);
    if (o.second_witness) j["second_witness"] = matrix_to_json(*o.second_witness);
    return j;
}

inline json gram_to_json(const GramPair& gp) {
    return json{{"P", matrix_to_json(gp.P)},
                {"Q", matrix_to_json(gp.Q)},
                {"horizon", gp.horizon},
                {"x0", vector_to_json(gp.x0)},
                {"xT", vector_to_json(gp.xT)}};
}

inline json solution_set_to_json(const AffineSolutionSet& s) {
    json basis = json::array();
    for (const SymMatrix& b : s.basis) basis.push_back(matrix_to_json(b));
    return json{{"particular", matrix_to_json(s.particular)},
                {"basis", std::move(basis)},
                {"kernel_dim_P", s.kernel_dim_P}};
}

// ---- trajectory CSV: header t,x1,...,xn; %.17g so doubles round-trip exactly

inline std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t";
    for (int i = 1; i <= traj.dim(); ++i) out += ",x" + std::to_string(i);
    out += "\n";
    char buf[32];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[k]);
        out += buf;
        for (int i = 0; i < traj.dim(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", traj.states[k](i));
            out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

inline Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string tok;
        while (std::getline(h, tok, ',')) header.push_back(tok);
    }
    if (header.size() < 2 || header[0] != "t")
        throw std::runtime_error("trajectory csv: header must be t,x1,...,xn");
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i] != "x" + std::to_string(i))
            throw std::runtime_error("trajectory csv: header must be t,x1,...,xn");
    const int n = static_cast<int>(header.size()) - 1;

    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(row, tok, ',')) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("trajectory csv: bad number '" + tok + "'");
            }
            if (pos != tok.size()) throw std::runtime_error("trajectory csv: bad number '" + tok + "'");
            vals.push_back(v);
        }
        if (static_cast<int>(vals.size()) != n + 1)
            throw std::runtime_error("trajectory csv: wrong column count in a data row");
        times.push_back(vals[0]);
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = vals[i + 1];
        states.push_back(std::move(x));
    }
    try {
        return Trajectory(std::move(times), std::move(states));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("trajectory csv: ") + e.what());
    }
}

// ---- files (atomic: temp in the same directory, then rename)

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

inline json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error("json parse error in " + path.string() + ": " + e.what());
    }
}

inline void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    atomic_write(path, trajectory_to_csv(traj));
}

inline Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    return trajectory_from_csv(read_file(path));
}

} // namespace netrecon
