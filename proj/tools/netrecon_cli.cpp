// Command-line front end: generate networks, simulate consensus-type
// dynamics, reconstruct topologies from trajectories, check candidate
// explanations, and run the two bundled demos.
//
// Exit codes for reconstruct/check: 0 unique/explains, 2 non-unique/does
// not explain, 3 infeasible, 1 malformed input or internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "netrecon/netrecon.hpp"

namespace fs = std::filesystem;
using namespace netrecon;

namespace {

struct ToleranceFlags {
    double eps_rank = 1e-8;
    double tol_accept = 1e-6;
    double edge_threshold = 1e-3;

    void attach(CLI::App* cmd) {
        cmd->add_option("--eps-rank", eps_rank, "relative rank tolerance for the Gramian");
        cmd->add_option("--tol-accept", tol_accept, "relative residual acceptance gate");
        cmd->add_option("--edge-threshold", edge_threshold,
                        "|entry| above this becomes an edge of the recovered graph");
    }

    ReconstructOptions options() const {
        ReconstructOptions opt;
        opt.eps_rank = eps_rank;
        opt.tol_accept = tol_accept;
        opt.edge_threshold = edge_threshold;
        return opt;
    }
};

int default_steps(double t_final) {
    int k = static_cast<int>(std::ceil(500.0 * t_final)) * 2;
    return std::max(k, 2);
}

void print_matrix(const SymMatrix& m, const std::string& label) {
    std::printf("%s =\n", label.c_str());
    for (int i = 0; i < m.size(); ++i) {
        std::printf("  ");
        for (int j = 0; j < m.size(); ++j) std::printf("% 10.4f", m(i, j));
        std::printf("\n");
    }
}

void print_outcome_summary(const ReconstructionOutcome& o) {
    std::printf("status: %s\n", to_string(o.status).c_str());
    std::printf("rank P = %d, kernel dim = %d\n", o.diagnostics.rank_P,
                o.diagnostics.kernel_dim);
    if (o.certificate) std::printf("certificate: %s\n", to_string(*o.certificate).c_str());
    if (o.diagnostics.residual)
        std::printf("residual: %.3e\n", *o.diagnostics.residual);
}

int outcome_exit_code(OutcomeStatus s) {
    switch (s) {
        case OutcomeStatus::Unique: return 0;
        case OutcomeStatus::NonUnique: return 2;
        case OutcomeStatus::Infeasible: return 3;
    }
    return 1;
}

int run_generate(const std::string& cls, int n, const std::string& graph_named,
                 bool graph_geometric, double side, double radius,
                 const std::string& graph_file, std::uint64_t seed,
                 const std::vector<double>& x0_uniform, const std::string& x0_file,
                 const fs::path& out_matrix, const fs::path& out_graph,
                 const fs::path& out_x0) {
    MatrixClass c = matrix_class_from_string(cls);

    Graph g;
    if (!graph_file.empty()) {
        g = graph_from_json(read_json_file(graph_file));
    } else if (graph_geometric) {
        g = random_geometric_graph(n, side, radius, seed).graph;
    } else {
        g = named_graph(graph_named.empty() ? "star" : graph_named, n);
    }

    SymMatrix member = random_in_class(g, c, seed + 1);
    // network.json stores the state matrix of xdot = X x: -L for the
    // Laplacian families, the member itself otherwise.
    bool negate = (c == MatrixClass::Laplacian || c == MatrixClass::UnweightedLaplacian);
    SymMatrix state(member.size());
    for (int i = 0; i < member.size(); ++i)
        for (int j = i; j < member.size(); ++j)
            state.set(i, j, negate ? -member(i, j) : member(i, j));

    Eigen::VectorXd x0(g.n);
    if (!x0_file.empty()) {
        x0 = vector_from_json(read_json_file(x0_file));
        if (x0.size() != g.n) throw std::runtime_error("generate: x0 dimension mismatch");
    } else {
        double lo = x0_uniform.size() == 2 ? x0_uniform[0] : 0.0;
        double hi = x0_uniform.size() == 2 ? x0_uniform[1] : 10.0;
        Rng rng(seed + 2);
        for (int i = 0; i < g.n; ++i) x0(i) = rng.uniform(lo, hi);
    }

    write_json_file(out_matrix, matrix_to_json(state));
    write_json_file(out_graph, graph_to_json(g));
    write_json_file(out_x0, vector_to_json(x0));
    std::printf("wrote %s (%d nodes, %zu edges), %s, %s\n", out_matrix.string().c_str(), g.n,
                g.edges.size(), out_graph.string().c_str(), out_x0.string().c_str());
    return 0;
}

int run_simulate(const fs::path& network, const fs::path& x0_path, double t_final,
                 std::optional<int> steps, const fs::path& out) {
    SymMatrix x = matrix_from_json(read_json_file(network));
    Eigen::VectorXd x0 = vector_from_json(read_json_file(x0_path));
    int k = steps ? *steps : default_steps(t_final);
    Trajectory traj = simulate(x, x0, t_final, k);
    write_trajectory_csv(out, traj);
    std::printf("wrote %s (%d samples on [0, %g])\n", out.string().c_str(), k + 1, t_final);
    return 0;
}

int run_reconstruct(const fs::path& traj_path, const std::string& cls,
                    const ToleranceFlags& tols, const fs::path& out,
                    const std::string& dump_gram, const std::string& dump_solution_set) {
    Trajectory traj = read_trajectory_csv(traj_path);
    GramPair gp = gram_from_trajectory(traj);
    if (!dump_gram.empty()) write_json_file(dump_gram, gram_to_json(gp));
    if (!dump_solution_set.empty()) {
        AffineSolutionSet s = solve_affine(gp, tols.eps_rank);
        write_json_file(dump_solution_set, solution_set_to_json(s));
    }
    ReconstructionOutcome o = reconstruct_with_class(gp, matrix_class_from_string(cls),
                                                     tols.options());
    write_json_file(out, outcome_to_json(o));
    print_outcome_summary(o);
    std::printf("wrote %s\n", out.string().c_str());
    return outcome_exit_code(o.status);
}

int run_check(const fs::path& traj_path, const fs::path& candidate, const std::string& cls,
              const ToleranceFlags& tols) {
    Trajectory traj = read_trajectory_csv(traj_path);
    GramPair gp = gram_from_trajectory(traj);
    SymMatrix xbar = matrix_from_json(read_json_file(candidate));
    bool ok = check_solvability_against(gp, xbar, matrix_class_from_string(cls),
                                        tols.options());
    std::printf("candidate %s the measurements under class %s\n",
                ok ? "explains" : "does not explain", cls.c_str());
    return ok ? 0 : 2;
}

void print_demo_report(const DemoReport& rep) {
    std::printf("== %s demo ==\n", rep.name.c_str());
    std::printf("n = %d, horizon T = %g, quadrature steps K = %d\n", rep.g_true.n,
                rep.horizon, rep.quadrature_steps);
    print_outcome_summary(rep.outcome);
    if (rep.qualitative)
        std::printf("unconstrained (qualitative) verdict: %s\n",
                    to_string(rep.qualitative->status).c_str());
    if (rep.outcome.X_hat) {
        if (rep.g_true.n <= 8) {
            print_matrix(detail::negated(*rep.outcome.X_hat), "recovered L");
        }
        std::printf("||L_r - L||_F = %.6e   ||L_r - L||_F/||L_r||_F = %.6e\n",
                    rep.abs_err_fro, rep.rel_err_fro);
        std::printf("edge set recovered exactly: %s\n", rep.edges_exact ? "yes" : "no");
    }
    std::printf("elapsed: %.3f s\n", rep.elapsed_seconds);
}

int run_demo(const std::string& name, std::optional<double> t_override,
             std::optional<int> steps_override, std::uint64_t seed,
             const ToleranceFlags& tols, const fs::path& out_dir) {
    DemoReport rep;
    if (name == "star") {
        double t_final = t_override.value_or(1.0);
        int steps = steps_override.value_or(default_steps(t_final));
        rep = run_star_demo(t_final, steps, tols.options(), out_dir);
    } else if (name == "sensor") {
        double t_final = t_override.value_or(5.0);
        int steps = steps_override.value_or(default_steps(t_final));
        rep = run_sensor_demo(t_final, steps, seed, tols.options(), out_dir);
    } else {
        throw std::runtime_error("unknown demo: " + name + " (expected star or sensor)");
    }
    print_demo_report(rep);
    return outcome_exit_code(rep.outcome.status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topology reconstruction of linear dynamical networks from "
                 "finite-horizon state measurements"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a ground-truth network and initial state");
    std::string cls = "laplacian";
    int n = 4;
    std::string graph_named, graph_file;
    bool graph_geometric = false;
    double side = 1000.0, radius = 250.0;
    std::uint64_t seed = 1;
    std::vector<double> x0_uniform;
    std::string x0_file;
    fs::path out_matrix = "network.json", out_graph = "graph.json", out_x0 = "x0.json";
    gen->add_option("--class", cls, "matrix class")->capture_default_str();
    gen->add_option("--n", n, "vertex count")->capture_default_str();
    gen->add_option("--graph-named", graph_named, "star | path | ring");
    gen->add_flag("--graph-geometric", graph_geometric, "geometric link model");
    gen->add_option("--side", side, "square side for the geometric model")->capture_default_str();
    gen->add_option("--radius", radius, "link radius for the geometric model")->capture_default_str();
    gen->add_option("--graph-file", graph_file, "explicit graph json");
    gen->add_option("--seed", seed, "master seed")->capture_default_str();
    gen->add_option("--x0-uniform", x0_uniform, "LO HI for the random initial state")
        ->expected(2);
    gen->add_option("--x0-file", x0_file, "explicit initial-state json");
    gen->add_option("--out-matrix", out_matrix)->capture_default_str();
    gen->add_option("--out-graph", out_graph)->capture_default_str();
    gen->add_option("--out-x0", out_x0)->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample the trajectory of xdot = X x");
    fs::path sim_network = "network.json", sim_x0 = "x0.json", sim_out = "trajectory.csv";
    double t_final = 1.0;
    std::optional<int> sim_steps;
    sim->add_option("--network", sim_network, "state-matrix json")->capture_default_str();
    sim->add_option("--x0", sim_x0, "initial-state json")->capture_default_str();
    sim->add_option("--T", t_final, "horizon")->capture_default_str();
    sim->add_option("--quadrature-steps", sim_steps,
                    "grid segments K (even; default 1000 per unit time)");
    sim->add_option("--out", sim_out)->capture_default_str();

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "recover the network from a trajectory");
    fs::path rec_traj = "trajectory.csv", rec_out = "outcome.json";
    std::string rec_class = "laplacian", dump_gram, dump_solution_set;
    ToleranceFlags rec_tols;
    rec->add_option("trajectory", rec_traj, "trajectory csv")->capture_default_str();
    rec->add_option("--class", rec_class, "matrix class")->capture_default_str();
    rec->add_option("--out", rec_out)->capture_default_str();
    rec->add_option("--dump-gram", dump_gram, "write the Gramian pair to this json");
    rec->add_option("--dump-solution-set", dump_solution_set,
                    "write the affine Lyapunov solution set to this json");
    rec_tols.attach(rec);

    // check
    auto* chk = app.add_subcommand("check", "does a candidate matrix explain a trajectory?");
    fs::path chk_traj = "trajectory.csv", chk_candidate = "candidate.json";
    std::string chk_class = "qualitative";
    ToleranceFlags chk_tols;
    chk->add_option("trajectory", chk_traj)->capture_default_str();
    chk->add_option("candidate", chk_candidate, "candidate state-matrix json")
        ->capture_default_str();
    chk->add_option("--class", chk_class, "matrix class")->capture_default_str();
    chk_tols.attach(chk);

    // demo
    auto* demo = app.add_subcommand("demo", "run a bundled end-to-end example");
    std::string demo_name = "star";
    std::optional<double> demo_t;
    std::optional<int> demo_steps;
    std::uint64_t demo_seed = kSensorDemoSeed;
    fs::path demo_dir;
    ToleranceFlags demo_tols;
    demo->add_option("name", demo_name, "star | sensor")->capture_default_str();
    demo->add_option("--T", demo_t, "horizon override");
    demo->add_option("--quadrature-steps", demo_steps, "grid segments override");
    demo->add_option("--seed", demo_seed, "sensor-demo seed")->capture_default_str();
    demo->add_option("--out-dir", demo_dir, "directory for the demo files");
    demo_tols.attach(demo);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_generate(cls, n, graph_named, graph_geometric, side, radius, graph_file,
                                seed, x0_uniform, x0_file, out_matrix, out_graph, out_x0);
        if (sim->parsed()) return run_simulate(sim_network, sim_x0, t_final, sim_steps, sim_out);
        if (rec->parsed())
            return run_reconstruct(rec_traj, rec_class, rec_tols, rec_out, dump_gram,
                                   dump_solution_set);
        if (chk->parsed()) return run_check(chk_traj, chk_candidate, chk_class, chk_tols);
        if (demo->parsed()) {
            fs::path dir = demo_dir.empty() ? fs::path("demo_" + demo_name) : demo_dir;
            return run_demo(demo_name, demo_t, demo_steps, demo_seed, demo_tols, dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
