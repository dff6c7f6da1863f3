// Command-line harness: generate problems, run the row-action solvers,
// compute convergence constants, and sweep benchmark tables as CSV.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaczmarz/analysis.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/solve.hpp"

using json = nlohmann::ordered_json;
using namespace kaczmarz;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& spec) {
    const auto x = spec.find_first_of("xX");
    if (x == std::string::npos)
        throw CLI::ValidationError("--gen-uniform", "expected ROWSxCOLS, e.g. 100x50");
    const long r = std::stol(spec.substr(0, x));
    const long c = std::stol(spec.substr(x + 1));
    if (r <= 0 || c <= 0)
        throw CLI::ValidationError("--gen-uniform", "dimensions must be positive");
    return {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
}

struct MatrixFlags {
    std::string matrix_path;
    std::string gen_spec;
    double low = 0.0;
    bool drop_zero_rows = false;
    bool normalize = false;
};

void add_matrix_flags(CLI::App* cmd, MatrixFlags& f) {
    auto* file = cmd->add_option("--matrix", f.matrix_path, "Matrix Market file to load");
    auto* gen = cmd->add_option("--gen-uniform", f.gen_spec,
                                "generate a ROWSxCOLS matrix with entries uniform on [c,1]");
    cmd->add_option("--c", f.low, "lower end of the generator interval [c,1)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--drop-zero-rows", f.drop_zero_rows,
                  "remove all-zero rows when loading a file");
    cmd->add_flag("--normalize-rows", f.normalize,
                  "scale rows (and the rhs) to unit norm before solving");
    file->excludes(gen);
    gen->excludes(file);
}

/// Matrix plus the rhs (loaded sidecar filtered to kept rows, or a generated
/// consistent one). Seed discipline: the matrix uses `seed`, the generated
/// solution uses seed+1, and callers give the solver seed+2.
struct Acquired {
    SparseRowMatrix a;
    Vector b;
    std::optional<Vector> known_solution;
};

Acquired acquire(const MatrixFlags& f, const std::string& b_path, std::uint64_t seed) {
    Acquired out;
    if (!f.matrix_path.empty()) {
        LoadedMatrix loaded = load_matrix_market(f.matrix_path, {f.drop_zero_rows});
        out.a = std::move(loaded.matrix);
        if (!b_path.empty()) {
            Vector full_b = load_vector(b_path);
            if (loaded.dropped_rows > 0) {
                out.b = select_entries(full_b, loaded.kept_rows);
            } else {
                if (full_b.size() != out.a.rows())
                    throw std::runtime_error("rhs length does not match the matrix");
                out.b = std::move(full_b);
            }
        } else {
            Problem p = make_consistent(std::move(out.a), seed + 1);
            out.a = std::move(p.matrix);
            out.b = std::move(p.rhs);
            out.known_solution = std::move(p.known_solution);
        }
    } else if (!f.gen_spec.empty()) {
        const auto [m, n] = parse_dims(f.gen_spec);
        Problem p = make_consistent(gen_uniform(m, n, f.low, seed), seed + 1);
        out.a = std::move(p.matrix);
        out.b = std::move(p.rhs);
        out.known_solution = std::move(p.known_solution);
    } else {
        throw CLI::ValidationError("matrix", "need --matrix or --gen-uniform");
    }
    if (f.normalize) {
        auto [na, nb] = normalize_rows(out.a, out.b);
        out.a = std::move(na);
        out.b = std::move(nb);
    }
    return out;
}

void write_or_print(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << j.dump(2) << '\n';
    }
}

json factors_json(const BoundFactors& f) {
    const auto opt = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    json j;
    j["zeta0"] = f.zeta0;
    j["zeta1"] = opt(f.zeta1);
    j["zeta_k"] = opt(f.zeta_k);
    j["rho0"] = f.rho0;
    j["rho1"] = opt(f.rho1);
    j["rho_k"] = opt(f.rho_k);
    j["baseline_zeta_k"] = f.baseline_zeta_k;
    j["baseline_rho0"] = f.baseline_rho0;
    j["baseline_rho_k"] = f.baseline_rho_k;
    j["negative_factor"] = f.negative_factor;
    return j;
}

int cmd_solve(const MatrixFlags& mf, const std::string& b_path, const std::string& method,
              double tol, std::size_t max_iters, std::uint64_t seed, std::size_t stride,
              const std::string& history_csv, const std::string& json_path,
              bool no_timing) {
    const auto parsed = parse_method(method);
    if (!parsed) throw CLI::ValidationError("--method", "unknown method '" + method + "'");

    Acquired in = acquire(mf, b_path, seed);

    SolverConfig cfg;
    cfg.method = *parsed;
    cfg.omega = tol;
    cfg.max_iters = max_iters;
    cfg.seed = seed + 2;
    cfg.history_stride = stride;
    const SolveReport rep = solve(in.a, in.b, cfg);

    if (!history_csv.empty()) {
        std::ofstream out(history_csv);
        if (!out) throw std::runtime_error("cannot write '" + history_csv + "'");
        out << "iter,rre,wall_ns\n";
        for (const HistoryPoint& h : rep.rre_history)
            out << h.iteration << ',' << fmt_double(h.rre) << ','
                << (no_timing ? 0 : h.elapsed.count()) << '\n';
    }

    json j;
    j["method"] = method_name(rep.method);
    j["rows"] = in.a.rows();
    j["cols"] = in.a.cols();
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["final_rre"] = rep.final_rre;
    j["degenerate_dir_events"] = rep.degenerate_dir_events;
    j["wall_seconds"] = no_timing ? 0.0 : std::chrono::duration<double>(rep.wall_time).count();
    write_or_print(j, json_path);
    return 0;
}

int cmd_gen(const std::string& size_spec, double low, std::uint64_t seed,
            const std::string& out_prefix, bool write_xstar) {
    const auto [m, n] = parse_dims(size_spec);
    Problem p = make_consistent(gen_uniform(m, n, low, seed), seed + 1);
    const std::string mtx = out_prefix + ".mtx";
    const std::string bvec = out_prefix + ".b";
    save_matrix_market(mtx, p.matrix);
    save_vector(bvec, p.rhs);
    json j;
    j["rows"] = m;
    j["cols"] = n;
    j["density"] = density(p.matrix);
    j["matrix"] = mtx;
    j["rhs"] = bvec;
    if (write_xstar) {
        const std::string xs = out_prefix + ".xstar";
        save_vector(xs, *p.known_solution);
        j["xstar"] = xs;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_constants(const MatrixFlags& mf, std::uint64_t seed, std::size_t delta_limit,
                  const std::string& json_path) {
    Acquired in = acquire(mf, "", seed);
    AnalysisOptions opts;
    opts.pair_scan_row_limit = delta_limit;
    const ConvergenceConstants c = compute_constants(in.a, opts);
    const BoundFactors f = bound_factors(c);

    json j;
    j["rows"] = in.a.rows();
    j["cols"] = in.a.cols();
    j["frob_norm_sq"] = c.frob_norm_sq;
    j["lambda_min_nz"] = c.lambda_min_nz;
    j["gamma1"] = c.gamma1;
    j["gamma2"] = c.gamma2 ? json(*c.gamma2) : json(nullptr);
    j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
    j["factors"] = factors_json(f);
    json warnings = json::array();
    if (!c.delta)
        warnings.push_back("delta unavailable: pairwise scan limit exceeded");
    if (!c.gamma2)
        warnings.push_back("gamma2 undefined: fewer than 3 rows");
    if (f.negative_factor)
        warnings.push_back("some factor is negative: outside the bounds' regime");
    j["warnings"] = warnings;
    write_or_print(j, json_path);
    return 0;
}

int cmd_oracle(const MatrixFlags& mf, const std::string& b_path, std::uint64_t seed,
               const std::string& out_path, const std::string& json_path) {
    Acquired in = acquire(mf, b_path, seed);
    const Vector x = least_norm_solution(in.a, in.b);
    if (!out_path.empty()) save_vector(out_path, x);
    json j;
    j["rows"] = in.a.rows();
    j["cols"] = in.a.cols();
    j["x_norm"] = vec::norm(x);
    j["residual_norm"] = vec::norm(in.a.residual(in.b, x));
    if (!out_path.empty()) j["solution"] = out_path;
    write_or_print(j, json_path);
    return 0;
}

struct TrialResult {
    std::size_t iterations;
    bool converged;
    double wall_seconds;
};

int cmd_bench(const std::string& sweep, std::vector<double> values, std::size_t fixed_m,
              std::size_t fixed_n, double fixed_c, std::vector<std::string> methods,
              std::size_t trials, std::uint64_t seed_base, double tol,
              std::size_t max_iters, const std::string& csv_path, bool no_timing) {
    if (values.empty()) throw CLI::ValidationError("--values", "need at least one value");
    if (trials < 1) throw CLI::ValidationError("--trials", "need at least one trial");
    std::vector<Method> parsed;
    for (const std::string& name : methods) {
        const auto m = parse_method(name);
        if (!m) throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
        parsed.push_back(*m);
    }

    std::ostringstream csv;
    csv << "sweep,value,method,trials,converged_trials,it_median,it_mean,wall_mean_s\n";
    for (double value : values) {
        std::size_t m = fixed_m, n = fixed_n;
        double low = fixed_c;
        if (sweep == "m") {
            m = static_cast<std::size_t>(value);
            if (m == 0) throw CLI::ValidationError("--values", "m must be positive");
        } else {
            low = value;
            if (low < 0.0 || low >= 1.0)
                throw CLI::ValidationError("--values", "c must lie in [0, 1)");
        }

        // One problem per trial; every method sees the same problems.
        std::vector<Problem> problems;
        problems.reserve(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t seed = seed_base + t;
            problems.push_back(make_consistent(gen_uniform(m, n, low, seed), seed + 1));
        }

        for (std::size_t mi = 0; mi < parsed.size(); ++mi) {
            std::vector<TrialResult> results;
            results.reserve(trials);
            for (std::size_t t = 0; t < trials; ++t) {
                SolverConfig cfg;
                cfg.method = parsed[mi];
                cfg.omega = tol;
                cfg.max_iters = max_iters;
                cfg.seed = seed_base + t + 2;
                const SolveReport rep = solve(problems[t], cfg);
                results.push_back({rep.iterations, rep.converged,
                                   std::chrono::duration<double>(rep.wall_time).count()});
            }
            const std::size_t converged =
                static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                       [](const TrialResult& r) {
                                                           return r.converged;
                                                       }));
            std::vector<double> its;
            double wall_sum = 0.0;
            for (const TrialResult& r : results) {
                its.push_back(static_cast<double>(r.iterations));
                wall_sum += r.wall_seconds;
            }
            std::sort(its.begin(), its.end());
            const double median = its.size() % 2 == 1
                                      ? its[its.size() / 2]
                                      : 0.5 * (its[its.size() / 2 - 1] + its[its.size() / 2]);
            const double mean =
                std::accumulate(its.begin(), its.end(), 0.0) / static_cast<double>(its.size());

            csv << sweep << ',' << fmt_double(value) << ',' << methods[mi] << ','
                << trials << ',' << converged << ',';
            if (converged < trials) {
                csv << "-,-,";  // cap exceeded in at least one trial
            } else {
                csv << fmt_double(median) << ',' << fmt_double(mean) << ',';
            }
            csv << fmt_double(no_timing ? 0.0 : wall_sum / static_cast<double>(trials))
                << '\n';
        }
    }

    if (csv_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Row-action solvers for consistent linear systems"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run one solver on one system");
    MatrixFlags solve_mf;
    add_matrix_flags(solve_cmd, solve_mf);
    std::string solve_b, solve_method = "grko", solve_csv, solve_json;
    double solve_tol = 0.5e-8;
    std::size_t solve_max = 100000, solve_stride = 0;
    std::uint64_t solve_seed = 0;
    bool solve_no_timing = false;
    solve_cmd->add_option("--b", solve_b, "right-hand side sidecar file (one scalar per line)");
    solve_cmd->add_option("--method", solve_method, "cyclic | grk | grko | mwrk | mwrko");
    solve_cmd->add_option("--tol", solve_tol, "stop once the squared relative residual drops below this");
    solve_cmd->add_option("--max-iters", solve_max, "iteration cap");
    solve_cmd->add_option("--seed", solve_seed, "base seed (matrix, rhs, solver draws derive from it)");
    solve_cmd->add_option("--history-stride", solve_stride, "record/check every N iterations (0 = auto)");
    solve_cmd->add_option("--history-csv", solve_csv, "write iter,rre,wall_ns history here");
    solve_cmd->add_option("--json", solve_json, "write the summary JSON here instead of stdout");
    solve_cmd->add_flag("--no-timing", solve_no_timing, "zero wall-clock fields for reproducible artifacts");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "sweep problem sizes or correlation and tabulate iterations");
    std::string bench_sweep = "c", bench_csv;
    std::vector<double> bench_values;
    std::size_t bench_m = 100, bench_n = 50, bench_trials = 5, bench_max = 100000;
    double bench_c = 0.0, bench_tol = 0.5e-8;
    std::uint64_t bench_seed = 1;
    std::vector<std::string> bench_methods{"grk", "grko", "mwrk", "mwrko"};
    bool bench_no_timing = false;
    bench_cmd->add_option("--sweep", bench_sweep, "sweep variable: m or c")
        ->check(CLI::IsMember({"m", "c"}));
    bench_cmd->add_option("--values", bench_values, "sweep values")->delimiter(',')->required();
    bench_cmd->add_option("--m", bench_m, "rows (fixed when sweeping c)");
    bench_cmd->add_option("--n", bench_n, "columns");
    bench_cmd->add_option("--c", bench_c, "generator interval start (fixed when sweeping m)");
    bench_cmd->add_option("--methods", bench_methods, "methods to run")->delimiter(',');
    bench_cmd->add_option("--trials", bench_trials, "independent problems per sweep value");
    bench_cmd->add_option("--seed-base", bench_seed, "trial t uses seed-base + t");
    bench_cmd->add_option("--tol", bench_tol, "stopping tolerance");
    bench_cmd->add_option("--max-iters", bench_max, "iteration cap");
    bench_cmd->add_option("--csv", bench_csv, "write the table here instead of stdout");
    bench_cmd->add_flag("--no-timing", bench_no_timing, "zero wall-clock fields for reproducible artifacts");

    // constants
    auto* const_cmd = app.add_subcommand("constants", "convergence constants and bound factors as JSON");
    MatrixFlags const_mf;
    add_matrix_flags(const_cmd, const_mf);
    std::uint64_t const_seed = 0;
    std::size_t const_delta_limit = 5000;
    std::string const_json;
    const_cmd->add_option("--seed", const_seed, "seed for --gen-uniform");
    const_cmd->add_option("--delta-limit", const_delta_limit,
                          "skip the pairwise angle scan above this many rows");
    const_cmd->add_option("--json", const_json, "write JSON here instead of stdout");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "write a generated problem as .mtx plus a rhs sidecar");
    std::string gen_size, gen_out;
    double gen_c = 0.0;
    std::uint64_t gen_seed = 0;
    bool gen_xstar = false;
    gen_cmd->add_option("--size", gen_size, "ROWSxCOLS")->required();
    gen_cmd->add_option("--c", gen_c, "generator interval start")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output prefix")->required();
    gen_cmd->add_flag("--write-xstar", gen_xstar, "also write the generating solution");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "least-norm reference solution via the dense pseudoinverse");
    MatrixFlags oracle_mf;
    add_matrix_flags(oracle_cmd, oracle_mf);
    std::string oracle_b, oracle_out, oracle_json;
    std::uint64_t oracle_seed = 0;
    oracle_cmd->add_option("--b", oracle_b, "right-hand side sidecar file");
    oracle_cmd->add_option("--seed", oracle_seed, "seed for --gen-uniform");
    oracle_cmd->add_option("--out", oracle_out, "write the solution vector here");
    oracle_cmd->add_option("--json", oracle_json, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed())
            return cmd_solve(solve_mf, solve_b, solve_method, solve_tol, solve_max,
                             solve_seed, solve_stride, solve_csv, solve_json,
                             solve_no_timing);
        if (bench_cmd->parsed())
            return cmd_bench(bench_sweep, bench_values, bench_m, bench_n, bench_c,
                             bench_methods, bench_trials, bench_seed, bench_tol,
                             bench_max, bench_csv, bench_no_timing);
        if (const_cmd->parsed())
            return cmd_constants(const_mf, const_seed, const_delta_limit, const_json);
        if (gen_cmd->parsed())
            return cmd_gen(gen_size, gen_c, gen_seed, gen_out, gen_xstar);
        if (oracle_cmd->parsed())
            return cmd_oracle(oracle_mf, oracle_b, oracle_seed, oracle_out, oracle_json);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
