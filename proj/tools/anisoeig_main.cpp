#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "aniso/eigensolver.hpp"
#include "aniso/invariants.hpp"
#include "aniso/kernels.hpp"
#include "aniso/norms.hpp"
#include "aniso/parallel.hpp"
#include "aniso/variations.hpp"

// Exit codes: 0 success, 1 validation failure, 2 I/O or parse error,
// 3 solver non-convergence.
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool no_timestamp = false;
    std::string kernel = "auto";
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_timestamp(std::ostream& os, const Options& opt) {
    if (opt.no_timestamp) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    os << "# generated " << buf << "\n";
}

json load_config(const Options& opt) {
    if (opt.config_path.empty()) return json::object();
    std::ifstream is(opt.config_path);
    if (!is) throw aniso::ParseError(aniso::ParseError::Kind::io,
                                     "cannot open config: " + opt.config_path);
    return json::parse(is);
}

std::vector<double> get_doubles(const json& cfg, const char* key) {
    std::vector<double> out;
    for (const auto& v : cfg.at(key)) out.push_back(v.get<double>());
    return out;
}

aniso::TensorGrid grid_from_config(const json& cfg) {
    if (!cfg.contains("counts")) throw std::invalid_argument("config is missing \"counts\"");
    std::vector<std::int64_t> counts;
    for (const auto& v : cfg.at("counts")) counts.push_back(v.get<std::int64_t>());
    std::vector<double> lower(counts.size(), 0.0), upper(counts.size(), 1.0);
    if (cfg.contains("lower")) lower = get_doubles(cfg, "lower");
    if (cfg.contains("upper")) upper = get_doubles(cfg, "upper");
    return aniso::build_grid(aniso::BoxDomain(std::move(lower), std::move(upper)),
                             std::move(counts));
}

aniso::SolveConfig solve_config(const json& cfg, const Options& opt) {
    aniso::SolveConfig sc;
    sc.tol_residual = cfg.value("tol_residual", sc.tol_residual);
    sc.max_iter = cfg.value("max_iter", sc.max_iter);
    sc.initial_step = cfg.value("initial_step", sc.initial_step);
    sc.backtrack_factor = cfg.value("backtrack_factor", sc.backtrack_factor);
    sc.restarts = cfg.value("restarts", sc.restarts);
    sc.rng_seed = cfg.value("seed", sc.rng_seed);
    if (opt.seed) sc.rng_seed = *opt.seed;
    sc.validate();
    return sc;
}

// Runs validate() on the config's exponents; structural admissibility is
// required for every solve, the analytic subcriticality conditions are
// reported but do not block the (finite-dimensional) discrete problem.
aniso::ValidityReport validated_report(const json& cfg, bool need_s) {
    const std::vector<double> p = get_doubles(cfg, "p");
    std::optional<std::vector<double>> s;
    if (cfg.contains("s")) s = get_doubles(cfg, "s");
    if (need_s && !s) throw std::invalid_argument("config is missing \"s\"");
    const int n = cfg.value("n", static_cast<int>(p.size()));
    std::optional<std::span<const double>> ss;
    if (s) ss = std::span<const double>(*s);
    return aniso::validate(p, ss, n);
}

void warn_conditions(const aniso::ValidityReport& rep, bool fractional) {
    if (!rep.local_subcritical_ok)
        std::cerr << "warning: harmonic mean of p is not subcritical for this dimension\n";
    if (fractional && rep.fractional_evaluated &&
        (!rep.fractional_subcritical_ok || !rep.fractional_embedding_ok))
        std::cerr << "warning: fractional subcriticality/embedding conditions do not hold; "
                     "the discrete solve proceeds regardless\n";
}

int cmd_validate(const json& cfg, const Options& opt) {
    const std::vector<double> p = get_doubles(cfg, "p");
    std::optional<std::vector<double>> s;
    if (cfg.contains("s")) s = get_doubles(cfg, "s");
    const int n = cfg.value("n", static_cast<int>(p.size()));
    std::string mode = cfg.value("mode", s ? "fractional" : "local");
    if (mode != "local" && mode != "fractional")
        throw std::invalid_argument("mode must be \"local\" or \"fractional\"");
    if (mode == "fractional" && !s)
        throw std::invalid_argument("fractional mode requires \"s\"");

    std::optional<std::span<const double>> ss;
    if (s) ss = std::span<const double>(*s);
    const aniso::ValidityReport rep = aniso::validate(p, ss, n);

    emit_timestamp(std::cout, opt);
    std::cout << "condition,ok,value\n";
    auto row = [](const char* name, bool ok, const std::optional<double>& v) {
        std::cout << name << ',' << (ok ? "true" : "false") << ','
                  << (v ? fmt(*v) : std::string()) << "\n";
    };
    row("sorted", rep.sorted_ok, std::nullopt);
    row("local_subcritical", rep.local_subcritical_ok, rep.pstar);
    if (rep.fractional_evaluated) {
        row("fractional_subcritical", rep.fractional_subcritical_ok, rep.pstar_s);
        row("fractional_embedding", rep.fractional_embedding_ok, rep.pstar_s);
    }
    const bool ok = mode == "local" ? rep.local_ok() : rep.fractional_ok();
    return ok ? kExitOk : kExitValidation;
}

int cmd_norm(const json& cfg, const Options& opt) {
    if (!cfg.contains("field")) throw std::invalid_argument("config is missing \"field\"");
    const aniso::GridFunction u = aniso::read_field(cfg.at("field").get<std::string>());
    const aniso::ExponentVector p(get_doubles(cfg, "p"));
    if (p.dim() != u.grid().dim())
        throw std::invalid_argument("exponent dimension does not match the field");

    emit_timestamp(std::cout, opt);
    std::cout << "quantity,axis,value\n";
    std::cout << "mixed_norm,," << fmt(aniso::mixed_norm(u, p)) << "\n";
    for (std::size_t a = 0; a < p.dim(); ++a) {
        const std::vector<double> g = aniso::forward_diff(u, a);
        std::cout << "directional_norm," << a << ','
                  << fmt(aniso::directional_norm(g, p[a], u.grid())) << "\n";
    }
    std::cout << "gradient_norm,," << fmt(aniso::gradient_norm(u, p)) << "\n";

    if (cfg.contains("s")) {
        const aniso::FractionalVector s(get_doubles(cfg, "s"));
        if (s.dim() != p.dim())
            throw std::invalid_argument("s dimension does not match the field");
        const std::int64_t window = cfg.value("window", std::int64_t{0});
        const bool normalized = cfg.value("normalized", true);
        double total = 0.0;
        for (std::size_t a = 0; a < p.dim(); ++a) {
            const aniso::FractionalTerms t =
                aniso::fractional_directional(u, s[a], p[a], a, window, normalized);
            std::cout << "frac_inner_sum," << a << ',' << fmt(t.inner_sum) << "\n";
            std::cout << "frac_inner_band," << a << ',' << fmt(t.inner_band) << "\n";
            std::cout << "frac_tail," << a << ',' << fmt(t.tail) << "\n";
            std::cout << "frac_raw_power," << a << ',' << fmt(t.raw_power) << "\n";
            std::cout << "frac_seminorm," << a << ',' << fmt(t.seminorm) << "\n";
            total += t.seminorm;
        }
        std::cout << "fractional_seminorm,," << fmt(total) << "\n";
    }
    return kExitOk;
}

void write_history_csv(const aniso::SolveReport& rep, const std::string& path,
                       const Options& opt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw aniso::ParseError(aniso::ParseError::Kind::io, "cannot write " + path);
    emit_timestamp(os, opt);
    os << "iter,Q,residual\n";
    for (const auto& h : rep.history)
        os << h.iteration << ',' << fmt(h.q) << ',' << fmt(h.residual) << "\n";
}

int finish_solve(const aniso::SolveReport& rep, const Options& opt) {
    std::filesystem::create_directories(opt.out_dir);
    aniso::write_field(rep.u, opt.out_dir + "/eigenfunction.field");
    write_history_csv(rep, opt.out_dir + "/history.csv", opt);
    std::cout << "lambda," << fmt(rep.lambda) << ",converged,"
              << (rep.converged ? "true" : "false") << "\n";
    return rep.converged ? kExitOk : kExitNoConvergence;
}

int check_eigenvalue_index(const json& cfg) {
    const int k = cfg.value("k", 1);
    if (k == 1) return kExitOk;
    std::cerr << "only the first eigenvalue (k = 1) is computed as the minimum of the "
                 "homogeneous quotient.\n"
                 "higher eigenvalues are characterized by a min-max over compact symmetric "
                 "sets of genus >= k on the unit mixed-norm sphere; that constraint is not "
                 "computationally tractable here. See README.md.\n";
    return kExitValidation;
}

int cmd_solve(const json& cfg, const Options& opt) {
    if (int rc = check_eigenvalue_index(cfg); rc != kExitOk) return rc;
    const aniso::ValidityReport rep = validated_report(cfg, false);
    if (!rep.sorted_ok) {
        std::cerr << "error: exponents must satisfy 1 < p_1 <= ... <= p_n < inf\n";
        return kExitValidation;
    }
    warn_conditions(rep, false);
    const aniso::ExponentVector p(get_doubles(cfg, "p"));
    const aniso::TensorGrid grid = grid_from_config(cfg);
    const aniso::SolveConfig sc = solve_config(cfg, opt);
    return finish_solve(aniso::minimize_local(p, grid, sc), opt);
}

int cmd_solve_frac(const json& cfg, const Options& opt) {
    if (int rc = check_eigenvalue_index(cfg); rc != kExitOk) return rc;
    const aniso::ValidityReport rep = validated_report(cfg, true);
    if (!rep.sorted_ok) {
        std::cerr << "error: exponents must satisfy 1 < p_1 <= ... <= p_n < inf\n";
        return kExitValidation;
    }
    warn_conditions(rep, true);
    const aniso::ExponentVector p(get_doubles(cfg, "p"));
    const aniso::FractionalVector s(get_doubles(cfg, "s"));
    const aniso::TensorGrid grid = grid_from_config(cfg);
    const aniso::SolveConfig sc = solve_config(cfg, opt);
    const std::int64_t window = cfg.value("window", std::int64_t{0});
    const bool normalized = cfg.value("normalized", true);
    return finish_solve(aniso::minimize_fractional(s, p, grid, sc, window, normalized), opt);
}

int cmd_sweep_s(const json& cfg, const Options& opt) {
    if (int rc = check_eigenvalue_index(cfg); rc != kExitOk) return rc;
    const aniso::ValidityReport rep = validated_report(cfg, false);
    if (!rep.sorted_ok) {
        std::cerr << "error: exponents must satisfy 1 < p_1 <= ... <= p_n < inf\n";
        return kExitValidation;
    }
    const aniso::ExponentVector p(get_doubles(cfg, "p"));
    const aniso::TensorGrid grid = grid_from_config(cfg);
    const aniso::SolveConfig sc = solve_config(cfg, opt);
    const std::int64_t window = cfg.value("window", std::int64_t{0});

    if (!cfg.contains("s_list")) throw std::invalid_argument("config is missing \"s_list\"");
    std::vector<aniso::FractionalVector> s_list;
    for (const auto& entry : cfg.at("s_list")) {
        if (entry.is_number()) {
            s_list.emplace_back(std::vector<double>(p.dim(), entry.get<double>()));
        } else {
            std::vector<double> s;
            for (const auto& v : entry) s.push_back(v.get<double>());
            s_list.emplace_back(std::move(s));
        }
    }

    const aniso::SweepTable table = aniso::s_sweep(p, grid, s_list, sc, window);

    std::filesystem::create_directories(opt.out_dir);
    const std::string path = opt.out_dir + "/sweep.csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw aniso::ParseError(aniso::ParseError::Kind::io, "cannot write " + path);
    emit_timestamp(os, opt);
    for (std::size_t a = 0; a < p.dim(); ++a) os << 's' << (a + 1) << ',';
    os << "lambda_s,lambda_local,lambda_local_limit,ratio\n";
    for (const auto& row : table.rows) {
        for (double si : row.s) os << fmt(si) << ',';
        os << fmt(row.lambda_s) << ',' << fmt(row.lambda_local) << ','
           << fmt(row.lambda_local_limit) << ',' << fmt(row.ratio) << "\n";
    }
    std::cout << "rows," << table.rows.size() << ",converged,"
              << (table.all_converged() ? "true" : "false") << "\n";
    return table.all_converged() ? kExitOk : kExitNoConvergence;
}

int cmd_check(const json& cfg, const Options& opt) {
    std::uint64_t seed = cfg.value("seed", std::uint64_t{20240915});
    if (opt.seed) seed = *opt.seed;
    const std::vector<aniso::InvariantResult> rows = aniso::run_invariant_suite(seed);
    emit_timestamp(std::cout, opt);
    std::cout << "invariant,max_error,pass\n";
    bool all = true;
    for (const auto& r : rows) {
        std::cout << r.name << ',' << fmt(r.statistic) << ',' << (r.pass ? "true" : "false")
                  << "\n";
        all = all && r.pass;
    }
    return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"anisotropic mixed-norm and fractional eigenvalue toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", opt.config_path, "JSON config file");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--threads", opt.threads, "worker thread count (default: all cores)");
    app.add_option("--seed", opt.seed, "override the config RNG seed");
    app.add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp header line");
    app.add_option("--kernel", opt.kernel, "kernel backend: auto, scalar, avx2");

    auto* validate_cmd = app.add_subcommand("validate", "check exponent conditions");
    auto* norm_cmd = app.add_subcommand("norm", "print norms of a field file");
    auto* solve_cmd = app.add_subcommand("solve", "minimize the local Rayleigh quotient");
    auto* solve_frac_cmd =
        app.add_subcommand("solve-frac", "minimize the fractional Rayleigh quotient");
    auto* sweep_cmd = app.add_subcommand("sweep-s", "fractional eigenvalues over an s list");
    auto* check_cmd = app.add_subcommand("check", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParse;
    }

    try {
        if (opt.threads > 0) aniso::set_num_threads(opt.threads);
        if (opt.kernel == "scalar") {
            aniso::kernels::set_backend(aniso::kernels::Backend::scalar);
        } else if (opt.kernel == "avx2") {
            aniso::kernels::set_backend(aniso::kernels::Backend::avx2);
        } else if (opt.kernel != "auto") {
            throw std::invalid_argument("unknown kernel backend: " + opt.kernel);
        }

        const json cfg = load_config(opt);
        if (validate_cmd->parsed()) return cmd_validate(cfg, opt);
        if (norm_cmd->parsed()) return cmd_norm(cfg, opt);
        if (solve_cmd->parsed()) return cmd_solve(cfg, opt);
        if (solve_frac_cmd->parsed()) return cmd_solve_frac(cfg, opt);
        if (sweep_cmd->parsed()) return cmd_sweep_s(cfg, opt);
        if (check_cmd->parsed()) return cmd_check(cfg, opt);
        return kExitParse;
    } catch (const aniso::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
