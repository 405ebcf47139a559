#include "mlyap/analysis.hpp"
#include "mlyap/bounds.hpp"
#include "mlyap/config.hpp"
#include "mlyap/experiments.hpp"
#include "mlyap/fkmc.hpp"
#include "mlyap/reports.hpp"
#include "mlyap/spectral.hpp"
#include "mlyap/svg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace mlyap;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitAcceptFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    long seed_override = -1;
    int threads = 0;
};

SdeModel model_from_config(const ConfigFile& cfg) {
    if (!cfg.has_section("model")) throw ConfigError("missing section [model]");
    const std::string name = cfg.get_string("model", "model");
    std::map<std::string, double> params;
    std::map<std::string, Vector> arrays;
    static const char* scalar_keys[] = {"a", "b", "sigma", "rho",         "zeta1", "zeta2",
                                        "beta", "chi", "kappa", "guard_radius"};
    for (const char* key : scalar_keys)
        if (cfg.has("model", key)) params[key] = cfg.get_double("model", key);
    for (const auto& key : cfg.keys("model")) {
        if (key == "model") continue;
        if (params.count(key)) continue;
        arrays[key] = cfg.get_array("model", key);
    }
    if (params.count("rho") && std::abs(params["rho"]) > 1.0)
        throw ConfigError("rho must lie in [-1, 1]");
    return build_model(name, params, arrays);
}

struct McSettings {
    double t = 0.0;
    int n_paths = 0;
    int n_steps = 0;
    RngPolicy policy;
    double x0 = 0.0;
    std::vector<double> p_grid;
};

McSettings mc_from_config(const ConfigFile& cfg, long seed_override) {
    if (!cfg.has_section("mc")) throw ConfigError("missing section [mc]");
    McSettings s;
    s.t = cfg.get_double("mc", "t");
    if (s.t <= 0.0) throw ConfigError("[mc] t must be positive");
    s.n_paths = static_cast<int>(cfg.get_int("mc", "n_paths"));
    s.n_steps = static_cast<int>(cfg.get_int("mc", "n_steps"));
    if (s.n_paths < 2 || s.n_steps < 1) throw ConfigError("[mc] n_paths/n_steps out of range");
    const long seed = seed_override >= 0 ? seed_override : cfg.get_int("mc", "seed", 1);
    s.policy = RngPolicy(static_cast<std::uint64_t>(seed));
    s.x0 = cfg.get_double("mc", "x0", 0.0);
    const Vector pg = cfg.get_array("mc", "p_grid");
    for (Eigen::Index i = 0; i < pg.size(); ++i) s.p_grid.push_back(pg[i]);
    return s;
}

struct SpectralSettings {
    GridSpec grid;
    LyapunovWeight weight;
    double tol = 1e-8;
    std::vector<double> p_grid;
    bool dump_eigenfunction = false;
};

SpectralSettings spectral_from_config(const ConfigFile& cfg, const SdeModel& model) {
    if (!cfg.has_section("spectral")) throw ConfigError("missing section [spectral]");
    SpectralSettings s;
    const int n = static_cast<int>(cfg.get_int("spectral", "n", 1200));
    if (n < 16) throw ConfigError("[spectral] n must be at least 16");
    if (model.space == StateSpace::circle) {
        s.grid = GridSpec::circle(n);
        s.weight = LyapunovWeight::unit();
    } else {
        const double x_max = cfg.get_double("spectral", "x_max", 6.0);
        s.grid = GridSpec::interval(-x_max, x_max, n);
        const std::string family = cfg.get_string("spectral", "weight", "exp_quadratic");
        const double par = cfg.get_double(
            "spectral", family == "poly" ? "alpha" : "gamma", 0.5);
        s.weight = LyapunovWeight(LyapunovWeight::family_from_name(family), par);
    }
    s.tol = cfg.get_double("spectral", "tol", 1e-8);
    if (cfg.has("spectral", "p_grid")) {
        const Vector pg = cfg.get_array("spectral", "p_grid");
        for (Eigen::Index i = 0; i < pg.size(); ++i) s.p_grid.push_back(pg[i]);
    }
    s.dump_eigenfunction = cfg.get_int("spectral", "dump_eigenfunction", 0) != 0;
    return s;
}

std::vector<double> p_grid_for(const ConfigFile& cfg, const SpectralSettings& sp,
                               const McSettings* mc) {
    if (!sp.p_grid.empty()) return sp.p_grid;
    if (mc && !mc->p_grid.empty()) return mc->p_grid;
    if (cfg.has_section("mc") && cfg.has("mc", "p_grid")) {
        const Vector pg = cfg.get_array("mc", "p_grid");
        std::vector<double> out(pg.data(), pg.data() + pg.size());
        return out;
    }
    throw ConfigError("no p grid given (need [spectral] p_grid or [mc] p_grid)");
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const ConfigFile& cfg,
                    const CliOptions& opt, double wall_seconds) {
    std::ofstream f(dir / "run_manifest.txt");
    f << "subcommand = " << subcommand << "\n";
    f << "version = 0.1.0\n";
    f << "threads = " << opt.threads << "\n";
    f << "seed_override = " << opt.seed_override << "\n";
    f << "wall_seconds = " << format_double(wall_seconds) << "\n";
    const auto now = std::chrono::system_clock::now();
    f << "unix_time = "
      << std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count() << "\n";
    f << "\n# resolved configuration\n" << cfg.dump();
}

bool wants_svg(const ConfigFile& cfg) {
    const std::string formats = cfg.get_string("output", "formats", "csv");
    return formats.find("svg") != std::string::npos;
}

int cmd_lambda_mc(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    const SdeModel model = model_from_config(cfg);
    const McSettings mc = mc_from_config(cfg, opt.seed_override);
    State x0(model.dim);
    x0.setZero();
    x0[0] = mc.x0;
    const LambdaCurve curve =
        lambda_curve(model, mc.p_grid, mc.t, x0, mc.n_paths, mc.n_steps, mc.policy, opt.threads);
    lambda_mc_table(curve.points).write((out / "lambda_mc.csv").string());
    std::cout << "lambda_mc.csv written; max convexity violation "
              << format_double(curve.max_convexity_violation) << "\n";
    if (wants_svg(cfg)) {
        Vector px(curve.points.size()), py(curve.points.size());
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            px[i] = curve.points[i].p;
            py[i] = curve.points[i].lambda_t;
        }
        svg_line_plot((out / "lambda_mc.svg").string(), "Monte Carlo Lambda_t(p)", px, {py},
                      {"lambda_t"});
    }
    return kExitOk;
}

int cmd_lambda_spectral(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    (void)opt;
    const SdeModel model = model_from_config(cfg);
    const SpectralSettings sp = spectral_from_config(cfg, model);
    const std::vector<double> ps = p_grid_for(cfg, sp, nullptr);
    std::vector<SpectralResult> results;
    for (double p : ps) results.push_back(solve_principal(model, p, sp.grid, sp.weight, sp.tol));
    spectral_table(results).write((out / "lambda_spectral.csv").string());
    if (sp.dump_eigenfunction && !results.empty())
        eigenfunction_table(results.back()).write((out / "eigenfunction.csv").string());
    std::cout << "lambda_spectral.csv written (" << results.size() << " rows)\n";
    if (wants_svg(cfg)) {
        Vector px(results.size()), py(results.size());
        for (std::size_t i = 0; i < results.size(); ++i) {
            px[i] = results[i].p;
            py[i] = results[i].lambda;
        }
        svg_line_plot((out / "lambda_spectral.svg").string(), "Spectral Lambda(p)", px, {py},
                      {"lambda"});
        if (sp.dump_eigenfunction && !results.empty()) {
            const auto& r = results.back();
            const Vector x = r.grid.nodes();
            Vector phi(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i)
                phi[i] = r.eigvec[i] * r.weight.v(x[i]);
            svg_line_plot((out / "eigenfunction.svg").string(), "phi_p on the grid", x, {phi},
                          {"phi"});
        }
    }
    return kExitOk;
}

int cmd_growth_check(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    (void)opt;
    const SdeModel model = model_from_config(cfg);
    const std::string family = cfg.get_string("spectral", "weight", "exp_quadratic");
    const double par =
        cfg.get_double("spectral", family == "poly" ? "alpha" : "gamma", 0.5);
    const LyapunovWeight w(LyapunovWeight::family_from_name(family), par);
    const double x_max = cfg.get_double("spectral", "x_max", 6.0);
    const Vector scan = Vector::LinSpaced(801, -x_max, x_max);
    Vector pg;
    if (cfg.has_section("bounds") && cfg.has("bounds", "p_ladder"))
        pg = cfg.get_array("bounds", "p_ladder");
    else if (cfg.has_section("mc") && cfg.has("mc", "p_grid"))
        pg = cfg.get_array("mc", "p_grid");
    else
        throw ConfigError("growth-check needs [bounds] p_ladder or [mc] p_grid");
    std::vector<GrowthReport> rows;
    for (Eigen::Index i = 0; i < pg.size(); ++i)
        rows.push_back(check_growth(model, w, pg[i], scan));
    growth_table(rows).write((out / "growth.csv").string());
    for (const auto& g : rows)
        std::cout << "p = " << g.p << ": tail " << (g.cond1_ok ? "pass" : "fail")
                  << ", sup over scan " << format_double(g.gamma_sup) << "\n";
    return kExitOk;
}

int cmd_bounds(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    (void)opt;
    const SdeModel model = model_from_config(cfg);
    if (!cfg.has_section("bounds")) throw ConfigError("missing section [bounds]");
    const Vector ladder = cfg.get_array("bounds", "p_ladder");
    Vector A_grid;
    if (cfg.has("bounds", "A_grid")) {
        A_grid = cfg.get_array("bounds", "A_grid");
    } else {
        A_grid.resize(256);
        for (int i = 0; i < 256; ++i)
            A_grid[i] = 0.5 + 1e-9 + std::exp(std::log(1e-3) + i * std::log(1e7) / 255.0);
    }
    const std::string family = cfg.get_string("spectral", "weight", "exp_quadratic");
    std::vector<BoundsReport> rows;
    std::vector<GrowthReport> growth;
    const double x_max = cfg.get_double("spectral", "x_max", 6.0);
    const Vector scan = Vector::LinSpaced(801, -x_max, x_max);
    for (Eigen::Index i = 0; i < ladder.size(); ++i) {
        const double p = ladder[i];
        rows.push_back(
            bounds_report(model, p, LyapunovWeight::family_from_name(family), A_grid));
        if (rows.back().has_upper)
            growth.push_back(check_growth(
                model, LyapunovWeight(rows.back().upper.family, rows.back().upper.param), p,
                scan));
        else
            growth.emplace_back();
    }
    bounds_table(rows, {}, growth).write((out / "bounds.csv").string());
    std::cout << "bounds.csv written (" << rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_rate_function(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    const SdeModel model = model_from_config(cfg);
    const SpectralSettings sp = spectral_from_config(cfg, model);
    const std::vector<double> ps = p_grid_for(cfg, sp, nullptr);
    std::vector<std::pair<double, double>> samples;
    for (double p : ps)
        samples.emplace_back(p, solve_principal(model, p, sp.grid, sp.weight, sp.tol).lambda);
    if (!cfg.has_section("analysis")) throw ConfigError("missing section [analysis]");
    const Vector s_grid = cfg.get_array("analysis", "s_grid");
    const RateFunctionTable table = legendre(samples, s_grid, 1e-6);
    rate_function_table(table).write((out / "rate_function.csv").string());
    std::cout << "rate_function.csv written (" << s_grid.size() << " rows)\n";
    if (wants_svg(cfg))
        svg_line_plot((out / "rate_function.svg").string(), "Rate function I(s)", table.s,
                      {table.rate}, {"I"});
    (void)opt;
    return kExitOk;
}

int cmd_clt(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    const SdeModel model = model_from_config(cfg);
    const McSettings mc = mc_from_config(cfg, opt.seed_override);
    const double lambda_ref = cfg.get_double("analysis", "lambda_ref", lambda_as(model));
    State x0(model.dim);
    x0.setZero();
    x0[0] = mc.x0;
    const CltSummary s = clt_sample(model, mc.t, x0, mc.n_paths, mc.n_steps, mc.policy,
                                    lambda_ref, opt.threads);
    const double ks = ks_distance_normal(s.z, s.sample_variance);
    CsvTable t({"t", "n_paths", "lambda_ref", "sample_variance", "ks_self", "n_blowups"});
    t.begin_row()
        .cell(mc.t)
        .cell(static_cast<long>(mc.n_paths))
        .cell(lambda_ref)
        .cell(s.sample_variance)
        .cell(ks)
        .cell(static_cast<long>(s.n_blowups));
    t.write((out / "clt.csv").string());
    std::cout << "clt.csv written: sample variance " << format_double(s.sample_variance) << "\n";
    return kExitOk;
}

int cmd_mdp(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    const SdeModel model = model_from_config(cfg);
    const McSettings mc = mc_from_config(cfg, opt.seed_override);
    const double lambda_ref = cfg.get_double("analysis", "lambda_ref", lambda_as(model));
    const double beta_exp = cfg.get_double("mc", "beta_exp", 0.75);
    State x0(model.dim);
    x0.setZero();
    x0[0] = mc.x0;
    CsvTable t({"p", "t", "beta_exp", "mdp_lmgf", "reference"});
    for (double p : mc.p_grid) {
        const double v = mdp_lmgf(model, mc.t, x0, beta_exp, p, mc.n_paths, mc.n_steps,
                                  mc.policy, lambda_ref, opt.threads);
        t.begin_row().cell(p).cell(mc.t).cell(beta_exp).cell(v).cell(
            std::string("0.5*p^2*Lambda''(0)"));
    }
    t.write((out / "mdp.csv").string());
    std::cout << "mdp.csv written\n";
    return kExitOk;
}

int cmd_asymptotics(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    (void)opt;
    if (!cfg.has_section("bounds")) throw ConfigError("missing section [bounds]");
    const std::string scenario = cfg.get_string("bounds", "scenario", "q2");
    std::map<std::string, double> params;
    for (const char* key : {"a", "b", "sigma", "rho"})
        if (cfg.has("model", key)) params[key] = cfg.get_double("model", key);
    const Vector ladder = cfg.get_array("bounds", "p_ladder");
    std::vector<double> ps(ladder.data(), ladder.data() + ladder.size());
    const AsymptoticReport rep = asymptotic_constants(scenario, params, ps);
    asymptotics_table(rep).write((out / "asymptotics.csv").string());
    std::cout << "asymptotics.csv written: upper constant "
              << format_double(rep.constant_upper) << ", lower "
              << format_double(rep.constant_lower) << ", limit ["
              << format_double(rep.paper_constant_lo) << ", "
              << format_double(rep.paper_constant_hi) << "]\n";
    return kExitOk;
}

int cmd_crosscheck(const ConfigFile& cfg, const CliOptions& opt, const fs::path& out) {
    const SdeModel model = model_from_config(cfg);
    const McSettings mc = mc_from_config(cfg, opt.seed_override);
    if (mc.p_grid.size() != 1)
        throw ConfigError("crosscheck wants exactly one p in [mc] p_grid");
    const double p = mc.p_grid[0];
    const SpectralSettings sp = spectral_from_config(cfg, model);

    State x0(model.dim);
    x0.setZero();
    x0[0] = mc.x0;
    const McLambdaEstimate est =
        estimate_lambda(model, p, mc.t, x0, mc.n_paths, mc.n_steps, mc.policy, opt.threads);
    const SpectralResult sr = solve_principal(model, p, sp.grid, sp.weight, sp.tol);

    bool has_bounds = false;
    BoundsReport br;
    if (model.space == StateSpace::line) {
        Vector A_grid(256);
        for (int i = 0; i < 256; ++i)
            A_grid[i] = std::exp(std::log(0.5 + 1e-9) +
                                 i * (std::log(1e6) - std::log(0.5 + 1e-9)) / 255.0);
        br = bounds_report(model, p, sp.weight.family, A_grid);
        has_bounds = br.has_upper || br.has_lower;
    }

    CsvTable t({"p", "lambda_mc", "se", "lambda_spectral", "residual", "lower", "upper"});
    t.begin_row()
        .cell(p)
        .cell(est.lambda_t)
        .cell(est.se_lambda)
        .cell(sr.lambda)
        .cell(sr.residual)
        .cell(br.has_lower ? format_double(br.lower.gamma_tilde) : "n/a")
        .cell(br.has_upper ? format_double(br.upper.gamma_star) : "n/a");
    t.write((out / "crosscheck.csv").string());

    std::cout << "p = " << p << ": lambda_mc = " << format_double(est.lambda_t)
              << " (se " << format_double(est.se_lambda) << "), lambda_spectral = "
              << format_double(sr.lambda) << "\n";
    if (has_bounds) {
        std::cout << "sandwich: ";
        if (br.has_lower) std::cout << format_double(br.lower.gamma_tilde) << " <= ";
        std::cout << "lambda";
        if (br.has_upper) std::cout << " <= " << format_double(br.upper.gamma_star);
        const bool inside =
            (!br.has_lower || br.lower.gamma_tilde <= sr.lambda + 1e-6) &&
            (!br.has_upper || sr.lambda <= br.upper.gamma_star + 1e-6);
        std::cout << "  [spectral " << (inside ? "inside" : "OUTSIDE") << "]\n";
    }
    return kExitOk;
}

int cmd_repro(const std::string& name, const CliOptions& opt) {
    std::vector<std::string> names;
    if (name == "all")
        names = experiment_names();
    else
        names.push_back(name);
    bool all_pass = true;
    for (const auto& n : names) {
        const ExperimentResult r = run_experiment(n, opt.threads);
        std::cout << format_experiment(r);
        all_pass = all_pass && r.pass();
    }
    return all_pass ? kExitOk : kExitAcceptFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mlyap: moment Lyapunov exponents of 1d SDEs with additive functionals"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string repro_name;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* copt = sub->add_option("--config", opt.config_path, "configuration file");
        if (needs_config) copt->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed_override, "override [mc] seed");
        sub->add_option("--threads", opt.threads,
                        "worker threads (0 = hardware); never changes results");
    };

    const char* config_cmds[] = {"lambda-mc",     "lambda-spectral", "bounds",
                                 "growth-check",  "rate-function",   "clt",
                                 "mdp",           "asymptotics",     "crosscheck"};
    for (const char* name : config_cmds) add_common(app.add_subcommand(name), true);
    auto* repro = app.add_subcommand("repro", "run a named verification experiment");
    repro->add_option("name", repro_name, "experiment name or 'all'")->required();
    add_common(repro, false);

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        if (sub == "repro") return cmd_repro(repro_name, opt);

        const ConfigFile cfg = ConfigFile::parse_file(opt.config_path);
        const fs::path out(opt.out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        const auto t0 = std::chrono::steady_clock::now();

        int rc = kExitConfig;
        if (sub == "lambda-mc") rc = cmd_lambda_mc(cfg, opt, out);
        else if (sub == "lambda-spectral") rc = cmd_lambda_spectral(cfg, opt, out);
        else if (sub == "bounds") rc = cmd_bounds(cfg, opt, out);
        else if (sub == "growth-check") rc = cmd_growth_check(cfg, opt, out);
        else if (sub == "rate-function") rc = cmd_rate_function(cfg, opt, out);
        else if (sub == "clt") rc = cmd_clt(cfg, opt, out);
        else if (sub == "mdp") rc = cmd_mdp(cfg, opt, out);
        else if (sub == "asymptotics") rc = cmd_asymptotics(cfg, opt, out);
        else if (sub == "crosscheck") rc = cmd_crosscheck(cfg, opt, out);

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(out, sub, cfg, opt, wall);
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
