// vlab: numerical laboratory for the distributed-delay renewal equation
//   b(t) = (1/eps) * integral of f(b(t-s)) over s in [1-eps/2, 1+eps/2].
// Subcommands cover feedback validation, simulation, periodic-orbit search,
// the small-eps square-wave sweep, barrier membership, eigenvalue checks and
// the age-structured (Gurtin-MacCamy) reduction.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlab/barriers.hpp"
#include "vlab/csvio.hpp"
#include "vlab/errors.hpp"
#include "vlab/gurtin.hpp"
#include "vlab/kernels.hpp"
#include "vlab/limit.hpp"
#include "vlab/nonlinearity.hpp"
#include "vlab/oscillation.hpp"
#include "vlab/trajectory.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "0.1.0";

double json_safe(double v) { return std::isfinite(v) ? v : 0.0; }

json grid_json(const vlab::Grid& g, double eps_requested) {
    return json{{"eps_requested", eps_requested},
                {"eps", g.eps},
                {"m", g.m},
                {"K", g.K},
                {"dt", g.dt},
                {"snap_distance", g.snap_distance}};
}

json context_json(const vlab::BarrierContext& c) {
    return json{{"eps", c.eps},       {"alpha", c.alpha},   {"tau0", c.tau0},
                {"delta0", c.delta0}, {"alpha0", c.alpha0}, {"a0", c.a0},
                {"A0", c.A0},         {"R", c.R},           {"lambda0", c.lambda0},
                {"fprime0", c.fprime0}};
}

struct B0Spec {
    bool generator = false;
    double constant = 1.0;
    double tau = 0.0;    // generator offset (absolute)
    double factor = 1.5; // generator amplitude factor
};

B0Spec parse_b0(const std::string& s) {
    B0Spec b;
    if (s.rfind("const:", 0) == 0) {
        b.constant = std::stod(s.substr(6));
        return b;
    }
    if (s.rfind("generator", 0) == 0) {
        b.generator = true;
        const auto colon = s.find(':');
        if (colon != std::string::npos) {
            std::stringstream ss(s.substr(colon + 1));
            std::string kv;
            while (std::getline(ss, kv, ',')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw vlab::ConfigError("bad --b0 parameter: " + kv);
                const std::string key = kv.substr(0, eq);
                const double val = std::stod(kv.substr(eq + 1));
                if (key == "tau")
                    b.tau = val;
                else if (key == "factor")
                    b.factor = val;
                else
                    throw vlab::ConfigError("unknown --b0 key: " + key);
            }
        }
        return b;
    }
    throw vlab::ConfigError("--b0 must be const:<value> or generator:tau=..,factor=..");
}

vlab::NonlinearitySpec make_spec(const std::string& tag, double slope) {
    if (tag == "linear") return vlab::NonlinearitySpec::linear(slope);
    return vlab::NonlinearitySpec::catalog(tag);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

/// Flat key = value config file; keys are the long option names of the chosen
/// subcommand (plus "command"). Values found here are injected before the
/// command-line flags, which therefore win on conflict.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vlab::ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw vlab::ConfigError("malformed config line: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw vlab::ConfigError("malformed config line: " + line);
        if (kv.count(key)) throw vlab::ConfigError("duplicate config key: " + key);
        kv[key] = val;
    }
    return kv;
}

void write_summary(const fs::path& out_dir, const json& summary) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "summary.json");
    out << summary.dump(2) << "\n";
}

struct CommonOpts {
    std::string f_tag = "atan-shifted";
    double slope = -0.5;
    double eps = 0.25;
    int m = 0;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_f_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--f", o.f_tag,
                    "feedback spec: atan-shifted | odd-sine-clipped | "
                    "asymmetric-sine-clipped | linear");
    cmd->add_option("--slope", o.slope, "slope for --f linear");
}

vlab::Grid resolve_grid(const CommonOpts& o) {
    const int m = o.m > 0 ? o.m : vlab::default_m(o.eps);
    return vlab::make_grid(o.eps, m);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for distributed-delay renewal equations"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");

    CommonOpts o;
    double fprime0 = -4.0;
    double horizon = 50.0;
    double tol = 1e-8;
    int max_iter = 500;
    double relax = 1.0;
    long n_samples = 200001;
    std::string b0_str = "const:1";
    std::string eps_list_str = "0.3,0.1,0.03,0.01";
    std::string interval_str = "1.25,1.75";
    std::string input_csv;
    double alpha_override = 0.0;
    double alpha_ricker = std::exp(3.1);
    double mu = 0.2;

    CLI::App* c_validate = app.add_subcommand("validate", "check the feedback assumptions");
    add_f_options(c_validate, o);
    c_validate->add_option("--n-samples", n_samples, "sampling resolution");
    c_validate->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_sim = app.add_subcommand("simulate", "extend initial data and classify");
    add_f_options(c_sim, o);
    c_sim->add_option("--eps", o.eps, "window width")->required();
    c_sim->add_option("--m", o.m, "half-window subintervals (0: default)");
    c_sim->add_option("--horizon", horizon, "extension horizon");
    c_sim->add_option("--b0", b0_str, "const:<v> or generator:tau=..,factor=..");
    c_sim->add_option("--seed", o.seed, "generator seed");
    c_sim->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_per = app.add_subcommand("periodic", "locate a periodic orbit");
    add_f_options(c_per, o);
    c_per->add_option("--eps", o.eps, "window width")->required();
    c_per->add_option("--m", o.m, "half-window subintervals (0: default)");
    c_per->add_option("--tol", tol, "fixed-point tolerance");
    c_per->add_option("--max-iter", max_iter, "iteration cap");
    c_per->add_option("--relax", relax, "damping factor in (0,1]");
    c_per->add_option("--b0", b0_str, "starting data");
    c_per->add_option("--seed", o.seed, "generator seed");
    c_per->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_sweep = app.add_subcommand("sweep", "square-wave limit sweep over eps");
    add_f_options(c_sweep, o);
    c_sweep->add_option("--eps-list", eps_list_str, "comma-separated eps values");
    c_sweep->add_option("--interval", interval_str, "closed interval avoiding integers");
    c_sweep->add_option("--m", o.m, "m override for every row (0: per-row default)");
    c_sweep->add_option("--tol", tol, "fixed-point tolerance");
    c_sweep->add_option("--max-iter", max_iter, "iteration cap");
    c_sweep->add_option("--b0", b0_str, "starting data (const only)");
    c_sweep->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_mem = app.add_subcommand("membership", "barrier membership of sampled data");
    add_f_options(c_mem, o);
    c_mem->add_option("--input", input_csv, "t,x CSV covering [-1-eps/2, 0]")->required();
    c_mem->add_option("--eps", o.eps, "window width")->required();
    c_mem->add_option("--m", o.m, "half-window subintervals (0: default)");
    c_mem->add_option("--alpha", alpha_override, "override the budget alpha");
    c_mem->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_eig = app.add_subcommand("eigencheck", "discrete eigen-identity residual");
    c_eig->add_option("--eps", o.eps, "window width")->required();
    c_eig->add_option("--fprime0", fprime0, "slope of the linear feedback")->required();
    c_eig->add_option("--m", o.m, "half-window subintervals")->required();
    c_eig->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_eps0 = app.add_subcommand("eps0", "threshold eps_0 for a given f'(0)");
    c_eps0->add_option("--fprime0", fprime0, "f'(0) < -2")->required();
    c_eps0->add_option("--out", o.out_dir, "output directory");

    CLI::App* c_gur = app.add_subcommand("gurtin", "age-structured reduction demo");
    c_gur->add_option("--alpha-ricker", alpha_ricker, "Ricker parameter (> e)");
    c_gur->add_option("--mu", mu, "mortality rate");
    c_gur->add_option("--eps", o.eps, "window width")->required();
    c_gur->add_option("--m", o.m, "half-window subintervals (0: default)");
    c_gur->add_option("--tol", tol, "fixed-point tolerance");
    c_gur->add_option("--max-iter", max_iter, "iteration cap");
    c_gur->add_option("--relax", relax, "damping factor in (0,1]");
    c_gur->add_option("--out", o.out_dir, "output directory");

    // Manual flat-config support: inject file values for options not given on
    // the command line, so explicit flags always win.
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> conflicts;
    try {
        std::string cfg_file;
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] == "--config") {
                cfg_file = args[i + 1];
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                           args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                break;
            }
        }
        if (!cfg_file.empty()) {
            auto kv = read_config_file(cfg_file);
            std::string command;
            if (kv.count("command")) {
                command = kv["command"];
                kv.erase("command");
            }
            if (args.empty() || args[0].rfind("--", 0) == 0) {
                if (command.empty())
                    throw vlab::ConfigError("config file must set command= when none is given");
                args.insert(args.begin(), command);
            } else if (!command.empty() && command != args[0]) {
                throw vlab::ConfigError("config command= conflicts with the subcommand given");
            }
            CLI::App* sub = nullptr;
            for (CLI::App* cand : {c_validate, c_sim, c_per, c_sweep, c_mem, c_eig, c_eps0, c_gur})
                if (cand->get_name() == args[0]) sub = cand;
            if (sub == nullptr) throw vlab::ConfigError("unknown command: " + args[0]);
            for (const auto& [key, val] : kv) {
                const std::string flag = "--" + key;
                if (sub->get_option_no_throw(flag) == nullptr)
                    throw vlab::ConfigError("unknown config key: " + key);
                bool on_cmdline = false;
                for (const auto& a : args)
                    if (a == flag) on_cmdline = true;
                if (on_cmdline) {
                    conflicts.push_back(key);
                    continue;
                }
                args.push_back(flag);
                args.push_back(val);
            }
        }
    } catch (const vlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto t_start = std::chrono::steady_clock::now();
    json summary;
    summary["tool"] = "vlab";
    summary["version"] = kToolVersion;
    summary["kernel_backend"] = vlab::kern::active_backend().name;
    summary["seed"] = o.seed;
    if (!conflicts.empty()) summary["config_overridden_by_flags"] = conflicts;
    const fs::path out_dir(o.out_dir);

    auto finish = [&](int code) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
        summary["wall_ms"] = ms;
        write_summary(out_dir, summary);
        return code;
    };

    try {
        if (app.got_subcommand(c_validate)) {
            summary["command"] = "validate";
            const auto f = make_spec(o.f_tag, o.slope);
            const auto rep = vlab::validate(f, n_samples);
            json v;
            v["pass"] = rep.pass;
            v["negative_feedback_ok"] = rep.negative_feedback_ok;
            v["fprime0"] = rep.fprime0;
            v["kappas_found"] = rep.kappas_found;
            v["kappa1"] = rep.kappa1;
            v["kappa2"] = rep.kappa2;
            v["tail_ok"] = rep.tail_ok;
            v["violation_count"] = rep.violations.size();
            summary["validate"] = v;
            std::cout << (rep.pass ? "pass" : "fail")
                      << " f'(0)=" << vlab::format_double(rep.fprime0)
                      << " kappa1=" << vlab::format_double(rep.kappa1)
                      << " kappa2=" << vlab::format_double(rep.kappa2) << "\n";
        } else if (app.got_subcommand(c_sim)) {
            summary["command"] = "simulate";
            const auto f = make_spec(o.f_tag, o.slope);
            const vlab::Grid g = resolve_grid(o);
            summary["grid"] = grid_json(g, o.eps);
            const B0Spec b0spec = parse_b0(b0_str);
            vlab::InitialData b0 = vlab::InitialData::constant(g, b0spec.constant);
            if (b0spec.generator) {
                const auto ctx = vlab::budget(f, g);
                summary["barrier_context"] = context_json(ctx);
                const double tau = b0spec.tau > 0.0 ? b0spec.tau : 0.5 * ctx.eps;
                b0 = vlab::generate_initial(ctx, tau, b0spec.factor, o.seed);
            }
            const vlab::Trajectory x = vlab::extend(b0, f, horizon);
            fs::create_directories(out_dir);
            vlab::write_trajectory_csv((out_dir / "trajectory.csv").string(), x);
            const auto verdict = vlab::classify(x, g.eps, horizon);
            json cls;
            cls["slowly_oscillating"] = verdict.slowly_oscillating;
            cls["degenerate"] = verdict.degenerate;
            cls["crossings"] = verdict.crossing_count;
            cls["min_gap"] = json_safe(verdict.min_gap);
            summary["classification"] = cls;
            std::cout << "horizon " << horizon << ", " << verdict.crossing_count
                      << " crossings, slowly_oscillating="
                      << (verdict.slowly_oscillating ? "true" : "false") << "\n";
        } else if (app.got_subcommand(c_per)) {
            summary["command"] = "periodic";
            const auto f = make_spec(o.f_tag, o.slope);
            const vlab::Grid g = resolve_grid(o);
            summary["grid"] = grid_json(g, o.eps);
            const B0Spec b0spec = parse_b0(b0_str);
            vlab::InitialData b0 = vlab::InitialData::constant(g, b0spec.constant);
            if (b0spec.generator) {
                const auto ctx = vlab::budget(f, g);
                summary["barrier_context"] = context_json(ctx);
                const double tau = b0spec.tau > 0.0 ? b0spec.tau : 0.5 * ctx.eps;
                b0 = vlab::generate_initial(ctx, tau, b0spec.factor, o.seed);
            }
            const auto orbit = vlab::find_periodic(b0, f, tol, max_iter, relax);
            json po;
            po["eps"] = g.eps;
            po["converged"] = orbit.converged;
            po["degenerate"] = orbit.degenerate;
            po["iterations"] = orbit.iterations;
            if (orbit.converged && !orbit.degenerate) {
                po["period"] = orbit.period;
                po["residual"] = orbit.residual;
                po["extremes"] = {orbit.extremes.first, orbit.extremes.second};
                po["tau"] = orbit.tau;
                fs::create_directories(out_dir);
                vlab::write_orbit_csv((out_dir / "orbit.csv").string(), orbit);
                std::cout << "period " << vlab::format_double(orbit.period) << " residual "
                          << vlab::format_double(orbit.residual) << " iterations "
                          << orbit.iterations << "\n";
            } else if (orbit.degenerate) {
                std::cout << "collapsed to the trivial equilibrium (degenerate)\n";
            } else {
                if (!orbit.history.empty()) {
                    const std::size_t tail = std::min<std::size_t>(10, orbit.history.size());
                    po["distance_history_tail"] =
                        std::vector<double>(orbit.history.end() - tail, orbit.history.end());
                }
                summary["periodic"] = po;
                summary["status"] = "non-convergence";
                std::cout << "did not converge in " << max_iter << " iterations\n";
                return finish(1);
            }
            summary["periodic"] = po;
        } else if (app.got_subcommand(c_sweep)) {
            summary["command"] = "sweep";
            const auto f = make_spec(o.f_tag, o.slope);
            const auto eps_list = parse_list(eps_list_str);
            const auto interval = parse_list(interval_str);
            if (eps_list.empty()) throw vlab::ConfigError("--eps-list is empty");
            if (interval.size() != 2) throw vlab::ConfigError("--interval needs lo,hi");
            const B0Spec b0spec = parse_b0(b0_str);
            vlab::SweepOptions opt;
            opt.interval = {interval[0], interval[1]};
            opt.tol = tol;
            opt.max_iter = max_iter;
            opt.b0_constant = b0spec.constant;
            opt.m_override = o.m;
            const auto rows = vlab::sweep(f, eps_list, opt);
            fs::create_directories(out_dir);
            vlab::write_sweep_csv((out_dir / "sweep.csv").string(), rows);
            json jrows = json::array();
            bool all_converged = true;
            for (const auto& r : rows) {
                json jr;
                jr["eps"] = r.eps;
                jr["m"] = r.m;
                jr["converged"] = r.converged;
                jr["iterations"] = r.iterations;
                if (r.converged) {
                    jr["period"] = r.period;
                    jr["sup_error"] = r.sup_error_on_I;
                    jr["l1_error"] = r.l1_error;
                    jr["overshoot"] = r.overshoot;
                    jr["undershoot"] = r.undershoot;
                    vlab::write_orbit_csv(
                        (out_dir / ("orbit_eps" + vlab::format_double(r.eps) + ".csv")).string(),
                        r.orbit);
                } else {
                    all_converged = false;
                }
                jrows.push_back(jr);
            }
            summary["sweep"] = jrows;
            std::cout << "sweep wrote " << rows.size() << " rows\n";
            if (!all_converged) {
                summary["status"] = "non-convergence";
                return finish(1);
            }
        } else if (app.got_subcommand(c_mem)) {
            summary["command"] = "membership";
            const auto f = make_spec(o.f_tag, o.slope);
            const vlab::Grid g = resolve_grid(o);
            summary["grid"] = grid_json(g, o.eps);
            auto ctx = vlab::budget(f, g);
            if (alpha_override > 0.0) {
                ctx.alpha = alpha_override;
                if (ctx.alpha * ctx.lambda0 > std::min(ctx.alpha0, ctx.a0))
                    summary["warning"] =
                        "alpha override violates alpha*lambda0 <= min(alpha0, a0)";
            }
            summary["barrier_context"] = context_json(ctx);
            std::vector<double> tv, xv;
            vlab::read_tx_csv(input_csv, tv, xv);
            vlab::InitialData b;
            b.grid = g;
            if (xv.size() != b.expected_size())
                throw vlab::ConfigError("input CSV node count does not match the grid");
            b.samples = xv;
            const auto rep = vlab::membership(b, ctx);
            json jm;
            jm["member"] = rep.member;
            jm["tau"] = rep.tau;
            jm["tau_star"] = rep.tau_star;
            jm["worst_lower_violation"] = rep.worst_lower_violation;
            jm["worst_upper_violation"] = rep.worst_upper_violation;
            jm["sup_norm"] = rep.sup_norm;
            if (!rep.member) jm["reason"] = rep.reason;
            summary["membership"] = jm;
            std::cout << (rep.member ? "member" : "not a member")
                      << " tau=" << vlab::format_double(rep.tau) << "\n";
        } else if (app.got_subcommand(c_eig)) {
            summary["command"] = "eigencheck";
            if (o.m <= 0) throw vlab::ConfigError("--m must be positive");
            const double res = vlab::eigencheck(o.eps, fprime0, o.m);
            summary["eigencheck"] = {{"eps", o.eps}, {"fprime0", fprime0}, {"m", o.m},
                                     {"residual", res}};
            std::cout << "residual " << vlab::format_double(res) << "\n";
        } else if (app.got_subcommand(c_eps0)) {
            summary["command"] = "eps0";
            const double e0 = vlab::eps0(fprime0);
            summary["eps0"] = {{"fprime0", fprime0}, {"value", e0}};
            std::cout << vlab::format_double(e0) << "\n";
        } else if (app.got_subcommand(c_gur)) {
            summary["command"] = "gurtin";
            const auto cfg = vlab::make_gurtin_config(alpha_ricker, mu, o.eps);
            const vlab::Grid g = resolve_grid(o);
            summary["grid"] = grid_json(g, o.eps);
            json jg;
            jg["alpha"] = cfg.alpha;
            jg["mu"] = cfg.mu;
            jg["kappa"] = cfg.kappa;
            jg["x_star"] = cfg.x_star;
            jg["x_clamp"] = cfg.x_clamp;
            jg["f_norm"] = cfg.f_norm;
            jg["f_of_norm"] = cfg.f_of_norm;
            jg["clamp_window_ok"] = cfg.clamp_window_ok;
            jg["fprime_kappa"] = cfg.fprime_kappa;
            jg["kernel_convention"] =
                "gamma(a) e^{-mu a} = 1/eps on [1-eps/2, 1+eps/2] (normalized to 1)";
            jg["kernel_check"] = vlab::kernel_check(cfg.mu, g.eps, g.m);
            const auto demo = vlab::asymptotic_demo(cfg, g, tol, max_iter, relax);
            jg["hypothesis_ok"] = demo.hypothesis_ok;
            jg["converged"] = demo.converged;
            if (demo.converged) {
                jg["relax_used"] = demo.relax_used;
                jg["period"] = demo.zeta_orbit.period;
                jg["residual"] = demo.zeta_orbit.residual;
                jg["iterations"] = demo.zeta_orbit.iterations;
                jg["b_min"] = demo.b_min;
                jg["b_residual"] = demo.b_residual;
                summary["gurtin"] = jg;
                fs::create_directories(out_dir);
                vlab::write_trajectory_csv((out_dir / "birth.csv").string(), demo.birth);
                vlab::write_trajectory_csv((out_dir / "capital_b.csv").string(),
                                           demo.capital_b);
                for (const auto& [t, u] : demo.snapshots) {
                    vlab::write_density_csv(
                        (out_dir / ("density_t" + vlab::format_double(t) + ".csv")).string(), u,
                        g.dt);
                }
                std::cout << "kappa " << vlab::format_double(cfg.kappa) << " period "
                          << vlab::format_double(demo.zeta_orbit.period) << " b_min "
                          << vlab::format_double(demo.b_min) << "\n";
            } else if (!demo.hypothesis_ok) {
                jg["warning"] =
                    "hypotheses f'(kappa) < -2 and eps <= eps0 not met; no orbit claimed";
                summary["gurtin"] = jg;
                std::cout << "hypotheses not met (f'(kappa) = "
                          << vlab::format_double(cfg.fprime_kappa) << "); no orbit claimed\n";
            } else {
                summary["gurtin"] = jg;
                summary["status"] = "non-convergence";
                std::cout << "orbit search did not converge\n";
                return finish(1);
            }
        }
    } catch (const vlab::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const vlab::DomainError& e) {
        summary["status"] = "error";
        summary["error"] = e.what();
        std::cerr << "error: " << e.what() << "\n";
        return finish(1);
    } catch (const vlab::NumericsError& e) {
        summary["status"] = "error";
        summary["error"] = e.what();
        std::cerr << "numerical error: " << e.what() << "\n";
        return finish(1);
    }
    if (!summary.contains("status")) summary["status"] = "ok";
    return finish(0);
}
