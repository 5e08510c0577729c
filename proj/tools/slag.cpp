// slag: special Lagrangian profile-curve toolbox.
//
// Subcommands bind the action registry, the exponential-sum calibration
// algebra, the level-curve tracer, the Monge-Ampere determinant checks and
// the complex-quadric verifier into reproducible batch runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slag/calibration.hpp"
#include "slag/monge_ampere.hpp"
#include "slag/quadric.hpp"
#include "slag/registry.hpp"
#include "slag/tracer.hpp"

using nlohmann::json;
using namespace slag;

namespace {

cplx parse_complex_pair(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected \"re,im\", got \"" + s + "\"");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected \"re,im\", got \"" + s + "\"");
    }
}

std::vector<double> parse_doubles(const std::string& s, size_t count,
                                  const char* what) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string field;
    while (std::getline(is, field, ',')) out.push_back(std::stod(field));
    if (out.size() != count)
        throw CLI::ValidationError(std::string(what) + ": expected " +
                                   std::to_string(count) + " comma-separated values");
    return out;
}

void write_output(const std::optional<std::string>& path,
                  const std::string& text) {
    if (path) {
        std::ofstream out(*path, std::ios::binary);
        if (!out) throw error("cannot open output file \"" + *path + "\"");
        out << text;
    } else {
        std::cout << text;
    }
}

json expsum_to_json(const ExpPoly& p) {
    json terms = json::array();
    for (const auto& t : p.terms())
        terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}},
                         {"powers", t.powers},
                         {"lattice", t.lattice}});
    return json{{"frame", {{"basis", p.frame().basis()}}}, {"terms", terms}};
}

struct SphereParams {
    int n = 0, p = 0;
};

// sphere-n{N}-p{P} actions are the ones the quadric model can embed
std::optional<SphereParams> sphere_params(const std::string& name) {
    int n = 0, p = 0;
    if (std::sscanf(name.c_str(), "sphere-n%d-p%d", &n, &p) == 2)
        return SphereParams{n, p};
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "slag: constructs and verifies special Lagrangian profile curves of "
        "prescribed phase for Hermann actions on complexified symmetric "
        "spaces.\nThe core object is the calibration integrand\n"
        "  F(tau) = e^{i theta} * prod_V sin^{m_V}(beta.tau) * prod_H "
        "cos^{m_H}(beta.tau)\nwhose iterated antiderivative Fhat has the "
        "property that curves with Im Fhat = const solve Im(F * prod "
        "tau_i') = 0."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string registry_path_flag;
    app.add_option("--registry", registry_path_flag,
                   "registry JSON file merged over the built-in catalog")
        ->envname("SLAG_REGISTRY");

    auto load = [&]() {
        std::optional<std::string> p;
        if (!registry_path_flag.empty()) p = registry_path_flag;
        return load_catalog(p);
    };

    unsigned long long rng_seed = 42;
    app.add_option("--rng-seed", rng_seed,
                   "seed for any randomized sampling (default 42)");

    // ---- actions ----
    auto* actions = app.add_subcommand(
        "actions",
        "inspect the catalog of Hermann actions (restricted roots beta with "
        "multiplicities m_V = dim(p_beta ^ q), m_H = dim(p_beta ^ h))");
    actions->fallthrough();
    actions->require_subcommand(1);
    bool actions_json = false;
    auto* alist = actions->add_subcommand("list", "list names, rank, family");
    alist->fallthrough();
    alist->add_flag("--json", actions_json, "emit the full registry as JSON");
    std::string show_name;
    auto* ashow = actions->add_subcommand("show", "dump one action as JSON");
    ashow->fallthrough();
    ashow->add_option("--action", show_name, "action name or display name")
        ->required();
    auto* avalidate = actions->add_subcommand(
        "validate",
        "run every catalog invariant and print per-entry validation notes");
    avalidate->fallthrough();

    // ---- expsum ----
    auto* expsum = app.add_subcommand(
        "expsum",
        "expand the calibration integrand F (or its primitive Fhat) into the "
        "canonical exponential sum sum_k c_k tau^alpha e^{i lambda_k . tau}");
    expsum->fallthrough();
    expsum->require_subcommand(1);
    std::string dump_action;
    double dump_theta = 0.0;
    bool dump_primitive = false;
    std::optional<std::string> dump_out;
    auto* edump = expsum->add_subcommand("dump", "write the term list as JSON");
    edump->fallthrough();
    edump->add_option("--action", dump_action)->required();
    edump->add_option("--theta", dump_theta, "phase in radians");
    edump->add_flag("--primitive", dump_primitive,
                    "dump Fhat = iterated antiderivative instead of F");
    std::string dump_out_s;
    edump->add_option("--out", dump_out_s, "output path (default stdout)");

    // ---- trace ----
    auto* trace = app.add_subcommand(
        "trace",
        "integrate tau' = conj(F)/|F| from a seed; the trajectory is the "
        "level curve of Im Fhat through the seed and satisfies the phase-"
        "theta condition Im(F tau') = 0");
    std::string trace_action, trace_seed, trace_out;
    double trace_theta = 0.0, trace_step = 1e-3, trace_ctol = 1e-12,
           trace_stop = 1e-9;
    int trace_steps = 2000;
    bool trace_no_normalize = false;
    std::string scan_window, scan_grid;
    double scan_level = 0.0;
    trace->fallthrough();
    trace->add_option("--action", trace_action)->required();
    trace->add_option("--theta", trace_theta, "phase in radians");
    trace->add_option("--seed", trace_seed, "seed tau as \"re,im\"");
    trace->add_option("--step", trace_step, "RK4 step (default 1e-3)");
    trace->add_option("--steps", trace_steps, "max steps (default 2000)");
    trace->add_option("--correction-tol", trace_ctol,
                      "level-projection threshold (default 1e-12)");
    trace->add_option("--stop-speed", trace_stop,
                      "halt when |F| drops below this (default 1e-9)");
    trace->add_flag("--no-normalize", trace_no_normalize,
                    "integrate conj(F) instead of conj(F)/|F|");
    trace->add_option("--out", trace_out, "curve CSV output path");
    trace->add_option("--scan-window", scan_window,
                      "phi0,phi1,rho0,rho1: list Im Fhat = level crossings "
                      "instead of tracing");
    trace->add_option("--scan-grid", scan_grid, "nx,ny for --scan-window");
    trace->add_option("--level", scan_level, "level for --scan-window");

    // ---- verify ----
    auto* verify = app.add_subcommand(
        "verify",
        "re-evaluate Im(F * prod tau_i') and the Im Fhat level drift on a "
        "stored curve CSV");
    std::string verify_action, verify_curve_path;
    double verify_theta = 0.0;
    bool verify_json = false;
    verify->fallthrough();
    verify->add_option("--action", verify_action)->required();
    verify->add_option("--theta", verify_theta, "phase in radians");
    verify->add_option("--curve", verify_curve_path, "curve CSV path")
        ->required();
    verify->add_flag("--json", verify_json);

    // ---- ma ----
    auto* ma = app.add_subcommand(
        "ma",
        "Monge-Ampere determinant checks for the radial profile f with "
        "(f')^r = a log y + b: det(2 x_i x_j f'' + f' d_ij) vs the rank-one "
        "update value f'^{r-1}(f' + 2 f''|x|^2) and vs the constant 2a/r");
    int ma_r = 2, ma_grid = 64;
    double ma_a = 3.0, ma_b = 1.0, ma_c0 = 1.0;
    bool ma_json = false;
    std::string ma_out;
    ma->fallthrough();
    ma->add_option("--r", ma_r, "rank (matrix size)");
    ma->add_option("--a", ma_a);
    ma->add_option("--b", ma_b);
    ma->add_option("--c0", ma_c0, "integration constant of f (default 1)");
    ma->add_option("--grid", ma_grid, "number of sample points (default 64)");
    ma->add_flag("--json", ma_json);
    ma->add_option("--out", ma_out, "report output path");

    // ---- quadric ----
    auto* quadric = app.add_subcommand(
        "quadric",
        "trace a sphere-action profile curve, sweep it into the complex "
        "quadric sum z_k^2 = 1, and verify omega|_L = 0, constancy of "
        "arg Omega(frame) and the moment-map zero level along it");
    std::string q_action = "sphere-n2-p1", q_seed = "0.5,0.2", q_out;
    double q_theta = 0.0, q_step = 1e-3, q_a = 1.0, q_b = 1.0, q_c0 = 1.0;
    int q_steps = 2000, q_stride = 50;
    bool q_json = false;
    quadric->fallthrough();
    quadric->add_option("--action", q_action,
                        "a sphere-n{N}-p{P} action (N in {2,3})");
    quadric->add_option("--theta", q_theta, "phase in radians");
    quadric->add_option("--seed", q_seed, "seed tau as \"re,im\"");
    quadric->add_option("--step", q_step);
    quadric->add_option("--steps", q_steps);
    quadric->add_option("--stride", q_stride,
                        "verify every k-th curve sample (default 50)");
    quadric->add_option("--a", q_a, "profile parameter a");
    quadric->add_option("--b", q_b, "profile parameter b");
    quadric->add_option("--c0", q_c0, "profile constant c");
    quadric->add_flag("--json", q_json);
    quadric->add_option("--out", q_out, "report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }

    try {
        if (*alist) {
            ActionCatalog cat = load();
            if (actions_json) {
                std::cout << cat.serialize().dump(2) << "\n";
            } else {
                std::printf("%-34s %-5s %-7s %s\n", "name", "rank", "family",
                            "display");
                for (const auto& a : cat.actions())
                    std::printf("%-34s %-5d %-7s %s\n", a.name.c_str(), a.rank,
                                family_name(a.family).c_str(),
                                a.display.c_str());
            }
        } else if (*ashow) {
            ActionCatalog cat = load();
            std::cout << to_json(cat.lookup(show_name)).dump(2) << "\n";
        } else if (*avalidate) {
            ActionCatalog cat = load();
            int notes = 0;
            for (const auto& a : cat.actions()) {
                a.validate();
                if (a.notes) {
                    std::cout << a.name << ": " << *a.notes << "\n";
                    ++notes;
                }
            }
            std::cout << cat.size() << " actions valid, " << notes
                      << " with validation notes\n";
        } else if (*edump) {
            ActionCatalog cat = load();
            CalibrationSpec spec(cat.lookup(dump_action), dump_theta);
            ExpPoly P =
                dump_primitive ? build_primitive(spec) : build_integrand(spec);
            std::optional<std::string> out;
            if (!dump_out_s.empty()) out = dump_out_s;
            write_output(out, expsum_to_json(P).dump(2) + "\n");
        } else if (*trace) {
            ActionCatalog cat = load();
            CalibrationSpec spec(cat.lookup(trace_action), trace_theta);
            if (!scan_window.empty()) {
                auto w = parse_doubles(scan_window, 4, "--scan-window");
                int nx = 32, ny = 32;
                if (!scan_grid.empty()) {
                    auto g = parse_doubles(scan_grid, 2, "--scan-grid");
                    nx = static_cast<int>(g[0]);
                    ny = static_cast<int>(g[1]);
                }
                SeedWindow win{w[0], w[1], w[2], w[3]};
                auto seeds =
                    scan_seeds(spec, win, nx, ny, scan_level, trace_stop);
                for (const auto& s : seeds)
                    std::cout << format_g17(s.real()) << ","
                              << format_g17(s.imag()) << "\n";
                std::cerr << seeds.size() << " seeds with |Im Fhat - L| <= 1e-10\n";
            } else {
                if (trace_seed.empty())
                    throw CLI::ValidationError("--seed is required for tracing");
                TraceOptions opts;
                opts.step = trace_step;
                opts.max_steps = trace_steps;
                opts.correction_tol = trace_ctol;
                opts.stop_speed = trace_stop;
                opts.normalize = !trace_no_normalize;
                ProfileCurve curve =
                    trace_level_curve(spec, parse_complex_pair(trace_seed), opts);
                if (!trace_out.empty()) {
                    std::ofstream out(trace_out, std::ios::binary);
                    if (!out)
                        throw error("cannot open output file \"" + trace_out +
                                    "\"");
                    write_curve_csv(out, spec, curve);
                }
                VerifyReport rep = verify_curve(spec, curve, trace_stop);
                std::printf(
                    "samples=%zu max_raw_residual=%.3e "
                    "max_normalized_residual=%.3e level_drift=%.3e "
                    "singular_hits=%d\n",
                    curve.axes[0].size(), rep.max_raw_residual,
                    rep.max_normalized_residual, rep.level_drift,
                    rep.singular_hits);
            }
        } else if (*verify) {
            ActionCatalog cat = load();
            CalibrationSpec spec(cat.lookup(verify_action), verify_theta);
            std::ifstream in(verify_curve_path);
            if (!in)
                throw error("cannot open curve file \"" + verify_curve_path +
                            "\"");
            ProfileCurve curve = read_curve_csv(in);
            VerifyReport rep = verify_curve(spec, curve);
            if (verify_json) {
                json j{{"max_raw_residual", rep.max_raw_residual},
                       {"max_normalized_residual", rep.max_normalized_residual},
                       {"level_drift", rep.level_drift},
                       {"singular_hits", rep.singular_hits}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::printf(
                    "max_raw_residual=%.3e max_normalized_residual=%.3e "
                    "level_drift=%.3e singular_hits=%d\n",
                    rep.max_raw_residual, rep.max_normalized_residual,
                    rep.level_drift, rep.singular_hits);
            }
        } else if (*ma) {
            ScalarProfile profile(ma_a, ma_b, ma_c0, ma_r);
            std::mt19937_64 rng(rng_seed);
            std::uniform_real_distribution<double> u(-1.5, 1.5);
            std::vector<Eigen::VectorXd> grid;
            for (int i = 0; i < ma_grid; ++i) {
                Eigen::VectorXd x(ma_r);
                for (int j = 0; j < ma_r; ++j) x[j] = u(rng);
                grid.push_back(std::move(x));
            }
            DetReport rep = det_report(profile, grid);
            std::optional<std::string> out;
            if (!ma_out.empty()) out = ma_out;
            if (ma_json || out) {
                write_output(out, rep.to_json().dump(2) + "\n");
            } else {
                std::printf(
                    "assert_A_eq_B=%s (max rel %.3e)\nassert_C_eq_D=%s "
                    "(max rel %.3e)\ndev A vs C: max=%.6g mean=%.6g\ndev A "
                    "vs D: max=%.6g mean=%.6g\n",
                    rep.assert_A_eq_B ? "true" : "false", rep.max_rel_A_vs_B,
                    rep.assert_C_eq_D ? "true" : "false", rep.max_rel_C_vs_D,
                    rep.max_dev_A_vs_C, rep.mean_dev_A_vs_C,
                    rep.max_dev_A_vs_D, rep.mean_dev_A_vs_D);
            }
        } else if (*quadric) {
            auto sp = sphere_params(q_action);
            if (!sp)
                throw domain_error(
                    "quadric: --action must be a sphere-n{N}-p{P} entry");
            if (sp->n != 2 && sp->n != 3)
                throw domain_error("quadric: only n in {2,3} is modeled");
            ActionCatalog cat = load();
            CalibrationSpec spec(cat.lookup(q_action), q_theta);
            TraceOptions opts;
            opts.step = q_step;
            opts.max_steps = q_steps;
            ProfileCurve curve =
                trace_level_curve(spec, parse_complex_pair(q_seed), opts);
            ScalarProfile profile(q_a, q_b, q_c0, 1);
            QuadricCurveReport rep = verify_embedded_curve(
                sp->n, sp->p, profile, curve.axes[0],
                static_cast<size_t>(q_stride));
            std::optional<std::string> out;
            if (!q_out.empty()) out = q_out;
            if (q_json || out) {
                write_output(out, rep.to_json().dump(2) + "\n");
            } else {
                std::printf(
                    "samples=%d max_omega_defect=%.3e phase_drift_rad=%.3e "
                    "moment_max_on_level=%.3e mean_phase=%.6f%s\n",
                    rep.samples, rep.max_omega_defect, rep.phase_drift_rad,
                    rep.moment_max_on_level, rep.mean_phase,
                    rep.any_rank_deficient ? " (rank-deficient samples skipped)"
                                           : "");
            }
        }
    } catch (const slag::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
