#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fkop/appendix_props.hpp"
#include "fkop/io.hpp"
#include "fkop/model.hpp"
#include "fkop/rng.hpp"
#include "fkop/simulator.hpp"
#include "fkop/specfun.hpp"
#include "fkop/stable_kernel.hpp"
#include "fkop/verifier.hpp"

namespace {

using nlohmann::json;
using namespace fkop;

constexpr const char* kVersion = "fkop 1.0.0";
constexpr int kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitUsage = 64;

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    json j;
    is >> j;
    return j;
}

SimConfig sim_from_json(const json& j) {
    const auto& m = j.at("model");
    SimConfig cfg;
    cfg.params = make_model(m.value("d", 3), m.value("alpha", 1.5),
                            m.value("kappa", 1.0), m.value("eps", 1e-4));
    cfg.t_final = j.value("t_final", 1.0);
    cfg.dt = j.value("dt", std::min(0.01, cfg.t_final / 100.0));
    cfg.n_paths = j.value("n_paths", 100000L);
    cfg.box = j.value("box", 32.0);
    cfg.grid_n = j.value("grid_n", 64);
    cfg.seed = j.value("seed", 1ULL);
    cfg.n_threads = j.value("n_threads", 0);
    cfg.c_cfl = j.value("c_cfl", 0.25);
    cfg.c_bw = j.value("c_bw", 0.6);
    if (j.contains("eps_schedule"))
        cfg.eps_schedule = j.at("eps_schedule").get<std::vector<double>>();
    if ((cfg.grid_n & (cfg.grid_n - 1)) != 0)
        throw config_error("grid_n must be a power of two");
    cfg.validate();
    return cfg;
}

void write_manifest(const std::string& out_dir, const json& config) {
    json m;
    m["version"] = kVersion;
    m["config_hash"] = fnv1a_hex(config.dump());
    m["seed"] = config.value("seed", 1ULL);
    m["config"] = config;
    atomic_write_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

int cmd_beta(int d, double alpha, double kappa_lo, double kappa_hi, int n,
             const std::string& out) {
    std::ostringstream os;
    os << "kappa,beta,kappa_check\n";
    double prev = 0.0;
    bool monotone = true;
    for (int i = 0; i < n; ++i) {
        const double kappa =
            n == 1 ? kappa_lo
                   : std::pow(10.0, std::log10(kappa_lo) +
                                        (std::log10(kappa_hi) - std::log10(kappa_lo)) *
                                            i / (n - 1));
        const double beta = solve_beta(kappa, d, alpha);
        os << format_double(kappa) << ',' << format_double(beta) << ','
           << format_double(kappa_of_beta(beta, d, alpha)) << "\n";
        if (beta <= prev) monotone = false;
        prev = beta;
    }
    if (out.empty())
        std::cout << os.str();
    else
        atomic_write_file(out, os.str());
    if (!monotone) {
        std::cerr << "beta: curve is not strictly increasing\n";
        return kExitFail;
    }
    return kExitPass;
}

int cmd_kernel(double alpha, const std::string& table_out, int n_radii) {
    const StableKernelTable table(alpha, n_radii);
    if (!table_out.empty()) {
        std::ostringstream os;
        table.export_csv(os);
        atomic_write_file(table_out, os.str());
    }
    const auto k0 = estimate_k0(table);
    const auto k0d = estimate_k0(table, 8, 1250, 4.0);
    std::cout << "alpha " << alpha << "\n";
    std::cout << "normalization " << format_double(table.normalization()) << "\n";
    std::cout << "k0_hat " << format_double(k0.value) << "\n";
    std::cout << "k0_hat_dilated " << format_double(k0d.value) << "\n";
    const bool ok = std::fabs(table.normalization() - 1.0) < 1e-6 &&
                    std::fabs(k0d.value - k0.value) <= 0.01 * k0.value;
    return ok ? kExitPass : kExitFail;
}

int cmd_simulate(const std::string& config_path) {
    const json j = load_config(config_path);
    SimConfig cfg = sim_from_json(j);
    const std::string out_dir = j.value("output_dir", ".");
    std::filesystem::create_directories(out_dir);
    write_manifest(out_dir, j);

    const StableKernelTable table(cfg.params.alpha);
    Vec3 x0{0, 0, 0};
    if (j.contains("x0")) {
        const auto v = j.at("x0").get<std::vector<double>>();
        x0 = {v.at(0), v.at(1), v.at(2)};
    }
    std::vector<Vec3> ys;
    if (j.contains("y_points")) {
        for (const auto& row : j.at("y_points"))
            ys.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                          row.at(2).get<double>()});
    } else {
        const double T = std::pow(cfg.t_final, 1.0 / cfg.params.alpha);
        for (double r : {0.2, 0.5, 1.0, 2.0, 5.0}) ys.push_back({r * T, 0, 0});
    }
    const KernelField field = estimate_kernel(x0, cfg.t_final, ys, cfg);
    std::ostringstream os;
    field.write_csv(os);
    atomic_write_file(out_dir + "/kernel_field.csv", os.str());
    std::cout << "wrote " << out_dir << "/kernel_field.csv ("
              << field.points.size() << " points)\n";

    if (!cfg.eps_schedule.empty()) {
        std::ostringstream es;
        es << "eps,w1_to_next\n";
        std::vector<std::vector<double>> radii;
        for (std::size_t i = 0; i < cfg.eps_schedule.size(); ++i) {
            SimConfig c2 = cfg;
            c2.params.eps = cfg.eps_schedule[i];
            const auto ends = euler_paths(x0, c2, 0, (i + 1) << 40);
            std::vector<double> rs(ends.size());
            for (std::size_t k = 0; k < ends.size(); ++k)
                rs[k] = (ends[k] - x0).norm();
            radii.push_back(std::move(rs));
        }
        for (std::size_t i = 0; i + 1 < radii.size(); ++i)
            es << format_double(cfg.eps_schedule[i]) << ','
               << format_double(wasserstein1(radii[i], radii[i + 1])) << "\n";
        atomic_write_file(out_dir + "/eps_study.csv", es.str());
        std::cout << "wrote " << out_dir << "/eps_study.csv\n";
    }
    return kExitPass;
}

int cmd_verify(const std::string& config_path, std::vector<std::string> theorems) {
    const json j = load_config(config_path);
    VerifierConfig vc;
    vc.sim = sim_from_json(j);
    if (j.contains("verifier")) {
        const auto& v = j.at("verifier");
        vc.pde_t = v.value("pde_t", vc.pde_t);
        vc.pde_box = v.value("pde_box", vc.pde_box);
        vc.pde_n = v.value("pde_n", vc.pde_n);
        vc.pde_n_refined = v.value("pde_n_refined", vc.pde_n_refined);
        if (v.contains("ts_mc")) vc.ts_mc = v.at("ts_mc").get<std::vector<double>>();
    }
    const std::string out_dir = j.value("output_dir", ".");
    std::filesystem::create_directories(out_dir);
    write_manifest(out_dir, j);

    const std::vector<std::string> all = {"NIE_w",        "UB_std",
                                          "ULB_w",        "LB_std",
                                          "L1_desing",    "integral_lower",
                                          "annulus"};
    if (theorems.empty()) theorems = all;
    for (const auto& th : theorems)
        if (std::find(all.begin(), all.end(), th) == all.end()) {
            std::cerr << "unknown theorem id: " << th << "\n";
            return kExitUsage;
        }

    const bool needs_field =
        std::any_of(theorems.begin(), theorems.end(), [&](const std::string& s) {
            return s == "NIE_w" || s == "UB_std" || s == "ULB_w" || s == "LB_std";
        });
    KernelField field, field_ref;
    const StableKernelTable table(vc.sim.params.alpha);
    if (needs_field) {
        field = build_mc_field(vc, false);
        field_ref = build_mc_field(vc, true);
        const KernelField pde = build_pde_field(vc, false);
        const KernelField pde_ref = build_pde_field(vc, true);
        field.points.insert(field.points.end(), pde.points.begin(), pde.points.end());
        field_ref.points.insert(field_ref.points.end(), pde_ref.points.begin(),
                                pde_ref.points.end());
    }

    std::vector<BoundReport> reports;
    double nu_hat = 0.25;  // conservative default when integral_lower not run
    for (const auto& th : theorems) {
        if (th == "NIE_w")
            reports.push_back(verify_nie_w(field, field_ref, vc.sim.params));
        else if (th == "UB_std")
            reports.push_back(verify_standard_ub(field, field_ref, table, vc.sim.params));
        else if (th == "ULB_w")
            reports.push_back(verify_two_sided(field, field_ref, table, vc.sim.params));
        else if (th == "LB_std")
            reports.push_back(
                verify_lower_standard(field, field_ref, table, vc.sim.params));
        else if (th == "L1_desing")
            reports.push_back(verify_desingularizing_l1(vc));
        else if (th == "integral_lower") {
            reports.push_back(verify_integral_lower(vc));
            nu_hat = reports.back().extras["nu_hat"];
        } else if (th == "annulus")
            reports.push_back(verify_annulus_bounds(vc, nu_hat));
    }

    int exit_code = kExitPass;
    std::ostringstream table_os;
    for (const auto& r : reports) {
        atomic_write_file(out_dir + "/" + r.theorem_id + ".json", r.to_json() + "\n");
        atomic_write_file(out_dir + "/" + r.theorem_id + ".txt", r.to_text() + "\n");
        table_os << r.to_text() << "\n";
        if (r.verdict == Verdict::kFail) exit_code = kExitFail;
        if (r.verdict == Verdict::kInconclusive && exit_code == kExitPass)
            exit_code = kExitInconclusive;
    }
    std::cout << table_os.str();
    return exit_code;
}

int cmd_props(long n_draws, std::uint64_t seed, const std::string& out) {
    RngStream rng(seed, 0);
    long violations = 0;
    for (long i = 0; i < n_draws; ++i) {
        const double s = 100.0 * rng.uniform();
        const double t = 100.0 * rng.uniform();
        const double r = 1.0 + 19.0 * rng.uniform();
        const double b = 2.0 * rng.uniform() - 1.0;
        for (const auto& c : lemma_b1_check(s, t, r, b))
            if (!c.holds) ++violations;
    }
    std::ostringstream os;
    os << "r,kappa_r\n";
    for (double r = 1.1; r <= 20.05; r += 0.7)
        os << format_double(r) << ',' << format_double(kappa_r(r)) << "\n";
    if (!out.empty()) atomic_write_file(out, os.str());

    const auto ex = extrapolation_constant(
        {1.0, 2.0, Exponent::finite(4.0), 1.0, 1.0, 1.0});
    std::cout << "draws " << n_draws << " violations " << violations << "\n";
    std::cout << "kappa_r(2) " << format_double(kappa_r(2.0)) << "\n";
    std::cout << "extrapolation_example_M " << format_double(ex.M) << "\n";
    return violations == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the fractional Kolmogorov operator "
                 "(-Delta)^{a/2} - kappa |x|^{-a} x . grad"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* beta = app.add_subcommand("beta", "kappa -> beta curve as CSV");
    int d = 3;
    double alpha = 1.5, kappa_lo = 1e-3, kappa_hi = 1e3;
    int n_grid = 61;
    std::string out;
    beta->add_option("--d", d, "dimension (>= 3)");
    beta->add_option("--alpha", alpha, "stability index in (1,2)");
    beta->add_option("--kappa-lo", kappa_lo, "grid start");
    beta->add_option("--kappa-hi", kappa_hi, "grid end");
    beta->add_option("--n", n_grid, "grid size (1 = single kappa at kappa-lo)");
    beta->add_option("--out", out, "output CSV (stdout if omitted)");

    auto* kernel = app.add_subcommand("kernel", "stable kernel table + k0-hat");
    double kalpha = 1.5;
    int n_radii = 2048;
    std::string table_out;
    kernel->add_option("--alpha", kalpha, "stability index in (0,2]");
    kernel->add_option("--table-out", table_out, "CSV table output path");
    kernel->add_option("--n-radii", n_radii, "table resolution");

    auto* simulate = app.add_subcommand("simulate", "MC kernel field from a config");
    std::string sim_config;
    simulate->add_option("--config", sim_config, "JSON experiment config")->required();

    auto* verify = app.add_subcommand("verify", "theorem verification suite");
    std::string ver_config;
    std::vector<std::string> theorems;
    verify->add_option("--config", ver_config, "JSON experiment config")->required();
    verify->add_option("--theorems", theorems, "subset of theorem ids");

    auto* props = app.add_subcommand("props", "appendix property suite");
    long n_draws = 100000;
    std::uint64_t seed = 1;
    std::string props_out;
    props->add_option("--draws", n_draws, "random draws");
    props->add_option("--seed", seed, "rng seed");
    props->add_option("--kappa-table", props_out, "kappa_r table CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (beta->parsed()) {
            if (d < 3 || !(alpha > 1.0 && alpha < 2.0) || kappa_lo <= 0.0 ||
                n_grid < 1) {
                std::cerr << "beta: invalid ranges\n";
                return kExitUsage;
            }
            return cmd_beta(d, alpha, kappa_lo, kappa_hi, n_grid, out);
        }
        if (kernel->parsed()) return cmd_kernel(kalpha, table_out, n_radii);
        if (simulate->parsed()) return cmd_simulate(sim_config);
        if (verify->parsed()) return cmd_verify(ver_config, theorems);
        if (props->parsed()) return cmd_props(n_draws, seed, props_out);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
