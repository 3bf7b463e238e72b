#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fkop/model.hpp"
#include "fkop/simulator.hpp"
#include "fkop/stable_kernel.hpp"

namespace fkop {

// Named subset of the (t, x, y) design.
struct Regime {
    std::string name;
    std::function<bool(double, const Vec3&, const Vec3&)> contains;
};
Regime regime_near_origin_y(double alpha, double c = 1.0);  // |y| <  c t^{1/a}
Regime regime_far_x(double alpha, double D);                // |x| >= D t^{1/a}
Regime regime_both_far(double alpha, double r);             // both >= r t^{1/a}

enum class Verdict { kPass, kInconclusive, kFail };
std::string to_string(Verdict v);

struct BoundReport {
    std::string theorem_id;
    std::string regime;
    std::string statistic;  // "sup" or "inf"
    double value = 0.0;
    std::vector<double> refinement_trend;  // coarse -> fine
    double refinement_drift = 0.0;         // relative change across the trend
    Verdict verdict = Verdict::kInconclusive;
    std::string detail;
    std::map<std::string, double> extras;

    std::string to_json() const;
    std::string to_text() const;
};

// Experiment-level configuration shared by the theorem verifications.
struct VerifierConfig {
    SimConfig sim;                          // params, n_paths, seed, threads
    std::vector<double> ts_mc = {0.25, 1.0};
    std::vector<double> x_radii = {0.0, 0.2, 1.0, 2.0, 5.0, 20.0};
    std::vector<double> y_radii = {0.05, 0.2, 1.0, 2.0, 5.0, 20.0};
    std::vector<double> y_small = {0.02, 0.03, 0.05, 0.08, 0.12, 0.3, 0.5};
    // Fokker-Planck delta run used for near-origin y structure.
    double pde_t = 4.0;
    double pde_box = 20.0;
    int pde_n = 64;
    // Refinement factors for the stability trend.
    double refine_paths_factor = 2.0;
    int pde_n_refined = 128;
};

// Assembles the MC kernel field over the default (t, x, y) design; the
// refined variant multiplies the path count.
KernelField build_mc_field(const VerifierConfig& vc, bool refined = false);

// Fokker-Planck delta started at x0 = 0: shell averages of the evolved grid
// give e^{-tLambda}(0, y) on every resolved radius (backend "PDE").
KernelField build_pde_field(const VerifierConfig& vc, bool refined = false);

// Theorem experiments. Field-based ops take the coarse and refined fields and
// report the refinement drift of their statistic.
BoundReport verify_nie_w(const KernelField& f, const KernelField& f_ref,
                         const ModelParams& p);
BoundReport verify_standard_ub(const KernelField& f, const KernelField& f_ref,
                               const StableKernelTable& tab, const ModelParams& p);
BoundReport verify_two_sided(const KernelField& f, const KernelField& f_ref,
                             const StableKernelTable& tab, const ModelParams& p);
BoundReport verify_lower_standard(const KernelField& f, const KernelField& f_ref,
                                  const StableKernelTable& tab, const ModelParams& p);
// Desingularizing L1 corollaries via the adjoint Feynman-Kac estimator at
// |x| in {0.05,...,2} t^{1/alpha} (the grid cannot resolve the small radii).
BoundReport verify_desingularizing_l1(const VerifierConfig& vc);
// Integral lower bound <psi_t u(t)> >= nu <psi_t h> over a family of bumps.
BoundReport verify_integral_lower(const VerifierConfig& vc);
// Annulus two-sided mass bounds; scans (r, R) pairs and reports the first
// pair for which both bounds hold on every grid point of B(0, t^{1/alpha}).
BoundReport verify_annulus_bounds(const VerifierConfig& vc, double nu_hat);

// Chapman-Kolmogorov spot check: <e^{-tL}(x,.), e^{-tL}(.,y)> vs
// e^{-2tL}(x,y), both via the PDE backend.
struct CkCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
};
std::vector<CkCheck> chapman_kolmogorov_check(const VerifierConfig& vc, int n_pairs);

}  // namespace fkop
