#pragma once

#include <functional>

#include "fkop/vec3.hpp"

namespace fkop {

// Problem instance for Lambda = (-Delta)^{alpha/2} - kappa |x|^{-alpha} x . grad.
// beta is the vanishing exponent of the desingularizing weight, derived from
// kappa by the balance equation; eps >= 0 is the mollification parameter
// |x|_eps = sqrt(|x|^2 + eps).
struct ModelParams {
    int d = 3;
    double alpha = 1.5;
    double kappa = 1.0;
    double beta = 0.0;   // derived
    double eps = 1e-4;
};

// Left-hand side of the defining equation for beta:
//   b (d+b-2)/(d+b-alpha) * gamma(d+b-2)/gamma(d+b-alpha) = kappa.
double kappa_of_beta(double b, int d, double alpha);

// Solves the balance equation for beta in (0, alpha) by bisection;
// |kappa_of_beta(beta) - kappa| <= 1e-10 max(1, kappa).
double solve_beta(double kappa, int d, double alpha);

// Validates ranges, solves for beta.
ModelParams make_model(int d, double alpha, double kappa, double eps);

// The weight profile eta and its relatives, parameterized by (alpha, beta).
//   eta(u)  = u^beta            on (0,1)
//           = beta u (2 - u/2) + 1 - (3/2) beta   on [1,2]
//           = 1 + beta/2        on [2, inf)
//   eta0(u) = u^beta on (0,1), 1 on [1, inf)
// psi_s(x) = eta(s^{-1/alpha} |x|), psi0 likewise from eta0, and
// psi_tilde_s(x) = s^{-beta/alpha} |x|^beta (the pure power it matches on the
// parabolic ball).
struct WeightFamily {
    double alpha;
    double beta;

    double eta(double u) const;
    double eta_prime(double u) const;  // exact one-sided derivative, u != 1, 2
    double eta0(double u) const;

    double psi(double s, const Vec3& x) const { return psi_radial(s, x.norm()); }
    double psi0(double t, const Vec3& x) const { return psi0_radial(t, x.norm()); }
    double psi_tilde(double s, const Vec3& x) const {
        return psi_tilde_radial(s, x.norm());
    }

    double psi_radial(double s, double r) const;
    double psi0_radial(double t, double r) const;
    double psi_tilde_radial(double s, double r) const;
};

WeightFamily weights_of(const ModelParams& p);

// Lemma-level check: t^{-1} int_0^t ||psi_{0,tau} h||_1 dtau against
// ((2 alpha - beta)/(alpha - beta)) ||psi_{0,t} h||_1 for a nonnegative radial
// profile h supported on [0, r_max].
struct TimeAvgCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs
    bool holds = false;  // lhs <= rhs (1 + 1e-6)
};
TimeAvgCheck time_avg_weight_check(const std::function<double(double)>& h_radial,
                                   double r_max, double t, const ModelParams& p);

// Drift fields. drift() is singular at x = 0; the mollified variants accept
// all x when eps > 0.
Vec3 drift(const Vec3& x, const ModelParams& p);
Vec3 drift_eps(const Vec3& x, const ModelParams& p);
// div b_eps = kappa (d |x|_eps^{-alpha} - alpha |x|_eps^{-alpha-2} |x|^2).
double div_drift_eps(const Vec3& x, const ModelParams& p);
// U_eps = kappa (d + beta - alpha)(|x|^{-alpha} - |x|_eps^{-alpha}) > 0.
double U_eps(const Vec3& x, const ModelParams& p);
// W_eps in divergence form (same expression as div b_eps).
double W_eps_div(const Vec3& x, const ModelParams& p);
// Residual W_eps = kappa (|x|_eps^{-a} - |x|^{-a}) beta
//                + kappa [d |x|_eps^{-a} - a |x|_eps^{-a-2}|x|^2 - (d-a)|x|^{-a}].
double W_eps_residual(const Vec3& x, const ModelParams& p);

// theta = (2-alpha) d / ((2-alpha) d + 8 beta), q' = 2/(1-theta), and the
// weighted norm ||psi_s^{-theta}||_{L^{q'}(B(0, s^{1/alpha}))} by radial
// quadrature. The norm scales exactly as s^{(d/alpha)/q'}.
struct ThetaDomain {
    double theta = 0.0;
    double q_prime = 0.0;
    double weighted_norm = 0.0;
};
ThetaDomain theta_and_domain(double s, const ModelParams& p);

// Closed-form integrand of the positivity check for Delta(psi~ - psi) on
// 1 < |x| < 2 at s = 1:  beta v^{-2} ((d+beta-2) v^beta + 1 - (d-1)(2-v) v).
double pos_rem_expression(double v, const ModelParams& p);

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

}  // namespace fkop
