#include "fkop/model.hpp"

#include <cmath>
#include <sstream>

#include "fkop/quadrature.hpp"
#include "fkop/specfun.hpp"

namespace fkop {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sphere_area(int d) {
    return 2.0 * std::pow(kPi, 0.5 * d) / gamma_fn(0.5 * d);
}

double kappa_of_beta(double b, int d, double alpha) {
    if (!(b > 0.0 && b < alpha))
        throw domain_error("kappa_of_beta: requires 0 < b < alpha");
    return b * (d + b - 2.0) / (d + b - alpha) *
           gamma_constant(d, d + b - 2.0) / gamma_constant(d, d + b - alpha);
}

double solve_beta(double kappa, int d, double alpha) {
    if (!(kappa > 0.0)) throw domain_error("solve_beta: requires kappa > 0");
    double lo = 1e-12, hi = alpha - 1e-12;
    double flo = kappa_of_beta(lo, d, alpha) - kappa;
    double fhi = kappa_of_beta(hi, d, alpha) - kappa;
    if (!(flo < 0.0 && fhi > 0.0)) {
        std::ostringstream msg;
        msg << "solve_beta: bracket failure for kappa=" << kappa << " (f(lo)=" << flo
            << ", f(hi)=" << fhi << ")";
        throw std::runtime_error(msg.str());
    }
    // Run the bisection down to the representable interval; the round trip
    // kappa_of_beta(solve_beta(k)) is then accurate to ~1e-14 relative, well
    // inside the 1e-10 max(1, kappa) contract even for kappa near 1e-3.
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (kappa_of_beta(mid, d, alpha) < kappa)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ModelParams make_model(int d, double alpha, double kappa, double eps) {
    if (d < 3) throw domain_error("make_model: requires d >= 3");
    if (!(alpha > 1.0 && alpha < 2.0))
        throw domain_error("make_model: requires 1 < alpha < 2");
    if (!(kappa > 0.0)) throw domain_error("make_model: requires kappa > 0");
    if (eps < 0.0) throw domain_error("make_model: requires eps >= 0");
    ModelParams p;
    p.d = d;
    p.alpha = alpha;
    p.kappa = kappa;
    p.eps = eps;
    p.beta = solve_beta(kappa, d, alpha);
    return p;
}

double WeightFamily::eta(double u) const {
    if (!(u > 0.0)) {
        if (u == 0.0) return 0.0;
        throw domain_error("eta: requires u >= 0");
    }
    if (u < 1.0) return std::pow(u, beta);
    if (u <= 2.0) return beta * u * (2.0 - 0.5 * u) + 1.0 - 1.5 * beta;
    return 1.0 + 0.5 * beta;
}

double WeightFamily::eta_prime(double u) const {
    if (u < 1.0) return beta * std::pow(u, beta - 1.0);
    if (u <= 2.0) return beta * (2.0 - u);
    return 0.0;
}

double WeightFamily::eta0(double u) const {
    if (!(u > 0.0)) {
        if (u == 0.0) return 0.0;
        throw domain_error("eta0: requires u >= 0");
    }
    return u < 1.0 ? std::pow(u, beta) : 1.0;
}

double WeightFamily::psi_radial(double s, double r) const {
    if (!(s > 0.0)) throw domain_error("psi: requires s > 0");
    return eta(std::pow(s, -1.0 / alpha) * r);
}

double WeightFamily::psi0_radial(double t, double r) const {
    if (!(t > 0.0)) throw domain_error("psi0: requires t > 0");
    return eta0(std::pow(t, -1.0 / alpha) * r);
}

double WeightFamily::psi_tilde_radial(double s, double r) const {
    if (!(s > 0.0)) throw domain_error("psi_tilde: requires s > 0");
    if (!(r > 0.0)) throw domain_error("psi_tilde: requires r > 0");
    return std::pow(s, -beta / alpha) * std::pow(r, beta);
}

WeightFamily weights_of(const ModelParams& p) { return WeightFamily{p.alpha, p.beta}; }

TimeAvgCheck time_avg_weight_check(const std::function<double(double)>& h_radial,
                                   double r_max, double t, const ModelParams& p) {
    const WeightFamily w = weights_of(p);
    const double area = sphere_area(p.d);
    auto weighted_l1 = [&](double tau) {
        auto f = [&](double r) {
            const double h = h_radial(r);
            if (h < 0.0) throw domain_error("time_avg_weight_check: h must be >= 0");
            // psi_{0,tau} -> 1 pointwise on r > 0 as tau -> 0.
            const double psi0 = tau > 0.0 ? w.psi0_radial(tau, r) : (r > 0.0 ? 1.0 : 0.0);
            return psi0 * h * std::pow(r, p.d - 1);
        };
        return area * adaptive_simpson(f, 0.0, r_max, 1e-12);
    };
    // The tau-integrand has a kink where tau^{1/alpha} crosses the support of
    // h; composite panels keep the adaptive rule honest.
    const int panels = 64;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = t * i / panels, b = t * (i + 1) / panels;
        acc += adaptive_simpson(weighted_l1, a, b, 1e-12 * t);
    }
    TimeAvgCheck out;
    out.lhs = acc / t;
    out.rhs = (2.0 * p.alpha - p.beta) / (p.alpha - p.beta) * weighted_l1(t);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

Vec3 drift(const Vec3& x, const ModelParams& p) {
    const double r = x.norm();
    if (r == 0.0) throw domain_error("drift: singular at x = 0");
    return std::pow(r, -p.alpha) * p.kappa * x;
}

Vec3 drift_eps(const Vec3& x, const ModelParams& p) {
    const double re = std::sqrt(x.norm2() + p.eps);
    return std::pow(re, -p.alpha) * p.kappa * x;
}

double div_drift_eps(const Vec3& x, const ModelParams& p) {
    const double r2 = x.norm2();
    const double re = std::sqrt(r2 + p.eps);
    return p.kappa * (p.d * std::pow(re, -p.alpha) -
                      p.alpha * std::pow(re, -p.alpha - 2.0) * r2);
}

double U_eps(const Vec3& x, const ModelParams& p) {
    const double r = x.norm();
    if (r == 0.0) throw domain_error("U_eps: singular at x = 0");
    const double re = std::sqrt(r * r + p.eps);
    return p.kappa * (p.d + p.beta - p.alpha) *
           (std::pow(r, -p.alpha) - std::pow(re, -p.alpha));
}

double W_eps_div(const Vec3& x, const ModelParams& p) { return div_drift_eps(x, p); }

double W_eps_residual(const Vec3& x, const ModelParams& p) {
    const double r = x.norm();
    if (r == 0.0) throw domain_error("W_eps_residual: singular at x = 0");
    const double ra = std::pow(r, -p.alpha);
    const double re = std::sqrt(r * r + p.eps);
    const double rea = std::pow(re, -p.alpha);
    return p.kappa * (rea - ra) * p.beta +
           p.kappa * (p.d * rea - p.alpha * std::pow(re, -p.alpha - 2.0) * r * r -
                      (p.d - p.alpha) * ra);
}

ThetaDomain theta_and_domain(double s, const ModelParams& p) {
    if (!(s > 0.0)) throw domain_error("theta_and_domain: requires s > 0");
    ThetaDomain out;
    out.theta = (2.0 - p.alpha) * p.d / ((2.0 - p.alpha) * p.d + 8.0 * p.beta);
    out.q_prime = 2.0 / (1.0 - out.theta);
    const WeightFamily w = weights_of(p);
    const double R = std::pow(s, 1.0 / p.alpha);
    const double expo = out.theta * out.q_prime;
    auto f = [&](double r) {
        if (r == 0.0) return 0.0;  // integrand ~ r^{d-1-beta*theta*q'} -> 0
        return std::pow(w.psi_radial(s, r), -expo) * std::pow(r, p.d - 1);
    };
    const double integral = adaptive_simpson(f, 0.0, R, 1e-10 * std::pow(R, p.d));
    out.weighted_norm = std::pow(sphere_area(p.d) * integral, 1.0 / out.q_prime);
    return out;
}

double pos_rem_expression(double v, const ModelParams& p) {
    return p.beta / (v * v) *
           ((p.d + p.beta - 2.0) * std::pow(v, p.beta) + 1.0 -
            (p.d - 1.0) * (2.0 - v) * v);
}

}  // namespace fkop
