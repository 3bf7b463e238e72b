#include "fkop/appendix_props.hpp"

#include <cmath>
#include <limits>

#include "fkop/specfun.hpp"

namespace fkop {

namespace {

bool leq_with_slack(double lhs, double rhs) {
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
    return lhs <= rhs + 1e-12 * scale;
}

IneqCheck make(const std::string& name, double lhs, double rhs) {
    return {name, lhs, rhs, leq_with_slack(lhs, rhs)};
}

}  // namespace

std::vector<IneqCheck> lemma_b1_check(double s, double t, double r, double b) {
    if (s < 0.0 || t < 0.0 || r < 1.0 || b < -1.0 || b > 1.0)
        throw domain_error("lemma_b1_check: requires s,t >= 0, r >= 1, b in [-1,1]");
    const double c_low = 4.0 * (r - 1.0) / (r * r);  // 4/(r r')
    // kappa_r(1+) = 2 (the sup moves to s -> 0); kappa_r itself needs r > 1.
    const double kap = r < 1.0 + 1e-9 ? 2.0 : kappa_r(r);

    const double sh = std::pow(s, 0.5 * r), th = std::pow(t, 0.5 * r);
    const double sr = std::pow(s, r), tr = std::pow(t, r);
    const double sr1 = std::pow(s, r - 1.0), tr1 = std::pow(t, r - 1.0);
    const double cross = s * tr1 + t * sr1;
    const double geo = std::pow(s * t, 0.5 * r);

    std::vector<IneqCheck> out;
    out.push_back(make("l1_lower", c_low * (sh - th) * (sh - th),
                       (s - t) * (sr1 - tr1)));
    out.push_back(make("l1_upper", (s - t) * (sr1 - tr1), (sh - th) * (sh - th)));
    out.push_back(make("l2_lower", (sh + th) * (sh + th), (s + t) * (sr1 + tr1)));
    out.push_back(make("l2_upper", (s + t) * (sr1 + tr1), kap * (sh + th) * (sh + th)));
    out.push_back(make("l3", c_low * (sr + tr + 2.0 * b * geo), sr + tr + b * cross));
    {
        const double bracket = sr + tr - std::sqrt(1.0 - b * b) * cross;
        double rhs;
        if (r == 1.0)
            rhs = bracket <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            rhs = std::fabs(r - 2.0) / (2.0 * std::sqrt(r - 1.0)) * bracket;
        out.push_back(make("l4", std::fabs(b) * std::fabs(s * tr1 - t * sr1), rhs));
    }
    out.push_back(make("l5", sr + tr + b * cross, kap * (sr + tr + 2.0 * b * geo)));
    return out;
}

double Exponent::value() const {
    if (inf_) throw domain_error("Exponent::value: infinite exponent");
    return v_;
}

ExtrapolationResult extrapolation_constant(const ExtrapolationInput& in) {
    if (!(in.p >= 1.0)) throw domain_error("extrapolation_constant: requires p >= 1");
    if (!(in.q > in.p)) throw domain_error("extrapolation_constant: requires q > p");
    if (!in.r.is_infinite() && !(in.r.value() > in.q))
        throw domain_error("extrapolation_constant: requires r > q");
    if (!(in.nu > 0.0)) throw domain_error("extrapolation_constant: requires nu > 0");
    if (!(in.M1 >= 1.0 && in.M2 >= 1.0))
        throw domain_error("extrapolation_constant: requires M1, M2 >= 1");

    ExtrapolationResult out;
    if (in.r.is_infinite())
        out.interp_exponent = (in.q - in.p) / in.q;
    else {
        const double r = in.r.value();
        out.interp_exponent = (r / in.q) * (in.q - in.p) / (r - in.p);
    }
    const double one_minus = 1.0 - out.interp_exponent;
    out.M = std::pow(2.0, in.nu / (one_minus * one_minus)) * in.M1 *
            std::pow(in.M2, 1.0 / one_minus);
    return out;
}

NashConstants nash_constants(const ModelParams& p, double M, double c_S, int m_max) {
    if (!(M > 0.0 && c_S > 0.0))
        throw domain_error("nash_constants: requires positive inputs");
    NashConstants out;
    out.j_prime = static_cast<double>(p.d) / p.alpha;
    out.C = 2.0 * c_S * std::pow(M, -2.0 / out.j_prime) / out.j_prime;
    out.coeff_1_to_2 = std::pow(out.C, -0.5 * out.j_prime);

    const double d_over_a = out.j_prime;
    double log_coeff = 0.0;
    for (int i = 0; i < m_max; ++i) {
        const double r = std::pow(2.0, i);
        const double conj_2r = 2.0 * r / (2.0 * r - 1.0);  // (2r)'
        const double c1 = c_S * (p.alpha / p.d) * 4.0 / conj_2r;
        out.c1_chain.push_back(c1);
        // ||e^{-t_i L}||_{r->2r} <= c1^{-d/(2 a r)} t_i^{-(d/a) 2^{-(i+1)}},
        // with t_i = t 2^{-(i+1)}; collect the t-independent coefficient.
        const double expo = d_over_a * std::pow(2.0, -(i + 1.0));
        log_coeff += -(p.d / (2.0 * p.alpha * r)) * std::log(c1) +
                     expo * (i + 1.0) * std::log(2.0);
        out.telescoped.push_back(std::exp(log_coeff));
    }
    out.c_N = out.telescoped.back();
    return out;
}

B22B23Report b22_b23_verifier(double s, const ModelParams& p) {
    if (!(s > 0.0)) throw domain_error("b22_b23_verifier: requires s > 0");
    B22B23Report rep;
    const auto td = theta_and_domain(s, p);
    rep.theta = td.theta;
    rep.theta_in_range = td.theta > 0.0 && td.theta < 1.0;

    // B22: outside Omega^s the weight is >= 1, so psi^{-theta} <= 1.
    const WeightFamily w = weights_of(p);
    const double R = std::pow(s, 1.0 / p.alpha);
    rep.b22_holds = true;
    for (int i = 0; i <= 200; ++i) {
        const double r = R * (1.0 + 0.1 * i);
        if (std::pow(w.psi_radial(s, r), -td.theta) > 1.0 + 1e-12)
            rep.b22_holds = false;
    }

    // B23: c3 = weighted_norm s^{-(d/alpha)/q'} must not depend on s.
    const double j = p.d / p.alpha;
    double c3_min = 0.0, c3_max = 0.0;
    for (double scale : {0.1, 1.0, 10.0}) {
        const auto r = theta_and_domain(s * scale, p);
        const double c3 = r.weighted_norm * std::pow(s * scale, -j / r.q_prime);
        if (scale == 1.0) rep.c3 = c3;
        c3_min = c3_min == 0.0 ? c3 : std::min(c3_min, c3);
        c3_max = std::max(c3_max, c3);
    }
    rep.c3_spread = (c3_max - c3_min) / c3_min;
    rep.b23_scaling_holds = rep.c3_spread <= 1e-6;
    return rep;
}

}  // namespace fkop
