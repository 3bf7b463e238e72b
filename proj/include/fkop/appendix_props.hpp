#pragma once

#include <string>
#include <vector>

#include "fkop/model.hpp"

namespace fkop {

// One evaluated scalar inequality: lhs <= rhs up to 1e-12 relative slack.
struct IneqCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Evaluates both sides of the elementary estimates (l1)-(l5) at (s, t, r, b):
//  (l1)  4/(rr') (s^{r/2}-t^{r/2})^2 <= (s-t)(s^{r-1}-t^{r-1}) <= (s^{r/2}-t^{r/2})^2
//  (l2)  (s^{r/2}+t^{r/2})^2 <= (s+t)(s^{r-1}+t^{r-1}) <= kappa_r(r) (s^{r/2}+t^{r/2})^2
//  (l3)  4/(rr') (s^r+t^r+2b(st)^{r/2}) <= s^r+t^r+b(st^{r-1}+ts^{r-1})
//  (l4)  |b| |st^{r-1}-ts^{r-1}| <= |r-2|/(2 sqrt(r-1)) [s^r+t^r-sqrt(1-b^2)(st^{r-1}+ts^{r-1})]
//  (l5)  s^r+t^r+b(st^{r-1}+ts^{r-1}) <= kappa_r(r) (s^r+t^r+2b(st)^{r/2})
// Two-sided estimates are listed as _lower/_upper entries.
std::vector<IneqCheck> lemma_b1_check(double s, double t, double r, double b);

// Exponent that is either finite or +infinity; the limit formulas differ
// structurally, so infinity is an explicit variant, never a sentinel float.
class Exponent {
public:
    static Exponent finite(double v) { return Exponent(v, false); }
    static Exponent infinity() { return Exponent(0.0, true); }
    bool is_infinite() const { return inf_; }
    double value() const;

private:
    Exponent(double v, bool inf) : v_(v), inf_(inf) {}
    double v_;
    bool inf_;
};

struct ExtrapolationInput {
    double p = 1.0;
    double q = 2.0;
    Exponent r = Exponent::infinity();
    double nu = 1.0;
    double M1 = 1.0;
    double M2 = 1.0;
};

struct ExtrapolationResult {
    double interp_exponent = 0.0;  // (r/q)(q-p)/(r-p), or (q-p)/q at r = inf
    double M = 0.0;                // 2^{nu/(1-b)^2} M1 M2^{1/(1-b)}
};
ExtrapolationResult extrapolation_constant(const ExtrapolationInput& in);

// Nash-iteration bookkeeping. With j' = d/alpha:
//   C = 2 c_S M^{-2/j'} / j',   ||e^{-tL}||_{1->2} <= C^{-j'/2} t^{-j'/2};
// the doubling chain c1(r) = C_N (alpha/d) 4/(2r)' (C_N = c_S here) gives
//   ||e^{-tL}||_{r->2r} <= c1(r)^{-d/(2 alpha r)} t^{-(d/alpha)(1/r - 1/(2r))},
// telescoped over r = 1, 2, 4, ..., 2^m with time split t_i = t 2^{-(i+1)}.
struct NashConstants {
    double j_prime = 0.0;
    double C = 0.0;
    double coeff_1_to_2 = 0.0;
    std::vector<double> c1_chain;    // c1(2^i), i = 0..m-1
    std::vector<double> telescoped;  // 1 -> 2^m coefficient, m = 1..m_max
    double c_N = 0.0;                // limit of the telescoped coefficients
};
NashConstants nash_constants(const ModelParams& p, double M, double c_S,
                             int m_max = 50);

// Conditions B22/B23 for Omega^s = B(0, s^{1/alpha}): psi_s^{-theta} <= 1
// outside the ball, and the s-scaling of the weighted norm inside it
// (delegated to theta_and_domain).
struct B22B23Report {
    double theta = 0.0;
    bool theta_in_range = false;
    bool b22_holds = false;
    double c3 = 0.0;         // fitted norm prefactor at the requested s
    double c3_spread = 0.0;  // relative spread of the fit across s/10, s, 10 s
    bool b23_scaling_holds = false;
};
B22B23Report b22_b23_verifier(double s, const ModelParams& p);

}  // namespace fkop
