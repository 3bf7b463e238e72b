#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fkop/rng.hpp"
#include "fkop/vec3.hpp"

namespace fkop {

// Radial profile of the d=3 isotropic alpha-stable density at time 1 for the
// convention E e^{i xi . Z_t} = e^{-t |xi|^alpha}:
//   p1(r) = (2 pi^2 r)^{-1} int_0^inf e^{-rho^alpha} rho sin(rho r) drho,
//   p1(0) = Gamma(3/alpha) / (2 pi^2 alpha).
// Power-series branch for small r, oscillatory panel quadrature between the
// zeros of the sine in the middle range, large-r asymptotic series in
// r^{-k alpha - 3} beyond.
double p1_radial(double r, double alpha);
double p1_radial_deriv(double r, double alpha);  // d/dr p1, <= 0

// Two-sided envelope t (r^{-d-alpha} ^ t^{-(d+alpha)/alpha}) and the gradient
// envelope E^t with exponent d+alpha+1.
double envelope(double t, double r, double alpha, int d = 3);
double E_kernel(double t, double r, double alpha, int d = 3);

// Normalization of the hypersingular integral
//   (-Delta)^{alpha/2} f(x) = c_{d,alpha} p.v. int (f(x)-f(x+h)) |h|^{-d-alpha} dh
// consistent with the Fourier multiplier |xi|^alpha:
//   c_{d,alpha} = alpha 2^{alpha-1} Gamma((d+alpha)/2) / (pi^{d/2} Gamma(1-alpha/2)).
double frac_laplacian_constant(int d, double alpha);

// Leading tail coefficient: p1(r) ~ tail * r^{-d-alpha} (d = 3).
double stable_tail_constant(double alpha);

// Hypersingular evaluation of (-Delta)^{alpha/2} f at radius r for a radial
// function f (d = 3). Inner ball uses the Taylor-compensated integrand, the
// outer integral is truncated at `cutoff` with a fitted power-law tail
// correction.
double frac_laplacian_radial(const std::function<double(double)>& f, double r,
                             double alpha, double cutoff);

// Tabulated p1 with monotone cubic interpolation on log-log scale; exact
// scaling p_t(x) = t^{-d/alpha} p1(t^{-1/alpha} x).
class StableKernelTable {
public:
    explicit StableKernelTable(double alpha, int n_radii = 2048, double r_min = 1e-4,
                               double r_max = 1e4);

    double alpha() const { return alpha_; }
    double p1(double r) const;
    double p1_deriv(double r) const;

    double kernel_radial(double t, double r) const;
    double kernel(double t, const Vec3& x, const Vec3& y) const {
        return kernel_radial(t, (x - y).norm());
    }
    // Signed radial derivative of p_t; grad_kernel is its magnitude.
    double kernel_radial_deriv(double t, double r) const;
    double grad_kernel(double t, double r) const;

    // P(|Z_1| <= r) and its inverse; radial CDF of the time-1 density.
    double cdf_radial(double r) const;
    double inverse_cdf_radial(double q) const;

    // 4 pi int_0^inf r^2 p1(r) dr computed from the table (diagnostic; 1
    // up to quadrature error).
    double normalization() const;

    void export_csv(std::ostream& os) const;
    static StableKernelTable import_csv(std::istream& is);

    double table_r_min() const { return r_[0]; }
    double table_r_max() const { return r_.back(); }

private:
    StableKernelTable() = default;
    void finalize();  // builds interpolant + CDF from r_, p_

    double alpha_ = 0.0;
    std::vector<double> r_, p_;
    std::vector<double> log_r_, log_p_, slope_;  // Fritsch-Carlson slopes
    double p0_ = 0.0, curv_ = 0.0;               // p1(r) ~ p0 - curv r^2 near 0
    double tail_switch_ = 0.0;
    std::vector<double> cdf_;  // cumulative radial mass at r_[i]
};

struct EmpiricalConstant {
    std::string name;
    double value = 0.0;
    std::string design;
    std::vector<double> refinement_trend;
};

// k0-hat: sup over a (t,r) grid of max(kernel/envelope, envelope/kernel).
EmpiricalConstant estimate_k0(const StableKernelTable& table, int n_t = 8,
                              int n_r = 1250, double dilation = 1.0);
// k1-hat: sup of |grad p_t| / E^t over a (t,r) grid.
EmpiricalConstant estimate_k1(const StableKernelTable& table, int n_t = 8,
                              int n_r = 400, double dilation = 1.0);

// Monte Carlo check of the convolution inequalities
//  (ii)  int_0^t < e^{-(t-tau)A}(x,.) E^tau(.,y) > dtau <= k2 t^{(a-1)/a} p_t(x-y)
//  (iii) int_0^t < E^{t-tau}(x,.)  E^tau(.,y) > dtau <= k3 t^{(a-1)/a} E^t(x,y)
// by importance sampling; lhs estimated, rhs evaluated without the constant.
struct ConvIneqResult {
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs_without_constant = 0.0;
    double ratio = 0.0;
    bool inconclusive = false;  // relative stderr above 10%
};
enum class ConvIneqKind { kSmoothing, kGradientChain };  // (ii), (iii)
ConvIneqResult convolution_inequality_check(const StableKernelTable& table,
                                            ConvIneqKind which, double t,
                                            const Vec3& x, const Vec3& y,
                                            long n_mc, RngStream& rng);

// Ratio of the 3P inequality
//   p_t(x-z) p_s(z-y) <= K p_{t+s}(x-y) (p_t(x-z) + p_s(z-y)).
double three_p_ratio(const StableKernelTable& table, double t, double s,
                     const Vec3& x, const Vec3& z, const Vec3& y);

}  // namespace fkop
