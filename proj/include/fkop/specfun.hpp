#pragma once

#include <stdexcept>

namespace fkop {

// Gamma function on the real line, poles at the non-positive integers.
// Lanczos approximation (g = 7, 9 coefficients), relative error below 1e-12
// on (0, 30].
double gamma_fn(double x);
double log_gamma(double x);  // log|Gamma(x)|, x > 0

// gamma(a) = 2^a pi^{d/2} Gamma(a/2) / Gamma((d-a)/2), defined for 0 < a < d.
// This is the constant relating |x|^{-s} to its Fourier transform and shows
// up in the closed form of the fractional Laplacian of radial powers.
double gamma_constant(int d, double a);

// kappa_r(r) = sup_{s in (0,1)} (1+s^{1/r})(1+s^{1/r'})(1+s^{1/2})^{-2},
// r' = r/(r-1). Equals 1 at r = 2 and is symmetric under r <-> r'.
// Dense grid scan followed by golden-section refinement.
double kappa_r(double r);

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace fkop
