#pragma once

#include <functional>

namespace fkop {

// Adaptive composite Simpson on [a,b]; abs_tol is an absolute tolerance on
// the whole interval. The integrand must be finite on (a,b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 30);

// Fixed 32-point Gauss-Legendre rule on [a,b].
double gauss_legendre_32(const std::function<double(double)>& f, double a, double b);

// Golden-section search for the maximizer of f on [a,b]; shrinks the bracket
// to width tol and returns the midpoint.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol);

}  // namespace fkop
