#pragma once

#include <vector>

#include "fkop/rng.hpp"
#include "fkop/vec3.hpp"

namespace fkop {

// One draw of the one-sided (positive) stable law of index a in (0,1) with
// Laplace transform E e^{-lambda S} = e^{-lambda^a}; Kanter's representation
// from one uniform and one exponential variate.
double sample_one_sided_stable(double a, RngStream& rng);

std::vector<double> sample_one_sided_stable(double a, long n, RngStream& rng);

// Isotropic alpha-stable increment in R^3 over time dt, characteristic
// function E e^{i xi . Z} = e^{-dt |xi|^alpha}: Z = sqrt(2 S) G with G a
// standard normal vector and S = dt^{2/alpha} S_1, S_1 one-sided stable of
// index alpha/2.
Vec3 sample_stable_increment(double alpha, double dt, RngStream& rng);

}  // namespace fkop
