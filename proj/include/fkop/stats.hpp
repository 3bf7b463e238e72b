#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fkop {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

// Survival function of the chi-square distribution with k degrees of freedom,
// via the regularized upper incomplete gamma Q(k/2, x/2).
double chi_square_pvalue(double statistic, int dof);

// One-sample Kolmogorov-Smirnov: statistic and asymptotic p-value of the
// sample against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double ks_pvalue(double statistic, std::size_t n);

// Two-sample KS p-value.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// Least-squares slope of y against x.
double linear_fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

}  // namespace fkop
