#include "fkop/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fkop/rng.hpp"
#include "fkop/specfun.hpp"

namespace fkop {

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586477 * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / n;
    if (n < 2) return out;
    double v = 0.0;
    for (double x : xs) v += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(v / (n - 1) / n);
    return out;
}

namespace {

// Regularized lower incomplete gamma by series (x < a+1).
double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Regularized upper incomplete gamma by Lentz continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_pvalue(double statistic, int dof) {
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_pvalue(double statistic, std::size_t n) {
    const double en = std::sqrt(static_cast<double>(n));
    const double lambda = (en + 0.12 + 0.11 / en) * statistic;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12 * std::fabs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < na && j < nb) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double ne = static_cast<double>(na) * nb / (na + nb);
    return ks_pvalue(d, static_cast<std::size_t>(ne));
}

double linear_fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace fkop
