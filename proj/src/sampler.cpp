#include "fkop/sampler.hpp"

#include <cmath>

#include "fkop/specfun.hpp"

namespace fkop {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sample_one_sided_stable(double a, RngStream& rng) {
    if (!(a > 0.0 && a < 1.0))
        throw domain_error("sample_one_sided_stable: requires a in (0,1)");
    // Kanter: S = (A(U)/E)^{(1-a)/a},
    // A(u) = sin(a pi u)^{a/(1-a)} sin((1-a) pi u) / sin(pi u)^{1/(1-a)}.
    const double u = rng.uniform();
    const double e = rng.exponential();
    const double su = std::sin(kPi * u);
    const double sa = std::sin(a * kPi * u);
    const double sb = std::sin((1.0 - a) * kPi * u);
    const double A = std::pow(sa, a / (1.0 - a)) * sb * std::pow(su, -1.0 / (1.0 - a));
    return std::pow(A / e, (1.0 - a) / a);
}

std::vector<double> sample_one_sided_stable(double a, long n, RngStream& rng) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& s : out) s = sample_one_sided_stable(a, rng);
    return out;
}

Vec3 sample_stable_increment(double alpha, double dt, RngStream& rng) {
    if (!(dt > 0.0)) throw domain_error("sample_stable_increment: requires dt > 0");
    const double s1 = sample_one_sided_stable(0.5 * alpha, rng);
    const double s = std::pow(dt, 2.0 / alpha) * s1;
    const double c = std::sqrt(2.0 * s);
    return {c * rng.normal(), c * rng.normal(), c * rng.normal()};
}

}  // namespace fkop
