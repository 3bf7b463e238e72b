#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fkop/model.hpp"
#include "fkop/pde.hpp"
#include "fkop/stable_kernel.hpp"
#include "fkop/vec3.hpp"

namespace fkop {

// Shared configuration for both estimation backends. The singular drift is
// never stepped directly: every Monte Carlo or grid run uses eps > 0.
struct SimConfig {
    ModelParams params;
    double t_final = 1.0;
    double dt = 0.01;
    long n_paths = 100000;
    std::vector<double> eps_schedule;
    double box = 32.0;  // PDE box edge length L
    int grid_n = 64;    // PDE cells per axis
    std::uint64_t seed = 1;
    int n_threads = 0;    // 0 = FKOP_THREADS / hardware
    double c_cfl = 0.25;  // drift displacement per substep, fraction of |x|_eps
    double c_bw = 0.6;    // KDE bandwidth prefactor

    void validate() const;  // throws config_error on violated preconditions
};

// Endpoints of the Euler scheme with adaptive substeps
//   h_k = min(dt_left, c_cfl |X|_eps / |b_eps(X)|),
// X <- X + b_eps(X) h + Z_h. Path i draws from stream (seed, stream_offset+i),
// so results are identical for any thread count. Throws if more than 0.01% of
// paths leave the finite range.
std::vector<Vec3> euler_paths(const Vec3& x0, const SimConfig& cfg,
                              long n_paths_override = 0,
                              std::uint64_t stream_offset = 0);

struct KernelPoint {
    double t = 0.0;
    Vec3 x, y;
    double estimate = 0.0;
    double stderr_ = 0.0;
    bool inconclusive = false;  // relative stderr above 25%
    std::string backend;        // "MC" or "PDE"
};

struct KernelField {
    std::vector<KernelPoint> points;
    void write_csv(std::ostream& os) const;
};

// Kernel density estimate of e^{-tLambda}(x0, y) at the design points. The
// bandwidth follows the free-kernel pilot envelope,
//   h(y) = c_bw (envelope(t, |y - x0|) n)^{-1/(d+4)},
// capped by |y|/2 inside the parabolic ball so the vanishing structure at the
// origin is not smoothed away. Standard errors from 10 ensemble blocks.
KernelField estimate_kernel(const Vec3& x0, double t, const std::vector<Vec3>& ys,
                            const SimConfig& cfg, std::uint64_t stream_offset = 0);

// Feynman-Kac estimate of (e^{-tLambda*} g)(x) for bounded g:
//   dY = -b_eps(Y) ds + dZ,  weight exp(-int div b_eps(Y_s) ds).
// This gives point evaluations of adjoint functionals without a grid; used
// for the desingularizing L1 corollaries at radii the box cannot resolve.
struct FkEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};
FkEstimate adjoint_functional(const Vec3& x, double t,
                              const std::function<double(const Vec3&)>& g,
                              const SimConfig& cfg, std::uint64_t stream_offset = 0);
// Both functionals from one path ensemble (correlated but twice as cheap).
std::pair<FkEstimate, FkEstimate> adjoint_functional_pair(
    const Vec3& x, double t, const std::function<double(const Vec3&)>& g1,
    const std::function<double(const Vec3&)>& g2, const SimConfig& cfg,
    std::uint64_t stream_offset = 0);

// Strang-split PDE propagation of f0 to t_final (see PdeSolver). Forward
// evolves e^{-tLambda} f0, Fokker-Planck evolves e^{-tLambda*} f0.
Grid3 propagate(const Grid3& f0, PropagateDirection dir, const SimConfig& cfg,
                const std::function<void(double, const Grid3&)>& on_step = {});

struct ContractionReport {
    bool l1_ok = false, l2_ok = false, linf_ok = false, positivity_ok = false;
    double worst_growth = 0.0;    // max over slices of ||u(t)||_r / ||f0||_r - 1
    double min_value = 0.0;       // most negative value seen, relative to max
    double c_N_hat = 0.0;         // sup_t ||u||_inf t^{d/alpha} / ||f0||_1
    std::string failure_detail;
};
// Norm contraction in r = 1, 2, inf, positivity, and the ultracontractivity
// coefficient over t in [t_lo, t_final].
ContractionReport contraction_and_ultracontractivity_check(const SimConfig& cfg,
                                                           double t_lo = 0.1);

// W1 distance between two samples of radii (for the eps-refinement study).
double wasserstein1(std::vector<double> a, std::vector<double> b);

}  // namespace fkop
