#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fkop/model.hpp"
#include "fkop/vec3.hpp"

namespace fkop {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Periodic box [-L/2, L/2]^3, N cells per axis, cell-centered values.
struct Grid3 {
    int n = 0;
    double box = 0.0;
    std::vector<double> v;

    Grid3() = default;
    Grid3(int n_, double box_) : n(n_), box(box_), v(static_cast<std::size_t>(n_) * n_ * n_, 0.0) {}

    double dx() const { return box / n; }
    double coord(int i) const { return -0.5 * box + (i + 0.5) * dx(); }
    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    double& at(int i, int j, int k) { return v[idx(i, j, k)]; }
    double at(int i, int j, int k) const { return v[idx(i, j, k)]; }

    double sum() const;
    double mass() const { return sum() * dx() * dx() * dx(); }
    double max_abs() const;
    double min_value() const;
    // Fraction of mass within distance `margin` of the boundary (sup-norm).
    double margin_mass(double margin) const;
    // Trilinear point evaluation (periodic).
    double sample(const Vec3& x) const;

    void fill(const std::function<double(const Vec3&)>& f);
    double l1_distance(const Grid3& other) const;
    double inner(const Grid3& other) const;  // <f, g> with the volume element
};

// Gaussian bump of width sigma centered at c, normalized to unit mass.
Grid3 gaussian_bump(int n, double box, const Vec3& c, double sigma);

// Smoothed annulus indicator 1_{r <= |x| <= R} with one-cell smoothing.
Grid3 smoothed_annulus(int n, double box, double r_inner, double r_outer);

enum class PropagateDirection { kForward, kFokkerPlanck };

// Strang-split solver: half-step transport, full spectral fractional
// diffusion step (multiplier e^{-h |xi|^alpha}), half-step transport.
// Forward transport is gather semi-Lagrangian with monotone tricubic
// interpolation (range-bounded, hence max-norm nonincreasing and positivity
// preserving). Fokker-Planck transport is conservative MUSCL finite volume
// with minmod slopes (mass conserved to round-off), subject to the CFL
// precondition max|b_eps| h/2 <= 0.5 dx checked before stepping.
class PdeSolver {
public:
    PdeSolver(int n, double box, const ModelParams& params, double dt);
    ~PdeSolver();

    PdeSolver(const PdeSolver&) = delete;
    PdeSolver& operator=(const PdeSolver&) = delete;

    // Evolves f0 to t_final; on_step (optional) sees (t, state) after every
    // macro step.
    Grid3 run(Grid3 f0, double t_final, PropagateDirection dir,
              const std::function<void(double, const Grid3&)>& on_step = {}) const;

    double dt() const { return dt_; }
    double max_drift() const { return max_drift_; }

private:
    void diffusion_step(Grid3& g, double h) const;
    void transport_forward(Grid3& g, double h) const;
    void transport_fp(Grid3& g, double h, bool reverse_sweeps) const;
    void sweep_fp(Grid3& g, double h, int axis) const;

    int n_;
    double box_;
    ModelParams params_;
    double dt_;
    double max_drift_ = 0.0;

    std::vector<double> bx_, by_, bz_;        // drift at cell centers
    std::vector<double> face_u_[3];           // face-normal drift per axis
    mutable std::vector<double> multiplier_;  // spectral factor for cached h
    mutable double cached_h_ = -1.0;

    struct FftwState;
    std::unique_ptr<FftwState> fftw_;
};

// Binary grid snapshot with a JSON sidecar (shape and box).
void save_grid(const Grid3& g, const std::string& path);
Grid3 load_grid(const std::string& path);

}  // namespace fkop
