#include "fkop/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fkop/io.hpp"

namespace fkop {

namespace {
constexpr double kPi = 3.14159265358979323846;

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::fabs(a) < std::fabs(b) ? a : b;
}

// Monotone cubic Hermite on 4 uniformly spaced samples; interpolates between
// y1 and y2 at fractional position u in [0,1]. Fritsch-Carlson limited
// slopes keep the result inside [min(y1,y2), max(y1,y2)].
double monotone_cubic(double y0, double y1, double y2, double y3, double u) {
    const double d1 = y1 - y0, d2 = y2 - y1, d3 = y3 - y2;
    double m1 = 0.5 * (d1 + d2), m2 = 0.5 * (d2 + d3);
    if (d2 == 0.0) {
        m1 = m2 = 0.0;
    } else {
        if (d1 * d2 <= 0.0)
            m1 = 0.0;
        else
            m1 = minmod(m1, 3.0 * minmod(d1, d2));
        if (d2 * d3 <= 0.0)
            m2 = 0.0;
        else
            m2 = minmod(m2, 3.0 * minmod(d2, d3));
    }
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y1 + (u3 - 2 * u2 + u) * m1 +
           (-2 * u3 + 3 * u2) * y2 + (u3 - u2) * m2;
}

}  // namespace

double Grid3::sum() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double Grid3::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double Grid3::min_value() const {
    double m = v.empty() ? 0.0 : v[0];
    for (double x : v) m = std::min(m, x);
    return m;
}

double Grid3::margin_mass(double margin) const {
    const double lim = 0.5 * box - margin;
    double inside = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double val = at(i, j, k);
                total += val;
                if (std::fabs(coord(i)) < lim && std::fabs(coord(j)) < lim &&
                    std::fabs(coord(k)) < lim)
                    inside += val;
            }
    return total > 0.0 ? 1.0 - inside / total : 0.0;
}

double Grid3::sample(const Vec3& x) const {
    const double h = dx();
    auto wrap = [&](int i) { return ((i % n) + n) % n; };
    const double fx = (x.x + 0.5 * box) / h - 0.5;
    const double fy = (x.y + 0.5 * box) / h - 0.5;
    const double fz = (x.z + 0.5 * box) / h - 0.5;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const int k0 = static_cast<int>(std::floor(fz));
    const double ux = fx - i0, uy = fy - j0, uz = fz - k0;
    double acc = 0.0;
    for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj)
            for (int dk = 0; dk <= 1; ++dk) {
                const double w = (di ? ux : 1 - ux) * (dj ? uy : 1 - uy) *
                                 (dk ? uz : 1 - uz);
                acc += w * at(wrap(i0 + di), wrap(j0 + dj), wrap(k0 + dk));
            }
    return acc;
}

void Grid3::fill(const std::function<double(const Vec3&)>& f) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                at(i, j, k) = f({coord(i), coord(j), coord(k)});
}

double Grid3::l1_distance(const Grid3& other) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::fabs(v[i] - other.v[i]);
    return s * dx() * dx() * dx();
}

double Grid3::inner(const Grid3& other) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * other.v[i];
    return s * dx() * dx() * dx();
}

Grid3 gaussian_bump(int n, double box, const Vec3& c, double sigma) {
    Grid3 g(n, box);
    g.fill([&](const Vec3& x) {
        const double r2 = (x - c).norm2();
        return std::exp(-0.5 * r2 / (sigma * sigma));
    });
    const double m = g.mass();
    for (double& v : g.v) v /= m;
    return g;
}

Grid3 smoothed_annulus(int n, double box, double r_inner, double r_outer) {
    Grid3 g(n, box);
    const double h = g.dx();
    auto ramp = [&](double s) { return std::clamp(s / h + 0.5, 0.0, 1.0); };
    g.fill([&](const Vec3& x) {
        const double r = x.norm();
        return ramp(r - r_inner) * ramp(r_outer - r);
    });
    return g;
}

struct PdeSolver::FftwState {
    fftw_plan fwd = nullptr, bwd = nullptr;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    int n = 0;

    explicit FftwState(int n_) : n(n_) {
        const std::size_t nr = static_cast<std::size_t>(n) * n * n;
        const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        real = fftw_alloc_real(nr);
        cplx = fftw_alloc_complex(nc);
        fwd = fftw_plan_dft_r2c_3d(n, n, n, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_3d(n, n, n, cplx, real, FFTW_ESTIMATE);
    }
    ~FftwState() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
};

PdeSolver::PdeSolver(int n, double box, const ModelParams& params, double dt)
    : n_(n), box_(box), params_(params), dt_(dt), fftw_(new FftwState(n)) {
    if (n < 8 || n % 2 != 0) throw config_error("PdeSolver: n must be even and >= 8");
    Grid3 proto(n, box);
    const std::size_t total = proto.v.size();
    bx_.resize(total);
    by_.resize(total);
    bz_.resize(total);
    for (int axis = 0; axis < 3; ++axis) face_u_[axis].resize(total);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 x{proto.coord(i), proto.coord(j), proto.coord(k)};
                const Vec3 b = drift_eps(x, params_);
                const std::size_t id = proto.idx(i, j, k);
                bx_[id] = b.x;
                by_[id] = b.y;
                bz_[id] = b.z;
                max_drift_ = std::max(max_drift_, b.norm());
                // Face-normal velocities at the i+1/2 faces along each axis.
                const double hd = 0.5 * proto.dx();
                face_u_[0][id] = drift_eps({x.x + hd, x.y, x.z}, params_).x;
                face_u_[1][id] = drift_eps({x.x, x.y + hd, x.z}, params_).y;
                face_u_[2][id] = drift_eps({x.x, x.y, x.z + hd}, params_).z;
            }
}

PdeSolver::~PdeSolver() = default;

void PdeSolver::diffusion_step(Grid3& g, double h) const {
    if (h != cached_h_) {
        const int n = n_;
        const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        multiplier_.resize(nc);
        const double dk = 2.0 * kPi / box_;
        const double scale = 1.0 / (static_cast<double>(n) * n * n);
        std::size_t id = 0;
        for (int i = 0; i < n; ++i) {
            const double ki = dk * (i <= n / 2 ? i : i - n);
            for (int j = 0; j < n; ++j) {
                const double kj = dk * (j <= n / 2 ? j : j - n);
                for (int k = 0; k <= n / 2; ++k) {
                    const double kk = dk * k;
                    const double mag = std::sqrt(ki * ki + kj * kj + kk * kk);
                    multiplier_[id++] =
                        std::exp(-h * std::pow(mag, params_.alpha)) * scale;
                }
            }
        }
        cached_h_ = h;
    }
    std::copy(g.v.begin(), g.v.end(), fftw_->real);
    fftw_execute(fftw_->fwd);
    const std::size_t nc = multiplier_.size();
    for (std::size_t i = 0; i < nc; ++i) {
        fftw_->cplx[i][0] *= multiplier_[i];
        fftw_->cplx[i][1] *= multiplier_[i];
    }
    fftw_execute(fftw_->bwd);
    std::copy(fftw_->real, fftw_->real + g.v.size(), g.v.begin());
}

void PdeSolver::transport_forward(Grid3& g, double h) const {
    // Gather semi-Lagrangian for d_t u = b . grad u: u_new(x) = u(x + h b*),
    // with a midpoint estimate of the displacement.
    const int n = n_;
    const double dx = g.dx();
    Grid3 out(n, box_);
    auto wrap = [&](int i) { return ((i % n) + n) % n; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t id = g.idx(i, j, k);
                const Vec3 x{g.coord(i), g.coord(j), g.coord(k)};
                const Vec3 b0{bx_[id], by_[id], bz_[id]};
                const Vec3 bm = drift_eps(x + 0.5 * h * b0, params_);
                const Vec3 foot = x + h * bm;
                // Fractional index of the foot.
                const double fx = (foot.x + 0.5 * box_) / dx - 0.5;
                const double fy = (foot.y + 0.5 * box_) / dx - 0.5;
                const double fz = (foot.z + 0.5 * box_) / dx - 0.5;
                const int i0 = static_cast<int>(std::floor(fx));
                const int j0 = static_cast<int>(std::floor(fy));
                const int k0 = static_cast<int>(std::floor(fz));
                const double ux = fx - i0, uy = fy - j0, uz = fz - k0;
                // Nested monotone 1D cubics over the 4x4x4 stencil.
                double zy[4][4];
                for (int a = 0; a < 4; ++a) {
                    const int ii = wrap(i0 - 1 + a);
                    for (int b = 0; b < 4; ++b) {
                        const int jj = wrap(j0 - 1 + b);
                        zy[a][b] = monotone_cubic(g.at(ii, jj, wrap(k0 - 1)),
                                                  g.at(ii, jj, wrap(k0)),
                                                  g.at(ii, jj, wrap(k0 + 1)),
                                                  g.at(ii, jj, wrap(k0 + 2)), uz);
                    }
                }
                double zx[4];
                for (int a = 0; a < 4; ++a)
                    zx[a] = monotone_cubic(zy[a][0], zy[a][1], zy[a][2], zy[a][3], uy);
                out.at(i, j, k) = monotone_cubic(zx[0], zx[1], zx[2], zx[3], ux);
            }
    g = std::move(out);
}

void PdeSolver::sweep_fp(Grid3& g, double h, int axis) const {
    // Conservative MUSCL update along one axis:
    //   v_i <- v_i - (h/dx)(F_{i+1/2} - F_{i-1/2}),
    //   F_{i+1/2} = u+ vL + u- vR with minmod-limited edge states.
    const int n = n_;
    const double dx = g.dx();
    const double lam = h / dx;
    std::vector<double> line(n), flux(n);
    auto wrap = [&](int i) { return ((i % n) + n) % n; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // Gather the 1D line and its face velocities.
            for (int i = 0; i < n; ++i) {
                const std::size_t id = axis == 0   ? g.idx(i, a, b)
                                       : axis == 1 ? g.idx(a, i, b)
                                                   : g.idx(a, b, i);
                line[i] = g.v[id];
            }
            for (int i = 0; i < n; ++i) {
                const std::size_t id = axis == 0   ? g.idx(i, a, b)
                                       : axis == 1 ? g.idx(a, i, b)
                                                   : g.idx(a, b, i);
                const double u = face_u_[axis][id];
                const int ip = wrap(i + 1);
                const double sl =
                    0.5 * minmod(line[i] - line[wrap(i - 1)], line[ip] - line[i]);
                const double sr = 0.5 * minmod(line[ip] - line[i],
                                               line[wrap(i + 2)] - line[ip]);
                const double vl = line[i] + sl;
                const double vr = line[ip] - sr;
                flux[i] = u > 0.0 ? u * vl : u * vr;
            }
            for (int i = 0; i < n; ++i) {
                const std::size_t id = axis == 0   ? g.idx(i, a, b)
                                       : axis == 1 ? g.idx(a, i, b)
                                                   : g.idx(a, b, i);
                g.v[id] = line[i] - lam * (flux[i] - flux[wrap(i - 1)]);
            }
        }
}

void PdeSolver::transport_fp(Grid3& g, double h, bool reverse_sweeps) const {
    if (reverse_sweeps) {
        sweep_fp(g, h, 2);
        sweep_fp(g, h, 1);
        sweep_fp(g, h, 0);
    } else {
        sweep_fp(g, h, 0);
        sweep_fp(g, h, 1);
        sweep_fp(g, h, 2);
    }
}

Grid3 PdeSolver::run(Grid3 f0, double t_final, PropagateDirection dir,
                     const std::function<void(double, const Grid3&)>& on_step) const {
    if (f0.n != n_ || f0.box != box_)
        throw config_error("PdeSolver::run: grid shape mismatch");
    if (dir == PropagateDirection::kFokkerPlanck) {
        // CFL precondition for the conservative scheme, checked up front.
        if (max_drift_ * 0.5 * dt_ > 0.5 * f0.dx())
            throw config_error("PdeSolver::run: CFL violation, max|b_eps| dt/2 > dx/2");
    }
    double t = 0.0;
    Grid3 g = std::move(f0);
    while (t < t_final - 1e-12 * t_final) {
        const double h = std::min(dt_, t_final - t);
        if (dir == PropagateDirection::kForward) {
            transport_forward(g, 0.5 * h);
            diffusion_step(g, h);
            transport_forward(g, 0.5 * h);
        } else {
            transport_fp(g, 0.5 * h, false);
            diffusion_step(g, h);
            transport_fp(g, 0.5 * h, true);
        }
        t += h;
        if (on_step) on_step(t, g);
    }
    return g;
}

void save_grid(const Grid3& g, const std::string& path) {
    {
        std::ofstream os(path, std::ios::binary);
        os.write(reinterpret_cast<const char*>(g.v.data()),
                 static_cast<std::streamsize>(g.v.size() * sizeof(double)));
    }
    std::string meta = "{\n  \"n\": " + std::to_string(g.n) +
                       ",\n  \"box\": " + format_double(g.box) +
                       ",\n  \"dtype\": \"float64\",\n  \"order\": \"ijk\"\n}\n";
    atomic_write_file(path + ".json", meta);
}

Grid3 load_grid(const std::string& path) {
    std::ifstream meta(path + ".json");
    if (!meta) throw std::runtime_error("load_grid: missing sidecar for " + path);
    std::string all((std::istreambuf_iterator<char>(meta)),
                    std::istreambuf_iterator<char>());
    const auto npos = all.find("\"n\":");
    const auto bpos = all.find("\"box\":");
    if (npos == std::string::npos || bpos == std::string::npos)
        throw std::runtime_error("load_grid: malformed sidecar");
    Grid3 g(std::stoi(all.substr(npos + 4)), std::stod(all.substr(bpos + 6)));
    std::ifstream is(path, std::ios::binary);
    is.read(reinterpret_cast<char*>(g.v.data()),
            static_cast<std::streamsize>(g.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("load_grid: truncated data file");
    return g;
}

}  // namespace fkop
