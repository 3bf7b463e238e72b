#include "fkop/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "fkop/io.hpp"
#include "fkop/rng.hpp"
#include "fkop/sampler.hpp"
#include "fkop/stats.hpp"

namespace fkop {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBlowup = 1e12;
constexpr int kBlocks = 10;

// Runs fn(block) for block = 0..n_blocks-1 on the configured worker count.
// Blocks are independent; combining happens in block order at the caller, so
// output is identical for any thread count.
void parallel_blocks(int n_blocks, int n_threads, const std::function<void(int)>& fn) {
    if (n_threads <= 0) n_threads = default_thread_count();
    n_threads = std::min(n_threads, n_blocks);
    if (n_threads <= 1) {
        for (int b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            int b;
            while ((b = next.fetch_add(1)) < n_blocks) fn(b);
        });
    for (auto& th : pool) th.join();
}

// One Euler path with adaptive substeps; returns the endpoint or flags.
bool run_path(Vec3& x, double t_final, const SimConfig& cfg, RngStream& rng) {
    const ModelParams& p = cfg.params;
    double t = 0.0;
    while (t < t_final) {
        const Vec3 b = drift_eps(x, p);
        const double bn = b.norm();
        const double re = std::sqrt(x.norm2() + p.eps);
        double h = std::min(cfg.dt, t_final - t);
        if (bn > 0.0) h = std::min(h, cfg.c_cfl * re / bn);
        x += h * b + sample_stable_increment(p.alpha, h, rng);
        if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(x.z) ||
            x.norm2() > kBlowup * kBlowup)
            return false;
        t += h;
    }
    return true;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw config_error("SimConfig: dt must be > 0");
    if (!(t_final >= dt)) throw config_error("SimConfig: t_final must be >= dt");
    if (!(params.eps > 0.0))
        throw config_error("SimConfig: eps must be > 0 (the singular drift is never stepped)");
    if (n_paths < 1) throw config_error("SimConfig: n_paths must be >= 1");
    if (grid_n < 8 || grid_n % 2 != 0)
        throw config_error("SimConfig: grid_n must be even and >= 8");
    if (!(box > 0.0)) throw config_error("SimConfig: box must be > 0");
}

std::vector<Vec3> euler_paths(const Vec3& x0, const SimConfig& cfg,
                              long n_paths_override, std::uint64_t stream_offset) {
    cfg.validate();
    const long n = n_paths_override > 0 ? n_paths_override : cfg.n_paths;
    std::vector<Vec3> out(static_cast<std::size_t>(n));
    std::vector<long> flagged(kBlocks, 0);
    parallel_blocks(kBlocks, cfg.n_threads, [&](int b) {
        const long lo = n * b / kBlocks, hi = n * (b + 1) / kBlocks;
        long bad = 0;
        for (long i = lo; i < hi; ++i) {
            RngStream rng(cfg.seed, stream_offset + static_cast<std::uint64_t>(i));
            Vec3 x = x0;
            if (!run_path(x, cfg.t_final, cfg, rng)) {
                ++bad;
                x = x0;  // flagged paths excluded from statistics by count
            }
            out[static_cast<std::size_t>(i)] = x;
        }
        flagged[b] = bad;
    });
    long total_bad = 0;
    for (long b : flagged) total_bad += b;
    if (total_bad * 10000 > n)
        throw std::runtime_error("euler_paths: more than 0.01% of paths diverged");
    return out;
}

KernelField estimate_kernel(const Vec3& x0, double t, const std::vector<Vec3>& ys,
                            const SimConfig& cfg, std::uint64_t stream_offset) {
    cfg.validate();
    if (cfg.n_paths < 10000)
        throw config_error("estimate_kernel: needs at least 1e4 paths");
    SimConfig run_cfg = cfg;
    run_cfg.t_final = t;
    const std::vector<Vec3> ends = euler_paths(x0, run_cfg, 0, stream_offset);
    const long n = static_cast<long>(ends.size());
    const double tball = std::pow(t, 1.0 / cfg.params.alpha);

    // Per-point bandwidths from the free-kernel pilot envelope.
    const std::size_t ny = ys.size();
    std::vector<double> hs(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double env = envelope(t, (ys[j] - x0).norm(), cfg.params.alpha);
        double h = cfg.c_bw * std::pow(env * static_cast<double>(n), -1.0 / 7.0);
        const double ry = ys[j].norm();
        if (ry > 0.0 && ry < tball) h = std::min(h, 0.5 * ry);
        hs[j] = h;
    }

    // Block sums of the Gaussian product kernel, combined in block order.
    std::vector<std::vector<double>> block_sum(kBlocks, std::vector<double>(ny, 0.0));
    parallel_blocks(kBlocks, cfg.n_threads, [&](int b) {
        const long lo = n * b / kBlocks, hi = n * (b + 1) / kBlocks;
        auto& acc = block_sum[b];
        for (long i = lo; i < hi; ++i) {
            const Vec3& e = ends[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < ny; ++j) {
                const double h = hs[j];
                const double q = (e - ys[j]).norm2() / (2.0 * h * h);
                if (q > 40.0) continue;
                acc[j] += std::exp(-q);
            }
        }
    });

    KernelField field;
    field.points.resize(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double h = hs[j];
        const double norm = std::pow(2.0 * kPi * h * h, -1.5);
        std::vector<double> per_block(kBlocks);
        for (int b = 0; b < kBlocks; ++b) {
            const long lo = n * b / kBlocks, hi = n * (b + 1) / kBlocks;
            per_block[b] = block_sum[b][j] * norm / static_cast<double>(hi - lo);
        }
        const MeanStderr ms = mean_stderr(per_block);
        KernelPoint& pt = field.points[j];
        pt.t = t;
        pt.x = x0;
        pt.y = ys[j];
        pt.estimate = ms.mean;
        pt.stderr_ = ms.stderr_;
        pt.backend = "MC";
        pt.inconclusive = !(ms.mean > 0.0) || ms.stderr_ > 0.25 * ms.mean;
    }
    return field;
}

std::pair<FkEstimate, FkEstimate> adjoint_functional_pair(
    const Vec3& x, double t, const std::function<double(const Vec3&)>& g1,
    const std::function<double(const Vec3&)>& g2, const SimConfig& cfg,
    std::uint64_t stream_offset) {
    cfg.validate();
    const ModelParams& p = cfg.params;
    const long n = cfg.n_paths;
    std::vector<double> sum1(kBlocks, 0.0), sum2(kBlocks, 0.0);
    parallel_blocks(kBlocks, cfg.n_threads, [&](int b) {
        const long lo = n * b / kBlocks, hi = n * (b + 1) / kBlocks;
        double acc1 = 0.0, acc2 = 0.0;
        for (long i = lo; i < hi; ++i) {
            RngStream rng(cfg.seed ^ 0x5bd1e995u,
                          stream_offset + static_cast<std::uint64_t>(i));
            Vec3 y = x;
            double s = 0.0, log_w = 0.0;
            bool ok = true;
            while (s < t) {
                // Paths attracted into the origin accumulate killing at a
                // fixed rate per CFL substep; below e^-42 they contribute
                // nothing to either bounded functional.
                if (log_w < -42.0) {
                    ok = false;
                    break;
                }
                const Vec3 b_at = drift_eps(y, p);
                const double bn = b_at.norm();
                const double re = std::sqrt(y.norm2() + p.eps);
                double h = std::min(cfg.dt, t - s);
                if (bn > 0.0) h = std::min(h, cfg.c_cfl * re / bn);
                // Midpoint of the drift leg for the killing integral; the
                // potential varies strongly along inward-moving paths.
                log_w -= div_drift_eps(y - (0.5 * h) * b_at, p) * h;
                y = y - h * b_at + sample_stable_increment(p.alpha, h, rng);
                if (!std::isfinite(y.x) || !std::isfinite(y.y) ||
                    !std::isfinite(y.z)) {
                    ok = false;
                    break;
                }
                s += h;
            }
            if (ok) {
                const double w = std::exp(log_w);
                acc1 += w * g1(y);
                acc2 += w * g2(y);
            }
        }
        sum1[b] = acc1;
        sum2[b] = acc2;
    });
    std::vector<double> per1(kBlocks), per2(kBlocks);
    for (int b = 0; b < kBlocks; ++b) {
        const long lo = n * b / kBlocks, hi = n * (b + 1) / kBlocks;
        per1[b] = sum1[b] / static_cast<double>(hi - lo);
        per2[b] = sum2[b] / static_cast<double>(hi - lo);
    }
    const MeanStderr m1 = mean_stderr(per1), m2 = mean_stderr(per2);
    return {{m1.mean, m1.stderr_}, {m2.mean, m2.stderr_}};
}

FkEstimate adjoint_functional(const Vec3& x, double t,
                              const std::function<double(const Vec3&)>& g,
                              const SimConfig& cfg, std::uint64_t stream_offset) {
    return adjoint_functional_pair(x, t, g, [](const Vec3&) { return 0.0; }, cfg,
                                   stream_offset)
        .first;
}

Grid3 propagate(const Grid3& f0, PropagateDirection dir, const SimConfig& cfg,
                const std::function<void(double, const Grid3&)>& on_step) {
    cfg.validate();
    PdeSolver solver(f0.n, f0.box, cfg.params, cfg.dt);
    return solver.run(f0, cfg.t_final, dir, on_step);
}

ContractionReport contraction_and_ultracontractivity_check(const SimConfig& cfg,
                                                           double t_lo) {
    cfg.validate();
    ContractionReport rep;
    rep.l1_ok = rep.l2_ok = rep.linf_ok = rep.positivity_ok = true;
    const int n = cfg.grid_n;
    const Grid3 f0 = gaussian_bump(n, cfg.box, {0.35, -0.6, 0.2}, 0.09 * cfg.box);
    const double dx3 = std::pow(f0.dx(), 3.0);
    auto norms = [&](const Grid3& g) {
        double l1 = 0.0, l2 = 0.0;
        for (double v : g.v) {
            l1 += std::fabs(v);
            l2 += v * v;
        }
        return std::array<double, 3>{l1 * dx3, std::sqrt(l2 * dx3), g.max_abs()};
    };
    const auto n0 = norms(f0);
    const double djalpha = cfg.params.d / cfg.params.alpha;
    PdeSolver solver(n, cfg.box, cfg.params, cfg.dt);
    double prev_linf = n0[2];
    solver.run(f0, cfg.t_final, PropagateDirection::kForward,
               [&](double t, const Grid3& g) {
                   const auto nt = norms(g);
                   for (int r = 0; r < 3; ++r)
                       rep.worst_growth =
                           std::max(rep.worst_growth, nt[r] / n0[r] - 1.0);
                   if (nt[0] > n0[0] * (1.0 + 1e-3)) rep.l1_ok = false;
                   if (nt[1] > n0[1] * (1.0 + 1e-3)) rep.l2_ok = false;
                   // Max norm must be nonincreasing slice to slice.
                   if (nt[2] > prev_linf * (1.0 + 1e-9)) rep.linf_ok = false;
                   prev_linf = nt[2];
                   const double mn = g.min_value();
                   rep.min_value = std::min(rep.min_value, mn / n0[2]);
                   if (mn < -1e-10 * n0[2]) rep.positivity_ok = false;
                   if (t >= t_lo)
                       rep.c_N_hat = std::max(
                           rep.c_N_hat, nt[2] * std::pow(t, djalpha) / n0[0]);
               });
    if (!rep.l1_ok || !rep.l2_ok || !rep.linf_ok)
        rep.failure_detail = "norm growth beyond the 1e-3 discretization tolerance";
    return rep;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = std::min(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::fabs(a[a.size() * i / n] - b[b.size() * i / n]);
    return s / n;
}

void KernelField::write_csv(std::ostream& os) const {
    os << "t,x1,x2,x3,y1,y2,y3,estimate,stderr,backend\n";
    for (const auto& p : points) {
        os << format_double(p.t) << ',' << format_double(p.x.x) << ','
           << format_double(p.x.y) << ',' << format_double(p.x.z) << ','
           << format_double(p.y.x) << ',' << format_double(p.y.y) << ','
           << format_double(p.y.z) << ',' << format_double(p.estimate) << ','
           << format_double(p.stderr_) << ',' << p.backend << "\n";
    }
}

}  // namespace fkop
