#include <doctest.h>

#include <cmath>

#include "fkop/verifier.hpp"

using namespace fkop;

namespace {

const StableKernelTable& table15() {
    static StableKernelTable t(1.5);
    return t;
}

VerifierConfig small_config() {
    VerifierConfig vc;
    vc.sim.params = make_model(3, 1.5, 5.0, 1e-3);
    vc.sim.n_paths = 40000;
    vc.sim.dt = 0.02;
    vc.sim.seed = 11;
    vc.ts_mc = {1.0};
    vc.x_radii = {0.0, 1.0, 2.0, 5.0, 20.0};
    vc.y_radii = {0.2, 1.0, 2.0, 5.0, 20.0};
    vc.y_small = {0.02, 0.05, 0.12, 0.3, 0.5};
    vc.refine_paths_factor = 1.5;
    // t = 8 widens the resolved slope window [2.5 dx, 0.5 t^{1/alpha}] enough
    // for >= 8 shells at the reduced grid sizes used here.
    vc.pde_t = 8.0;
    vc.pde_box = 20.0;
    vc.pde_n = 48;
    vc.pde_n_refined = 64;
    return vc;
}

}  // namespace

TEST_CASE("regime predicates") {
    const auto near_y = regime_near_origin_y(1.5);
    const auto far = regime_far_x(1.5, 5.0);
    const auto both = regime_both_far(1.5, 2.0);
    CHECK(near_y.contains(1.0, {9, 0, 0}, {0.5, 0, 0}));
    CHECK(!near_y.contains(1.0, {9, 0, 0}, {1.5, 0, 0}));
    CHECK(far.contains(1.0, {5.0, 0, 0}, {0, 0, 0}));
    CHECK(!far.contains(1.0, {4.9, 0, 0}, {0, 0, 0}));
    CHECK(both.contains(1.0, {2, 0, 0}, {0, 2.5, 0}));
    CHECK(!both.contains(1.0, {2, 0, 0}, {0, 1.5, 0}));
}

TEST_CASE("report serialization carries the verdict and extras") {
    BoundReport rep;
    rep.theorem_id = "demo";
    rep.regime = "r";
    rep.statistic = "sup";
    rep.value = 1.5;
    rep.refinement_trend = {1.4, 1.5};
    rep.refinement_drift = 0.066;
    rep.verdict = Verdict::kPass;
    rep.extras["k"] = 2.0;
    const std::string js = rep.to_json();
    CHECK(js.find("\"theorem\": \"demo\"") != std::string::npos);
    CHECK(js.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(js.find("\"k\": 2.0") != std::string::npos);
    CHECK(rep.to_text().find("pass") != std::string::npos);
}

TEST_CASE("field-based theorem suite at reduced scale") {
    const VerifierConfig vc = small_config();
    const auto& tab = table15();
    KernelField f = build_mc_field(vc, false);
    KernelField fr = build_mc_field(vc, true);
    const KernelField pde = build_pde_field(vc, false);
    const KernelField pde_ref = build_pde_field(vc, true);
    CHECK(pde_ref.points.size() >= 8);
    f.points.insert(f.points.end(), pde.points.begin(), pde.points.end());
    fr.points.insert(fr.points.end(), pde_ref.points.begin(), pde_ref.points.end());

    const auto nie = verify_nie_w(f, fr, vc.sim.params);
    CHECK(std::isfinite(nie.value));
    CHECK(nie.value > 0.0);

    const auto ub = verify_standard_ub(f, fr, tab, vc.sim.params);
    CHECK(ub.value >= 1.0 - 0.2);
    CHECK(ub.extras.count("sup_D2") == 1);
    CHECK(ub.extras.count("sup_D20") == 1);

    const auto two = verify_two_sided(f, fr, tab, vc.sim.params);
    CHECK(two.extras.at("C_hat") > 0.0);
    CHECK(two.extras.at("C_tilde_hat") > 0.0);
    CHECK(two.extras.at("n_slope_points") >= 8);

    const auto lb = verify_lower_standard(f, fr, tab, vc.sim.params);
    CHECK(lb.extras.at("c_r1") > 0.0);
    CHECK(lb.extras.at("c_r4") >= lb.extras.at("c_r1") * 0.8);
}

TEST_CASE("near-origin coverage is a precondition") {
    const VerifierConfig vc = small_config();
    KernelField f;
    KernelPoint pt;
    pt.t = 1.0;
    pt.x = {0, 0, 0};
    pt.y = {1.0, 0, 0};
    pt.estimate = 0.01;
    pt.backend = "MC";
    f.points.push_back(pt);
    CHECK_THROWS_AS(verify_nie_w(f, f, vc.sim.params), config_error);
}

TEST_CASE("desingularizing L1 corollaries at reduced scale") {
    VerifierConfig vc = small_config();
    vc.sim.n_paths = 20000;
    const auto rep = verify_desingularizing_l1(vc);
    CHECK(rep.extras.at("c1_hat") > 0.0);
    CHECK(rep.extras.at("C2_hat") > 0.0);
    CHECK(std::isfinite(rep.value));
    // The adjoint mass from x must vanish like |x|^beta.
    CHECK(std::fabs(rep.extras.at("mass_slope") - vc.sim.params.beta) < 0.3);
}

TEST_CASE("integral lower bound at reduced scale") {
    VerifierConfig vc = small_config();
    vc.pde_n = 32;
    const auto rep = verify_integral_lower(vc);
    CHECK(rep.extras.at("nu_hat") > 0.0);
    CHECK(rep.value <= 1.5);
}

TEST_CASE("annulus bounds find an admissible pair at the measured nu") {
    VerifierConfig vc = small_config();
    vc.pde_n = 32;
    const auto il = verify_integral_lower(vc);
    const double nu_hat = il.extras.at("nu_hat");
    CHECK(nu_hat > 0.0);
    vc.pde_n = 48;
    vc.pde_t = 4.0;
    const auto rep = verify_annulus_bounds(vc, nu_hat);
    CHECK(rep.verdict == Verdict::kPass);
    CHECK(rep.extras.at("R") >= 4.0);
}

TEST_CASE("Chapman-Kolmogorov spot checks") {
    VerifierConfig vc = small_config();
    vc.pde_n = 48;
    vc.pde_box = 24.0;
    const auto checks = chapman_kolmogorov_check(vc, 3);
    for (const auto& ck : checks) {
        CHECK(ck.lhs > 0.0);
        CHECK(ck.rel_err < 0.2);
    }
}
