#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FKOP_CLI_PATH
#define FKOP_CLI_PATH "./fkop"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FKOP_CLI_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("beta subcommand: curve and single row") {
    CHECK(run("beta --n 61 --out /tmp/fkop_beta.csv > /dev/null") == 0);
    const std::string csv = slurp("/tmp/fkop_beta.csv");
    CHECK(csv.rfind("kappa,beta,kappa_check", 0) == 0);
    // 61 rows + header.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 62);

    CHECK(run("beta --n 1 --kappa-lo 2.5 --out /tmp/fkop_beta1.csv > /dev/null") == 0);
    const std::string one = slurp("/tmp/fkop_beta1.csv");
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK(one.find("2.5,") != std::string::npos);
}

TEST_CASE("beta subcommand rejects invalid ranges with the usage code") {
    CHECK(run("beta --alpha 2.5 2> /dev/null") == 64);
    CHECK(run("beta --d 2 2> /dev/null") == 64);
}

TEST_CASE("props subcommand: zero violations, reproducible") {
    CHECK(run("props --draws 20000 --seed 5 --kappa-table /tmp/fkop_kr.csv "
              "> /tmp/fkop_props1.txt") == 0);
    CHECK(run("props --draws 20000 --seed 5 > /tmp/fkop_props2.txt") == 0);
    CHECK(slurp("/tmp/fkop_props1.txt") == slurp("/tmp/fkop_props2.txt"));
    const std::string kr = slurp("/tmp/fkop_kr.csv");
    CHECK(kr.rfind("r,kappa_r", 0) == 0);
}

TEST_CASE("unknown subcommand and unknown theorem id give usage errors") {
    CHECK(run("frobnicate 2> /dev/null") == 64);
    std::ofstream cfg("/tmp/fkop_cfg_bad.json");
    cfg << R"({"model": {"d":3, "alpha":1.5, "kappa":1.0, "eps":1e-3},
               "n_paths": 10000, "output_dir": "/tmp/fkop_out_bad"})";
    cfg.close();
    CHECK(run("verify --config /tmp/fkop_cfg_bad.json --theorems NOPE 2> /dev/null") ==
          64);
}

TEST_CASE("simulate: byte-identical outputs for identical config and seed") {
    {
        std::ofstream cfg("/tmp/fkop_cfg_sim.json");
        cfg << R"({"model": {"d":3, "alpha":1.5, "kappa":2.0, "eps":1e-3},
                   "t_final": 0.5, "n_paths": 20000, "seed": 42,
                   "n_threads": 1, "output_dir": "/tmp/fkop_out_a"})";
    }
    CHECK(run("simulate --config /tmp/fkop_cfg_sim.json > /dev/null") == 0);
    const std::string a = slurp("/tmp/fkop_out_a/kernel_field.csv");
    {
        std::ofstream cfg("/tmp/fkop_cfg_sim.json");
        cfg << R"({"model": {"d":3, "alpha":1.5, "kappa":2.0, "eps":1e-3},
                   "t_final": 0.5, "n_paths": 20000, "seed": 42,
                   "n_threads": 3, "output_dir": "/tmp/fkop_out_b"})";
    }
    CHECK(run("simulate --config /tmp/fkop_cfg_sim.json > /dev/null") == 0);
    const std::string b = slurp("/tmp/fkop_out_b/kernel_field.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    // Manifests exist and carry the config hash.
    CHECK(slurp("/tmp/fkop_out_a/manifest.json").find("config_hash") !=
          std::string::npos);
}

TEST_CASE("kernel subcommand reports a stable envelope constant") {
    CHECK(run("kernel --alpha 1.5 --n-radii 512 --table-out /tmp/fkop_table.csv "
              "> /tmp/fkop_kernel.txt") == 0);
    const std::string out = slurp("/tmp/fkop_kernel.txt");
    CHECK(out.find("k0_hat") != std::string::npos);
    const std::string table = slurp("/tmp/fkop_table.csv");
    CHECK(table.find("radius,p1") != std::string::npos);
}
