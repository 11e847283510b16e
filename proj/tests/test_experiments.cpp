// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlpriv/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace mlpriv;

namespace {

ExperimentConfig tiny_example1() {
    ExperimentConfig cfg;
    cfg.id = ExperimentId::kExample1;
    cfg.n_grid = {60};
    cfg.l_grid = {2};
    cfg.k = 2;
    cfg.b_grid = {0.6, 0.9};
    cfg.replications = 2;
    cfg.seed = 7;
    cfg.restarts = 4;
    return cfg;
}

}  // namespace

TEST_CASE("replication CSV is reproducible byte for byte") {
    const ExperimentConfig cfg = tiny_example1();
    const ExperimentTable a = run_example1(cfg);
    const ExperimentTable b = run_example1(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.summary_csv() == b.summary_csv());
    CHECK(!a.rows.empty());
    for (const ReplicationRow& row : a.rows) {
        CHECK(row.error >= 0.0);
        CHECK(row.error <= 1.0);
    }
}

TEST_CASE("extending the replication count keeps earlier replications") {
    ExperimentConfig small = tiny_example1();
    ExperimentConfig big = tiny_example1();
    big.replications = 4;
    const ExperimentTable ts = run_example1(small);
    const ExperimentTable tb = run_example1(big);
    // Rows are ordered by (cell, replication); match each small row to the
    // same cell/replication in the big run.
    for (const ReplicationRow& row : ts.rows) {
        bool found = false;
        for (const ReplicationRow& other : tb.rows) {
            if (other.n == row.n && other.l == row.l && other.param_value == row.param_value &&
                other.replication == row.replication) {
                CHECK(other.error == row.error);
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("csv schema") {
    const ExperimentTable t = run_example1(tiny_example1());
    const std::string csv = t.to_csv();
    CHECK(csv.rfind("experiment,n,L,K,param_name,param_value,replication,hamming_error\n", 0) ==
          0);
    CHECK(csv.find("example1,60,2,2,b,0.6,1,") != std::string::npos);
    const std::string summary = t.summary_csv();
    CHECK(summary.rfind("experiment,n,L,K,param_name,param_value,replications,mean_error,stderr\n",
                        0) == 0);
}

TEST_CASE("config file parsing") {
    const auto path = std::filesystem::temp_directory_path() / "mlpriv_cfg_test.txt";
    {
        std::ofstream out(path);
        out << "# comment\n";
        out << "experiment = example1\n";
        out << "n_grid = 50,100\n";
        out << "L = 2,4\n";
        out << "k = 3\n";
        out << "b_grid = 0.5,0.7,0.9\n";
        out << "replications = 5\n";
        out << "seed = 99\n";
        out << "tau = 0.2\n";
    }
    const ExperimentConfig cfg = parse_config_file(path.string());
    std::filesystem::remove(path);
    CHECK(cfg.id == ExperimentId::kExample1);
    CHECK(cfg.n_grid == std::vector<Index>{50, 100});
    CHECK(cfg.l_grid == std::vector<Index>{2, 4});
    CHECK(cfg.k == 3);
    CHECK(cfg.b_grid.size() == 3);
    CHECK(cfg.replications == 5);
    CHECK(cfg.seed == 99);
    CHECK(cfg.tau == doctest::Approx(0.2));
    CHECK_THROWS(parse_config_file("/nonexistent/config"));

    ExperimentConfig c2;
    CHECK_THROWS_AS(apply_config_line(c2, "bogus_key", "1"), std::invalid_argument);
}

TEST_CASE("experiment outputs land in the requested directory") {
    ExperimentConfig cfg = tiny_example1();
    const auto dir = std::filesystem::temp_directory_path() / "mlpriv_exp_out";
    std::filesystem::remove_all(dir);
    cfg.out_dir = dir.string();
    const ExperimentTable t = run_example1(cfg);
    write_experiment_outputs(cfg, t);
    CHECK(std::filesystem::exists(dir / "example1_replications.csv"));
    CHECK(std::filesystem::exists(dir / "example1_summary.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("flip sweep at beta = 0 reproduces the reference labels") {
    ExperimentConfig cfg;
    cfg.id = ExperimentId::kFlipSweep;
    cfg.n_grid = {200};
    cfg.l_grid = {3};
    cfg.k = 2;
    cfg.beta_grid = {0.0};
    cfg.replications = 3;
    cfg.seed = 21;
    cfg.restarts = 6;
    const Synthetic syn = generate_synthetic(200, 2, 3, 5);
    const ExperimentTable t = run_flip_sweep(cfg, syn.network, 2);
    for (const ReplicationRow& row : t.rows) CHECK(row.error <= 0.01);
}

TEST_CASE("spearman rank correlation") {
    CHECK(spearman({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {8, 6, 4, 2}) == doctest::Approx(-1.0));
    CHECK(std::abs(spearman({1, 2, 3, 4, 5, 6}, {3, 1, 4, 1, 5, 9})) < 1.0);
    CHECK_THROWS_AS(spearman({1}, {1}), std::invalid_argument);
}

TEST_CASE("uniform eps sweep produces one cell per epsilon") {
    ExperimentConfig cfg;
    cfg.id = ExperimentId::kCustom;
    cfg.n_grid = {50};
    cfg.l_grid = {2};
    cfg.k = 2;
    cfg.eps_grid = {2.0, 1.0};
    cfg.replications = 2;
    cfg.seed = 31;
    cfg.restarts = 4;
    const ExperimentTable t = run_uniform_eps_sweep(cfg);
    const std::vector<CellSummary> cells = summarize(t);
    CHECK(cells.size() == 2);
    CHECK(cells[0].param_name == "eps");
    CHECK(cells[0].param_value == 2.0);
    CHECK(cells[1].param_value == 1.0);
}
