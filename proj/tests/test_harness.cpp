#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "critpairs/harness.hpp"

using namespace critpairs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const std::string& outdir) {
    ExperimentConfig cfg;
    cfg.alpha = 1.0;
    cfg.n_values = {64};
    cfg.trials = 2;
    cfg.master_seed = 7;
    cfg.top_l = 4;
    cfg.outputs = outdir;
    cfg.emit = {"pairing", "fluctuations", "events", "tails", "certificates"};
    return cfg;
}

} // namespace

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.n_values = {64};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.trials = 1;
    cfg.n_values = {2};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_values = {64};
    cfg.emit = {"nonsense"};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.emit = {"pairing"};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config json round trip is exact") {
    ExperimentConfig cfg;
    cfg.alpha = -0.05;
    cfg.n_values = {64, 256};
    cfg.trials = 12;
    cfg.master_seed = 0xdeadbeefcafe;
    cfg.top_l = 3;
    cfg.parameters.delta = 0.4;
    cfg.parameters.c_n = 8.0;
    cfg.parameters.ell_n = 5.0;
    cfg.parameters.net_budget = 1000;
    cfg.outputs = "somewhere";
    cfg.emit = {"events", "tails"};
    cfg.format = OutputFormat::kJsonl;
    const auto back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back == cfg);
}

TEST_CASE("experiment outputs are byte-identical across runs") {
    const fs::path base = fs::temp_directory_path() / "critpairs_test_det";
    fs::remove_all(base);
    auto cfg1 = small_config((base / "a").string());
    auto cfg2 = small_config((base / "b").string());
    (void)run_experiment(cfg1);
    (void)run_experiment(cfg2);
    for (const char* name :
         {"pairing_n64.csv", "fluctuations_n64.csv", "events_n64.csv", "tails_n64.csv",
          "certificates_n64.csv"}) {
        CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
    }
    fs::remove_all(base);
}

TEST_CASE("thread count does not change the output") {
    const fs::path base = fs::temp_directory_path() / "critpairs_test_threads";
    fs::remove_all(base);
    auto cfg1 = small_config((base / "one").string());
    cfg1.n_values = {48};
    cfg1.trials = 6;
    auto cfg2 = cfg1;
    cfg2.outputs = (base / "many").string();
    setenv("CRITPAIRS_THREADS", "1", 1);
    CHECK(thread_pool_size() == 1);
    (void)run_experiment(cfg1);
    setenv("CRITPAIRS_THREADS", "8", 1);
    CHECK(thread_pool_size() == 8);
    (void)run_experiment(cfg2);
    unsetenv("CRITPAIRS_THREADS");
    for (const char* name : {"pairing_n48.csv", "fluctuations_n48.csv", "events_n48.csv",
                             "tails_n48.csv", "certificates_n48.csv"})
        CHECK(slurp(base / "one" / name) == slurp(base / "many" / name));
    fs::remove_all(base);
}

TEST_CASE("golden headers") {
    const fs::path base = fs::temp_directory_path() / "critpairs_test_headers";
    fs::remove_all(base);
    auto cfg = small_config(base.string());
    (void)run_experiment(cfg);
    const auto first_line = [&](const char* name) {
        std::ifstream in(base / name);
        std::string line;
        std::getline(in, line);
        return line;
    };
    CHECK(first_line("pairing_n64.csv") ==
          "trial,rank,re_root,im_root,re_cp,im_cp,dist_first,dist_second,iota_ok,order_ok");
    CHECK(first_line("fluctuations_n64.csv") ==
          "trial,rank,re_value,im_value,regime,order_ok");
    CHECK(first_line("events_n64.csv") ==
          "trial,e_n,f_n,f_star_n,f_parallel_n,g_n,h_n,parameters");
    CHECK(first_line("tails_n64.csv") == "trial,rank,abs_value,arg_value");
    CHECK(first_line("certificates_n64.csv") ==
          "trial,re_xi,im_xi,c1,c2,k_lip,n_other,disk_radius,re_center,im_center,"
          "error_bound,cond_i,cond_ii,cond_iii,size_c_ok,size_n_ok,certified");
    fs::remove_all(base);
}

TEST_CASE("jsonl format emits parseable lines") {
    const fs::path base = fs::temp_directory_path() / "critpairs_test_jsonl";
    fs::remove_all(base);
    auto cfg = small_config(base.string());
    cfg.format = OutputFormat::kJsonl;
    cfg.emit = {"fluctuations"};
    (void)run_experiment(cfg);
    std::ifstream in(base / "fluctuations_n64.jsonl");
    REQUIRE(in.good());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.front() == '{');
        CHECK(line.find("\"re_value\"") != std::string::npos);
    }
    CHECK(rows == 2 * 4);  // trials * top_l
    fs::remove_all(base);
}

TEST_CASE("report summaries reflect the run") {
    const fs::path base = fs::temp_directory_path() / "critpairs_test_report";
    fs::remove_all(base);
    auto cfg = small_config(base.string());
    cfg.trials = 5;
    const auto report = run_experiment(cfg);
    REQUIRE(report.blocks.size() == 1);
    const auto& b = report.blocks[0];
    CHECK(b.n == 64);
    CHECK(b.trials_requested == 5);
    CHECK(b.trials_ok == 5);
    CHECK(b.solver_failures == 0);
    CHECK(b.max_residual <= 1e-9);
    CHECK(b.max_hull_excess <= 1e-9);
    CHECK(b.max_glpair_error <= 1e-8);
    CHECK(b.pair_dist_median > 0.0);
    CHECK(fs::exists(base / "report.json"));
    CHECK(fs::exists(base / "plots.gp"));
    fs::remove_all(base);
}
