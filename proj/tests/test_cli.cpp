#include "mpt/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include "mpt/records_io.hpp"

namespace mpt::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("mpt_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }
    fs::path path(const std::string& name) const { return dir_ / name; }

    static std::string slurp(const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    int invoke(std::vector<std::string> args) {
        args.insert(args.begin(), "mpt");
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST_F(CliTest, SimulateDefaultsWritesHeaderAndFiftyRows) {
    const auto cfg = file("empty.cfg", "");
    ASSERT_EQ(invoke({"simulate", "--config", cfg.string(), "--seed", "7", "--out",
                      path("run.csv").string()}),
              kOk)
        << err_.str();
    EXPECT_EQ(count_lines(slurp(path("run.csv"))), 51u);
    const json manifest = json::parse(slurp(path("run.manifest.json")));
    EXPECT_EQ(manifest["master_seed"], 7);
    EXPECT_EQ(manifest["seed_source"], "flag");
    EXPECT_EQ(manifest["record_count"], 50);
    EXPECT_EQ(manifest["tool"], "mpt");
}

TEST_F(CliTest, SimulateIsByteReproducible) {
    const auto cfg = file("c.cfg", "[run]\nmaster_seed = 99\nn_replications = 3\n");
    ASSERT_EQ(invoke({"simulate", "--config", cfg.string(), "--out", path("a.csv").string()}),
              kOk);
    ASSERT_EQ(invoke({"simulate", "--config", cfg.string(), "--out", path("b.csv").string()}),
              kOk);
    const auto a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(count_lines(a), 151u);
    json ma = json::parse(slurp(path("a.manifest.json")));
    json mb = json::parse(slurp(path("b.manifest.json")));
    EXPECT_EQ(ma["seed_source"], "config");
    // only the output paths differ
    ma.erase("outputs");
    mb.erase("outputs");
    EXPECT_EQ(ma, mb);
}

TEST_F(CliTest, SimulateWithoutSeedReportsGeneratedSeed) {
    const auto cfg = file("c.cfg", "");
    ASSERT_EQ(invoke({"simulate", "--config", cfg.string(), "--out", path("a.csv").string()}),
              kOk);
    EXPECT_NE(out_.str().find("generated master seed"), std::string::npos);
    const json manifest = json::parse(slurp(path("a.manifest.json")));
    EXPECT_EQ(manifest["seed_source"], "generated");
}

TEST_F(CliTest, SimulateErrorsMapToExitCodes) {
    const auto bad = file("bad.cfg", "[weights]\nlambda_discount = 1.5\n");
    EXPECT_EQ(invoke({"simulate", "--config", bad.string(), "--out", path("x.csv").string()}),
              kValidation);
    EXPECT_NE(err_.str().find("lambda_discount"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.csv")));

    const auto good = file("good.cfg", "");
    EXPECT_EQ(invoke({"simulate", "--config", good.string(), "--seed", "1", "--out",
                      (dir_ / "missing_dir" / "x.csv").string()}),
              kIo);
    EXPECT_EQ(invoke({"simulate", "--config", path("nope.cfg").string(), "--out",
                      path("x.csv").string()}),
              kIo);
    EXPECT_EQ(invoke({"simulate", "--config", good.string()}), kValidation);
    EXPECT_EQ(invoke({"simulate", "--config", good.string(), "--seed", "abc", "--out",
                      path("x.csv").string()}),
              kValidation);
}

TEST_F(CliTest, AnalyzeWritesReportAndSummaries) {
    const auto cfg = file("c.cfg", "[run]\nmaster_seed = 5\n");
    ASSERT_EQ(invoke({"simulate", "--config", cfg.string(), "--out", path("t.csv").string()}),
              kOk);
    ASSERT_EQ(invoke({"analyze", "--in", path("t.csv").string(), "--out",
                      path("report.json").string()}),
              kOk)
        << err_.str();
    const json report = json::parse(slurp(path("report.json")));
    ASSERT_EQ(report.size(), 5u);
    EXPECT_EQ(report[0]["name"], "H1");
    EXPECT_EQ(report[0]["pair"], "Privacy Preference - Utility");
    EXPECT_EQ(report[4]["pair"], "CI - Utility");
    EXPECT_EQ(report[0]["n"], 50);

    std::ifstream in(path("t.csv"));
    const auto direct = run_hypotheses(read_records_csv(in));
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(report[i]["r"].get<double>(), direct[i].inference->r);
        EXPECT_EQ(report[i]["p_value"].get<double>(), direct[i].inference->p_value);
        EXPECT_EQ(report[i]["ci_low"].get<double>(), direct[i].inference->ci_low);
    }
    EXPECT_EQ(count_lines(slurp(path("report.bands.csv"))), 31u);
    EXPECT_EQ(count_lines(slurp(path("report.universes.csv"))), 51u);
    EXPECT_TRUE(fs::exists(path("report.manifest.json")));
    EXPECT_NE(out_.str().find("Privacy Preference - Utility"), std::string::npos);
}

std::string csv_with_utility(const std::function<double(double, double)>& utility_of) {
    std::ostringstream csv;
    csv << kTrajectoryHeader << "\n";
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double rho = unit(gen);
        const double r = unit(gen);
        csv << "0," << i / 10 << ',' << i % 10 + 1 << ',' << rho << ",0.7," << r << ",0.5,0.5,0,"
            << utility_of(rho, r) << ",1," << (r < 1.0 / 3 ? "low" : r < 2.0 / 3 ? "moderate" : "high")
            << "\n";
    }
    return csv.str();
}

TEST_F(CliTest, AnalyzePerfectCorrelation) {
    const auto in = file("t.csv", csv_with_utility([](double rho, double) { return rho; }));
    ASSERT_EQ(invoke({"analyze", "--in", in.string(), "--out", path("r.json").string()}), kOk);
    const json report = json::parse(slurp(path("r.json")));
    EXPECT_DOUBLE_EQ(report[0]["r"].get<double>(), 1.0);
    EXPECT_EQ(report[0]["p_value"].get<double>(), 0.0);
    EXPECT_EQ(report[0]["status"], "ok");
}

TEST_F(CliTest, AnalyzeConstantUtilityIsDegenerateNotFatal) {
    const auto in = file("t.csv", csv_with_utility([](double, double) { return 0.5; }));
    ASSERT_EQ(invoke({"analyze", "--in", in.string(), "--out", path("r.json").string()}), kOk);
    const json report = json::parse(slurp(path("r.json")));
    for (const auto& h : report) {
        EXPECT_EQ(h["status"], "degenerate_variance");
        EXPECT_TRUE(h["r"].is_null());
        EXPECT_FALSE(h["significant_05"].get<bool>());
    }
}

TEST_F(CliTest, AnalyzeMissingColumnsIsValidationError) {
    const auto in = file("t.csv", "replication,universe,t,rho\n0,0,1,0.5\n");
    EXPECT_EQ(invoke({"analyze", "--in", in.string(), "--out", path("r.json").string()}),
              kValidation);
    EXPECT_NE(err_.str().find("utility"), std::string::npos);
    EXPECT_EQ(invoke({"analyze", "--in", path("none.csv").string(), "--out",
                      path("r.json").string()}),
              kIo);
}

TEST_F(CliTest, ReplicateOneSeedGivesFiveRows) {
    const auto cfg = file("c.cfg", "");
    ASSERT_EQ(invoke({"replicate", "--config", cfg.string(), "--seeds", "1", "--seed", "11",
                      "--out", path("rep.csv").string()}),
              kOk)
        << err_.str();
    const auto rows = slurp(path("rep.csv"));
    EXPECT_EQ(count_lines(rows), 6u);
    EXPECT_EQ(rows.find("seed,hypothesis,r,p_value,significant_05\n11,H1,"), 0u);
    EXPECT_EQ(count_lines(slurp(path("rep.quantiles.csv"))), 6u);
    EXPECT_EQ(invoke({"replicate", "--config", cfg.string(), "--seeds", "0", "--out",
                      path("rep.csv").string()}),
              kValidation);
}

TEST(ReplicateHypotheses, SeedsAreConsecutiveAndMatchSingleRuns) {
    SimulationConfig cfg;
    const auto report = replicate_hypotheses(cfg, 100, 4);
    ASSERT_EQ(report.runs.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(report.runs[k].seed, 100 + k);
        cfg.master_seed = 100 + k;
        const auto direct = run_hypotheses(run_simulation(cfg));
        EXPECT_EQ(report.runs[k].results[1].inference->r, direct[1].inference->r);
    }
    ASSERT_EQ(report.quantiles.size(), 5u);
    for (const auto& q : report.quantiles) {
        EXPECT_EQ(q.n_valid, 4u);
        EXPECT_LE(q.q025, q.q50);
        EXPECT_LE(q.q50, q.q975);
    }
}

TEST(QuantileSorted, TypeSeven) {
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.025), 1.075);
    EXPECT_DOUBLE_EQ(quantile_sorted({7.0}, 0.975), 7.0);
}

TEST(SiblingPath, ReplacesExtension) {
    EXPECT_EQ(sibling_path("out/run.csv", ".manifest.json"), fs::path("out/run.manifest.json"));
    EXPECT_EQ(sibling_path("report", ".bands.csv"), fs::path("report.bands.csv"));
}

constexpr const char* kUniverse =
    R"({"rho": 0.5, "s": 0.5, "r": 0.5, "trust": 0.5, "d_sens": 0.5})";

TEST_F(CliTest, DecideSingletonAction) {
    const auto cfg = file("c.cfg", "");
    const auto state = file("s.json", std::string(R"({"universes": [)") + kUniverse + "]}");
    ASSERT_EQ(invoke({"decide", "--config", cfg.string(), "--state", state.string()}), kOk)
        << err_.str();
    const json result = json::parse(out_.str());
    EXPECT_EQ(result["chosen_action"], 0);
    EXPECT_EQ(result["expected_utilities"].size(), 1u);
    EXPECT_EQ(result["discounted_value"].get<double>(),
              result["per_step_expected_utility"][0].get<double>());
}

TEST_F(CliTest, DecidePrefersRiskReducer) {
    const auto cfg = file("c.cfg", "");
    const auto state = file("s.json", std::string(R"({"universes": [)") + kUniverse + "," +
                                          kUniverse + R"(], "actions": [
        {"id": 0, "label": "observe"},
        {"id": 1, "label": "mitigate", "delta_r": -0.3}]})");
    ASSERT_EQ(invoke({"decide", "--config", cfg.string(), "--state", state.string()}), kOk)
        << err_.str();
    const json result = json::parse(out_.str());
    EXPECT_EQ(result["chosen_action"], 1);
    EXPECT_EQ(result["chosen_label"], "mitigate");
    const double eu0 = result["expected_utilities"][0]["expected_utility"];
    const double eu1 = result["expected_utilities"][1]["expected_utility"];
    EXPECT_NEAR(eu1 - eu0, 0.27, 1e-12);
}

TEST_F(CliTest, DecideTieGoesToLowestId) {
    const auto cfg = file("c.cfg", "");
    const auto state = file("s.json", std::string(R"({"universes": [)") + kUniverse +
                                          R"(], "actions": [
        {"id": 4, "label": "b"}, {"id": 2, "label": "a"}]})");
    ASSERT_EQ(invoke({"decide", "--config", cfg.string(), "--state", state.string()}), kOk);
    EXPECT_EQ(json::parse(out_.str())["chosen_action"], 2);
}

TEST_F(CliTest, DecideMultiStepDiscounts) {
    const auto cfg = file("c.cfg", "[weights]\nlambda_discount = 0.5\n");
    const auto state = file("s.json", std::string(R"({"steps": [[)") + kUniverse + "], [" +
                                          kUniverse + "]]}");
    ASSERT_EQ(invoke({"decide", "--config", cfg.string(), "--state", state.string()}), kOk);
    const json result = json::parse(out_.str());
    const double eu = result["per_step_expected_utility"][0];
    EXPECT_DOUBLE_EQ(result["discounted_value"].get<double>(), eu + 0.5 * eu);
    EXPECT_EQ(result["steps"].size(), 2u);
}

TEST_F(CliTest, DecideMalformedState) {
    const auto cfg = file("c.cfg", "");
    for (const std::string bad :
         {"{", "[]", R"({"universes": []})", R"({"universes": [{"rho": 0.5}]})",
          R"({"universes": [{"rho": 2, "s": 0.5, "r": 0.5, "trust": 0.5, "d_sens": 0.5}]})",
          R"({"steps": 3})"}) {
        const auto state = file("s.json", bad);
        EXPECT_EQ(invoke({"decide", "--config", cfg.string(), "--state", state.string()}),
                  kValidation)
            << bad;
    }
}

TEST_F(CliTest, OracleDefaultWeights) {
    const auto cfg = file("c.cfg", "");
    ASSERT_EQ(invoke({"oracle", "--config", cfg.string()}), kOk) << err_.str();
    const json table = json::parse(out_.str());
    EXPECT_NEAR(table["rho"].get<double>(), 0.6386, 5e-5);
    EXPECT_NEAR(table["r"].get<double>(), -0.5747, 5e-5);
    EXPECT_NEAR(table["trust"].get<double>(), 0.38313, 5e-5);
}

TEST_F(CliTest, OracleSingleTerm) {
    const auto cfg = file("c.cfg",
                          "[weights]\nalpha = 1\nbeta = 0\ngamma = 0\ndelta = 0\nzeta = 0\n");
    ASSERT_EQ(invoke({"oracle", "--config", cfg.string()}), kOk) << err_.str();
    const json table = json::parse(out_.str());
    EXPECT_DOUBLE_EQ(table["rho"].get<double>(), 1.0);
    EXPECT_EQ(table["s"].get<double>(), 0.0);
}

TEST_F(CliTest, OracleRefusesUnsupportedConfigs) {
    const auto acting = file("a.cfg", "[actions]\naction = 0, mitigate, -0.1, 0, 0\n");
    EXPECT_EQ(invoke({"oracle", "--config", acting.string()}), kValidation);
    const auto ci = file("b.cfg", "[weights]\ntheta = 0.2\n");
    EXPECT_EQ(invoke({"oracle", "--config", ci.string()}), kValidation);
}

TEST_F(CliTest, VersionAndHelp) {
    EXPECT_EQ(invoke({"--version"}), kOk);
    EXPECT_NE(out_.str().find("0.1.0"), std::string::npos);
    EXPECT_EQ(invoke({"--help"}), kOk);
    EXPECT_NE(out_.str().find("simulate"), std::string::npos);
    EXPECT_EQ(invoke({}), kValidation);
    EXPECT_EQ(invoke({"frobnicate"}), kValidation);
}

}  // namespace
}  // namespace mpt::cli
