#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "test_support.hpp"
#include "totient/cli.hpp"
#include "totient/bounds.hpp"
#include "totient/dataset.hpp"
#include "totient/regress.hpp"

using namespace totient;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "totient");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    test_support::TempDir dir("cli-usage");
    const auto out = (dir / "d.csv").string();
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
    CHECK(run_cli({"generate", "--bits", "63", "--out", out}).code == cli::kUsage);
    CHECK(run_cli({"generate", "--bits", "4", "--out", out}).code == cli::kUsage);
    CHECK(run_cli({"generate", "--bits", "64"}).code == cli::kUsage);
    CHECK(run_cli({"generate", "--bits", "64", "--count", "200000", "--out", out}).code == cli::kUsage);
    CHECK(run_cli({"help"}).code == cli::kUsage);
    CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("generate is deterministic and thread independent") {
    test_support::TempDir dir("cli-gen");
    const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    REQUIRE(run_cli({"generate", "--bits", "64", "--count", "300", "--seed", "9", "--out", a}).code == cli::kOk);
    REQUIRE(run_cli({"generate", "--bits", "64", "--count", "300", "--seed", "9", "--out", b, "--threads", "4"})
                .code == cli::kOk);
    CHECK(test_support::slurp(a) == test_support::slurp(b));
    const auto ds = read_csv(std::filesystem::path(a));
    CHECK(ds.samples.size() == 300);
    CHECK(ds.header.master_seed == 9);
    CHECK(run_cli({"generate", "--bits", "64", "--count", "5", "--out", (dir / "no" / "x.csv").string()}).code ==
          cli::kRuntime);
}

TEST_CASE("fit, eval, bounds, attack and plot") {
    test_support::TempDir dir("cli-flow");
    const auto data = (dir / "d.csv").string(), model = (dir / "m.json").string();
    REQUIRE(run_cli({"generate", "--bits", "32", "--count", "500", "--seed", "3", "--out", data}).code == cli::kOk);
    REQUIRE(run_cli({"fit", "--in", data, "--out", model}).code == cli::kOk);
    const auto m = load_model(std::filesystem::path(model));
    CHECK(m.mode == FitMode::half_slope);
    CHECK(m.modulus_bits == 32);
    CHECK(run_cli({"fit", "--in", data, "--out", model, "--mode", "lasso"}).code == cli::kUsage);
    CHECK(run_cli({"fit", "--in", (dir / "missing.csv").string(), "--out", model}).code == cli::kRuntime);

    const auto metrics = (dir / "metrics.json").string();
    REQUIRE(run_cli({"eval", "--in", data, "--model", model, "--out", metrics}).code == cli::kOk);
    const auto mj = nlohmann::json::parse(test_support::slurp(metrics));
    CHECK(mj.contains("r2"));

    const auto bounds = (dir / "b.csv").string();
    REQUIRE(run_cli({"bounds", "--in", data, "--model", model, "--out", bounds}).code == cli::kOk);
    const auto btext = test_support::slurp(bounds);
    CHECK(btext.rfind(bounds_csv_header(), 0) == 0);

    auto r = run_cli({"bounds", "--n", "143", "--p", "11", "--q", "13"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("143,120,") != std::string::npos);

    // Provable 8-bit model: predicted sum 31, true sum 24, eight tests.
    const auto m8 = (dir / "m8.json").string();
    save_model(fit_provable(8), std::filesystem::path(m8));
    r = run_cli({"attack", "--model", m8, "--n", "143", "--budget", "10"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("\"iterations_used\": 8") != std::string::npos);
    CHECK(run_cli({"attack", "--model", m8, "--n", "143", "--budget", "7"}).code == cli::kBudgetExhausted);
    CHECK(run_cli({"attack", "--baseline", "--n", "143", "--budget", "1"}).code == cli::kOk);
    CHECK(run_cli({"attack", "--in", data, "--model", model, "--row", "0", "--budget", "100000"}).code ==
          cli::kOk);

    const auto prefix = (dir / "win").string();
    REQUIRE(run_cli({"attack", "--in", data, "--model", model, "--out", prefix}).code == cli::kOk);
    CHECK(std::filesystem::exists(prefix + ".csv"));
    CHECK(std::filesystem::exists(prefix + ".json"));

    const auto plots = (dir / "plots").string();
    REQUIRE(run_cli({"plot", "--in", data, "--model", model, "--out", plots}).code == cli::kOk);
    CHECK(std::filesystem::exists(dir / "plots" / "scatter.svg"));
    CHECK(std::filesystem::exists(dir / "plots" / "residual_hist.svg"));
}

TEST_CASE("config file supplies flags") {
    test_support::TempDir dir("cli-config");
    const auto cfg = dir / "gen.ini";
    const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    {
        std::ofstream f(cfg);
        f << "bits=64\ncount=40\nseed=5\n";
    }
    REQUIRE(run_cli({"generate", "--config", cfg.string(), "--out", a}).code == cli::kOk);
    REQUIRE(run_cli({"generate", "--bits", "64", "--count", "40", "--seed", "5", "--out", b}).code == cli::kOk);
    CHECK(test_support::slurp(a) == test_support::slurp(b));
}

TEST_CASE("pipeline writes every artifact") {
    test_support::TempDir dir("cli-pipe");
    const auto out = dir / "run";
    const auto r = run_cli({"pipeline", "--bits", "32", "--count", "400", "--seed", "7", "--out", out.string()});
    REQUIRE(r.code == cli::kOk);
    for (const char* f : {"dataset.csv", "model.json", "metrics.json", "bounds.csv", "window.csv", "window.json",
                          "scatter.svg", "scatter.csv", "residual_hist.svg", "residual_hist.csv", "summary.json"})
        CHECK_MESSAGE(std::filesystem::exists(out / f), f);
}
