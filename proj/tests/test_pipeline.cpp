#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "adlift/config.hpp"
#include "adlift/errors.hpp"
#include "adlift/pipeline.hpp"
#include "adlift/simulator.hpp"
#include "test_util.hpp"

using namespace adlift;
namespace fs = std::filesystem;

namespace {

// Small but non-trivial synthetic inputs shared by the pipeline tests.
void write_inputs(const testutil::TempDir& dir, std::uint64_t seed) {
    SimScenario sc;
    sc.n_minutes = 4320; // 3 days
    sc.start = parse_rfc3339("2019-06-03T00:00:00Z");
    sc.baseline = BaselineSpec{BaselineSpec::Kind::sinusoid, 30.0, 12.0, 1440.0, 0.0, 0.0};
    sc.spread = make_spread_spec(SpreadFamily::weibull, 0.32, 1.28, 1.0, 30);
    sc.ad_count = 25;
    sc.min_gap = 90.0;
    sc.theta.zero_prob = 0.25;
    sc.theta.mean = 250.0;
    sc.theta.shape = 3.0;
    sc.seed = seed;
    const SimResult r = simulate(sc);
    write_visits(r.series, dir.file("visits.csv"));
    write_ads(r.ads, dir.file("ads.csv"));
}

std::string small_config(const testutil::TempDir& dir, const std::string& out_dir,
                         bool forest_on) {
    return "visits = " + dir.file("visits.csv") + "\n" +
           "ads = " + dir.file("ads.csv") + "\n" +
           "out_dir = " + out_dir + "\n" +
           "seed = 21\n"
           "smoother.kernels = triangular\n"
           "smoother.h_min = 6\n"
           "smoother.h_max = 10\n"
           "smoother.repeats = 4\n"
           "families = exponential,weibull,gengamma\n"
           "max_outer_iterations = 12\n"
           "forest.mtry = 2,6\n"
           "forest.min_node = 5\n"
           "forest.sample_frac = 0.7\n"
           "forest.trees = 40\n"
           "forest.tuning_repeats = 2\n"
           "forest.final_repeats = 2\n" +
           std::string("stage.forest = ") + (forest_on ? "true" : "false") + "\n";
}

} // namespace

TEST_CASE("run_pipeline writes every artifact and the manifest") {
    testutil::TempDir dir("pipe_full");
    write_inputs(dir, 1001);
    const std::string out = (dir.path() / "out").string();
    const RunConfig cfg = run_config_from_text(small_config(dir, out, true));
    run_pipeline(cfg);

    for (const char* name :
         {"cv_report.csv", "model_comparison.csv", "thetas.csv", "rates.csv",
          "diagnostics_exponential.json", "diagnostics_weibull.json",
          "diagnostics_gengamma.json", "theta_density.csv", "quantiles.csv",
          "importance.csv", "pdp.csv", "tuning_report.csv", "run_report.json", "MANIFEST"}) {
        CHECK_MESSAGE(fs::exists(fs::path(out) / name), name);
    }

    const std::string manifest = testutil::read_file(out + "/MANIFEST");
    CHECK(manifest.find("status=complete") != std::string::npos);
    CHECK(manifest.find("stage.forest=done") != std::string::npos);
    CHECK(manifest.find("thetas.csv\tfnv1a64:") != std::string::npos);

    // hashes in the manifest match the files on disk
    std::stringstream ss(manifest);
    std::string line;
    int checked = 0;
    while (std::getline(ss, line)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            continue;
        const std::string name = line.substr(0, tab);
        const std::string hash = line.substr(tab + 1 + 8); // skip "fnv1a64:"
        char expected[32];
        std::snprintf(expected, sizeof(expected), "%016llx",
                      static_cast<unsigned long long>(
                          fnv1a64_file((fs::path(out) / name).string())));
        CHECK(hash == expected);
        ++checked;
    }
    CHECK(checked >= 10);

    // model comparison has one row per family and parses numerically
    const std::string comparison = testutil::read_file(out + "/model_comparison.csv");
    CHECK(comparison.find("family,alpha,phi,psi,mean,mode,avg_loglik,aic,wilks_p") == 0);
    CHECK(comparison.find("weibull,") != std::string::npos);
    CHECK(comparison.find("gengamma,") != std::string::npos);
}

TEST_CASE("forest toggle off means no forest artifacts") {
    testutil::TempDir dir("pipe_noforest");
    write_inputs(dir, 1002);
    const std::string out = (dir.path() / "out").string();
    const RunConfig cfg = run_config_from_text(small_config(dir, out, false));
    run_pipeline(cfg);
    CHECK(!fs::exists(fs::path(out) / "importance.csv"));
    CHECK(!fs::exists(fs::path(out) / "pdp.csv"));
    CHECK(!fs::exists(fs::path(out) / "tuning_report.csv"));
    CHECK(fs::exists(fs::path(out) / "thetas.csv"));
    const std::string manifest = testutil::read_file(out + "/MANIFEST");
    CHECK(manifest.find("stage.forest=skipped") != std::string::npos);
}

TEST_CASE("same config and seed produce byte-identical outputs") {
    testutil::TempDir dir("pipe_det");
    write_inputs(dir, 1003);
    const std::string out1 = (dir.path() / "out1").string();
    const std::string out2 = (dir.path() / "out2").string();
    run_pipeline(run_config_from_text(small_config(dir, out1, true)));
    run_pipeline(run_config_from_text(small_config(dir, out2, true)));
    for (const char* name : {"thetas.csv", "diagnostics_weibull.json", "cv_report.csv",
                             "importance.csv", "pdp.csv", "model_comparison.csv"}) {
        CHECK_MESSAGE(testutil::read_file(out1 + "/" + name) ==
                          testutil::read_file(out2 + "/" + name),
                      name);
    }
}

TEST_CASE("missing input yields a partial manifest and propagates") {
    testutil::TempDir dir("pipe_fail");
    const std::string out = (dir.path() / "out").string();
    const std::string text = "visits = /nonexistent/visits.csv\n"
                             "ads = /nonexistent/ads.csv\n"
                             "out_dir = " +
                             out + "\n";
    const RunConfig cfg = run_config_from_text(text);
    CHECK_THROWS_AS(run_pipeline(cfg), DataError);
    const std::string manifest = testutil::read_file(out + "/MANIFEST");
    CHECK(manifest.find("status=partial") != std::string::npos);
}

TEST_CASE("config parser rejects unknown keys and bad values") {
    CHECK_THROWS_AS(run_config_from_text("visits = a\nads = b\nbogus_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(run_config_from_text("visits = a\nads = b\nseed = notanumber\n"),
                    ConfigError);
    CHECK_THROWS_AS(run_config_from_text("ads = b\n"), ConfigError);
    CHECK_THROWS_AS(
        run_config_from_text("visits = a\nads = b\nsmoother.h_min = 9\nsmoother.h_max = 3\n"),
        ConfigError);

    const RunConfig cfg = run_config_from_text("visits = a\nads = b\n# comment\nseed = 9\n");
    CHECK(cfg.seed == 9);
    CHECK(cfg.kernels.size() == 5);
    CHECK(cfg.h_max == 60);
    CHECK(cfg.forest_grid().size() == 216);
}
