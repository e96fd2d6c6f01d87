#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adlift/config.hpp"
#include "adlift/errors.hpp"
#include "adlift/pipeline.hpp"
#include "adlift/reports.hpp"
#include "adlift/simulator.hpp"
#include "adlift/version.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kNumericalError = 4;

int classify(const std::exception& e) {
    if (dynamic_cast<const adlift::ConfigError*>(&e) != nullptr)
        return kConfigError;
    if (dynamic_cast<const adlift::DataError*>(&e) != nullptr)
        return kDataError;
    if (dynamic_cast<const adlift::DomainError*>(&e) != nullptr ||
        dynamic_cast<const adlift::NumericalError*>(&e) != nullptr)
        return kNumericalError;
    return kNumericalError;
}

int run_command(const std::string& config_path) {
    const adlift::RunConfig cfg = adlift::parse_run_config(config_path);
    adlift::run_pipeline(cfg);
    std::cout << "artifacts written to " << cfg.out_dir << "\n";
    return kOk;
}

int simulate_command(const std::string& scenario_path, const std::string& out_dir) {
    const adlift::SimScenario scenario = adlift::load_scenario(scenario_path);
    const adlift::SimResult result = adlift::simulate(scenario);
    std::filesystem::create_directories(out_dir);
    const auto join = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    adlift::write_visits(result.series, join("visits.csv"));
    adlift::write_ads(result.ads, join("ads.csv"));
    adlift::write_truth_json(result.truth, scenario.seed, join("truth.json"));
    std::cout << "simulated " << result.series.n() << " minutes, " << result.ads.m()
              << " ads into " << out_dir << "\n";
    return kOk;
}

int quantiles_command(const std::string& visits_path, const std::string& ads_path,
                      const std::string& out_path, int before, int after) {
    const adlift::VisitSeries series = adlift::load_visits(visits_path);
    const adlift::AdSchedule ads = adlift::load_ads(ads_path, series);
    const adlift::QuantileReport report =
        adlift::ad_window_quantiles(series, ads, before, after);
    adlift::write_quantile_csv(report, out_path);
    std::cout << "wrote " << out_path << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TV ad lift estimation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run the pipeline from a config file");
    run->add_option("--config", config_path, "run configuration file")->required();

    std::string scenario_path;
    std::string sim_out = "sim_out";
    CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic visits and ads");
    simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--out", sim_out, "output directory");

    std::string visits_path, ads_path;
    std::string quantile_out = "quantiles.csv";
    int before = 15, after = 45;
    CLI::App* quantiles =
        app.add_subcommand("quantiles", "visit quantiles around ad end times");
    quantiles->add_option("--visits", visits_path, "visits CSV")->required();
    quantiles->add_option("--ads", ads_path, "ads CSV")->required();
    quantiles->add_option("--out", quantile_out, "output CSV path");
    quantiles->add_option("--before", before, "minutes before the ad");
    quantiles->add_option("--after", after, "minutes after the ad");

    CLI::App* version = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (version->parsed()) {
            std::cout << "adlift " << adlift::kVersion << "\n";
            return kOk;
        }
        if (run->parsed())
            return run_command(config_path);
        if (simulate->parsed())
            return simulate_command(scenario_path, sim_out);
        if (quantiles->parsed())
            return quantiles_command(visits_path, ads_path, quantile_out, before, after);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return kOk;
}
