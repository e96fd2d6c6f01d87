#ifndef ADLIFT_CONFIG_HPP
#define ADLIFT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "adlift/forest.hpp"
#include "adlift/kernel_smoother.hpp"
#include "adlift/spread.hpp"

namespace adlift {

// One pipeline run. Parsed from a flat "key = value" file; every default
// matches the method's reference choices (kernel grid 1..60, cutoff 30,
// the 216-cell forest grid) and is overridable per run.
struct RunConfig {
    std::string visits_path;
    std::string ads_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    bool stage_smooth = true;
    bool stage_decompose = true;
    bool stage_forest = true;

    // bandwidth selection
    std::vector<KernelId> kernels{kAllKernels, kAllKernels + 5};
    int h_min = 1;
    int h_max = 60;
    int cv_repeats = 1000;
    int exclusion_window = 30;
    // fallback when the smoothing stage is toggled off
    SmootherConfig default_smoother{KernelId::triangular, 8};

    // decomposition
    std::vector<SpreadFamily> families{kAllFamilies, kAllFamilies + 4};
    int cutoff = 30;
    int max_outer_iterations = 50;

    // lift regression
    std::vector<int> forest_mtry{1, 2, 3, 4, 5, 6};
    std::vector<int> forest_min_node{5, 10, 15, 20, 25, 30};
    std::vector<double> forest_sample_frac{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int forest_trees = 500;
    int forest_tuning_repeats = 25;
    int forest_final_repeats = 20;
    bool forest_include_zero = true;

    // reports
    int quantile_before = 15;
    int quantile_after = 45;
    double theta_density_bandwidth = 20.0;
    double theta_density_bin_width = 10.0;

    std::vector<ForestSetting> forest_grid() const;
};

// Flat config file: one "key = value" per line, '#' comments, lists
// comma-separated. Unknown keys raise ConfigError.
RunConfig parse_run_config(const std::string& path);
RunConfig run_config_from_text(const std::string& text);

} // namespace adlift

#endif
