#ifndef ADLIFT_FOREST_HPP
#define ADLIFT_FOREST_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adlift/core_data.hpp"
#include "adlift/decomposer.hpp"

namespace adlift {

enum class FeatureKind { numeric, categorical };

struct FeatureInfo {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    int levels = 0; // categorical only
};

// Column-major regression dataset. Row ids must be unique; subsampling and
// out-of-bag bookkeeping key on ids (sorted), so predictions do not depend on
// the incidental row order.
struct ForestDataset {
    std::vector<FeatureInfo> features;
    std::vector<std::vector<double>> columns; // [feature][row]
    std::vector<double> target;
    std::vector<int> ids;

    std::size_t n_rows() const noexcept { return target.size(); }
    std::size_t n_features() const noexcept { return features.size(); }
};

// One ad as a feature row for the lift regression.
struct AdFeatureRow {
    int id = 0;              // ad index in the schedule
    double time_of_day = 0;  // minutes 0..1439, numeric
    int day_of_week = 0;     // 0 = Monday .. 6 = Sunday
    int month = 0;           // 0 = January .. 11 = December
    int channel = 0;
    int position = 0;
    int motive = 0;
    double theta = 0.0;      // target
};

// One row per ad (zero-lift ads included); calendar features come from the
// ad's end timestamp in its own UTC offset.
std::vector<AdFeatureRow> build_features(const DecompositionFit& fit, const AdSchedule& ads);

ForestDataset to_dataset(std::span<const AdFeatureRow> rows, bool include_zero = true);

struct ForestSetting {
    int mtry = 2;
    int min_node = 5;
    double sample_frac = 0.5; // without-replacement subsample share
    int n_trees = 500;
};

// The paper-shaped grid: mtry 1..6 x min_node {5..30 by 5} x frac {0.5..1.0 by 0.1}.
std::vector<ForestSetting> default_setting_grid(int n_trees);

struct TreeNode {
    int feature = -1;            // -1: leaf
    double threshold = 0.0;      // numeric split: x <= threshold goes left
    std::uint32_t left_mask = 0; // categorical split: level bit set goes left
    int left = -1;
    int right = -1;
    double value = 0.0;          // leaf mean
    int n_rows = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const FeatureInfo> features, std::span<const double> x) const;
};

struct ForestModel {
    ForestSetting setting;
    std::vector<FeatureInfo> features;
    std::vector<Tree> trees;
    std::vector<std::vector<std::uint8_t>> in_bag; // [tree][row]
    std::vector<double> oob_prediction;            // per row; NaN when no tree left it out
    std::vector<double> impurity_gain;             // summed variance reduction per feature
    std::uint64_t seed = 0;

    double predict(std::span<const double> x) const;
    double predict_row(const ForestDataset& data, std::size_t row) const;
};

// Subsampled (without replacement), variance-minimizing regression forest.
// Categorical splits order the node's levels by mean target and scan them as
// if ordered. Deterministic for a fixed seed.
ForestModel train_forest(const ForestDataset& data, const ForestSetting& setting,
                         std::uint64_t seed);

struct SampleMetrics {
    double mse = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
};

SampleMetrics regression_metrics(std::span<const double> truth,
                                 std::span<const double> predicted);

struct TuneCell {
    ForestSetting setting;
    SampleMetrics train, validation, test; // means over repeats
};

struct TuneReport {
    std::vector<TuneCell> cells;
    std::size_t best_index = 0;
    int repeats = 0;
    std::uint64_t seed = 0;
};

// Repeated seeded 50/25/25 split; the winner has the lowest mean validation
// MSE (first cell wins ties).
TuneReport tune(const ForestDataset& data, std::span<const ForestSetting> grid, int repeats,
                std::uint64_t seed);

struct ImportanceEntry {
    std::string feature;
    double permutation = 0.0; // mean OOB MSE increase under column permutation
    double impurity = 0.0;    // share of total variance reduction (sums to 1)
};

std::vector<ImportanceEntry> variable_importance(const ForestModel& model,
                                                 const ForestDataset& data,
                                                 int n_permutations = 5);

struct PdpPoint {
    double value = 0.0;
    double mean_prediction = 0.0;
};

// Average prediction with the feature forced to each grid value in turn.
std::vector<PdpPoint> partial_dependence(const ForestModel& model, const ForestDataset& data,
                                         int feature, std::span<const double> grid);

// Numeric: evenly spaced over the observed range (up to max_points);
// categorical: one point per level.
std::vector<double> default_pdp_grid(const ForestDataset& data, int feature,
                                     int max_points = 40);

} // namespace adlift

#endif
