#include "adlift/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adlift/errors.hpp"
#include "adlift/rng.hpp"

namespace adlift {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SplitCandidate {
    bool valid = false;
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    std::uint32_t left_mask = 0;
    bool categorical = false;
};

// Equal gains resolve to the lowest feature index, then the lowest threshold.
bool better_than(const SplitCandidate& a, const SplitCandidate& b) {
    if (!b.valid)
        return a.valid;
    if (!a.valid)
        return false;
    if (a.gain != b.gain)
        return a.gain > b.gain;
    if (a.feature != b.feature)
        return a.feature < b.feature;
    return a.threshold < b.threshold;
}

class TreeBuilder {
public:
    TreeBuilder(const ForestDataset& data, const ForestSetting& setting, std::uint64_t seed,
                std::vector<double>& impurity_gain)
        : data_(data), setting_(setting), rng_(seed), impurity_gain_(impurity_gain),
          feature_pool_(data.n_features()) {}

    // rows: dataset positions in id-sorted order; consumed destructively.
    Tree build(std::vector<int> rows) {
        tree_.nodes.clear();
        build_node(rows);
        return std::move(tree_);
    }

private:
    int build_node(std::vector<int>& rows) {
        const int node_id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        const std::size_t n = rows.size();
        double sum = 0.0, sumsq = 0.0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int r : rows) {
            const double y = data_.target[static_cast<std::size_t>(r)];
            sum += y;
            sumsq += y * y;
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        const double mean = sum / static_cast<double>(n);
        const double sse = std::max(0.0, sumsq - sum * sum / static_cast<double>(n));

        tree_.nodes[static_cast<std::size_t>(node_id)].value = mean;
        tree_.nodes[static_cast<std::size_t>(node_id)].n_rows = static_cast<int>(n);

        if (n < 2 * static_cast<std::size_t>(setting_.min_node) || lo == hi)
            return node_id;

        const SplitCandidate split = find_split(rows, sum, sse);
        if (!split.valid)
            return node_id;

        impurity_gain_[static_cast<std::size_t>(split.feature)] += split.gain;

        const auto goes_left = [&](int r) {
            const double x = data_.columns[static_cast<std::size_t>(split.feature)]
                                          [static_cast<std::size_t>(r)];
            if (!split.categorical)
                return x <= split.threshold;
            const int level = static_cast<int>(x);
            return level >= 0 && level < 32 && ((split.left_mask >> level) & 1u) != 0;
        };
        const auto mid = std::stable_partition(rows.begin(), rows.end(), goes_left);
        std::vector<int> left_rows(rows.begin(), mid);
        std::vector<int> right_rows(mid, rows.end());

        TreeNode& node = tree_.nodes[static_cast<std::size_t>(node_id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left_mask = split.categorical ? split.left_mask : 0;
        // build children after releasing the reference; the vector may grow
        const int left_id = build_node(left_rows);
        const int right_id = build_node(right_rows);
        tree_.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        tree_.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }

    SplitCandidate find_split(const std::vector<int>& rows, double sum, double sse) {
        const std::size_t p = data_.n_features();
        const int mtry = std::min(setting_.mtry, static_cast<int>(p));
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        for (int i = 0; i < mtry; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) + rng_.index(p - static_cast<std::size_t>(i));
            std::swap(feature_pool_[static_cast<std::size_t>(i)], feature_pool_[j]);
        }

        SplitCandidate best;
        for (int i = 0; i < mtry; ++i) {
            const int f = feature_pool_[static_cast<std::size_t>(i)];
            const SplitCandidate cand =
                data_.features[static_cast<std::size_t>(f)].kind == FeatureKind::numeric
                    ? numeric_split(rows, f, sum, sse)
                    : categorical_split(rows, f, sum, sse);
            if (better_than(cand, best))
                best = cand;
        }
        return best;
    }

    SplitCandidate numeric_split(const std::vector<int>& rows, int f, double sum, double sse) {
        const auto& col = data_.columns[static_cast<std::size_t>(f)];
        sorted_.assign(rows.begin(), rows.end());
        std::stable_sort(sorted_.begin(), sorted_.end(), [&](int a, int b) {
            return col[static_cast<std::size_t>(a)] < col[static_cast<std::size_t>(b)];
        });

        SplitCandidate best;
        const std::size_t n = sorted_.size();
        const std::size_t min_node = static_cast<std::size_t>(setting_.min_node);
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_sum += data_.target[static_cast<std::size_t>(sorted_[i])];
            const std::size_t n_left = i + 1;
            const std::size_t n_right = n - n_left;
            if (n_left < min_node)
                continue;
            if (n_right < min_node)
                break;
            const double xl = col[static_cast<std::size_t>(sorted_[i])];
            const double xr = col[static_cast<std::size_t>(sorted_[i + 1])];
            if (xl == xr)
                continue;
            const double right_sum = sum - left_sum;
            const double children_fit =
                left_sum * left_sum / static_cast<double>(n_left) +
                right_sum * right_sum / static_cast<double>(n_right);
            const double gain =
                sse - std::max(0.0, (sse + sum * sum / static_cast<double>(n)) - children_fit);
            if (gain <= 0.0)
                continue;
            SplitCandidate cand;
            cand.valid = true;
            cand.gain = gain;
            cand.feature = f;
            cand.threshold = 0.5 * (xl + xr);
            if (better_than(cand, best))
                best = cand;
        }
        return best;
    }

    SplitCandidate categorical_split(const std::vector<int>& rows, int f, double sum,
                                     double sse) {
        const auto& col = data_.columns[static_cast<std::size_t>(f)];
        const int levels = data_.features[static_cast<std::size_t>(f)].levels;
        level_count_.assign(static_cast<std::size_t>(levels), 0);
        level_sum_.assign(static_cast<std::size_t>(levels), 0.0);
        for (int r : rows) {
            const int level = static_cast<int>(col[static_cast<std::size_t>(r)]);
            ++level_count_[static_cast<std::size_t>(level)];
            level_sum_[static_cast<std::size_t>(level)] +=
                data_.target[static_cast<std::size_t>(r)];
        }

        // Order the node's levels by mean target (stable in the level index),
        // then scan as if the feature were ordered.
        level_order_.clear();
        for (int l = 0; l < levels; ++l)
            if (level_count_[static_cast<std::size_t>(l)] > 0)
                level_order_.push_back(l);
        std::stable_sort(level_order_.begin(), level_order_.end(), [&](int a, int b) {
            const double ma = level_sum_[static_cast<std::size_t>(a)] /
                              static_cast<double>(level_count_[static_cast<std::size_t>(a)]);
            const double mb = level_sum_[static_cast<std::size_t>(b)] /
                              static_cast<double>(level_count_[static_cast<std::size_t>(b)]);
            return ma < mb;
        });

        SplitCandidate best;
        const std::size_t n = rows.size();
        const std::size_t min_node = static_cast<std::size_t>(setting_.min_node);
        double left_sum = 0.0;
        std::size_t n_left = 0;
        std::uint32_t mask = 0;
        for (std::size_t k = 0; k + 1 < level_order_.size(); ++k) {
            const int level = level_order_[k];
            n_left += static_cast<std::size_t>(level_count_[static_cast<std::size_t>(level)]);
            left_sum += level_sum_[static_cast<std::size_t>(level)];
            mask |= 1u << level;
            const std::size_t n_right = n - n_left;
            if (n_left < min_node)
                continue;
            if (n_right < min_node)
                break;
            const double right_sum = sum - left_sum;
            const double children_fit =
                left_sum * left_sum / static_cast<double>(n_left) +
                right_sum * right_sum / static_cast<double>(n_right);
            const double gain =
                sse - std::max(0.0, (sse + sum * sum / static_cast<double>(n)) - children_fit);
            if (gain <= 0.0)
                continue;
            SplitCandidate cand;
            cand.valid = true;
            cand.gain = gain;
            cand.feature = f;
            cand.threshold = static_cast<double>(k); // prefix length, for tie-breaks
            cand.left_mask = mask;
            cand.categorical = true;
            if (better_than(cand, best))
                best = cand;
        }
        return best;
    }

    const ForestDataset& data_;
    const ForestSetting& setting_;
    Rng rng_;
    std::vector<double>& impurity_gain_;
    Tree tree_;
    std::vector<int> feature_pool_, sorted_, level_order_;
    std::vector<int> level_count_;
    std::vector<double> level_sum_;
};

void validate_dataset(const ForestDataset& data) {
    if (data.n_rows() == 0)
        throw DomainError("forest dataset has no rows");
    if (data.columns.size() != data.n_features())
        throw DomainError("forest dataset: column/feature mismatch");
    for (const auto& col : data.columns)
        if (col.size() != data.n_rows())
            throw DomainError("forest dataset: ragged columns");
    if (data.ids.size() != data.n_rows())
        throw DomainError("forest dataset: ids must cover all rows");
    for (const FeatureInfo& fi : data.features)
        if (fi.kind == FeatureKind::categorical && (fi.levels < 1 || fi.levels > 32))
            throw DomainError("categorical features support 1..32 levels");
}

std::vector<int> rows_by_id(const ForestDataset& data) {
    std::vector<int> order(data.n_rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return data.ids[static_cast<std::size_t>(a)] < data.ids[static_cast<std::size_t>(b)];
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (data.ids[static_cast<std::size_t>(order[i])] ==
            data.ids[static_cast<std::size_t>(order[i + 1])])
            throw DomainError("forest dataset: duplicate row ids");
    return order;
}

} // namespace

double Tree::predict(std::span<const FeatureInfo> features, std::span<const double> x) const {
    std::size_t idx = 0;
    while (nodes[idx].feature >= 0) {
        const TreeNode& node = nodes[idx];
        bool left;
        if (features[static_cast<std::size_t>(node.feature)].kind == FeatureKind::numeric) {
            left = x[static_cast<std::size_t>(node.feature)] <= node.threshold;
        } else {
            const int level = static_cast<int>(x[static_cast<std::size_t>(node.feature)]);
            left = level >= 0 && level < 32 && ((node.left_mask >> level) & 1u) != 0;
        }
        idx = static_cast<std::size_t>(left ? node.left : node.right);
    }
    return nodes[idx].value;
}

double ForestModel::predict(std::span<const double> x) const {
    double total = 0.0;
    for (const Tree& tree : trees)
        total += tree.predict(features, x);
    return total / static_cast<double>(trees.size());
}

double ForestModel::predict_row(const ForestDataset& data, std::size_t row) const {
    std::vector<double> x(data.n_features());
    for (std::size_t f = 0; f < data.n_features(); ++f)
        x[f] = data.columns[f][row];
    return predict(x);
}

ForestModel train_forest(const ForestDataset& data, const ForestSetting& setting,
                         std::uint64_t seed) {
    validate_dataset(data);
    if (setting.n_trees < 1 || setting.mtry < 1 || setting.min_node < 1 ||
        setting.sample_frac <= 0.0 || setting.sample_frac > 1.0)
        throw DomainError("invalid forest setting");

    ForestModel model;
    model.setting = setting;
    model.features = data.features;
    model.seed = seed;
    model.impurity_gain.assign(data.n_features(), 0.0);

    const std::vector<int> id_order = rows_by_id(data);
    const std::size_t n = data.n_rows();
    std::size_t bag_size = static_cast<std::size_t>(
        std::llround(setting.sample_frac * static_cast<double>(n)));
    bag_size = std::max<std::size_t>(1, std::min(bag_size, n));

    std::vector<int> pool;
    for (int t = 0; t < setting.n_trees; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        pool = id_order;
        for (std::size_t i = 0; i < bag_size; ++i) {
            const std::size_t j = i + rng.index(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        std::vector<int> bag(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(bag_size));
        std::sort(bag.begin(), bag.end(), [&](int a, int b) {
            return data.ids[static_cast<std::size_t>(a)] < data.ids[static_cast<std::size_t>(b)];
        });

        std::vector<std::uint8_t> flags(n, 0);
        for (int r : bag)
            flags[static_cast<std::size_t>(r)] = 1;

        TreeBuilder builder(data, setting, derive_seed(seed, 0x71ee5eedull + t),
                            model.impurity_gain);
        model.trees.push_back(builder.build(std::move(bag)));
        model.in_bag.push_back(std::move(flags));
    }

    // Out-of-bag predictions: only trees whose subsample excluded the row.
    model.oob_prediction.assign(n, kNaN);
    std::vector<double> x(data.n_features());
    for (std::size_t r = 0; r < n; ++r) {
        double total = 0.0;
        int used = 0;
        for (std::size_t f = 0; f < data.n_features(); ++f)
            x[f] = data.columns[f][r];
        for (std::size_t t = 0; t < model.trees.size(); ++t) {
            if (model.in_bag[t][r])
                continue;
            total += model.trees[t].predict(model.features, x);
            ++used;
        }
        if (used > 0)
            model.oob_prediction[r] = total / static_cast<double>(used);
    }
    return model;
}

SampleMetrics regression_metrics(std::span<const double> truth,
                                 std::span<const double> predicted) {
    if (truth.size() != predicted.size() || truth.empty())
        throw DomainError("regression_metrics: size mismatch or empty");
    const std::size_t n = truth.size();
    double sse = 0.0, sae = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mean += truth[i];
    mean /= static_cast<double>(n);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = predicted[i] - truth[i];
        sse += d * d;
        sae += std::fabs(d);
        sst += (truth[i] - mean) * (truth[i] - mean);
    }
    SampleMetrics m;
    m.mse = sse / static_cast<double>(n);
    m.mae = sae / static_cast<double>(n);
    m.rmse = std::sqrt(m.mse);
    if (sst > 0.0)
        m.r2 = 1.0 - sse / sst;
    else
        m.r2 = sse > 0.0 ? 0.0 : 1.0;
    return m;
}

std::vector<ForestSetting> default_setting_grid(int n_trees) {
    std::vector<ForestSetting> grid;
    for (int mtry = 1; mtry <= 6; ++mtry)
        for (int min_node = 5; min_node <= 30; min_node += 5)
            for (int frac10 = 5; frac10 <= 10; ++frac10)
                grid.push_back(ForestSetting{mtry, min_node,
                                             static_cast<double>(frac10) / 10.0, n_trees});
    return grid;
}

namespace {

ForestDataset subset(const ForestDataset& data, std::span<const int> rows) {
    ForestDataset out;
    out.features = data.features;
    out.columns.resize(data.n_features());
    for (std::size_t f = 0; f < data.n_features(); ++f) {
        out.columns[f].reserve(rows.size());
        for (int r : rows)
            out.columns[f].push_back(data.columns[f][static_cast<std::size_t>(r)]);
    }
    out.target.reserve(rows.size());
    out.ids.reserve(rows.size());
    for (int r : rows) {
        out.target.push_back(data.target[static_cast<std::size_t>(r)]);
        out.ids.push_back(data.ids[static_cast<std::size_t>(r)]);
    }
    return out;
}

SampleMetrics forest_metrics(const ForestModel& model, const ForestDataset& data) {
    std::vector<double> pred(data.n_rows());
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        pred[r] = model.predict_row(data, r);
    return regression_metrics(data.target, pred);
}

} // namespace

TuneReport tune(const ForestDataset& data, std::span<const ForestSetting> grid, int repeats,
                std::uint64_t seed) {
    validate_dataset(data);
    if (grid.empty() || repeats < 1)
        throw DomainError("tune: empty grid or repeats < 1");
    if (data.n_rows() < 4)
        throw DomainError("tune: need at least 4 rows for a 50/25/25 split");

    TuneReport report;
    report.repeats = repeats;
    report.seed = seed;
    report.cells.resize(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c)
        report.cells[c].setting = grid[c];

    const std::vector<int> id_order = rows_by_id(data);
    const std::size_t n = data.n_rows();
    const std::size_t n_train = n / 2;
    const std::size_t n_val = n / 4;

    const auto add = [](SampleMetrics& acc, const SampleMetrics& m) {
        acc.mse += m.mse;
        acc.mae += m.mae;
        acc.rmse += m.rmse;
        acc.r2 += m.r2;
    };

    for (int rep = 0; rep < repeats; ++rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        std::vector<int> order = id_order;
        rng.shuffle(order);
        const std::span<const int> train_rows(order.data(), n_train);
        const std::span<const int> val_rows(order.data() + n_train, n_val);
        const std::span<const int> test_rows(order.data() + n_train + n_val,
                                             n - n_train - n_val);
        const ForestDataset train = subset(data, train_rows);
        const ForestDataset val = subset(data, val_rows);
        const ForestDataset test = subset(data, test_rows);

        for (std::size_t c = 0; c < grid.size(); ++c) {
            const std::uint64_t forest_seed =
                derive_seed(derive_seed(seed, 0xF0ull + rep), c);
            const ForestModel model = train_forest(train, grid[c], forest_seed);
            add(report.cells[c].train, forest_metrics(model, train));
            add(report.cells[c].validation, forest_metrics(model, val));
            add(report.cells[c].test, forest_metrics(model, test));
        }
    }

    const auto scale = [&](SampleMetrics& m) {
        const double r = static_cast<double>(repeats);
        m.mse /= r;
        m.mae /= r;
        m.rmse /= r;
        m.r2 /= r;
    };
    for (TuneCell& cell : report.cells) {
        scale(cell.train);
        scale(cell.validation);
        scale(cell.test);
    }

    report.best_index = 0;
    for (std::size_t c = 1; c < report.cells.size(); ++c)
        if (report.cells[c].validation.mse < report.cells[report.best_index].validation.mse)
            report.best_index = c;
    return report;
}

std::vector<ImportanceEntry> variable_importance(const ForestModel& model,
                                                 const ForestDataset& data,
                                                 int n_permutations) {
    validate_dataset(data);
    if (model.trees.empty())
        throw DomainError("variable_importance: untrained model");

    std::vector<ImportanceEntry> entries(data.n_features());
    double gain_total = 0.0;
    for (double g : model.impurity_gain)
        gain_total += g;
    for (std::size_t f = 0; f < data.n_features(); ++f) {
        entries[f].feature = data.features[f].name;
        entries[f].impurity = gain_total > 0.0 ? model.impurity_gain[f] / gain_total : 0.0;
    }

    // Baseline OOB MSE.
    std::vector<std::size_t> oob_rows;
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        if (!std::isnan(model.oob_prediction[r]))
            oob_rows.push_back(r);
    if (oob_rows.empty()) { // sample_frac = 1: OOB undefined
        for (auto& e : entries)
            e.permutation = kNaN;
        return entries;
    }
    double base_mse = 0.0;
    for (std::size_t r : oob_rows) {
        const double d = model.oob_prediction[r] - data.target[r];
        base_mse += d * d;
    }
    base_mse /= static_cast<double>(oob_rows.size());

    std::vector<double> x(data.n_features());
    std::vector<double> column(data.n_rows());
    for (std::size_t f = 0; f < data.n_features(); ++f) {
        double delta_sum = 0.0;
        for (int rep = 0; rep < n_permutations; ++rep) {
            Rng rng(derive_seed(derive_seed(model.seed, 0xA110ull + f),
                                static_cast<std::uint64_t>(rep)));
            column = data.columns[f];
            rng.shuffle(column);

            double mse = 0.0;
            for (std::size_t r : oob_rows) {
                for (std::size_t g = 0; g < data.n_features(); ++g)
                    x[g] = g == f ? column[r] : data.columns[g][r];
                double total = 0.0;
                int used = 0;
                for (std::size_t t = 0; t < model.trees.size(); ++t) {
                    if (model.in_bag[t][r])
                        continue;
                    total += model.trees[t].predict(model.features, x);
                    ++used;
                }
                const double pred = total / static_cast<double>(used);
                const double d = pred - data.target[r];
                mse += d * d;
            }
            mse /= static_cast<double>(oob_rows.size());
            delta_sum += mse - base_mse;
        }
        entries[f].permutation = delta_sum / static_cast<double>(n_permutations);
    }
    return entries;
}

std::vector<PdpPoint> partial_dependence(const ForestModel& model, const ForestDataset& data,
                                         int feature, std::span<const double> grid) {
    validate_dataset(data);
    if (feature < 0 || static_cast<std::size_t>(feature) >= data.n_features())
        throw DomainError("partial_dependence: unknown feature");

    std::vector<PdpPoint> curve;
    curve.reserve(grid.size());
    std::vector<double> x(data.n_features());
    for (double v : grid) {
        double total = 0.0;
        for (std::size_t r = 0; r < data.n_rows(); ++r) {
            for (std::size_t g = 0; g < data.n_features(); ++g)
                x[g] = static_cast<int>(g) == feature ? v : data.columns[g][r];
            total += model.predict(x);
        }
        curve.push_back(PdpPoint{v, total / static_cast<double>(data.n_rows())});
    }
    return curve;
}

std::vector<double> default_pdp_grid(const ForestDataset& data, int feature, int max_points) {
    if (feature < 0 || static_cast<std::size_t>(feature) >= data.n_features())
        throw DomainError("default_pdp_grid: unknown feature");
    const FeatureInfo& info = data.features[static_cast<std::size_t>(feature)];
    std::vector<double> grid;
    if (info.kind == FeatureKind::categorical) {
        for (int l = 0; l < info.levels; ++l)
            grid.push_back(static_cast<double>(l));
        return grid;
    }
    const auto& col = data.columns[static_cast<std::size_t>(feature)];
    const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi)
        return {lo};
    const int points = std::max(2, max_points);
    for (int i = 0; i < points; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(points - 1));
    return grid;
}

std::vector<AdFeatureRow> build_features(const DecompositionFit& fit, const AdSchedule& ads) {
    if (fit.thetas.size() != ads.m())
        throw DomainError("build_features: fit and schedule must align");
    std::vector<AdFeatureRow> rows;
    rows.reserve(ads.m());
    for (std::size_t j = 0; j < ads.m(); ++j) {
        const AdRecord& ad = ads.ads[j];
        const CivilTime civil = civil_time(ad.end_stamp);
        AdFeatureRow row;
        row.id = static_cast<int>(j);
        row.time_of_day = static_cast<double>(civil.hour * 60 + civil.minute);
        row.day_of_week = weekday_monday0(ad.end_stamp);
        row.month = civil.month - 1;
        row.channel = ad.channel;
        row.position = ad.position;
        row.motive = ad.motive;
        row.theta = fit.thetas[j];
        rows.push_back(row);
    }
    return rows;
}

ForestDataset to_dataset(std::span<const AdFeatureRow> rows, bool include_zero) {
    ForestDataset data;
    data.features = {
        FeatureInfo{"time_of_day", FeatureKind::numeric, 0},
        FeatureInfo{"day_of_week", FeatureKind::categorical, 7},
        FeatureInfo{"month", FeatureKind::categorical, 12},
        FeatureInfo{"channel", FeatureKind::categorical,
                    static_cast<int>(kChannelLevels.size())},
        FeatureInfo{"position", FeatureKind::categorical,
                    static_cast<int>(kPositionLevels.size())},
        FeatureInfo{"motive", FeatureKind::categorical,
                    static_cast<int>(kMotiveLevels.size())},
    };
    data.columns.resize(data.features.size());
    for (const AdFeatureRow& row : rows) {
        if (!include_zero && row.theta == 0.0)
            continue;
        data.columns[0].push_back(row.time_of_day);
        data.columns[1].push_back(static_cast<double>(row.day_of_week));
        data.columns[2].push_back(static_cast<double>(row.month));
        data.columns[3].push_back(static_cast<double>(row.channel));
        data.columns[4].push_back(static_cast<double>(row.position));
        data.columns[5].push_back(static_cast<double>(row.motive));
        data.target.push_back(row.theta);
        data.ids.push_back(row.id);
    }
    return data;
}

} // namespace adlift
