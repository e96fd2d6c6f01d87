#include "adlift/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "adlift/decomposer.hpp"
#include "adlift/errors.hpp"
#include "adlift/reports.hpp"
#include "adlift/rng.hpp"
#include "adlift/version.hpp"

namespace adlift {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string setting_label(const ForestSetting& s) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mtry%d_node%d_frac%g", s.mtry, s.min_node, s.sample_frac);
    return buf;
}

// Tracks artifacts and stage states so the MANIFEST can always be written,
// also after a failed stage.
class RunLedger {
public:
    explicit RunLedger(const std::string& out_dir) : out_dir_(out_dir) {
        stages_["smooth"] = "pending";
        stages_["decompose"] = "pending";
        stages_["forest"] = "pending";
    }

    std::string path(const std::string& name) {
        artifacts_.push_back(name);
        return (fs::path(out_dir_) / name).string();
    }

    void stage(const std::string& name, const std::string& state) { stages_[name] = state; }

    void write_manifest(const std::string& status) const {
        std::ofstream out(fs::path(out_dir_) / "MANIFEST");
        if (!out)
            throw DataError("cannot write MANIFEST in " + out_dir_);
        out << "status=" << status << '\n';
        for (const auto& [name, state] : stages_)
            out << "stage." << name << '=' << state << '\n';
        std::vector<std::string> sorted = artifacts_;
        std::sort(sorted.begin(), sorted.end());
        char buf[32];
        for (const std::string& name : sorted) {
            const fs::path p = fs::path(out_dir_) / name;
            if (!fs::exists(p))
                continue;
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(fnv1a64_file(p.string())));
            out << name << "\tfnv1a64:" << buf << '\n';
        }
    }

private:
    std::string out_dir_;
    std::vector<std::string> artifacts_;
    std::map<std::string, std::string> stages_;
};

void write_thetas_csv(const std::string& path, const DecompositionFit& fit,
                      const AdSchedule& ads) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "ad_id,end_time,theta,motive,position,channel\n";
    for (std::size_t j = 0; j < ads.m(); ++j) {
        const AdRecord& ad = ads.ads[j];
        out << (j + 1) << ',' << format_rfc3339(ad.end_stamp) << ',' << fmt(fit.thetas[j])
            << ',' << kMotiveLevels[ad.motive] << ',' << kPositionLevels[ad.position] << ','
            << kChannelLevels[ad.channel] << '\n';
    }
}

void write_rates_csv(const std::string& path, const VisitSeries& series,
                     const DecompositionFit& fit) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "timestamp,z,mu,lambda\n";
    for (std::size_t i = 0; i < series.n(); ++i) {
        const Timestamp ts{series.start.epoch_sec + static_cast<std::int64_t>(i) * 60,
                           series.start.offset_min};
        out << format_rfc3339(ts) << ',' << series.counts[i] << ',' << fmt(fit.mu[i]) << ','
            << fmt(fit.lambda[i]) << '\n';
    }
}

void write_diagnostics_json(const std::string& path, const DecompositionFit& fit,
                            const DecompositionFit* gengamma_fit) {
    nlohmann::json j;
    j["spread"] = nlohmann::json::parse(spread_spec_to_json(fit.spec));
    j["mean_delay"] = spread_mean(fit.spec);
    j["mode_delay"] = spread_mode(fit.spec);
    j["total_loglik"] = fit.total_loglik;
    j["avg_loglik"] = fit.avg_loglik;
    j["k"] = fit.k;
    j["aic"] = fit.aic;
    j["outer_iterations"] = fit.outer_iterations;
    j["converged"] = fit.converged;
    j["groups"] = fit.groups.size();
    j["loglik_history"] = fit.loglik_history;
    if (gengamma_fit != nullptr && gengamma_fit != &fit &&
        fit.spec.family != SpreadFamily::gengamma) {
        const WilksResult wr = wilks_test(fit, *gengamma_fit);
        j["wilks_vs_gengamma"] = {{"statistic", wr.statistic},
                                  {"df", wr.df},
                                  {"p_value", wr.p_value},
                                  {"optimizer_warning", wr.optimizer_warning}};
    } else {
        j["wilks_vs_gengamma"] = nullptr;
    }
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

void write_model_comparison_csv(const std::string& path, const ModelComparison& rows) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "family,alpha,phi,psi,mean,mode,avg_loglik,aic,wilks_p\n";
    for (const ModelComparisonRow& row : rows) {
        out << family_name(row.family) << ',' << fmt(row.spec.alpha) << ',' << fmt(row.spec.phi)
            << ',' << fmt(row.spec.psi) << ',' << fmt(row.mean_delay) << ','
            << fmt(row.mode_delay) << ',' << fmt(row.avg_loglik) << ',' << fmt(row.aic) << ',';
        if (row.wilks_p)
            out << fmt(*row.wilks_p);
        out << '\n';
    }
}

void write_tuning_report_csv(const std::string& path, const TuneReport& report,
                             const std::vector<std::pair<std::string, SampleMetrics>>& final_rows) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "model,sample,mae,rmse,r2\n";
    const auto row = [&](const std::string& model, const std::string& sample,
                         const SampleMetrics& m) {
        out << model << ',' << sample << ',' << fmt(m.mae) << ',' << fmt(m.rmse) << ','
            << fmt(m.r2) << '\n';
    };
    for (const TuneCell& cell : report.cells) {
        const std::string label = setting_label(cell.setting);
        row(label, "training", cell.train);
        row(label, "validation", cell.validation);
        row(label, "test", cell.test);
    }
    for (const auto& [sample, metrics] : final_rows)
        row("final", sample, metrics);
}

void write_importance_csv(const std::string& path,
                          const std::vector<ImportanceEntry>& entries) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "feature,permutation,impurity\n";
    for (const ImportanceEntry& e : entries)
        out << e.feature << ',' << fmt(e.permutation) << ',' << fmt(e.impurity) << '\n';
}

void write_pdp_csv(const std::string& path,
                   const std::vector<std::pair<std::string, std::vector<PdpPoint>>>& curves) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "feature,value,mean_prediction\n";
    for (const auto& [feature, curve] : curves)
        for (const PdpPoint& pt : curve)
            out << feature << ',' << fmt(pt.value) << ',' << fmt(pt.mean_prediction) << '\n';
}

} // namespace

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open for hashing: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
    }
    return hash;
}

void run_pipeline(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    RunLedger ledger(cfg.out_dir);

    nlohmann::json notes;
    notes["version"] = kVersion;
    notes["seed"] = cfg.seed;
    notes["cv_split"] = "uniform random halves, not stratified by time of day";
    notes["time_of_day_encoding"] = "plain numeric minutes 0..1439 (no circular wrap)";
    notes["quantile_convention"] = "type-7 linear interpolation";

    try {
        const VisitSeries series = load_visits(cfg.visits_path);
        const AdSchedule ads = load_ads(cfg.ads_path, series);
        notes["n_minutes"] = series.n();
        notes["n_ads"] = ads.m();
        notes["simulcast_tied_ads"] = ads.tied_end_times();

        // Raw-count quantiles around ads; stage-independent.
        const QuantileReport quantiles =
            ad_window_quantiles(series, ads, cfg.quantile_before, cfg.quantile_after);
        write_quantile_csv(quantiles, ledger.path("quantiles.csv"));

        SmootherConfig smoother = cfg.default_smoother;
        if (cfg.stage_smooth) {
            const Mask excluded = exclusion_mask(series, ads, cfg.exclusion_window);
            CvGrid grid;
            grid.kernels = cfg.kernels;
            grid.h_min = cfg.h_min;
            grid.h_max = cfg.h_max;
            const CvReport report = select_bandwidth(series, excluded, grid, cfg.cv_repeats,
                                                     derive_seed(cfg.seed, 101));
            write_cv_report_csv(report, ledger.path("cv_report.csv"));
            smoother = report.best;
            ledger.stage("smooth", "done");
        } else {
            ledger.stage("smooth", "skipped");
        }
        notes["smoother"] = {{"kernel", kernel_name(smoother.kernel)},
                             {"bandwidth", smoother.bandwidth}};

        std::vector<DecompositionFit> fits;
        std::size_t best_fit = 0;
        if (cfg.stage_decompose) {
            FitOptions options;
            options.cutoff = cfg.cutoff;
            options.max_outer_iterations = cfg.max_outer_iterations;
            for (SpreadFamily family : cfg.families)
                fits.push_back(fit(series, ads, smoother, family, options));

            const DecompositionFit* gengamma_fit = nullptr;
            for (std::size_t i = 0; i < cfg.families.size(); ++i)
                if (cfg.families[i] == SpreadFamily::gengamma)
                    gengamma_fit = &fits[i];
            for (std::size_t i = 0; i < cfg.families.size(); ++i)
                write_diagnostics_json(
                    ledger.path("diagnostics_" + family_name(cfg.families[i]) + ".json"),
                    fits[i], gengamma_fit);

            const ModelComparison comparison = compare_models(fits, cfg.families);
            write_model_comparison_csv(ledger.path("model_comparison.csv"), comparison);

            for (std::size_t i = 1; i < fits.size(); ++i)
                if (fits[i].aic < fits[best_fit].aic)
                    best_fit = i;
            notes["selected_family"] = family_name(cfg.families[best_fit]);

            write_thetas_csv(ledger.path("thetas.csv"), fits[best_fit], ads);
            write_rates_csv(ledger.path("rates.csv"), series, fits[best_fit]);
            const ThetaDensityReport density =
                theta_density(fits[best_fit].thetas, cfg.theta_density_bandwidth,
                              cfg.theta_density_bin_width);
            write_theta_density_csv(density, ledger.path("theta_density.csv"));
            if (density.empty)
                notes["theta_density_warning"] = "no non-zero lifts";
            ledger.stage("decompose", "done");
        } else {
            ledger.stage("decompose", "skipped");
        }

        if (cfg.stage_forest) {
            if (!cfg.stage_decompose)
                throw ConfigError("stage.forest requires stage.decompose");
            const std::vector<AdFeatureRow> rows = build_features(fits[best_fit], ads);
            const ForestDataset dataset = to_dataset(rows, cfg.forest_include_zero);
            if (dataset.n_rows() < 8)
                throw DataError("forest stage needs at least 8 usable ads");

            const std::vector<ForestSetting> grid = cfg.forest_grid();
            const TuneReport tuning = tune(dataset, grid, cfg.forest_tuning_repeats,
                                           derive_seed(cfg.seed, 201));
            const ForestSetting best_setting = tuning.cells[tuning.best_index].setting;
            notes["forest_setting"] = setting_label(best_setting);

            // Final model: metrics averaged over repeated trainings on the full sample.
            const int repeats = std::max(1, cfg.forest_final_repeats);
            std::vector<ImportanceEntry> importance_total;
            std::vector<std::pair<std::string, std::vector<PdpPoint>>> pdp_total;
            SampleMetrics full_total{}, oob_total{};
            int oob_models = 0;
            for (int rep = 0; rep < repeats; ++rep) {
                const ForestModel model =
                    train_forest(dataset, best_setting, derive_seed(cfg.seed, 301 + rep));
                const auto importance = variable_importance(model, dataset);
                if (importance_total.empty())
                    importance_total = importance;
                else
                    for (std::size_t f = 0; f < importance.size(); ++f) {
                        importance_total[f].permutation += importance[f].permutation;
                        importance_total[f].impurity += importance[f].impurity;
                    }

                std::vector<double> pred(dataset.n_rows());
                for (std::size_t r = 0; r < dataset.n_rows(); ++r)
                    pred[r] = model.predict_row(dataset, r);
                const SampleMetrics full = regression_metrics(dataset.target, pred);
                full_total.mse += full.mse;
                full_total.mae += full.mae;
                full_total.rmse += full.rmse;
                full_total.r2 += full.r2;

                std::vector<double> oob_truth, oob_pred;
                for (std::size_t r = 0; r < dataset.n_rows(); ++r)
                    if (!std::isnan(model.oob_prediction[r])) {
                        oob_truth.push_back(dataset.target[r]);
                        oob_pred.push_back(model.oob_prediction[r]);
                    }
                if (!oob_truth.empty()) {
                    const SampleMetrics oob = regression_metrics(oob_truth, oob_pred);
                    oob_total.mse += oob.mse;
                    oob_total.mae += oob.mae;
                    oob_total.rmse += oob.rmse;
                    oob_total.r2 += oob.r2;
                    ++oob_models;
                }

                for (std::size_t f = 0; f < dataset.n_features(); ++f) {
                    const std::vector<double> grid_pts =
                        default_pdp_grid(dataset, static_cast<int>(f));
                    const auto curve =
                        partial_dependence(model, dataset, static_cast<int>(f), grid_pts);
                    if (rep == 0) {
                        pdp_total.emplace_back(dataset.features[f].name, curve);
                    } else {
                        for (std::size_t i = 0; i < curve.size(); ++i)
                            pdp_total[f].second[i].mean_prediction += curve[i].mean_prediction;
                    }
                }
            }
            const double r = static_cast<double>(repeats);
            for (auto& e : importance_total) {
                e.permutation /= r;
                e.impurity /= r;
            }
            for (auto& [name, curve] : pdp_total)
                for (PdpPoint& pt : curve)
                    pt.mean_prediction /= r;
            full_total.mse /= r;
            full_total.mae /= r;
            full_total.rmse /= r;
            full_total.r2 /= r;

            std::vector<std::pair<std::string, SampleMetrics>> final_rows;
            final_rows.emplace_back("full", full_total);
            if (oob_models > 0) {
                const double ro = static_cast<double>(oob_models);
                oob_total.mse /= ro;
                oob_total.mae /= ro;
                oob_total.rmse /= ro;
                oob_total.r2 /= ro;
                final_rows.emplace_back("oob", oob_total);
            } else {
                notes["oob_warning"] = "sample_frac = 1: out-of-bag metrics unavailable";
            }

            write_tuning_report_csv(ledger.path("tuning_report.csv"), tuning, final_rows);
            write_importance_csv(ledger.path("importance.csv"), importance_total);
            write_pdp_csv(ledger.path("pdp.csv"), pdp_total);
            ledger.stage("forest", "done");
        } else {
            ledger.stage("forest", "skipped");
        }

        {
            std::ofstream out(ledger.path("run_report.json"));
            if (!out)
                throw DataError("cannot write run_report.json");
            out << notes.dump(2) << '\n';
        }
        ledger.write_manifest("complete");
    } catch (...) {
        ledger.write_manifest("partial");
        throw;
    }
}

} // namespace adlift
