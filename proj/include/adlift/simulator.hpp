#ifndef ADLIFT_SIMULATOR_HPP
#define ADLIFT_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "adlift/core_data.hpp"
#include "adlift/decomposer.hpp"
#include "adlift/rng.hpp"
#include "adlift/spread.hpp"

namespace adlift {

// Deterministic Poisson draw: sequential inversion below rate 30, transformed
// rejection (PTRS) above.
std::int64_t sample_poisson(Rng& rng, double rate);

// Gamma(shape, scale) draw (Marsaglia-Tsang).
double sample_gamma(Rng& rng, double shape, double scale);

struct BaselineSpec {
    enum class Kind { flat, sinusoid, weekly };
    Kind kind = Kind::flat;
    double level = 30.0;      // visits per minute
    double amplitude = 0.0;   // daily harmonic
    double period = 1440.0;   // minutes
    double phase = 0.0;       // radians
    double weekly_amplitude = 0.0; // second harmonic over 7 days (weekly kind)
};

// Baseline rate at minute t (evaluated mid-bucket).
double baseline_rate(const BaselineSpec& spec, long t);

struct ThetaLaw {
    double zero_prob = 0.0;  // point mass at exactly zero
    double mean = 150.0;     // mean of the gamma part
    double shape = 2.0;      // gamma shape
};

struct SimScenario {
    std::size_t n_minutes = 14400;
    Timestamp start;
    BaselineSpec baseline;
    std::size_t ad_count = 0;
    double min_gap = 120.0;           // minutes between consecutive ads
    std::vector<double> fixed_ad_times; // optional explicit end offsets (overrides ad_count)
    ThetaLaw theta;
    SpreadSpec spread;
    std::uint64_t seed = 1;
};

struct SimTruth {
    std::vector<double> theta_star;  // per ad
    std::vector<double> lambda_star; // per minute
    std::vector<double> mu_star;     // per minute
    SpreadSpec spread;
};

struct SimResult {
    VisitSeries series;
    AdSchedule ads;
    SimTruth truth;
};

// Draw counts z_t ~ Poisson(mu*_t + lambda*_t) with mu* built from the true
// lifts and spread. Same seed, same draw.
SimResult simulate(const SimScenario& scenario);

struct TruthErrors {
    double theta_mae = 0.0;
    double theta_rmse = 0.0;
    double spread_mean_error = 0.0;
    double lambda_rmse = 0.0;
};

TruthErrors truth_error(const DecompositionFit& fit, const SimTruth& truth);

std::string scenario_to_json(const SimScenario& scenario);
SimScenario scenario_from_json(const std::string& json_text);
SimScenario load_scenario(const std::string& path);
void write_truth_json(const SimTruth& truth, std::uint64_t seed, const std::string& path);

} // namespace adlift

#endif
