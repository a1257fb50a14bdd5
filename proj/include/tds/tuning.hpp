#pragma once

#include "tds/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tds {

enum class TuneMetric {
    Mse,
    Psnr,
    Ssim,
    FluctStd,  ///< sample std of the fluctuation; needs no reference
};

std::string metric_name(TuneMetric m);
/// Accepts mse, psnr, ssim, fluct-std. Throws ConfigError otherwise.
TuneMetric parse_metric(const std::string& name);

struct TuneConfig {
    TuneMetric metric = TuneMetric::FluctStd;
    double target = 1.0;       // alpha_0
    double epsilon = 0.02;     // accept |alpha - alpha_0| <= epsilon
    double step = 5.0;         // k
    double max_lambda = 2000;  // upper limit, never exceeded
    double initial_lambda = 0.0;
    double peak = 1.0;         // for psnr / ssim
    /// Binary search over the same lambda grid; valid only when alpha is
    /// monotone in lambda. Returns the same lambda as the linear scan then.
    bool assume_monotone = false;
};

/// Throws ConfigError when the config is inconsistent.
void validate(const TuneConfig& cfg);

enum class TuneStatus { Converged, Exhausted };

struct TracePoint {
    double lambda;
    double alpha;
};

struct TuneResult {
    double lambda = 0.0;
    double alpha = 0.0;
    Decomposition decomposition;
    std::vector<TracePoint> trace;
    TuneStatus status = TuneStatus::Exhausted;
};

/// Global smoothing parameter search: starting at initial_lambda, solve,
/// score, and step lambda by `step` until |alpha - target| <= epsilon or the
/// next step would pass max_lambda.
///
/// `reference` is required for mse/psnr/ssim and rejected for fluct-std.
TuneResult tune_lambda(const Grid& z, const std::optional<Grid>& reference, const TuneConfig& cfg);

struct FluctuationStats {
    double mean;
    double std;  // denominator N - 1
};

/// Throws ConfigError for fewer than two entries.
FluctuationStats fluctuation_std(const Grid& c);

}  // namespace tds
