#include "tds/tuning.hpp"

#include "tds/errors.hpp"
#include "tds/metrics.hpp"
#include "tds/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace tds {

std::string metric_name(TuneMetric m) {
    switch (m) {
        case TuneMetric::Mse: return "mse";
        case TuneMetric::Psnr: return "psnr";
        case TuneMetric::Ssim: return "ssim";
        case TuneMetric::FluctStd: return "fluct-std";
    }
    return "unknown";
}

TuneMetric parse_metric(const std::string& name) {
    if (name == "mse") return TuneMetric::Mse;
    if (name == "psnr") return TuneMetric::Psnr;
    if (name == "ssim") return TuneMetric::Ssim;
    if (name == "fluct-std") return TuneMetric::FluctStd;
    throw ConfigError("unknown metric '" + name + "' (expected mse, psnr, ssim, fluct-std)");
}

void validate(const TuneConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!std::isfinite(cfg.target)) fail("tuning target must be finite");
    if (!std::isfinite(cfg.epsilon) || !(cfg.epsilon > 0.0)) fail("tuning epsilon must be > 0");
    if (!std::isfinite(cfg.step) || !(cfg.step > 0.0)) fail("tuning step must be > 0");
    if (!std::isfinite(cfg.initial_lambda) || cfg.initial_lambda < 0.0)
        fail("initial lambda must be >= 0");
    if (!std::isfinite(cfg.max_lambda) || !(cfg.max_lambda > cfg.initial_lambda))
        fail("max lambda must exceed the initial lambda");
    if (!std::isfinite(cfg.peak) || !(cfg.peak > 0.0)) fail("peak must be > 0");
}

FluctuationStats fluctuation_std(const Grid& c) {
    if (c.size() < 2) throw ConfigError("fluctuation statistics need at least two entries");
    double mean = 0.0;
    for (double v : c.values()) mean += v;
    mean /= static_cast<double>(c.size());
    double ss = 0.0;
    for (double v : c.values()) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(c.size() - 1))};
}

namespace {

double score(const Decomposition& d, const std::optional<Grid>& reference, const TuneConfig& cfg) {
    double a = 0.0;
    switch (cfg.metric) {
        case TuneMetric::Mse: a = mse(*reference, d.trend); break;
        case TuneMetric::Psnr: a = psnr(*reference, d.trend, cfg.peak); break;
        case TuneMetric::Ssim: a = ssim(*reference, d.trend, cfg.peak); break;
        case TuneMetric::FluctStd: a = fluctuation_std(d.fluctuation).std; break;
    }
    if (!std::isfinite(a)) {
        std::ostringstream os;
        os << metric_name(cfg.metric) << " is not finite at lambda = "
           << std::get<TdsParams>(d.params).lambda;
        throw NumericalError(os.str());
    }
    return a;
}

}  // namespace

TuneResult tune_lambda(const Grid& z, const std::optional<Grid>& reference, const TuneConfig& cfg) {
    validate(cfg);
    require_smoothable(z);
    if (cfg.metric == TuneMetric::FluctStd) {
        if (reference) throw ConfigError("fluct-std tuning takes no reference grid");
    } else {
        if (!reference) throw ConfigError(metric_name(cfg.metric) + " tuning needs a reference grid");
        require_same_shape(z, *reference, "tune_lambda reference");
    }

    const SpectralCache cache(z.rows(), z.cols());
    // grid points are initial + k * step, computed directly so they never drift
    const auto last_index = static_cast<long>(
        std::floor((cfg.max_lambda - cfg.initial_lambda) / cfg.step * (1.0 + 1e-12)));
    auto lambda_at = [&](long k) { return cfg.initial_lambda + static_cast<double>(k) * cfg.step; };

    TuneResult result;
    auto visit = [&](long k) {
        const double lambda = lambda_at(k);
        Decomposition d = cache.solve(z, TdsParams{lambda});
        const double alpha = score(d, reference, cfg);
        result.trace.push_back({lambda, alpha});
        return std::pair{std::move(d), alpha};
    };
    auto accept = [&](double alpha) { return std::abs(alpha - cfg.target) <= cfg.epsilon; };
    auto settle = [&](long k, Decomposition d, double alpha, TuneStatus status) {
        result.lambda = lambda_at(k);
        result.alpha = alpha;
        result.decomposition = std::move(d);
        result.status = status;
        return std::move(result);
    };

    if (!cfg.assume_monotone) {
        long k = 0;
        auto [d, alpha] = visit(k);
        while (!accept(alpha)) {
            if (k + 1 > last_index) return settle(k, std::move(d), alpha, TuneStatus::Exhausted);
            ++k;
            std::tie(d, alpha) = visit(k);
        }
        return settle(k, std::move(d), alpha, TuneStatus::Converged);
    }

    // Monotone accelerator: the accepted indices form one contiguous run;
    // find its first member by bisection on the side of the target.
    auto [d0, a0] = visit(0);
    if (accept(a0)) return settle(0, std::move(d0), a0, TuneStatus::Converged);
    if (last_index == 0) return settle(0, std::move(d0), a0, TuneStatus::Exhausted);
    auto [dn, an] = visit(last_index);
    const bool rising = an >= a0;
    // "before the run" means alpha is still on the starting side of the band
    auto before = [&](double a) {
        return rising ? a < cfg.target - cfg.epsilon : a > cfg.target + cfg.epsilon;
    };
    if (before(an)) return settle(last_index, std::move(dn), an, TuneStatus::Exhausted);

    long lo = 0, hi = last_index;  // before(lo) holds, before(hi) does not
    const Decomposition d_last = dn;
    Decomposition dh = std::move(dn);
    double ah = an;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        auto [dm, am] = visit(mid);
        if (before(am)) {
            lo = mid;
        } else {
            hi = mid;
            dh = std::move(dm);
            ah = am;
        }
    }
    std::sort(result.trace.begin(), result.trace.end(),
              [](const TracePoint& a, const TracePoint& b) { return a.lambda < b.lambda; });
    if (accept(ah)) return settle(hi, std::move(dh), ah, TuneStatus::Converged);
    // jumped across the band without landing in it; the linear scan would run to the end
    return settle(last_index, d_last, an, TuneStatus::Exhausted);
}

}  // namespace tds
