#include "tds/metrics.hpp"

#include "tds/errors.hpp"

#include <cmath>
#include <sstream>

namespace tds {

namespace {

void check_peak(double peak) {
    if (!std::isfinite(peak) || !(peak > 0.0)) {
        std::ostringstream os;
        os << "peak = " << peak << " must be finite and > 0";
        throw ParameterError(os.str());
    }
}

}  // namespace

double mse(const Grid& a, const Grid& b) {
    require_same_shape(a, b, "mse");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double psnr(const Grid& a, const Grid& b, double peak) {
    check_peak(peak);
    const double e = mse(a, b);
    if (e == 0.0) return kInfinitePsnr;
    return 10.0 * std::log10(peak * peak / e);
}

double ssim(const Grid& a, const Grid& b, double peak, std::size_t window) {
    require_same_shape(a, b, "ssim");
    check_peak(peak);
    if (window == 0) throw ConfigError("ssim window must be >= 1");
    if (a.rows() < window || a.cols() < window) {
        std::ostringstream os;
        os << "ssim window " << window << "x" << window << " does not fit a " << shape_string(a)
           << " grid";
        throw ConfigError(os.str());
    }
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const double count = static_cast<double>(window * window);

    double total = 0.0;
    std::size_t positions = 0;
    for (std::size_t i = 0; i + window <= a.rows(); ++i)
        for (std::size_t j = 0; j + window <= a.cols(); ++j) {
            double mu_a = 0.0, mu_b = 0.0;
            for (std::size_t di = 0; di < window; ++di)
                for (std::size_t dj = 0; dj < window; ++dj) {
                    mu_a += a(i + di, j + dj);
                    mu_b += b(i + di, j + dj);
                }
            mu_a /= count;
            mu_b /= count;
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (std::size_t di = 0; di < window; ++di)
                for (std::size_t dj = 0; dj < window; ++dj) {
                    const double da = a(i + di, j + dj) - mu_a;
                    const double db = b(i + di, j + dj) - mu_b;
                    var_a += da * da;
                    var_b += db * db;
                    cov += da * db;
                }
            var_a /= count;
            var_b /= count;
            cov /= count;
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            ++positions;
        }
    return total / static_cast<double>(positions);
}

MetricReport evaluate(const Grid& reference, const Grid& estimate, double peak) {
    MetricReport r;
    r.peak = peak;
    r.mse = mse(reference, estimate);
    r.psnr = psnr(reference, estimate, peak);
    r.ssim = ssim(reference, estimate, peak);
    return r;
}

}  // namespace tds
