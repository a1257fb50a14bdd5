#include "tds/baselines.hpp"

#include "tds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tds {

namespace {

void check_window(const Grid& z, WindowSpec w) {
    if (w.height == 0 || w.width == 0) throw ParameterError("window dimensions must be >= 1");
    if (w.height > z.rows() || w.width > z.cols()) {
        std::ostringstream os;
        os << "window " << w.label() << " larger than grid " << shape_string(z);
        throw DimensionError(os.str());
    }
}

std::size_t clamp_index(std::ptrdiff_t k, std::size_t len) {
    if (k < 0) return 0;
    if (static_cast<std::size_t>(k) >= len) return len - 1;
    return static_cast<std::size_t>(k);
}

/// Calls fn(value) for every tap of the replicate-padded window at (i, j).
template <typename Fn>
void for_window(const Grid& z, WindowSpec w, std::size_t i, std::size_t j, Fn&& fn) {
    const auto top = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>((w.height - 1) / 2);
    const auto left = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>((w.width - 1) / 2);
    for (std::size_t di = 0; di < w.height; ++di) {
        const std::size_t r = clamp_index(top + static_cast<std::ptrdiff_t>(di), z.rows());
        for (std::size_t dj = 0; dj < w.width; ++dj)
            fn(z(r, clamp_index(left + static_cast<std::ptrdiff_t>(dj), z.cols())));
    }
}

}  // namespace

Grid median_filter(const Grid& z, WindowSpec w) {
    check_window(z, w);
    const std::size_t count = w.height * w.width;
    std::vector<double> buf;
    buf.reserve(count);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) {
            buf.clear();
            for_window(z, w, i, j, [&](double v) { buf.push_back(v); });
            const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(count / 2);
            std::nth_element(buf.begin(), mid, buf.end());
            double med = *mid;
            if (count % 2 == 0) {
                const double lower = *std::max_element(buf.begin(), mid);
                med = 0.5 * (lower + med);
            }
            out[i * z.cols() + j] = med;
        }
    return Grid(z.rows(), z.cols(), std::move(out));
}

Grid mean_filter(const Grid& z, WindowSpec w) {
    check_window(z, w);
    const double count = static_cast<double>(w.height * w.width);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) {
            double s = 0.0;
            for_window(z, w, i, j, [&](double v) { s += v; });
            out[i * z.cols() + j] = s / count;
        }
    return Grid(z.rows(), z.cols(), std::move(out));
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) {
        std::ostringstream os;
        os << "gaussian sigma = " << sigma << " must be finite and > 0";
        throw ParameterError(os.str());
    }
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (std::ptrdiff_t x = -radius; x <= radius; ++x) {
        const double v = std::exp(-0.5 * static_cast<double>(x * x) / (sigma * sigma));
        k[static_cast<std::size_t>(x + radius)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

Grid gaussian_filter(const Grid& z, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);
    const std::size_t m = z.rows(), n = z.cols();

    std::vector<double> tmp(z.size());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::ptrdiff_t d = -radius; d <= radius; ++d)
                s += k[static_cast<std::size_t>(d + radius)] *
                     z(i, clamp_index(static_cast<std::ptrdiff_t>(j) + d, n));
            tmp[i * n + j] = s;
        }
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::ptrdiff_t d = -radius; d <= radius; ++d)
                s += k[static_cast<std::size_t>(d + radius)] *
                     tmp[clamp_index(static_cast<std::ptrdiff_t>(i) + d, m) * n + j];
            out[i * n + j] = s;
        }
    return Grid(m, n, std::move(out));
}

Grid wiener_filter(const Grid& z, WindowSpec w) {
    check_window(z, w);
    const double count = static_cast<double>(w.height * w.width);
    std::vector<double> mu(z.size()), var(z.size());
    double noise = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) {
            double s = 0.0;
            for_window(z, w, i, j, [&](double v) { s += v; });
            const double mean = s / count;
            double ss = 0.0;
            for_window(z, w, i, j, [&](double v) { ss += (v - mean) * (v - mean); });
            mu[i * z.cols() + j] = mean;
            var[i * z.cols() + j] = ss / count;
            noise += ss / count;
        }
    noise /= static_cast<double>(z.size());

    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double denom = std::max(var[k], noise);
        const double gain = denom > 0.0 ? std::max(var[k] - noise, 0.0) / denom : 0.0;
        out[k] = mu[k] + gain * (z.values()[k] - mu[k]);
    }
    return Grid(z.rows(), z.cols(), std::move(out));
}

}  // namespace tds
