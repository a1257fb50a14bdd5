#pragma once

#include "tds/grid.hpp"

#include <cstddef>
#include <limits>

namespace tds {

/// PSNR of identical inputs.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// Side of the square SSIM window.
inline constexpr std::size_t kSsimWindow = 8;

struct MetricReport {
    double mse = 0.0;
    double psnr = kInfinitePsnr;
    double ssim = 1.0;
    double peak = 1.0;
};

/// Mean of squared entrywise differences.
double mse(const Grid& a, const Grid& b);

/// 10 log10(peak^2 / mse); kInfinitePsnr when mse == 0.
double psnr(const Grid& a, const Grid& b, double peak);

/// Mean structural similarity over every window x window position, uniform
/// weights, C1 = (0.01 peak)^2, C2 = (0.03 peak)^2. Symmetric in a and b.
/// Throws ConfigError when the grid is smaller than the window.
double ssim(const Grid& a, const Grid& b, double peak, std::size_t window = kSsimWindow);

/// All three against a reference.
MetricReport evaluate(const Grid& reference, const Grid& estimate, double peak);

}  // namespace tds
