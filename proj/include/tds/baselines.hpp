#pragma once

#include "tds/grid.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tds {

/// Filter window. Rows i - (height-1)/2 .. i + height/2 around pixel i
/// (same for columns), so even sizes lean towards the lower-right.
struct WindowSpec {
    std::size_t height = 3;
    std::size_t width = 3;

    std::string label() const { return std::to_string(height) + "x" + std::to_string(width); }
};

/// Windowed median over the replicate-padded input; even counts average the
/// two central order statistics.
Grid median_filter(const Grid& z, WindowSpec w);

/// Windowed mean over the replicate-padded input.
Grid mean_filter(const Grid& z, WindowSpec w);

/// Normalized sampled Gaussian taps for radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with replicate padding.
Grid gaussian_filter(const Grid& z, double sigma);

/// Adaptive Wiener filter: per pixel local mean mu and variance s2 over the
/// window; noise power nu = mean of all s2;
/// out = mu + max(s2 - nu, 0) / max(s2, nu) * (z - mu).
Grid wiener_filter(const Grid& z, WindowSpec w);

}  // namespace tds
