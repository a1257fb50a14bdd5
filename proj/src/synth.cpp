#include "tds/synth.hpp"

#include "tds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tds {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ParameterError(msg);
}

}  // namespace

std::uint64_t Rng::next_u64() noexcept {
    ++counter_;
    return mix64(seed_ + counter_ * kGolden);
}

double Rng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape, double scale) {
    require(std::isfinite(shape) && shape > 0.0, "gamma shape must be finite and > 0");
    require(std::isfinite(scale) && scale > 0.0, "gamma scale must be finite and > 0");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0, 1.0);
        return scale * g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

std::uint64_t Rng::poisson(double mean) {
    require(std::isfinite(mean) && mean >= 0.0, "poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }
    // PTRS transformed rejection
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

std::string noise_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::Awgn: return "AWGN";
        case NoiseKind::Mwgn: return "MWGN";
        case NoiseKind::Complex: return "CN";
        case NoiseKind::SaltPepper: return "SPN";
        case NoiseKind::Poisson: return "Poisson";
    }
    return "unknown";
}

NoiseSpec NoiseSpec::awgn(double sigma, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::Awgn;
    s.sigma = sigma;
    s.seed = seed;
    return s;
}

NoiseSpec NoiseSpec::mwgn(double sigma, std::uint64_t seed) {
    NoiseSpec s = awgn(sigma, seed);
    s.kind = NoiseKind::Mwgn;
    return s;
}

NoiseSpec NoiseSpec::complex(double shape, double scale, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::Complex;
    s.shape = shape;
    s.scale = scale;
    s.seed = seed;
    return s;
}

NoiseSpec NoiseSpec::salt_pepper(double density, std::uint64_t seed, std::optional<double> low,
                                 std::optional<double> high) {
    NoiseSpec s;
    s.kind = NoiseKind::SaltPepper;
    s.density = density;
    s.low = low;
    s.high = high;
    s.seed = seed;
    return s;
}

NoiseSpec NoiseSpec::poisson(double scale, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::Poisson;
    s.poisson_scale = scale;
    s.seed = seed;
    return s;
}

void validate(const NoiseSpec& spec) {
    switch (spec.kind) {
        case NoiseKind::Awgn:
        case NoiseKind::Mwgn:
            require(std::isfinite(spec.sigma) && spec.sigma > 0.0, "noise sigma must be finite and > 0");
            break;
        case NoiseKind::Complex:
            require(std::isfinite(spec.shape) && spec.shape > 0.0, "gamma shape must be finite and > 0");
            require(std::isfinite(spec.scale) && spec.scale > 0.0, "gamma scale must be finite and > 0");
            break;
        case NoiseKind::SaltPepper:
            require(std::isfinite(spec.density) && spec.density > 0.0 && spec.density <= 1.0,
                    "salt-and-pepper density must lie in (0, 1]");
            if (spec.low && spec.high)
                require(*spec.low < *spec.high, "salt-and-pepper low must be < high");
            break;
        case NoiseKind::Poisson:
            require(std::isfinite(spec.poisson_scale) && spec.poisson_scale > 0.0,
                    "poisson scale must be finite and > 0");
            break;
    }
}

Grid apply_noise(const Grid& z, const NoiseSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    std::vector<double> out(z.values().begin(), z.values().end());

    switch (spec.kind) {
        case NoiseKind::Awgn:
            for (double& v : out) v += spec.sigma * rng.normal();
            break;
        case NoiseKind::Mwgn:
            for (double& v : out) v += v * spec.sigma * rng.normal();
            break;
        case NoiseKind::Complex:
            for (double& v : out) {
                const double n1 = rng.normal();
                const double n2 = rng.gamma(spec.shape, spec.scale);
                v += n1 * n2;
            }
            break;
        case NoiseKind::SaltPepper: {
            const double low = spec.low.value_or(z.min_value());
            const double high = spec.high.value_or(z.max_value());
            if (!(low < high)) throw ParameterError("salt-and-pepper low must be < high");
            for (double& v : out) {
                const double u = rng.uniform();
                if (u < 0.5 * spec.density)
                    v = low;
                else if (u < spec.density)
                    v = high;
            }
            break;
        }
        case NoiseKind::Poisson:
            for (double& v : out) {
                if (v < 0.0) throw DataError("poisson noise needs nonnegative input");
                v = static_cast<double>(rng.poisson(v * spec.poisson_scale)) / spec.poisson_scale;
            }
            break;
    }
    return Grid(z.rows(), z.cols(), std::move(out));
}

Grid test_surface(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw DimensionError("test_surface needs nonempty axes");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()))
        throw ParameterError("test_surface axes must be ascending");
    return Grid::from_function(xs.size(), ys.size(), [&](std::size_t i, std::size_t j) {
        const double s = xs[i] + ys[j];
        return s + 2.0 * std::sin(s) + 10.0;
    });
}

std::vector<double> canonical_x() {
    std::vector<double> x(31);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + static_cast<double>(i) / 10.0;
    return x;
}

std::vector<double> canonical_y() {
    std::vector<double> y(21);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = 1.0 + static_cast<double>(j) / 10.0;
    return y;
}

Grid canonical_surface() { return test_surface(canonical_x(), canonical_y()); }

Grid test_image(std::size_t rows, std::size_t cols) {
    if (rows < 8 || cols < 8) throw DimensionError("test_image needs at least 8x8");
    constexpr double pi = std::numbers::pi;
    const double h = static_cast<double>(rows);
    const double w = static_cast<double>(cols);
    return Grid::from_function(rows, cols, [&](std::size_t i, std::size_t j) {
        const double y = static_cast<double>(i) / h;
        const double x = static_cast<double>(j) / w;
        // sky-to-ground shading
        double v = 0.25 + 0.35 * y + 0.08 * std::sin(2.0 * pi * (x + 0.3 * y));
        // bright disk
        const double dx = x - 0.32, dy = y - 0.35;
        if (dx * dx + dy * dy < 0.18 * 0.18) v = 0.82 - 0.4 * (dx * dx + dy * dy);
        // dark block
        if (x > 0.58 && x < 0.88 && y > 0.18 && y < 0.48) v = 0.12 + 0.1 * x;
        // ring
        const double rx = x - 0.7, ry = y - 0.75;
        const double r = std::sqrt(rx * rx + ry * ry);
        if (r > 0.1 && r < 0.15) v = 0.9;
        // striped texture
        if (x < 0.45 && y > 0.62) v += 0.06 * std::sin(2.0 * pi * 16.0 * x) * std::sin(2.0 * pi * 12.0 * y);
        return std::clamp(v, 0.0, 1.0);
    });
}

}  // namespace tds
