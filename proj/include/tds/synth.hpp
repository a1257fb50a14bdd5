#pragma once

#include "tds/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tds {

/// tds-rng v1: counter-based SplitMix64.
///
/// Draw k (1-based) is mix64(seed + k * 0x9E3779B97F4A7C15), where mix64 is
/// the SplitMix64 finalizer. Derived variates use only this stream:
///   uniform  ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
///   normal   Box-Muller cosine branch, two uniforms per variate
///   gamma    Marsaglia-Tsang squeeze (shape < 1 boosted by u^(1/shape))
///   poisson  multiplication method below mean 30, PTRS (Hormann) above
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;
    double normal() noexcept;
    double gamma(double shape, double scale);
    std::uint64_t poisson(double mean);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

enum class NoiseKind {
    Awgn,     ///< z + sigma n
    Mwgn,     ///< z + z sigma n
    Complex,  ///< z + n1 n2, n1 ~ N(0,1), n2 ~ Gamma(shape, scale)
    SaltPepper,
    Poisson,  ///< Poisson(z s) / s
};

std::string noise_name(NoiseKind k);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Awgn;
    double sigma = 1.0;
    double shape = 2.0;
    double scale = 1.0;
    double density = 0.05;
    /// Salt-and-pepper replacement values; default to min(z) / max(z).
    std::optional<double> low;
    std::optional<double> high;
    /// Photon-count scale for Poisson noise.
    double poisson_scale = 255.0;
    std::uint64_t seed = 0;

    static NoiseSpec awgn(double sigma, std::uint64_t seed);
    static NoiseSpec mwgn(double sigma, std::uint64_t seed);
    static NoiseSpec complex(double shape, double scale, std::uint64_t seed);
    static NoiseSpec salt_pepper(double density, std::uint64_t seed,
                                 std::optional<double> low = std::nullopt,
                                 std::optional<double> high = std::nullopt);
    static NoiseSpec poisson(double scale, std::uint64_t seed);
};

/// Throws ParameterError on invalid fields.
void validate(const NoiseSpec& spec);

/// Deterministic for a fixed spec (seed included). One stream per call,
/// consumed entry by entry in row-major order.
Grid apply_noise(const Grid& z, const NoiseSpec& spec);

/// Entry (i, j) = x_i + y_j + 2 sin(x_i + y_j) + 10.
Grid test_surface(const std::vector<double>& xs, const std::vector<double>& ys);

/// x = 1.0, 1.1, ..., 4.0 (31 samples).
std::vector<double> canonical_x();
/// y = 1.0, 1.1, ..., 3.0 (21 samples).
std::vector<double> canonical_y();
/// The 31 x 21 clean reference surface.
Grid canonical_surface();

/// Procedural grayscale scene in [0, 1]: smooth shading, a few flat shapes
/// with hard edges, and fine periodic texture.
Grid test_image(std::size_t rows = 256, std::size_t cols = 256);

}  // namespace tds
