#pragma once

#include "tds/grid.hpp"
#include "tds/synth.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tds {

inline constexpr const char* kBenchCsvHeader = "filter,params,noise,seed_count,mse,psnr,ssim,seconds";

/// One (filter, parameter, noise) cell: per-seed MSE and SSIM reduced to
/// medians; PSNR is computed from the median MSE.
struct BenchRow {
    std::string filter;  // tds, tds1, median, mean, gaussian, wiener
    std::string params;  // lambda=10, gamma=10;delta=2, 3x4, sigma=1.2
    std::string noise;
    std::size_t seed_count = 0;
    double mse = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    double seconds = 0.0;
    std::string error;  // nonempty when the cell failed

    bool failed() const { return !error.empty(); }
};

enum class BenchSuite { Synthetic, Image };

struct BenchOptions {
    BenchSuite suite = BenchSuite::Synthetic;
    std::size_t seeds = 10;
    std::uint64_t base_seed = 1;
    /// 0 picks TDS_THREADS or the hardware concurrency.
    std::size_t threads = 0;
    /// When false the seconds column is written as 0 so output is reproducible.
    bool timing = true;
    /// Clean image for the image suite (pixels in [0, 1]).
    std::optional<Grid> image;
};

/// A filter family entry: label plus the function applied to a noisy grid.
struct BenchFilter {
    std::string filter;
    std::string params;
    std::function<Grid(const Grid&)> apply;
};

/// The noise models of a suite, seeded per run.
struct BenchNoise {
    std::string name;
    std::function<NoiseSpec(std::uint64_t seed)> spec;
};

std::vector<BenchNoise> synthetic_noises();
std::vector<BenchFilter> synthetic_filters(std::size_t rows, std::size_t cols);
std::vector<BenchNoise> image_noises();
std::vector<BenchFilter> image_filters(std::size_t rows, std::size_t cols);

/// Worker count honoring TDS_THREADS.
std::size_t bench_threads(std::size_t requested);

/// Runs every (noise, filter) cell over seeds base_seed .. base_seed + seeds - 1.
/// Rows come back in canonical (noise, filter, parameter) order regardless
/// of scheduling. Throws ConfigError for an invalid suite setup.
std::vector<BenchRow> run_bench(const BenchOptions& options);

/// Generic driver used by both suites.
std::vector<BenchRow> run_cells(const Grid& clean, double peak, const std::vector<BenchNoise>& noises,
                                const std::vector<BenchFilter>& filters, std::size_t seeds,
                                std::uint64_t base_seed, std::size_t threads, bool timing);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Lowest-MSE row for a filter family under one noise, or nullptr.
const BenchRow* best_row(const std::vector<BenchRow>& rows, const std::string& noise,
                         const std::string& filter);

}  // namespace tds
