#include "tds/bench.hpp"

#include "tds/baselines.hpp"
#include "tds/errors.hpp"
#include "tds/metrics.hpp"
#include "tds/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <thread>

namespace tds {

namespace {

std::string fmt_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_param(const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", name, v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    const double lo = v[n / 2 - 1], hi = v[n / 2];
    if (std::isinf(lo) && lo == hi) return lo;
    return 0.5 * (lo + hi);
}

std::vector<WindowSpec> synthetic_windows() {
    return {{3, 3}, {3, 4}, {4, 3}, {4, 4}, {4, 5}, {5, 4}, {5, 5}};
}

void add_window_filters(std::vector<BenchFilter>& out, const std::vector<WindowSpec>& windows,
                        const char* name, Grid (*fn)(const Grid&, WindowSpec)) {
    for (WindowSpec w : windows)
        out.push_back({name, w.label(), [w, fn](const Grid& z) { return fn(z, w); }});
}

void add_tds_filters(std::vector<BenchFilter>& out, const std::vector<double>& lambdas,
                     const std::shared_ptr<const SpectralCache>& cache) {
    for (double lambda : lambdas)
        out.push_back({"tds", fmt_param("lambda", lambda),
                       [cache, lambda](const Grid& z) { return cache->solve(z, TdsParams{lambda}).trend; }});
}

}  // namespace

std::vector<BenchNoise> synthetic_noises() {
    return {
        {"AWGN", [](std::uint64_t s) { return NoiseSpec::awgn(1.0, s); }},
        {"CN", [](std::uint64_t s) { return NoiseSpec::complex(2.0, 1.0, s); }},
        {"MWGN", [](std::uint64_t s) { return NoiseSpec::mwgn(0.04, s); }},
        {"SPN", [](std::uint64_t s) { return NoiseSpec::salt_pepper(0.9, s); }},
    };
}

std::vector<BenchFilter> synthetic_filters(std::size_t rows, std::size_t cols) {
    auto cache = std::make_shared<const SpectralCache>(rows, cols);
    std::vector<BenchFilter> out;
    std::vector<double> lambdas;
    for (int k = 1; k <= 31; ++k) lambdas.push_back(10.0 * k);
    add_tds_filters(out, lambdas, cache);
    add_window_filters(out, synthetic_windows(), "median", &median_filter);
    add_window_filters(out, {{3, 3}, {5, 5}}, "mean", &mean_filter);
    for (int k = 0; k < 20; ++k) {
        const double sigma = (12.0 + 2.0 * k) / 10.0;  // 1.2, 1.4, ..., 5.0
        out.push_back({"gaussian", fmt_param("sigma", sigma),
                       [sigma](const Grid& z) { return gaussian_filter(z, sigma); }});
    }
    add_window_filters(out, synthetic_windows(), "wiener", &wiener_filter);
    return out;
}

std::vector<BenchNoise> image_noises() {
    return {
        {"AWGN", [](std::uint64_t s) { return NoiseSpec::awgn(0.1, s); }},  // variance 0.01
        {"SPN", [](std::uint64_t s) { return NoiseSpec::salt_pepper(0.02, s, 0.0, 1.0); }},
        {"Poisson", [](std::uint64_t s) { return NoiseSpec::poisson(255.0, s); }},
    };
}

std::vector<BenchFilter> image_filters(std::size_t rows, std::size_t cols) {
    auto cache = std::make_shared<const SpectralCache>(rows, cols);
    std::vector<BenchFilter> out;
    add_tds_filters(out, {0.2, 0.4, 0.5, 0.6, 0.8, 1, 1.2, 1.4, 1.6, 1.8, 2, 3, 4,
                          5, 6, 7, 8, 9, 10, 11, 12, 14, 16, 18, 20},
                    cache);
    const std::pair<double, double> pairs[] = {{10, 2}, {33, 10}, {5, 2}, {19, 6}, {0.8, 0.3}, {3, 1.2}};
    for (auto [gamma, delta] : pairs) {
        out.push_back({"tds1", fmt_param("gamma", gamma) + ";" + fmt_param("delta", delta),
                       [cache, gamma, delta](const Grid& z) {
                           return cache->solve(z, Tds1Params{gamma, delta}).trend;
                       }});
    }
    std::vector<WindowSpec> squares;
    for (std::size_t k = 3; k <= 12; ++k) squares.push_back({k, k});
    add_window_filters(out, squares, "median", &median_filter);
    add_window_filters(out, {{3, 3}, {5, 5}}, "mean", &mean_filter);
    for (int k = 6; k <= 23; ++k) {
        const double sigma = k / 10.0;  // 0.6 .. 2.3
        out.push_back({"gaussian", fmt_param("sigma", sigma),
                       [sigma](const Grid& z) { return gaussian_filter(z, sigma); }});
    }
    add_window_filters(out, squares, "wiener", &wiener_filter);
    return out;
}

std::size_t bench_threads(std::size_t requested) {
    std::size_t n = requested ? requested : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TDS_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    }
    return n;
}

std::vector<BenchRow> run_cells(const Grid& clean, double peak, const std::vector<BenchNoise>& noises,
                                const std::vector<BenchFilter>& filters, std::size_t seeds,
                                std::uint64_t base_seed, std::size_t threads, bool timing) {
    if (seeds == 0) throw ConfigError("bench needs at least one seed");

    // noisy inputs are shared read-only by every filter of the same noise
    std::vector<std::vector<Grid>> noisy(noises.size());
    for (std::size_t a = 0; a < noises.size(); ++a)
        for (std::size_t s = 0; s < seeds; ++s)
            noisy[a].push_back(apply_noise(clean, noises[a].spec(base_seed + s)));

    const std::size_t cells = noises.size() * filters.size();
    std::vector<BenchRow> rows(cells);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t c = next++; c < cells; c = next++) {
            const std::size_t a = c / filters.size();
            const BenchFilter& f = filters[c % filters.size()];
            BenchRow& row = rows[c];
            row.filter = f.filter;
            row.params = f.params;
            row.noise = noises[a].name;
            row.seed_count = seeds;
            try {
                std::vector<double> e, q, t;
                for (std::size_t s = 0; s < seeds; ++s) {
                    const auto start = std::chrono::steady_clock::now();
                    const Grid out = f.apply(noisy[a][s]);
                    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
                    const MetricReport r = evaluate(clean, out, peak);
                    e.push_back(r.mse);
                    q.push_back(r.ssim);
                }
                row.mse = median(e);
                // from the median MSE, so PSNR ordering always mirrors MSE ordering
                row.psnr = row.mse > 0.0 ? 10.0 * std::log10(peak * peak / row.mse) : kInfinitePsnr;
                row.ssim = median(q);
                row.seconds = timing ? median(t) : 0.0;
            } catch (const std::exception& ex) {
                row.mse = row.psnr = row.ssim = std::nan("");
                row.error = ex.what();
            }
        }
    };

    const std::size_t n = std::min(bench_threads(threads), std::max<std::size_t>(cells, 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
    if (options.suite == BenchSuite::Synthetic) {
        const Grid clean = canonical_surface();
        const double peak = clean.max_value() - clean.min_value();
        return run_cells(clean, peak, synthetic_noises(), synthetic_filters(clean.rows(), clean.cols()),
                         options.seeds, options.base_seed, options.threads, options.timing);
    }
    if (!options.image) throw ConfigError("image suite needs an input image");
    const Grid& clean = *options.image;
    return run_cells(clean, 1.0, image_noises(), image_filters(clean.rows(), clean.cols()), options.seeds,
                     options.base_seed, options.threads, options.timing);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchCsvHeader << '\n';
    for (const BenchRow& r : rows) {
        out << r.filter << ',' << r.params << ',' << r.noise << ',' << r.seed_count << ','
            << fmt_number(r.mse) << ',' << fmt_number(r.psnr) << ',' << fmt_number(r.ssim) << ','
            << fmt_number(r.seconds) << '\n';
    }
}

const BenchRow* best_row(const std::vector<BenchRow>& rows, const std::string& noise,
                         const std::string& filter) {
    const BenchRow* best = nullptr;
    for (const BenchRow& r : rows) {
        if (r.noise != noise || r.filter != filter || r.failed()) continue;
        if (!best || r.mse < best->mse) best = &r;
    }
    return best;
}

}  // namespace tds
