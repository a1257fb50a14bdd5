#include "tds/bench.hpp"
#include "tds/errors.hpp"
#include "tds/metrics.hpp"
#include "tds/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

using namespace tds;

TEST_CASE("synthetic suite layout") {
    const auto noises = synthetic_noises();
    REQUIRE(noises.size() == 4);
    CHECK(noises[0].name == "AWGN");
    CHECK(noises[3].name == "SPN");
    const auto filters = synthetic_filters(31, 21);
    std::size_t tds = 0, gauss = 0;
    for (const auto& f : filters) {
        tds += f.filter == "tds";
        gauss += f.filter == "gaussian";
    }
    CHECK(tds == 31);
    CHECK(filters.front().params == "lambda=10");
    CHECK(gauss == 20);
}

TEST_CASE("image suite layout") {
    const auto noises = image_noises();
    REQUIRE(noises.size() == 3);
    CHECK(noises[2].name == "Poisson");
    std::set<std::string> families;
    for (const auto& f : image_filters(64, 64)) families.insert(f.filter);
    CHECK(families == std::set<std::string>{"tds", "tds1", "median", "mean", "gaussian", "wiener"});
}

TEST_CASE("rows are medians over seeds and keep canonical order") {
    const Grid clean = canonical_surface();
    const std::vector<BenchNoise> noises = {{"AWGN", [](std::uint64_t s) { return NoiseSpec::awgn(1.0, s); }}};
    const std::vector<BenchFilter> filters = {
        {"identity", "-", [](const Grid& z) { return z; }},
        {"broken", "-", [](const Grid&) -> Grid { throw NumericalError("no", 1.0, 3); }},
    };
    const auto rows = run_cells(clean, 1.0, noises, filters, 3, 7, 2, false);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].filter == "identity");
    CHECK(rows[0].seed_count == 3);
    std::vector<double> m;
    for (std::uint64_t s = 7; s < 10; ++s) m.push_back(mse(clean, apply_noise(clean, NoiseSpec::awgn(1.0, s))));
    std::sort(m.begin(), m.end());
    CHECK(rows[0].mse == m[1]);
    CHECK(rows[0].seconds == 0.0);
    CHECK(rows[1].failed());
    CHECK(std::isnan(rows[1].mse));
}

TEST_CASE("csv output") {
    BenchRow a{"tds", "lambda=10", "AWGN", 10, 0.5, 3.0103, 0.25, 0.0, ""};
    BenchRow b{"mean", "3x3", "SPN", 10, 0.0, kInfinitePsnr, 1.0, 0.0, ""};
    std::ostringstream os;
    write_bench_csv(os, {a, b});
    CHECK(os.str() == std::string(kBenchCsvHeader) + "\ntds,lambda=10,AWGN,10,0.5,3.0103,0.25,0\nmean,3x3,SPN,10,0,inf,1,0\n");
}

TEST_CASE("best row picks the lowest mse") {
    std::vector<BenchRow> rows = {{"tds", "lambda=10", "AWGN", 1, 0.3, 0, 0, 0, ""},
                                  {"tds", "lambda=20", "AWGN", 1, 0.1, 0, 0, 0, ""},
                                  {"tds", "lambda=30", "CN", 1, 0.05, 0, 0, 0, ""}};
    REQUIRE(best_row(rows, "AWGN", "tds") != nullptr);
    CHECK(best_row(rows, "AWGN", "tds")->params == "lambda=20");
    CHECK(best_row(rows, "AWGN", "median") == nullptr);
}

TEST_CASE("thread count honours TDS_THREADS") {
    CHECK(bench_threads(3) == 3);
    setenv("TDS_THREADS", "1", 1);
    CHECK(bench_threads(0) == 1);
    CHECK(bench_threads(4) == 1);
    unsetenv("TDS_THREADS");
    CHECK(bench_threads(0) >= 1);
}

TEST_CASE("synthetic bench is deterministic and ranks TDS first under AWGN") {
    BenchOptions o;
    o.seeds = 3;
    o.timing = false;
    const auto a = run_bench(o);
    o.threads = 1;
    const auto b = run_bench(o);
    std::ostringstream sa, sb;
    write_bench_csv(sa, a);
    write_bench_csv(sb, b);
    CHECK(sa.str() == sb.str());
    const BenchRow* tds = best_row(a, "AWGN", "tds");
    const BenchRow* gauss = best_row(a, "AWGN", "gaussian");
    REQUIRE(tds);
    REQUIRE(gauss);
    CHECK(tds->mse < gauss->mse);
    for (const char* f : {"median", "mean", "wiener"}) CHECK(gauss->mse < best_row(a, "AWGN", f)->mse);
}

TEST_CASE("image suite needs an image") {
    BenchOptions o;
    o.suite = BenchSuite::Image;
    CHECK_THROWS_AS(run_bench(o), ConfigError);
}
