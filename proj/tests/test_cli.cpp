#include "tds/cli.hpp"
#include "tds/io.hpp"
#include "tds/metrics.hpp"
#include "tds/solver.hpp"
#include "tds/synth.hpp"
#include "tds/tuning.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tds;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tds");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tds::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path dir() {
    const fs::path d = fs::temp_directory_path() / "tds_cli_tests";
    fs::create_directories(d);
    return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

double report_value(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
    FAIL("missing key " << key);
    return 0.0;
}

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void make_fixture() {
    write_matrix(apply_noise(canonical_surface(), NoiseSpec::awgn(1.0, 1)), path("z.txt"));
    write_matrix(canonical_surface(), path("clean.txt"));
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(invoke({}).code == tds::cli::kUsage);
    CHECK(invoke({"frobnicate"}).code == tds::cli::kUsage);
    make_fixture();
    CHECK(invoke({"decompose", path("z.txt")}).code == tds::cli::kUsage);
    const Run r = invoke({"decompose", path("z.txt"), "--lambda", "1", "--gamma", "2"});
    CHECK(r.code == tds::cli::kUsage);
    CHECK(r.err.find("--lambda") != std::string::npos);
    CHECK(invoke({"decompose", path("z.txt"), "--gamma", "2"}).code == tds::cli::kUsage);
    CHECK(invoke({"decompose", path("z.txt"), "--lambda", "-1"}).code == tds::cli::kUsage);
    CHECK(invoke({"decompose", path("missing.txt"), "--lambda", "1"}).code == tds::cli::kUsage);
    CHECK(invoke({"tune", path("z.txt"), "--metric", "bogus"}).code == tds::cli::kUsage);
    CHECK(invoke({"--help"}).code == tds::cli::kOk);
}

TEST_CASE("decompose with lambda 0 copies the input") {
    make_fixture();
    CHECK(invoke({"decompose", path("z.txt"), "--lambda", "0", "--out-trend", path("g0.txt")}).code == 0);
    CHECK(slurp(path("g0.txt")) == slurp(path("z.txt")));
}

TEST_CASE("decompose report on the canonical fixture") {
    make_fixture();
    const Run r = invoke({"decompose", path("z.txt"), "--lambda", "100", "--report", "--out-trend", path("g.txt"),
                       "--out-fluct", path("c.txt")});
    REQUIRE(r.code == 0);
    const double s = report_value(r.out, "fluctuation_std");
    CHECK(s >= 0.90);
    CHECK(s <= 1.05);
    CHECK(report_value(r.out, "residual") <= 1e-10);
    const Grid g = read_matrix(path("g.txt")), c = read_matrix(path("c.txt"));
    CHECK(relative_difference(g + c, read_matrix(path("z.txt"))) < 1e-14);
}

TEST_CASE("decompose selects each variant") {
    make_fixture();
    const std::string g21 = "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21";
    std::string g31;
    for (int k = 0; k < 31; ++k) g31 += (k ? "," : "") + std::to_string(5 + k);
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
        {{"--gamma", "90", "--delta", "40"}, "tds1"},
        {{"--gamma-vec", g31, "--delta-vec", g21}, "tds2"},
        {{"--gamma", "3", "--delta-vec", g21}, "tds3-row-scalar"},
        {{"--gamma-vec", g31, "--delta", "3"}, "tds3-col-scalar"},
    };
    for (const auto& [extra, name] : cases) {
        std::vector<std::string> args = {"decompose", path("z.txt"), "--report"};
        args.insert(args.end(), extra.begin(), extra.end());
        const Run r = invoke(args);
        CAPTURE(name);
        CHECK(r.code == 0);
        CHECK(r.out.find("variant: " + name) != std::string::npos);
    }
    CHECK(invoke({"decompose", path("z.txt"), "--gamma-vec", "1,2", "--delta", "3"}).code == tds::cli::kUsage);
}

TEST_CASE("TDS-I with gamma 90, delta 40 versus gamma = delta = 60") {
    // Rows follow y and columns follow x here, the transpose of the canonical layout.
    const Grid clean = canonical_surface().transposed();
    write_matrix(clean, path("clean_t.txt"));
    write_matrix(apply_noise(clean, NoiseSpec::awgn(1.0, 1)), path("zt.txt"));
    const Run a = invoke({"decompose", path("zt.txt"), "--gamma", "90", "--delta", "40", "--report", "--reference",
                          path("clean_t.txt")});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("variant: tds1") != std::string::npos);
    CHECK(report_value(a.out, "mse") > 0.0);

    // The gap is small next to the seed-to-seed spread, so compare averages.
    const SpectralCache cache(clean.rows(), clean.cols());
    double skew = 0.0, even = 0.0;
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        const Grid z = apply_noise(clean, NoiseSpec::awgn(1.0, seed));
        skew += mse(clean, cache.solve(z, Tds1Params{90.0, 40.0}).trend);
        even += mse(clean, cache.solve(z, TdsParams{60.0}).trend);
    }
    CHECK(skew < even);
}

TEST_CASE("solver failure exits 3") {
    make_fixture();
    std::string g31, d21;
    for (int k = 0; k < 31; ++k) g31 += (k ? "," : "") + std::string(k % 2 ? "1e9" : "1");
    for (int k = 0; k < 21; ++k) d21 += (k ? "," : "") + std::string(k % 2 ? "1" : "1e9");
    const Run r = invoke({"decompose", path("z.txt"), "--gamma-vec", g31, "--delta-vec", d21, "--cg-tol", "1e-16"});
    CHECK(r.code == tds::cli::kNumerical);
}

TEST_CASE("sharpen") {
    const Grid img = test_image(48, 40);
    write_pgm(img, path("img.pgm"));
    CHECK(invoke({"sharpen", path("img.pgm"), "--lambda", "0", "--out", path("s0.pgm")}).code == 0);
    CHECK(slurp(path("s0.pgm")) == slurp(path("img.pgm")));

    // smooth then sharpen returns the quantized image to within one level
    const Grid q = read_pgm(path("img.pgm")).pixels;
    write_matrix(solve_tds(q, 0.6).trend, path("smooth.txt"));
    CHECK(invoke({"sharpen", path("smooth.txt"), "--lambda", "0.6", "--out", path("back.pgm")}).code == 0);
    const Grid back = read_pgm(path("back.pgm")).pixels;
    CHECK((back - q).max_abs() <= 1.0 / 255.0 + 1e-12);

    double last = 0.0;
    for (const char* l : {"0.2", "0.4", "0.6", "0.8", "1.0"}) {
        CHECK(invoke({"sharpen", path("img.pgm"), "--lambda", l, "--out", path("s.txt")}).code == 0);
        const double e = (read_matrix(path("s.txt")) - q).frobenius_norm();
        CHECK(e > last);
        last = e;
    }
    CHECK(invoke({"sharpen", path("img.pgm"), "--lambda", "2", "--out", path("s.pgm"), "--no-clamp"}).code == tds::cli::kUsage);
}

TEST_CASE("tune exit codes and trace") {
    make_fixture();
    const Run ok = invoke({"tune", path("z.txt"), "--metric", "fluct-std", "--target", "0.95", "--eps", "0.01"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("status: converged") != std::string::npos);

    const Run ex = invoke({"tune", path("z.txt"), "--metric", "ssim", "--target", "2", "--step", "10", "--max-lambda",
                        "50", "--reference", path("clean.txt"), "--trace", path("trace.csv")});
    CHECK(ex.code == tds::cli::kTuneExhausted);
    CHECK(slurp(path("trace.csv")).find("lambda,alpha\n0,") == 0);
    std::istringstream t(slurp(path("trace.csv")));
    std::string line;
    std::vector<std::string> lambdas;
    std::getline(t, line);
    while (std::getline(t, line)) lambdas.push_back(line.substr(0, line.find(',')));
    CHECK(lambdas == std::vector<std::string>{"0", "10", "20", "30", "40", "50"});

    const Run zero = invoke({"tune", path("z.txt"), "--metric", "mse", "--reference", path("clean.txt"), "--target",
                          "0", "--eps", "1e9"});
    CHECK(zero.code == 0);
    CHECK(report_value(zero.out, "lambda") == 0.0);
}

TEST_CASE("bench writes a csv and the seed") {
    const Run r = invoke({"bench", "--suite", "synthetic", "--seeds", "1", "--seed", "4", "--no-timing", "--out",
                       path("b1.csv")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("seed: 4") != std::string::npos);
    invoke({"bench", "--suite", "synthetic", "--seeds", "1", "--seed", "4", "--no-timing", "--out", path("b2.csv")});
    CHECK(slurp(path("b1.csv")) == slurp(path("b2.csv")));
    CHECK(slurp(path("b1.csv")).rfind("filter,params,noise,seed_count,mse,psnr,ssim,seconds\n", 0) == 0);
    CHECK(invoke({"bench", "--suite", "video"}).code == tds::cli::kUsage);
}

TEST_CASE("synth writes fixtures") {
    const Run r = invoke({"synth", "--noise", "awgn", "--sigma", "1", "--seed", "9", "--out", path("n.txt"),
                       "--clean-out", path("c0.txt")});
    REQUIRE(r.code == 0);
    CHECK(read_matrix(path("n.txt")) == apply_noise(canonical_surface(), NoiseSpec::awgn(1.0, 9)));
    CHECK(read_matrix(path("c0.txt")) == canonical_surface());
    CHECK(invoke({"synth", "--kind", "image", "--rows", "16", "--cols", "16", "--out", path("i.pgm")}).code == 0);
    CHECK(read_pgm(path("i.pgm")).pixels.rows() == 16);
    CHECK(invoke({"synth", "--noise", "pink", "--out", path("x.txt")}).code == tds::cli::kUsage);
}
