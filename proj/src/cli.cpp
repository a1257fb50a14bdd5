#include "tds/cli.hpp"

#include "tds/bench.hpp"
#include "tds/errors.hpp"
#include "tds/io.hpp"
#include "tds/metrics.hpp"
#include "tds/solver.hpp"
#include "tds/synth.hpp"
#include "tds/tuning.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef TDS_DATA_DIR
#define TDS_DATA_DIR "data"
#endif

namespace tds::cli {

namespace {

namespace fs = std::filesystem;

/// Argument combination the parser cannot express.
class UsageError : public Error {
public:
    using Error::Error;
};

bool is_pgm_path(const fs::path& p) { return p.extension() == ".pgm" || p.extension() == ".PGM"; }

void write_output(const Grid& g, const fs::path& path, bool clamp) {
    if (is_pgm_path(path))
        write_pgm(g, path, 255, clamp);
    else
        write_matrix(g, path);
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeArgs {
    std::string input;
    std::optional<double> lambda, gamma, delta;
    std::vector<double> gamma_vec, delta_vec;
    std::string out_trend, out_fluct, reference;
    std::optional<double> peak;
    double cg_tol = 1e-10;
    bool report = false;
    bool no_clamp = false;
};

SmoothingParams select_params(const DecomposeArgs& a) {
    const bool gv = !a.gamma_vec.empty(), dv = !a.delta_vec.empty();
    if (a.lambda) {
        if (a.gamma || a.delta || gv || dv)
            throw UsageError("--lambda cannot be combined with --gamma/--delta/--gamma-vec/--delta-vec");
        return TdsParams{*a.lambda};
    }
    if (a.gamma && gv) throw UsageError("--gamma and --gamma-vec are mutually exclusive");
    if (a.delta && dv) throw UsageError("--delta and --delta-vec are mutually exclusive");
    const bool has_row = a.gamma || gv, has_col = a.delta || dv;
    if (!has_row && !has_col) throw UsageError("one of --lambda, --gamma/--delta, --gamma-vec/--delta-vec is required");
    if (!has_row || !has_col) throw UsageError("row and column parameters must be given together");
    if (a.gamma && a.delta) return Tds1Params{*a.gamma, *a.delta};
    if (gv && dv) return Tds2Params{a.gamma_vec, a.delta_vec};
    if (a.gamma) return Tds3RowScalarParams{*a.gamma, a.delta_vec};
    return Tds3ColScalarParams{a.gamma_vec, *a.delta};
}

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
    const SmoothingParams params = select_params(a);
    const Grid z = read_grid(a.input);
    const Decomposition d = solve(z, params, CgOptions{a.cg_tol, 0});
    if (!a.out_trend.empty()) write_output(d.trend, a.out_trend, !a.no_clamp);
    if (!a.out_fluct.empty()) write_output(d.fluctuation, a.out_fluct, !a.no_clamp);

    if (a.report) {
        const FluctuationStats fs = fluctuation_std(d.fluctuation);
        out << std::setprecision(10);
        out << "variant: " << variant_name(params) << '\n'
            << "shape: " << shape_string(z) << '\n'
            << "method: " << method_name(d.diagnostics.method) << '\n'
            << "iterations: " << d.diagnostics.iterations << '\n'
            << "residual: " << d.diagnostics.residual << '\n'
            << "loss: " << loss(z, d.trend, params) << '\n'
            << "fluctuation_mean: " << fs.mean << '\n'
            << "fluctuation_std: " << fs.std << '\n';
        if (!a.reference.empty()) {
            const Grid ref = read_grid(a.reference);
            const double peak = a.peak.value_or(ref.max_value() - ref.min_value());
            const MetricReport r = evaluate(ref, d.trend, peak > 0.0 ? peak : 1.0);
            out << "mse: " << r.mse << '\n'
                << "psnr: " << r.psnr << '\n'
                << "ssim: " << r.ssim << '\n'
                << "peak: " << r.peak << '\n';
        }
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// sharpen
// ---------------------------------------------------------------------------

int cmd_sharpen(const std::string& input, double lambda, const std::string& out_path, bool no_clamp) {
    const Grid g = read_grid(input);
    const Grid z = forward_apply(g, TdsParams{lambda});
    write_output(z, out_path, !no_clamp);
    return kOk;
}

// ---------------------------------------------------------------------------
// tune
// ---------------------------------------------------------------------------

struct TuneArgs {
    std::string input, reference, metric = "fluct-std", trace;
    double target = 1.0, eps = 0.02, step = 5.0, max_lambda = 2000.0, initial = 0.0;
    std::optional<double> peak;
    bool assume_monotone = false;
};

int cmd_tune(const TuneArgs& a, std::ostream& out) {
    TuneConfig cfg;
    cfg.metric = parse_metric(a.metric);
    cfg.target = a.target;
    cfg.epsilon = a.eps;
    cfg.step = a.step;
    cfg.max_lambda = a.max_lambda;
    cfg.initial_lambda = a.initial;
    cfg.assume_monotone = a.assume_monotone;
    const Grid z = read_grid(a.input);
    std::optional<Grid> ref;
    if (!a.reference.empty()) ref = read_grid(a.reference);
    if (a.peak)
        cfg.peak = *a.peak;
    else if (ref && ref->max_value() > ref->min_value())
        cfg.peak = ref->max_value() - ref->min_value();

    const TuneResult r = tune_lambda(z, ref, cfg);
    const bool ok = r.status == TuneStatus::Converged;
    out << std::setprecision(10) << "lambda: " << r.lambda << '\n'
        << "alpha: " << r.alpha << '\n'
        << "status: " << (ok ? "converged" : "exhausted") << '\n'
        << "steps: " << r.trace.size() << '\n';
    if (!ok) out << "cannot find a trend/fluctuation split meeting the target below max lambda\n";
    if (!a.trace.empty()) {
        std::ofstream f(a.trace);
        if (!f) throw Error("cannot open " + a.trace + " for writing");
        f << "lambda,alpha\n" << std::setprecision(17);
        for (const TracePoint& p : r.trace) f << p.lambda << ',' << p.alpha << '\n';
    }
    return ok ? kOk : kTuneExhausted;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string suite = "synthetic", out, image;
    std::size_t seeds = 10, threads = 0;
    std::uint64_t seed = 1;
    bool no_timing = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    BenchOptions opt;
    opt.seeds = a.seeds;
    opt.base_seed = a.seed;
    opt.threads = a.threads;
    opt.timing = !a.no_timing;
    if (a.suite == "synthetic") {
        opt.suite = BenchSuite::Synthetic;
    } else {
        opt.suite = BenchSuite::Image;
        const fs::path img = a.image.empty() ? fs::path(TDS_DATA_DIR) / "scene.pgm" : fs::path(a.image);
        opt.image = read_grid(img);
    }
    const auto rows = run_bench(opt);

    std::ostringstream csv;
    write_bench_csv(csv, rows);
    if (a.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + a.out + " for writing");
        f << csv.str();
    }
    std::size_t failed = 0;
    for (const BenchRow& r : rows)
        if (r.failed()) {
            ++failed;
            err << "row " << r.filter << ' ' << r.params << ' ' << r.noise << " failed: " << r.error << '\n';
        }
    out << "seed: " << a.seed << "\nrows: " << rows.size() << "\nfailed: " << failed << '\n';
    return failed ? kNumerical : kOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string noise = "none", out, clean_out, kind = "surface";
    double sigma = 1.0, shape = 2.0, scale = 1.0, density = 0.05, poisson_scale = 255.0;
    std::optional<double> low, high;
    std::uint64_t seed = 1;
    std::size_t rows = 256, cols = 256;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const Grid clean = a.kind == "image" ? test_image(a.rows, a.cols) : canonical_surface();
    Grid noisy = clean;
    if (a.noise != "none") {
        NoiseSpec spec;
        if (a.noise == "awgn") spec = NoiseSpec::awgn(a.sigma, a.seed);
        else if (a.noise == "mwgn") spec = NoiseSpec::mwgn(a.sigma, a.seed);
        else if (a.noise == "cn") spec = NoiseSpec::complex(a.shape, a.scale, a.seed);
        else if (a.noise == "spn") spec = NoiseSpec::salt_pepper(a.density, a.seed, a.low, a.high);
        else if (a.noise == "poisson") spec = NoiseSpec::poisson(a.poisson_scale, a.seed);
        else throw UsageError("unknown noise '" + a.noise + "'");
        noisy = apply_noise(clean, spec);
    }
    write_output(noisy, a.out, true);
    if (!a.clean_out.empty()) write_output(clean, a.clean_out, true);
    out << "seed: " << a.seed << '\n' << "shape: " << shape_string(noisy) << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-dimensional trend/fluctuation smoothing"};
    app.require_subcommand(1);

    DecomposeArgs dec;
    auto* decompose = app.add_subcommand("decompose", "split a grid into trend and fluctuation");
    decompose->add_option("input", dec.input, "matrix file or PGM")->required();
    decompose->add_option("--lambda", dec.lambda, "global smoothing parameter (TDS)");
    decompose->add_option("--gamma", dec.gamma, "row smoothing parameter");
    decompose->add_option("--delta", dec.delta, "column smoothing parameter");
    decompose->add_option("--gamma-vec", dec.gamma_vec, "per-row parameters, comma separated")->delimiter(',');
    decompose->add_option("--delta-vec", dec.delta_vec, "per-column parameters, comma separated")->delimiter(',');
    decompose->add_option("--out-trend", dec.out_trend, "trend output (.pgm or matrix)");
    decompose->add_option("--out-fluct", dec.out_fluct, "fluctuation output (.pgm or matrix)");
    decompose->add_option("--reference", dec.reference, "clean grid for the report metrics");
    decompose->add_option("--peak", dec.peak, "PSNR/SSIM peak (default: reference range)");
    decompose->add_option("--cg-tol", dec.cg_tol, "relative residual for the iterative variants");
    decompose->add_flag("--report", dec.report, "print residual, loss and fluctuation statistics");
    decompose->add_flag("--no-clamp", dec.no_clamp, "fail instead of clamping PGM output");

    std::string sh_in, sh_out;
    double sh_lambda = 0.0;
    bool sh_no_clamp = false;
    auto* sharpen = app.add_subcommand("sharpen", "apply the forward operator G + lambda(GT + HG)");
    sharpen->add_option("input", sh_in, "matrix file or PGM")->required();
    sharpen->add_option("--lambda", sh_lambda, "smoothing parameter")->required();
    sharpen->add_option("--out", sh_out, "output (.pgm or matrix)")->required();
    sharpen->add_flag("--no-clamp", sh_no_clamp, "fail instead of clamping PGM output");

    TuneArgs tn;
    auto* tune = app.add_subcommand("tune", "search the global smoothing parameter");
    tune->add_option("input", tn.input, "matrix file or PGM")->required();
    tune->add_option("--metric", tn.metric, "mse | psnr | ssim | fluct-std");
    tune->add_option("--target", tn.target, "target metric value");
    tune->add_option("--eps", tn.eps, "accepted distance from the target");
    tune->add_option("--step", tn.step, "lambda increment");
    tune->add_option("--max-lambda", tn.max_lambda, "upper limit for lambda");
    tune->add_option("--initial", tn.initial, "starting lambda");
    tune->add_option("--reference", tn.reference, "clean grid (mse, psnr, ssim)");
    tune->add_option("--peak", tn.peak, "PSNR/SSIM peak (default: reference range)");
    tune->add_option("--trace", tn.trace, "write visited (lambda, alpha) pairs as CSV");
    tune->add_flag("--assume-monotone", tn.assume_monotone, "bisect instead of scanning");

    BenchArgs bn;
    auto* bench = app.add_subcommand("bench", "filter comparison tables");
    bench->add_option("--suite", bn.suite, "synthetic | image")
        ->check(CLI::IsMember({"synthetic", "image"}));
    bench->add_option("--seeds", bn.seeds, "noise realizations per cell")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bn.seed, "first seed");
    bench->add_option("--threads", bn.threads, "worker threads (default: TDS_THREADS or all cores)");
    bench->add_option("--image", bn.image, "clean PGM for the image suite");
    bench->add_option("--out", bn.out, "CSV output (default: stdout)");
    bench->add_flag("--no-timing", bn.no_timing, "write 0 in the seconds column");

    SynthArgs sy;
    auto* synth = app.add_subcommand("synth", "write the test surface or test image, optionally noisy");
    synth->add_option("--kind", sy.kind, "surface | image")->check(CLI::IsMember({"surface", "image"}));
    synth->add_option("--noise", sy.noise, "none | awgn | mwgn | cn | spn | poisson");
    synth->add_option("--sigma", sy.sigma);
    synth->add_option("--shape", sy.shape);
    synth->add_option("--scale", sy.scale);
    synth->add_option("--density", sy.density);
    synth->add_option("--low", sy.low);
    synth->add_option("--high", sy.high);
    synth->add_option("--poisson-scale", sy.poisson_scale);
    synth->add_option("--seed", sy.seed);
    synth->add_option("--rows", sy.rows);
    synth->add_option("--cols", sy.cols);
    synth->add_option("--out", sy.out, "noisy output (.pgm or matrix)")->required();
    synth->add_option("--clean-out", sy.clean_out, "clean reference output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*decompose) return cmd_decompose(dec, out);
        if (*sharpen) return cmd_sharpen(sh_in, sh_lambda, sh_out, sh_no_clamp);
        if (*tune) return cmd_tune(tn, out);
        if (*bench) return cmd_bench(bn, out, err);
        if (*synth) return cmd_synth(sy, out);
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const SizeError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace tds::cli
