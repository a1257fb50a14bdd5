#include "tds/solver.hpp"

#include "eigen_bridge.hpp"
#include "tds/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tds {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_finite_input(const Grid& z) {
    // Grid already rejects non-finite values; an empty grid is the only other hole
    if (z.empty()) throw DataError("input grid is empty");
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

/// Attainable relative residual of a direct solve: rounding in the solve is
/// amplified by ||L|| <= 1 + 16 (max gamma + max delta) when the residual is formed.
double direct_tolerance(const PenaltyWeights& w) {
    const double op_norm = 1.0 + 16.0 * (max_of(w.row) + max_of(w.col));
    return std::max(kSpectralTolerance, 1e-14 * op_norm);
}

/// out = v + diag(row) v T + H v diag(col), v row-major m x n.
void apply_operator(const PenaltyMatrix& t, const PenaltyMatrix& h, const PenaltyWeights& w,
                    std::size_t m, std::size_t n, std::span<const double> v, std::span<double> out,
                    std::vector<double>& scratch_col, std::vector<double>& scratch_out) {
    // rows: (v T)_i = T v_i since T is symmetric
    for (std::size_t i = 0; i < m; ++i) {
        auto row_in = v.subspan(i * n, n);
        auto row_out = out.subspan(i * n, n);
        t.apply(row_in, row_out);
        for (std::size_t j = 0; j < n; ++j) row_out[j] = v[i * n + j] + w.row[i] * row_out[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) scratch_col[i] = v[i * n + j];
        h.apply(scratch_col, scratch_out);
        for (std::size_t i = 0; i < m; ++i) out[i * n + j] += w.col[j] * scratch_out[i];
    }
}

struct StencilOperator {
    PenaltyMatrix t;
    PenaltyMatrix h;
    PenaltyWeights w;
    std::size_t m;
    std::size_t n;
    mutable std::vector<double> scratch_col;
    mutable std::vector<double> scratch_out;

    StencilOperator(std::size_t rows, std::size_t cols, PenaltyWeights weights)
        : t(cols), h(rows), w(std::move(weights)), m(rows), n(cols), scratch_col(rows), scratch_out(rows) {}

    void operator()(std::span<const double> v, std::span<double> out) const {
        apply_operator(t, h, w, m, n, v, out, scratch_col, scratch_out);
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(m * n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = 1.0 + w.row[i] * t(j, j) + w.col[j] * h(i, i);
        return d;
    }
};

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Decomposition finish(const Grid& z, Grid trend, SmoothingParams params, SolveDiagnostics diag) {
    Grid fluct = z - trend;
    return Decomposition{std::move(trend), std::move(fluct), std::move(params), diag};
}

double relative_residual(const Grid& z, const Grid& g, const SmoothingParams& params) {
    const double zn = z.frobenius_norm();
    const double r = (forward_apply(g, params) - z).frobenius_norm();
    return zn > 0.0 ? r / zn : r;
}

void check_direct_residual(const SolveDiagnostics& d, const char* path) {
    if (!(d.residual <= d.tolerance)) {
        std::ostringstream os;
        os << path << " solve residual " << d.residual << " exceeds tolerance " << d.tolerance;
        throw NumericalError(os.str(), d.residual, 0);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Spectral path
// ---------------------------------------------------------------------------

SpectralCache::SpectralCache(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols),
      t_(spectrum(build_penalty(cols >= 3 ? cols : 3))),
      h_(spectrum(build_penalty(rows >= 3 ? rows : 3))) {
    if (rows < 3 || cols < 3) {
        std::ostringstream os;
        os << "smoothing needs at least a 3x3 grid, got " << rows << "x" << cols;
        throw DimensionError(os.str());
    }
}

Eigen::MatrixXd SpectralCache::denominators(const SmoothingParams& params) const {
    if (!std::holds_alternative<TdsParams>(params) && !std::holds_alternative<Tds1Params>(params)) {
        throw ConfigError("spectral path supports only tds and tds1 parameters, got " +
                          variant_name(params));
    }
    const PenaltyWeights w = expand_weights(params, rows_, cols_);
    const double gamma = w.row.front();
    const double delta = w.col.front();
    const auto m = static_cast<Eigen::Index>(rows_);
    const auto n = static_cast<Eigen::Index>(cols_);
    Eigen::MatrixXd d(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            d(i, j) = 1.0 + gamma * t_.eigenvalues(j) + delta * h_.eigenvalues(i);
    return d;
}

Decomposition SpectralCache::solve(const Grid& z, const SmoothingParams& params) const {
    const auto start = Clock::now();
    require_finite_input(z);
    if (z.rows() != rows_ || z.cols() != cols_) {
        std::ostringstream os;
        os << "spectral cache built for " << rows_ << "x" << cols_ << " cannot solve "
           << shape_string(z);
        throw DimensionError(os.str());
    }
    const Eigen::MatrixXd denom = denominators(params);
    const PenaltyWeights w = expand_weights(params, rows_, cols_);

    Grid trend;
    if (w.row.front() == 0.0 && w.col.front() == 0.0) {
        trend = z;  // lambda = 0 is the identity
    } else {
        const Eigen::MatrixXd& v = h_.eigenvectors;  // m x m
        const Eigen::MatrixXd& u = t_.eigenvectors;  // n x n
        Eigen::MatrixXd zt = v.transpose() * detail::to_matrix(z) * u;
        zt.array() /= denom.array();
        trend = detail::to_grid(v * zt * u.transpose());
    }

    SolveDiagnostics diag;
    diag.method = SolveMethod::Spectral;
    diag.residual = relative_residual(z, trend, params);
    diag.tolerance = direct_tolerance(w);
    diag.seconds = seconds_since(start);
    check_direct_residual(diag, "spectral");
    return finish(z, std::move(trend), params, diag);
}

Decomposition solve_tds(const Grid& z, double lambda) {
    require_smoothable(z);
    expand_weights(TdsParams{lambda}, z.rows(), z.cols());
    return SpectralCache(z.rows(), z.cols()).solve(z, TdsParams{lambda});
}

Decomposition solve_tds1(const Grid& z, double gamma, double delta) {
    require_smoothable(z);
    expand_weights(Tds1Params{gamma, delta}, z.rows(), z.cols());
    return SpectralCache(z.rows(), z.cols()).solve(z, Tds1Params{gamma, delta});
}

// ---------------------------------------------------------------------------
// Conjugate gradients
// ---------------------------------------------------------------------------

namespace {

Decomposition solve_cg(const Grid& z, const SmoothingParams& params, const CgOptions& options) {
    const auto start = Clock::now();
    require_smoothable(z);
    require_finite_input(z);
    if (!std::isfinite(options.tolerance) || !(options.tolerance > 0.0)) {
        throw ParameterError("CG tolerance must be finite and > 0");
    }
    if (options.max_iterations < 0) throw ParameterError("CG max_iterations must be >= 0");

    const std::size_t m = z.rows();
    const std::size_t n = z.cols();
    const std::size_t len = m * n;
    const StencilOperator op(m, n, expand_weights(params, m, n));
    const long max_iter = options.max_iterations > 0
                              ? options.max_iterations
                              : static_cast<long>(10.0 * std::sqrt(static_cast<double>(len))) + 200;

    const auto b = z.values();
    const double bnorm = norm2(b);
    std::vector<double> x(b.begin(), b.end());  // G = Z is a good start: the penalty is small on smooth data
    std::vector<double> r(len), zr(len), p(len), ap(len);
    const std::vector<double> inv_diag = [&] {
        auto d = op.diagonal();
        for (double& v : d) v = 1.0 / v;
        return d;
    }();

    auto true_residual = [&] {
        op(x, ap);
        for (std::size_t k = 0; k < len; ++k) r[k] = b[k] - ap[k];
        return norm2(r);
    };

    SolveDiagnostics diag;
    diag.method = SolveMethod::ConjugateGradient;
    diag.tolerance = options.tolerance;

    if (bnorm == 0.0) {
        diag.seconds = seconds_since(start);
        return finish(z, Grid(m, n), params, diag);
    }

    const double target = options.tolerance * bnorm;
    double rnorm = true_residual();
    double best = rnorm;
    std::vector<double> best_x = x;
    long it = 0;

    // outer loop restarts from the true residual when the recurrence drifts
    while (rnorm > target && it < max_iter) {
        for (std::size_t k = 0; k < len; ++k) zr[k] = inv_diag[k] * r[k];
        p = zr;
        double rz = dot(r, zr);
        while (it < max_iter) {
            op(p, ap);
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) {
                throw NumericalError("CG breakdown: operator not positive definite along search direction",
                                     best / bnorm, it);
            }
            const double alpha = rz / pap;
            for (std::size_t k = 0; k < len; ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            ++it;
            const double rec = norm2(r);
            if (rec <= target) break;
            for (std::size_t k = 0; k < len; ++k) zr[k] = inv_diag[k] * r[k];
            const double rz_next = dot(r, zr);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t k = 0; k < len; ++k) p[k] = zr[k] + beta * p[k];
        }
        const double prev = rnorm;
        rnorm = true_residual();
        if (rnorm < best) {
            best = rnorm;
            best_x = x;
        }
        // a restart that makes no progress will not converge
        if (rnorm > target && rnorm >= 0.5 * prev) break;
    }

    if (best > target) {
        std::ostringstream os;
        os << "CG did not converge in " << it << " iterations: relative residual " << best / bnorm
           << " > tolerance " << options.tolerance;
        throw NumericalError(os.str(), best / bnorm, it);
    }

    diag.iterations = it;
    Grid trend(m, n, std::move(best_x));
    diag.residual = relative_residual(z, trend, params);
    diag.seconds = seconds_since(start);
    return finish(z, std::move(trend), params, diag);
}

}  // namespace

Decomposition solve_tds2(const Grid& z, const std::vector<double>& gamma,
                         const std::vector<double>& delta, const CgOptions& options) {
    return solve_cg(z, Tds2Params{gamma, delta}, options);
}

Decomposition solve_tds3(const Grid& z, ScalarAxis axis, double scalar,
                         const std::vector<double>& vector, const CgOptions& options) {
    if (axis == ScalarAxis::Row) return solve_cg(z, Tds3RowScalarParams{scalar, vector}, options);
    return solve_cg(z, Tds3ColScalarParams{vector, scalar}, options);
}

Decomposition solve(const Grid& z, const SmoothingParams& params, const CgOptions& options) {
    require_smoothable(z);
    if (std::holds_alternative<TdsParams>(params) || std::holds_alternative<Tds1Params>(params)) {
        expand_weights(params, z.rows(), z.cols());
        return SpectralCache(z.rows(), z.cols()).solve(z, params);
    }
    return solve_cg(z, params, options);
}

// ---------------------------------------------------------------------------
// Dense Kronecker oracle
// ---------------------------------------------------------------------------

Eigen::MatrixXd kronecker_system(std::size_t rows, std::size_t cols, const SmoothingParams& params) {
    if (rows < 3 || cols < 3) {
        std::ostringstream os;
        os << "smoothing needs at least a 3x3 grid, got " << rows << "x" << cols;
        throw DimensionError(os.str());
    }
    if (rows * cols > kMaxKroneckerSize) {
        std::ostringstream os;
        os << "dense Kronecker system of " << rows << "x" << cols << " exceeds the oracle cap of "
           << kMaxKroneckerSize << " unknowns";
        throw SizeError(os.str());
    }
    const PenaltyWeights w = expand_weights(params, rows, cols);
    const Eigen::MatrixXd t = build_penalty(cols).dense();
    const Eigen::MatrixXd h = build_penalty(rows).dense();
    const auto m = static_cast<Eigen::Index>(rows);
    const auto n = static_cast<Eigen::Index>(cols);
    const Eigen::VectorXd gamma = Eigen::Map<const Eigen::VectorXd>(w.row.data(), m);
    const Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(w.col.data(), n);

    // vec index of G(i,j) is j*m + i
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m * n, m * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) {
            // T (x) diag(gamma): block (j,l) = T(j,l) * diag(gamma)
            if (t(j, l) != 0.0)
                for (Eigen::Index i = 0; i < m; ++i) a(j * m + i, l * m + i) += t(j, l) * gamma(i);
        }
    // diag(delta) (x) H: block (j,j) = delta_j * H
    for (Eigen::Index j = 0; j < n; ++j) a.block(j * m, j * m, m, m) += delta(j) * h;
    return a;
}

Decomposition solve_dense_kronecker(const Grid& z, const SmoothingParams& params) {
    const auto start = Clock::now();
    require_smoothable(z);
    require_finite_input(z);
    const Eigen::MatrixXd a = kronecker_system(z.rows(), z.cols(), params);
    const auto m = static_cast<Eigen::Index>(z.rows());
    const auto n = static_cast<Eigen::Index>(z.cols());

    Eigen::VectorXd rhs(m * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) rhs(j * m + i) = z(i, j);

    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("dense Kronecker system is not positive definite");
    }
    const Eigen::VectorXd x = llt.solve(rhs);
    Grid trend = Grid::from_function(z.rows(), z.cols(), [&](std::size_t i, std::size_t j) {
        return x(static_cast<Eigen::Index>(j) * m + static_cast<Eigen::Index>(i));
    });

    SolveDiagnostics diag;
    diag.method = SolveMethod::DenseKronecker;
    diag.residual = relative_residual(z, trend, params);
    diag.tolerance = direct_tolerance(expand_weights(params, z.rows(), z.cols()));
    diag.seconds = seconds_since(start);
    return finish(z, std::move(trend), params, diag);
}

// ---------------------------------------------------------------------------
// Forward operator and Sylvester form
// ---------------------------------------------------------------------------

Grid forward_apply(const Grid& g, const SmoothingParams& params) {
    require_smoothable(g);
    const StencilOperator op(g.rows(), g.cols(), expand_weights(params, g.rows(), g.cols()));
    std::vector<double> out(g.size());
    op(g.values(), out);
    return Grid(g.rows(), g.cols(), std::move(out));
}

double sylvester_residual(const Grid& g, const Grid& z, const SmoothingParams& params) {
    require_same_shape(g, z, "sylvester_residual");
    require_smoothable(g);
    const PenaltyWeights w = expand_weights(params, g.rows(), g.cols());
    const auto m = static_cast<Eigen::Index>(g.rows());
    const auto n = static_cast<Eigen::Index>(g.cols());
    const Eigen::MatrixXd gm = detail::to_matrix(g);
    const Eigen::MatrixXd t = build_penalty(g.cols()).dense();
    const Eigen::MatrixXd h = build_penalty(g.rows()).dense();
    const Eigen::VectorXd gamma = Eigen::Map<const Eigen::VectorXd>(w.row.data(), m);
    const Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(w.col.data(), n);

    // G A with A = I/2 + gamma T (row-scaled when gamma varies per row)
    const Eigen::MatrixXd ga = 0.5 * gm + gamma.asDiagonal() * (gm * t);
    // B G with B = I/2 + delta H (column-scaled when delta varies per column)
    const Eigen::MatrixXd bg = 0.5 * gm + (h * gm) * delta.asDiagonal();
    return (ga + bg - detail::to_matrix(z)).norm();
}

}  // namespace tds
