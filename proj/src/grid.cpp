#include "tds/grid.hpp"

#include "tds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tds {

namespace {

void check_finite(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            std::ostringstream os;
            os << "non-finite value at flat index " << k;
            throw DataError(os.str());
        }
    }
}

void check_positive_vector(const std::vector<double>& v, std::size_t expected, const char* name,
                           const char* axis) {
    if (v.size() != expected) {
        std::ostringstream os;
        os << name << " has length " << v.size() << " but the grid has " << expected << ' ' << axis;
        throw DimensionError(os.str());
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k]) || !(v[k] > 0.0)) {
            std::ostringstream os;
            os << name << "[" << k << "] = " << v[k] << " must be finite and > 0";
            throw ParameterError(os.str());
        }
    }
}

void check_positive_scalar(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        std::ostringstream os;
        os << name << " = " << v << " must be finite and > 0";
        throw ParameterError(os.str());
    }
}

}  // namespace

Grid::Grid(std::size_t rows, std::size_t cols) : Grid(rows, cols, 0.0) {}

Grid::Grid(std::size_t rows, std::size_t cols, double fill)
    : Grid(rows, cols, std::vector<double>(rows * cols, fill)) {}

Grid::Grid(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("grid must have at least one row and one column");
    }
    if (data_.size() != rows * cols) {
        std::ostringstream os;
        os << "grid " << rows << "x" << cols << " needs " << rows * cols << " values, got "
           << data_.size();
        throw DimensionError(os.str());
    }
    check_finite(data_);
}

Grid Grid::from_function(std::size_t rows, std::size_t cols,
                         const std::function<double(std::size_t, std::size_t)>& fn) {
    std::vector<double> v(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) v[i * cols + j] = fn(i, j);
    return Grid(rows, cols, std::move(v));
}

double Grid::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
        std::ostringstream os;
        os << "index (" << i << "," << j << ") outside " << shape_string(*this);
        throw DimensionError(os.str());
    }
    return (*this)(i, j);
}

Grid Grid::transposed() const {
    std::vector<double> v(data_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) v[j * rows_ + i] = data_[i * cols_ + j];
    return Grid(cols_, rows_, std::move(v));
}

double Grid::frobenius_norm() const noexcept {
    // scaled accumulation keeps huge/small grids from overflowing
    double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : data_) {
        const double r = x / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

double Grid::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Grid::min_value() const {
    if (data_.empty()) throw DimensionError("min of empty grid");
    return *std::min_element(data_.begin(), data_.end());
}

double Grid::max_value() const {
    if (data_.empty()) throw DimensionError("max of empty grid");
    return *std::max_element(data_.begin(), data_.end());
}

Grid operator+(const Grid& a, const Grid& b) {
    require_same_shape(a, b, "grid addition");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.data_[k] + b.data_[k];
    return Grid(a.rows_, a.cols_, std::move(v));
}

Grid operator-(const Grid& a, const Grid& b) {
    require_same_shape(a, b, "grid subtraction");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.data_[k] - b.data_[k];
    return Grid(a.rows_, a.cols_, std::move(v));
}

Grid operator*(double s, const Grid& a) {
    std::vector<double> v(a.data_);
    for (double& x : v) x *= s;
    return Grid(a.rows_, a.cols_, std::move(v));
}

Grid Grid::shifted(double offset) const {
    std::vector<double> v(data_);
    for (double& x : v) x += offset;
    return Grid(rows_, cols_, std::move(v));
}

double relative_difference(const Grid& a, const Grid& b) {
    require_same_shape(a, b, "relative_difference");
    const double denom = std::max(b.frobenius_norm(), std::numeric_limits<double>::min());
    return (a - b).frobenius_norm() / denom;
}

std::string shape_string(const Grid& g) {
    std::ostringstream os;
    os << g.rows() << "x" << g.cols();
    return os.str();
}

void require_smoothable(const Grid& g) {
    if (g.rows() < 3 || g.cols() < 3) {
        throw DimensionError("smoothing needs at least a 3x3 grid, got " + shape_string(g));
    }
}

void require_same_shape(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch " + shape_string(a) + " vs " +
                             shape_string(b));
    }
}

std::string variant_name(const SmoothingParams& p) {
    static constexpr const char* names[] = {"tds", "tds1", "tds2", "tds3-row-scalar",
                                            "tds3-col-scalar"};
    return names[p.index()];
}

PenaltyWeights expand_weights(const SmoothingParams& params, std::size_t rows, std::size_t cols) {
    PenaltyWeights w;
    struct Visitor {
        PenaltyWeights& w;
        std::size_t rows, cols;

        void operator()(const TdsParams& p) const {
            if (!std::isfinite(p.lambda) || p.lambda < 0.0) {
                std::ostringstream os;
                os << "lambda = " << p.lambda << " must be finite and >= 0";
                throw ParameterError(os.str());
            }
            w.row.assign(rows, p.lambda);
            w.col.assign(cols, p.lambda);
        }
        void operator()(const Tds1Params& p) const {
            check_positive_scalar(p.gamma, "gamma");
            check_positive_scalar(p.delta, "delta");
            w.row.assign(rows, p.gamma);
            w.col.assign(cols, p.delta);
        }
        void operator()(const Tds2Params& p) const {
            check_positive_vector(p.gamma, rows, "gamma", "rows");
            check_positive_vector(p.delta, cols, "delta", "columns");
            w.row = p.gamma;
            w.col = p.delta;
        }
        void operator()(const Tds3RowScalarParams& p) const {
            check_positive_scalar(p.gamma, "gamma");
            check_positive_vector(p.delta, cols, "delta", "columns");
            w.row.assign(rows, p.gamma);
            w.col = p.delta;
        }
        void operator()(const Tds3ColScalarParams& p) const {
            check_positive_vector(p.gamma, rows, "gamma", "rows");
            check_positive_scalar(p.delta, "delta");
            w.row = p.gamma;
            w.col.assign(cols, p.delta);
        }
    };
    std::visit(Visitor{w, rows, cols}, params);
    return w;
}

SmoothingParams transpose_params(const SmoothingParams& params) {
    struct Visitor {
        SmoothingParams operator()(const TdsParams& p) const { return p; }
        SmoothingParams operator()(const Tds1Params& p) const { return Tds1Params{p.delta, p.gamma}; }
        SmoothingParams operator()(const Tds2Params& p) const { return Tds2Params{p.delta, p.gamma}; }
        SmoothingParams operator()(const Tds3RowScalarParams& p) const {
            return Tds3ColScalarParams{p.delta, p.gamma};
        }
        SmoothingParams operator()(const Tds3ColScalarParams& p) const {
            return Tds3RowScalarParams{p.delta, p.gamma};
        }
    };
    return std::visit(Visitor{}, params);
}

std::string method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::Spectral: return "spectral";
        case SolveMethod::ConjugateGradient: return "cg";
        case SolveMethod::DenseKronecker: return "dense-kronecker";
    }
    return "unknown";
}

double second_diff_row(const Grid& g, std::size_t i, std::size_t j) {
    if (i >= g.rows() || j >= g.cols() || j < 2) {
        std::ostringstream os;
        os << "second_diff_row needs 0 <= i < " << g.rows() << " and 2 <= j < " << g.cols()
           << ", got (" << i << "," << j << ")";
        throw DimensionError(os.str());
    }
    return g(i, j) - 2.0 * g(i, j - 1) + g(i, j - 2);
}

double second_diff_col(const Grid& g, std::size_t i, std::size_t j) {
    if (i >= g.rows() || j >= g.cols() || i < 2) {
        std::ostringstream os;
        os << "second_diff_col needs 2 <= i < " << g.rows() << " and 0 <= j < " << g.cols()
           << ", got (" << i << "," << j << ")";
        throw DimensionError(os.str());
    }
    return g(i, j) - 2.0 * g(i - 1, j) + g(i - 2, j);
}

std::vector<double> row_roughness(const Grid& g) {
    std::vector<double> p(g.rows(), 0.0);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 2; j < g.cols(); ++j) {
            const double d = g(i, j) - 2.0 * g(i, j - 1) + g(i, j - 2);
            p[i] += d * d;
        }
    return p;
}

std::vector<double> col_roughness(const Grid& g) {
    std::vector<double> q(g.cols(), 0.0);
    for (std::size_t i = 2; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double d = g(i, j) - 2.0 * g(i - 1, j) + g(i - 2, j);
            q[j] += d * d;
        }
    return q;
}

double roughness(const Grid& g) {
    double s = 0.0;
    for (double p : row_roughness(g)) s += p;
    for (double q : col_roughness(g)) s += q;
    return s;
}

double loss(const Grid& z, const Grid& g, const SmoothingParams& params) {
    require_same_shape(z, g, "loss");
    require_smoothable(z);
    const PenaltyWeights w = expand_weights(params, z.rows(), z.cols());

    double fit = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double r = z.values()[k] - g.values()[k];
        fit += r * r;
    }
    const auto p = row_roughness(g);
    const auto q = col_roughness(g);
    double penalty = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) penalty += w.row[i] * p[i];
    for (std::size_t j = 0; j < q.size(); ++j) penalty += w.col[j] * q[j];
    return fit + penalty;
}

Grid loss_gradient(const Grid& z, const Grid& g, const SmoothingParams& params) {
    require_same_shape(z, g, "loss_gradient");
    require_smoothable(z);
    const PenaltyWeights w = expand_weights(params, z.rows(), z.cols());
    const std::size_t m = z.rows();
    const std::size_t n = z.cols();

    std::vector<double> grad(m * n);
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = 2.0 * (g.values()[k] - z.values()[k]);

    // adjoint of the (1, -2, 1) stencil scatters each difference back to its three taps
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 2; j < n; ++j) {
            const double d = 2.0 * w.row[i] * (g(i, j) - 2.0 * g(i, j - 1) + g(i, j - 2));
            grad[i * n + j] += d;
            grad[i * n + j - 1] -= 2.0 * d;
            grad[i * n + j - 2] += d;
        }
    for (std::size_t i = 2; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = 2.0 * w.col[j] * (g(i, j) - 2.0 * g(i - 1, j) + g(i - 2, j));
            grad[i * n + j] += d;
            grad[(i - 1) * n + j] -= 2.0 * d;
            grad[(i - 2) * n + j] += d;
        }
    return Grid(m, n, std::move(grad));
}

}  // namespace tds
