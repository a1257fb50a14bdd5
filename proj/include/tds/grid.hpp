#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tds {

/// Dense rows x cols matrix of finite doubles, row-major, 0-based indices.
///
/// Holds the observed data Z, the trend G, the fluctuation C, and grayscale
/// images. Non-finite values are rejected at construction.
class Grid {
public:
    Grid() = default;

    /// Zero-filled grid.
    Grid(std::size_t rows, std::size_t cols);

    /// Takes ownership of `values` (row-major, rows*cols entries).
    Grid(std::size_t rows, std::size_t cols, std::vector<double> values);

    Grid(std::size_t rows, std::size_t cols, double fill);

    static Grid from_function(std::size_t rows, std::size_t cols,
                              const std::function<double(std::size_t, std::size_t)>& fn);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    /// Bounds-checked access; throws DimensionError.
    double at(std::size_t i, std::size_t j) const;

    std::span<const double> values() const noexcept { return data_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    Grid transposed() const;

    double frobenius_norm() const noexcept;
    double max_abs() const noexcept;
    double min_value() const;
    double max_value() const;

    bool same_shape(const Grid& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

    friend Grid operator+(const Grid& a, const Grid& b);
    friend Grid operator-(const Grid& a, const Grid& b);
    friend Grid operator*(double s, const Grid& a);
    Grid shifted(double offset) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// ||a - b||_F / max(||b||_F, tiny). Shapes must agree.
double relative_difference(const Grid& a, const Grid& b);

std::string shape_string(const Grid& g);

/// Throws DimensionError unless the grid is at least 3x3.
void require_smoothable(const Grid& g);

/// Throws DimensionError unless both grids share a shape.
void require_same_shape(const Grid& a, const Grid& b, const char* what);

// ---------------------------------------------------------------------------
// Smoothing parameters
// ---------------------------------------------------------------------------

/// One global parameter for both axes; lambda = 0 is the identity.
struct TdsParams {
    double lambda = 0.0;
};

/// Separate global weights along rows (gamma) and along columns (delta).
struct Tds1Params {
    double gamma = 1.0;
    double delta = 1.0;
};

/// Per-row weights (length m) and per-column weights (length n).
struct Tds2Params {
    std::vector<double> gamma;
    std::vector<double> delta;
};

/// Scalar gamma on every row, per-column delta vector:  G + gamma*G*T + H*G*diag(delta) = Z.
struct Tds3RowScalarParams {
    double gamma = 1.0;
    std::vector<double> delta;
};

/// Per-row gamma vector, scalar delta on every column:  G + diag(gamma)*G*T + delta*H*G = Z.
struct Tds3ColScalarParams {
    std::vector<double> gamma;
    double delta = 1.0;
};

using SmoothingParams =
    std::variant<TdsParams, Tds1Params, Tds2Params, Tds3RowScalarParams, Tds3ColScalarParams>;

std::string variant_name(const SmoothingParams& p);

/// Every variant expanded to a weight per row (gamma_i, length m) and per
/// column (delta_j, length n). This is the one place the variants are unified.
struct PenaltyWeights {
    std::vector<double> row;
    std::vector<double> col;
};

/// Validates `params` against a rows x cols target and expands it.
/// Throws ParameterError for invalid values, DimensionError for length mismatch.
PenaltyWeights expand_weights(const SmoothingParams& params, std::size_t rows, std::size_t cols);

/// Swap the row/column roles of a parameter set (for transposed data).
SmoothingParams transpose_params(const SmoothingParams& params);

// ---------------------------------------------------------------------------
// Result bundle
// ---------------------------------------------------------------------------

enum class SolveMethod { Spectral, ConjugateGradient, DenseKronecker };

std::string method_name(SolveMethod m);

struct SolveDiagnostics {
    SolveMethod method = SolveMethod::Spectral;
    double residual = 0.0;    // ||L(G) - Z||_F / ||Z||_F
    double tolerance = 0.0;   // contract the residual was checked against
    long iterations = 0;      // 0 for direct solves
    double seconds = 0.0;
};

/// Z split into a smooth trend G and a fluctuation C = Z - G.
struct Decomposition {
    Grid trend;
    Grid fluctuation;
    SmoothingParams params;
    SolveDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Difference operators, loss, gradient
// ---------------------------------------------------------------------------

/// g(i,j) - 2 g(i,j-1) + g(i,j-2); requires j >= 2.
double second_diff_row(const Grid& g, std::size_t i, std::size_t j);

/// g(i,j) - 2 g(i-1,j) + g(i-2,j); requires i >= 2.
double second_diff_col(const Grid& g, std::size_t i, std::size_t j);

/// Per-row sums of squared second differences along the row (length m).
std::vector<double> row_roughness(const Grid& g);

/// Per-column sums of squared second differences down the column (length n).
std::vector<double> col_roughness(const Grid& g);

/// Unweighted P + Q.
double roughness(const Grid& g);

/// R + sum_i gamma_i P_i + sum_j delta_j Q_j. The objective every solver minimizes.
double loss(const Grid& z, const Grid& g, const SmoothingParams& params);

/// Exact gradient of `loss` with respect to every entry of g.
Grid loss_gradient(const Grid& z, const Grid& g, const SmoothingParams& params);

}  // namespace tds
