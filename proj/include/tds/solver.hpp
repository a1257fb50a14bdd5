#pragma once

#include "tds/grid.hpp"
#include "tds/penalty.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace tds {

/// Largest m*n the dense Kronecker oracle will materialize.
inline constexpr std::size_t kMaxKroneckerSize = 4096;

/// Relative residual contract of the direct spectral path at moderate weights.
inline constexpr double kSpectralTolerance = 1e-10;

/// Conjugate-gradient controls. max_iterations = 0 selects 10*sqrt(mn) + 200.
struct CgOptions {
    double tolerance = 1e-10;
    long max_iterations = 0;
};

/// Eigendecompositions of T (order n) and H (order m) for one grid shape.
///
/// Immutable after construction and safe to share between threads. A
/// parameter sweep builds one cache and pays O(m^2 n + m n^2) per solve
/// instead of redoing the two eigendecompositions.
class SpectralCache {
public:
    /// Throws DimensionError below 3x3, SizeError above kMaxSpectralOrder.
    SpectralCache(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    /// Spectrum of T, which smooths along each row (order = cols).
    const PenaltySpectrum& row_spectrum() const noexcept { return t_; }
    /// Spectrum of H, which smooths down each column (order = rows).
    const PenaltySpectrum& col_spectrum() const noexcept { return h_; }

    /// 1 + gamma*mu_j + delta*rho_i for TDS / TDS-I parameters (rows x cols).
    Eigen::MatrixXd denominators(const SmoothingParams& params) const;

    /// Direct solve for TDS and TDS-I. Other variants throw ConfigError.
    Decomposition solve(const Grid& z, const SmoothingParams& params) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    PenaltySpectrum t_;
    PenaltySpectrum h_;
};

/// G + lambda (G T + H G) = Z by joint diagonalization.
Decomposition solve_tds(const Grid& z, double lambda);

/// G + gamma G T + delta H G = Z by joint diagonalization.
Decomposition solve_tds1(const Grid& z, double gamma, double delta);

/// G + diag(gamma) G T + H G diag(delta) = Z by Jacobi-preconditioned CG.
/// Throws NumericalError (carrying the best residual) if it does not converge.
Decomposition solve_tds2(const Grid& z, const std::vector<double>& gamma,
                         const std::vector<double>& delta, const CgOptions& options = {});

enum class ScalarAxis {
    Row,     ///< scalar gamma on rows, delta vector over columns
    Column,  ///< gamma vector over rows, scalar delta on columns
};

/// TDS-III: one axis carries a scalar, the other a vector; solved as TDS-II.
Decomposition solve_tds3(const Grid& z, ScalarAxis axis, double scalar,
                         const std::vector<double>& vector, const CgOptions& options = {});

/// Routes TDS/TDS-I to the spectral path and TDS-II/III to CG.
Decomposition solve(const Grid& z, const SmoothingParams& params, const CgOptions& options = {});

/// I + T (x) diag(gamma) + diag(delta) (x) H acting on column-stacked vec(G).
/// Throws SizeError above kMaxKroneckerSize.
Eigen::MatrixXd kronecker_system(std::size_t rows, std::size_t cols, const SmoothingParams& params);

/// Ground truth: factor the full mn x mn system with a dense Cholesky.
Decomposition solve_dense_kronecker(const Grid& z, const SmoothingParams& params);

/// Z = G + diag(gamma) G T + H G diag(delta), evaluated with band stencils.
Grid forward_apply(const Grid& g, const SmoothingParams& params);

/// || (G/2 + diag(gamma) G T) + (G/2 + H G diag(delta)) - Z ||_F, i.e.
/// G A + B G - Z with A = I/2 + lambda T and B = I/2 + lambda H for TDS.
/// Evaluated with dense products, independently of forward_apply.
double sylvester_residual(const Grid& g, const Grid& z, const SmoothingParams& params);

}  // namespace tds
