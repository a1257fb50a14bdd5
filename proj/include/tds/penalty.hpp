#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace tds {

/// Largest order the dense spectral path accepts.
inline constexpr std::size_t kMaxSpectralOrder = 4096;

/// The k-order second-difference Gram matrix N (called T when k = n and
/// H when k = m). Symmetric pentadiagonal; stored as three bands.
///
/// For k > 4 the interior stencil is (1, -4, 6, -4, 1) with boundary rows
/// (1, -2, 1) and (-2, 5, -4, 1) mirrored at the far end; k = 3 and k = 4
/// use their own explicit forms.
class PenaltyMatrix {
public:
    /// Throws DimensionError when k < 3.
    explicit PenaltyMatrix(std::size_t k);

    std::size_t order() const noexcept { return diag_.size(); }

    /// Entry (i, j), 0-based; zero outside the band.
    double operator()(std::size_t i, std::size_t j) const noexcept;

    std::span<const double> main_diagonal() const noexcept { return diag_; }
    std::span<const double> first_off_diagonal() const noexcept { return off1_; }
    std::span<const double> second_off_diagonal() const noexcept { return off2_; }

    Eigen::MatrixXd dense() const;

    /// y = N x without materializing N.
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    std::size_t nonzero_count() const noexcept;
    double nonzero_fraction() const noexcept;

private:
    std::vector<double> diag_;
    std::vector<double> off1_;
    std::vector<double> off2_;
};

PenaltyMatrix build_penalty(std::size_t k);

/// Orthogonal eigendecomposition N = U diag(eigenvalues) U^T, eigenvalues ascending.
struct PenaltySpectrum {
    PenaltyMatrix matrix;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns

    /// Spectral norm (largest eigenvalue).
    double norm() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }

    /// Count of eigenvalues below 1e-9 * norm().
    std::size_t near_zero_count() const;
};

/// Throws SizeError above kMaxSpectralOrder, NumericalError if the
/// eigensolver fails to converge.
PenaltySpectrum spectrum(const PenaltyMatrix& n);

struct GershgorinCircle {
    double center;
    double radius;
    friend bool operator==(const GershgorinCircle&, const GershgorinCircle&) = default;
};

/// One disk per row: (diagonal entry, sum of |off-diagonal| entries).
std::vector<GershgorinCircle> gershgorin_circles(const PenaltyMatrix& n);

}  // namespace tds
