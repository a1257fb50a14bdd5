#include "tds/penalty.hpp"

#include "tds/errors.hpp"

#include <cmath>
#include <sstream>

namespace tds {

PenaltyMatrix::PenaltyMatrix(std::size_t k) {
    if (k < 3) {
        std::ostringstream os;
        os << "penalty order must be >= 3, got " << k;
        throw DimensionError(os.str());
    }
    if (k == 3) {
        diag_ = {1.0, 4.0, 1.0};
        off1_ = {-2.0, -2.0};
        off2_ = {1.0};
        return;
    }
    if (k == 4) {
        diag_ = {1.0, 5.0, 5.0, 1.0};
        off1_ = {-2.0, -4.0, -2.0};
        off2_ = {1.0, 1.0};
        return;
    }
    diag_.assign(k, 6.0);
    diag_[0] = diag_[k - 1] = 1.0;
    diag_[1] = diag_[k - 2] = 5.0;
    off1_.assign(k - 1, -4.0);
    off1_[0] = off1_[k - 2] = -2.0;
    off2_.assign(k - 2, 1.0);
}

double PenaltyMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    const std::size_t lo = i < j ? i : j;
    const std::size_t gap = i < j ? j - i : i - j;
    switch (gap) {
        case 0: return diag_[lo];
        case 1: return off1_[lo];
        case 2: return off2_[lo];
        default: return 0.0;
    }
}

Eigen::MatrixXd PenaltyMatrix::dense() const {
    const auto k = static_cast<Eigen::Index>(order());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        d(i, i) = diag_[i];
        if (i + 1 < k) d(i, i + 1) = d(i + 1, i) = off1_[i];
        if (i + 2 < k) d(i, i + 2) = d(i + 2, i) = off2_[i];
    }
    return d;
}

void PenaltyMatrix::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t k = order();
    if (x.size() != k || y.size() != k) {
        throw DimensionError("penalty apply: vector length does not match order");
    }
    for (std::size_t i = 0; i < k; ++i) {
        double s = diag_[i] * x[i];
        if (i >= 1) s += off1_[i - 1] * x[i - 1];
        if (i >= 2) s += off2_[i - 2] * x[i - 2];
        if (i + 1 < k) s += off1_[i] * x[i + 1];
        if (i + 2 < k) s += off2_[i] * x[i + 2];
        y[i] = s;
    }
}

std::vector<double> PenaltyMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(order());
    apply(x, y);
    return y;
}

std::size_t PenaltyMatrix::nonzero_count() const noexcept {
    std::size_t c = 0;
    for (double v : diag_) c += v != 0.0;
    for (double v : off1_) c += 2 * (v != 0.0);
    for (double v : off2_) c += 2 * (v != 0.0);
    return c;
}

double PenaltyMatrix::nonzero_fraction() const noexcept {
    const double k = static_cast<double>(order());
    return static_cast<double>(nonzero_count()) / (k * k);
}

PenaltyMatrix build_penalty(std::size_t k) { return PenaltyMatrix(k); }

std::size_t PenaltySpectrum::near_zero_count() const {
    const double threshold = 1e-9 * norm();
    std::size_t c = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) c += eigenvalues(i) < threshold;
    return c;
}

PenaltySpectrum spectrum(const PenaltyMatrix& n) {
    if (n.order() > kMaxSpectralOrder) {
        std::ostringstream os;
        os << "spectral decomposition refused for order " << n.order() << " (cap "
           << kMaxSpectralOrder << "); use the iterative solver";
        throw SizeError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(n.dense());
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "symmetric eigensolver did not converge for order " << n.order();
        throw NumericalError(os.str());
    }
    // Eigen returns eigenvalues in ascending order
    return PenaltySpectrum{n, es.eigenvalues(), es.eigenvectors()};
}

std::vector<GershgorinCircle> gershgorin_circles(const PenaltyMatrix& n) {
    const std::size_t k = n.order();
    std::vector<GershgorinCircle> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        double radius = 0.0;
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = i + 2 < k ? i + 2 : k - 1;
        for (std::size_t j = lo; j <= hi; ++j)
            if (j != i) radius += std::abs(n(i, j));
        out.push_back({n(i, i), radius});
    }
    return out;
}

}  // namespace tds
