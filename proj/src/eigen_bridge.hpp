#pragma once

#include "tds/grid.hpp"

#include <Eigen/Dense>

namespace tds::detail {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::MatrixXd to_matrix(const Grid& g) {
    return Eigen::Map<const RowMajorMatrix>(g.values().data(), static_cast<Eigen::Index>(g.rows()),
                                            static_cast<Eigen::Index>(g.cols()));
}

inline Grid to_grid(const Eigen::MatrixXd& m) {
    std::vector<double> v(static_cast<std::size_t>(m.size()));
    Eigen::Map<RowMajorMatrix>(v.data(), m.rows(), m.cols()) = m;
    return Grid(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), std::move(v));
}

}  // namespace tds::detail
