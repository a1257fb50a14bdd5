#include "oracles.hpp"
#include "tds/errors.hpp"
#include "tds/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace tds;

namespace {

Grid random_grid(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Grid::from_function(r, c, [&](std::size_t, std::size_t) { return u(rng); });
}

}  // namespace

TEST_CASE("grid construction and access") {
    Grid g(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(g.rows() == 2);
    CHECK(g.cols() == 3);
    CHECK(g(1, 0) == 4);
    CHECK(g.at(0, 2) == 3);
    CHECK_THROWS_AS(g.at(2, 0), DimensionError);
    CHECK(g.transposed()(2, 1) == 6);
    CHECK(g.min_value() == 1);
    CHECK(g.max_value() == 6);
    CHECK(g.max_abs() == 6);
    CHECK(g.frobenius_norm() == doctest::Approx(std::sqrt(91.0)));
    CHECK(shape_string(g) == "2x3");
    CHECK_THROWS_AS(Grid(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
}

TEST_CASE("grid rejects non-finite values") {
    CHECK_THROWS_AS(Grid(1, 2, std::vector<double>{1.0, std::nan("")}), DataError);
    CHECK_THROWS_AS(Grid(1, 1, std::numeric_limits<double>::infinity()), DataError);
}

TEST_CASE("grid arithmetic") {
    Grid a(2, 2, std::vector<double>{1, 2, 3, 4});
    Grid b(2, 2, 1.0);
    CHECK((a + b)(1, 1) == 5);
    CHECK((a - b)(0, 0) == 0);
    CHECK((2.0 * a)(0, 1) == 4);
    CHECK(a.shifted(0.5)(1, 0) == 3.5);
    CHECK_THROWS_AS(a + Grid(2, 3), DimensionError);
    CHECK(relative_difference(a, a) == 0.0);
}

TEST_CASE("require_smoothable") {
    CHECK_NOTHROW(require_smoothable(Grid(3, 3)));
    CHECK_THROWS_AS(require_smoothable(Grid(2, 5)), DimensionError);
    CHECK_THROWS_AS(require_smoothable(Grid(5, 2)), DimensionError);
}

TEST_CASE("second differences") {
    Grid linear(1, 3, std::vector<double>{1, 2, 3});
    Grid bent(1, 3, std::vector<double>{1, 2, 4});
    CHECK(second_diff_row(linear, 0, 2) == 0.0);
    CHECK(second_diff_row(bent, 0, 2) == 1.0);
    CHECK(second_diff_col(bent.transposed(), 2, 0) == 1.0);
    CHECK_THROWS_AS(second_diff_row(bent, 0, 1), DimensionError);
    CHECK_THROWS_AS(second_diff_row(bent, 0, 3), DimensionError);
    CHECK_THROWS_AS(second_diff_col(bent, 1, 0), DimensionError);
}

TEST_CASE("roughness sums match hand expansion") {
    Grid g(3, 4, std::vector<double>{0, 1, 4, 9, 1, 1, 1, 1, 2, 0, 2, 0});
    const auto p = row_roughness(g);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(8.0));   // (2)^2 + (2)^2
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(32.0));  // 4^2 + (-4)^2
    const auto q = col_roughness(g);
    REQUIRE(q.size() == 4);
    CHECK(q[0] == doctest::Approx(0.0));
    CHECK(q[1] == doctest::Approx(1.0));
    CHECK(q[2] == doctest::Approx(16.0));
    CHECK(q[3] == doctest::Approx(49.0));
    CHECK(roughness(g) == doctest::Approx(8 + 32 + 1 + 16 + 49));
}

TEST_CASE("loss vanishes on bilinear data") {
    const Grid g = Grid::from_function(5, 6, [](std::size_t i, std::size_t j) {
        return 0.5 + 1.5 * static_cast<double>(i) - 0.25 * static_cast<double>(j);
    });
    CHECK(loss(g, g, TdsParams{7.0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("loss with g = z is the weighted roughness") {
    std::mt19937_64 rng(3);
    const Grid g = random_grid(4, 5, rng);
    CHECK(loss(g, g, TdsParams{2.5}) == doctest::Approx(2.5 * roughness(g)));
    CHECK(loss(g, g, TdsParams{0.0}) == 0.0);
}

TEST_CASE("3x3 ones: zero loss, perturbation raises it") {
    const Grid z(3, 3, 1.0);
    CHECK(loss(z, z, TdsParams{1.0}) == 0.0);
    std::vector<double> v(9, 1.0);
    v[8] += 1e-3;
    const Grid g(3, 3, v);
    // R = eps^2, row 2 and column 2 each pick up eps^2.
    CHECK(loss(z, g, TdsParams{1.0}) == doctest::Approx(3e-6));
}

TEST_CASE("loss agrees with the loop oracle for every variant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    const std::size_t m = 4, n = 6;
    const Grid z = random_grid(m, n, rng), g = random_grid(m, n, rng);
    std::vector<double> gv(m), dv(n);
    for (auto& x : gv) x = u(rng);
    for (auto& x : dv) x = u(rng);
    const std::vector<std::pair<SmoothingParams, oracle::Weights>> cases = {
        {TdsParams{3.0}, {std::vector<double>(m, 3.0), std::vector<double>(n, 3.0)}},
        {Tds1Params{2.0, 0.5}, {std::vector<double>(m, 2.0), std::vector<double>(n, 0.5)}},
        {Tds2Params{gv, dv}, {gv, dv}},
        {Tds3RowScalarParams{1.5, dv}, {std::vector<double>(m, 1.5), dv}},
        {Tds3ColScalarParams{gv, 0.7}, {gv, std::vector<double>(n, 0.7)}},
    };
    for (const auto& [p, w] : cases) {
        CAPTURE(variant_name(p));
        CHECK(loss(z, g, p) == doctest::Approx(oracle::loss(z, g, w)).epsilon(1e-12));
    }
}

TEST_CASE("loss gradient matches central differences") {
    std::mt19937_64 rng(5);
    const Grid z = random_grid(4, 5, rng), g = random_grid(4, 5, rng);
    const SmoothingParams p = Tds1Params{1.7, 0.6};
    const Grid grad = loss_gradient(z, g, p);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            std::vector<double> up(g.values().begin(), g.values().end()), dn = up;
            up[i * 5 + j] += h;
            dn[i * 5 + j] -= h;
            const double fd = (loss(z, Grid(4, 5, up), p) - loss(z, Grid(4, 5, dn), p)) / (2 * h);
            CHECK(grad(i, j) == doctest::Approx(fd).epsilon(1e-4));
        }
}

TEST_CASE("gradient at g = z with lambda 0 is zero") {
    std::mt19937_64 rng(9);
    const Grid z = random_grid(3, 4, rng);
    const Grid grad = loss_gradient(z, z, TdsParams{0.0});
    CHECK(grad.max_abs() == 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(expand_weights(TdsParams{-1.0}, 3, 3), ParameterError);
    CHECK_THROWS_AS(expand_weights(Tds1Params{0.0, 1.0}, 3, 3), ParameterError);
    CHECK_THROWS_AS(expand_weights(Tds2Params{{1, 1, 1}, {1, 1}}, 3, 3), DimensionError);
    CHECK_THROWS_AS(expand_weights(Tds2Params{{1, -1, 1}, {1, 1, 1}}, 3, 3), ParameterError);
    CHECK_THROWS_AS(expand_weights(Tds3RowScalarParams{1.0, {1, 1}}, 3, 3), DimensionError);
    CHECK_THROWS_AS(loss(Grid(3, 3), Grid(3, 4), TdsParams{1.0}), DimensionError);
    const PenaltyWeights w = expand_weights(Tds3ColScalarParams{{1, 2, 3}, 4.0}, 3, 5);
    CHECK(w.row == std::vector<double>{1, 2, 3});
    CHECK(w.col == std::vector<double>(5, 4.0));
}

TEST_CASE("transpose_params swaps the axes") {
    const auto t = transpose_params(Tds3RowScalarParams{2.0, {1, 2, 3}});
    REQUIRE(std::holds_alternative<Tds3ColScalarParams>(t));
    CHECK(std::get<Tds3ColScalarParams>(t).gamma == std::vector<double>{1, 2, 3});
    CHECK(std::get<Tds3ColScalarParams>(t).delta == 2.0);
    const auto t1 = transpose_params(Tds1Params{5.0, 7.0});
    CHECK(std::get<Tds1Params>(t1).gamma == 7.0);
    CHECK(variant_name(Tds2Params{}) == "tds2");
}
