#include "oracles.hpp"
#include "tds/errors.hpp"
#include "tds/synth.hpp"
#include "tds/tuning.hpp"

#include <doctest.h>

#include <cmath>

using namespace tds;

TEST_CASE("rng stream is SplitMix64") {
    Rng r(0);
    CHECK(r.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(r.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(r.next_u64() == 0x06C45D188009454FULL);
    CHECK(r.draws() == 3);
    for (std::uint64_t seed : {1ULL, 42ULL, 0xDEADBEEFULL}) {
        Rng a(seed);
        oracle::SplitMix64 b{seed};
        for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next());
    }
}

TEST_CASE("uniform variates lie strictly inside (0, 1)") {
    Rng r(7);
    oracle::SplitMix64 ref{7};
    for (int k = 0; k < 1000; ++k) {
        const double u = r.uniform();
        CHECK(u == (static_cast<double>(ref.next() >> 11) + 0.5) * 0x1.0p-53);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal variates: Box-Muller cosine branch") {
    Rng r(3);
    oracle::SplitMix64 ref{3};
    for (int k = 0; k < 50; ++k) {
        const double u1 = (static_cast<double>(ref.next() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = (static_cast<double>(ref.next() >> 11) + 0.5) * 0x1.0p-53;
        CHECK(r.normal() == doctest::Approx(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2)).epsilon(1e-15));
    }
}

TEST_CASE("distribution moments") {
    Rng r(11);
    const int n = 200000;
    double s = 0, s2 = 0, g = 0, p = 0, pl = 0;
    for (int k = 0; k < n; ++k) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
        g += r.gamma(2.0, 1.5);
        p += static_cast<double>(r.poisson(4.0));
        pl += static_cast<double>(r.poisson(120.0));
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(g / n == doctest::Approx(3.0).epsilon(0.01));
    CHECK(p / n == doctest::Approx(4.0).epsilon(0.01));
    CHECK(pl / n == doctest::Approx(120.0).epsilon(0.005));
    CHECK(r.gamma(0.5, 1.0) > 0.0);
    CHECK_THROWS_AS(r.gamma(0.0, 1.0), ParameterError);
    CHECK(r.poisson(0.0) == 0);
}

TEST_CASE("test surface values") {
    const Grid a = test_surface({1.0}, {1.0});
    CHECK(a(0, 0) == doctest::Approx(13.8186).epsilon(1e-5));
    const Grid b = test_surface({4.0}, {3.0});
    CHECK(b(0, 0) == doctest::Approx(18.3140).epsilon(1e-5));
    CHECK_THROWS_AS(test_surface({}, {1.0}), DimensionError);
    const Grid c = canonical_surface();
    CHECK(c.rows() == 31);
    CHECK(c.cols() == 21);
    CHECK(canonical_x().back() == doctest::Approx(4.0));
    CHECK(canonical_y().back() == doctest::Approx(3.0));
    CHECK(c(10, 5) == doctest::Approx(3.5 + 2.0 * std::sin(3.5) + 10.0).epsilon(1e-14));
}

TEST_CASE("noise is reproducible per seed") {
    const Grid z = canonical_surface();
    for (const NoiseSpec& s : {NoiseSpec::awgn(1.0, 5), NoiseSpec::mwgn(0.04, 5), NoiseSpec::complex(2.0, 1.0, 5),
                               NoiseSpec::salt_pepper(0.9, 5), NoiseSpec::poisson(255.0, 5)}) {
        CAPTURE(noise_name(s.kind));
        const Grid a = apply_noise(z, s), b = apply_noise(z, s);
        CHECK(a == b);
        NoiseSpec other = s;
        other.seed = 6;
        CHECK_FALSE(apply_noise(z, other) == a);
    }
}

TEST_CASE("vanishing sigma leaves the surface") {
    const Grid z = canonical_surface();
    CHECK(relative_difference(apply_noise(z, NoiseSpec::awgn(1e-12, 1)), z) < 1e-10);
}

TEST_CASE("AWGN std over ten seeds") {
    const Grid z = canonical_surface();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const double s = fluctuation_std(apply_noise(z, NoiseSpec::awgn(1.0, seed)) - z).std;
        CHECK(s >= 0.92);
        CHECK(s <= 1.08);
    }
}

TEST_CASE("multiplicative and complex noise follow their formulas") {
    const Grid z(4, 4, 2.0);
    const Grid m = apply_noise(z, NoiseSpec::mwgn(0.5, 9));
    Rng r(9);
    for (double v : m.values()) CHECK(v == doctest::Approx(2.0 + 2.0 * 0.5 * r.normal()).epsilon(1e-15));
    const Grid c = apply_noise(z, NoiseSpec::complex(2.0, 1.0, 9));
    Rng q(9);
    for (double v : c.values()) {
        const double n1 = q.normal();
        CHECK(v == doctest::Approx(2.0 + n1 * q.gamma(2.0, 1.0)).epsilon(1e-15));
    }
}

TEST_CASE("salt and pepper") {
    const Grid z = Grid::from_function(40, 50, [](std::size_t i, std::size_t j) { return 0.3 + 0.001 * double(i + j); });
    const Grid all = apply_noise(z, NoiseSpec::salt_pepper(1.0, 3, 0.0, 1.0));
    std::size_t ones = 0;
    for (double v : all.values()) {
        CHECK((v == 0.0 || v == 1.0));
        ones += v == 1.0;
    }
    const double n = 2000.0, sd = std::sqrt(n * 0.25);
    CHECK(std::abs(static_cast<double>(ones) - n / 2) <= 3 * sd);
    const Grid some = apply_noise(z, NoiseSpec::salt_pepper(0.1, 3));
    std::size_t changed = 0;
    for (std::size_t k = 0; k < some.size(); ++k) {
        if (some.values()[k] != z.values()[k]) {
            ++changed;
            CHECK((some.values()[k] == z.min_value() || some.values()[k] == z.max_value()));
        }
    }
    CHECK(std::abs(static_cast<double>(changed) - 200.0) <= 3 * std::sqrt(2000 * 0.09));
}

TEST_CASE("poisson noise") {
    const Grid z(30, 30, 0.5);
    const Grid p = apply_noise(z, NoiseSpec::poisson(255.0, 4));
    double s = 0.0;
    for (double v : p.values()) {
        CHECK(v >= 0.0);
        CHECK(std::abs(v * 255.0 - std::round(v * 255.0)) < 1e-9);
        s += v;
    }
    CHECK(s / 900.0 == doctest::Approx(0.5).epsilon(0.02));
    CHECK_THROWS_AS(apply_noise(Grid(3, 3, -0.1), NoiseSpec::poisson(255.0, 1)), DataError);
}

TEST_CASE("noise spec validation") {
    CHECK_THROWS_AS(validate(NoiseSpec::awgn(-1.0, 1)), ParameterError);
    CHECK_THROWS_AS(validate(NoiseSpec::salt_pepper(1.5, 1)), ParameterError);
    CHECK_THROWS_AS(validate(NoiseSpec::complex(0.0, 1.0, 1)), ParameterError);
    CHECK_THROWS_AS(validate(NoiseSpec::poisson(0.0, 1)), ParameterError);
    CHECK_THROWS_AS(validate(NoiseSpec::salt_pepper(0.1, 1, 1.0, 0.0)), ParameterError);
    CHECK(noise_name(NoiseKind::Complex) == "CN");
}

TEST_CASE("test image") {
    const Grid img = test_image();
    CHECK(img.rows() == 256);
    CHECK(img.cols() == 256);
    CHECK(img.min_value() >= 0.0);
    CHECK(img.max_value() <= 1.0);
    CHECK(img.max_value() - img.min_value() > 0.5);
    CHECK(test_image(32, 40) == test_image(32, 40));
    CHECK_THROWS_AS(test_image(4, 40), DimensionError);
}
