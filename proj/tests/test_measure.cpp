#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dilated/errors.hpp"
#include "dilated/measure.hpp"

using namespace dilated;

namespace {

// Random symmetric 1-d lattice with mean ~0 and variance 1 (spacing scaled).
LatticeMeasure symmetric_unit_lattice(std::mt19937_64& rng, int half = 3) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const int n = 2 * half + 1;
    std::vector<double> w(n);
    for (int j = 0; j <= half; ++j) {
        double v = u(rng);
        w[half + j] = v;
        w[half - j] = v;
    }
    double mass = 0.0;
    for (double x : w) mass += x;
    double m2 = 0.0;
    for (int j = -half; j <= half; ++j) m2 += w[half + j] / mass * (j * j);
    LatticeMeasure m;
    m.dim = 1;
    m.spacing = {1.0 / std::sqrt(m2)};
    m.offset = {-half * m.spacing[0]};
    m.shape = {static_cast<std::size_t>(n)};
    m.weights = w;
    m.normalize();
    return m;
}

std::complex<double> gaussian_char_by_quadrature(double t) {
    // Simpson's rule for the N(0,1) density over [-12, 12].
    const int n = 4800;  // even
    const double a = -12.0, b = 12.0;
    const double h = (b - a) / n;
    auto f = [&](double x) {
        return std::exp(std::complex<double>(0.0, -t * x)) *
               (std::exp(-x * x / 2.0) / std::sqrt(2.0 * std::numbers::pi));
    };
    std::complex<double> acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace

TEST_CASE("characteristic functions of the standard measures") {
    for (double t : {-3.0, 0.0, 0.5, 2.0}) {
        CHECK(std::abs(char_fn(Measure(dirac({0.0})), std::vector<double>{t}) - 1.0) == 0.0);
        CHECK(std::abs(char_fn(Measure(rademacher()), std::vector<double>{t}) -
                       std::complex<double>(std::cos(t), 0.0)) <= 1e-15);
    }
    GaussianMeasure g{{0.0}, PsdMatrix::scalar(1.0)};
    CHECK(std::abs(char_fn(Measure(g), std::vector<double>{1.0}) - std::exp(-0.5)) <= 1e-14);
    // Cross-check the closed form against numerical quadrature of the density.
    for (double t : {0.3, 1.0, 2.5}) {
        auto closed = char_fn(Measure(g), std::vector<double>{t});
        CHECK(std::abs(closed - gaussian_char_by_quadrature(t)) <= 1e-9);
    }
}

TEST_CASE("characteristic functions are bounded by one") {
    DualGrid grid = DualGrid::make(1);
    std::vector<Measure> ms = {Measure(rademacher()), Measure(bernoulli(0.3)),
                               Measure(uniform_lattice(-2.0, 5.0, 17)),
                               Measure(GaussianMeasure{{0.7}, PsdMatrix::scalar(2.0)})};
    for (const auto& m : ms)
        for (double r : grid.radii)
            for (const auto& dir : grid.directions) {
                std::vector<double> t = {r * dir[0]};
                CHECK(std::abs(char_fn(m, t)) <= 1.0 + 1e-12);
            }
}

TEST_CASE("convolution of Diracs and Rademachers") {
    LatticeMeasure ab = convolve(dirac({1.5}), dirac({-0.25}));
    CHECK(ab.atom_count() == 1);
    CHECK(ab.offset[0] == 1.25);
    CHECK(ab.weights[0] == 1.0);

    LatticeMeasure rr = convolve(rademacher(), rademacher());
    REQUIRE(rr.atom_count() == 3);
    CHECK(rr.atom(0, 0) == doctest::Approx(-2.0));
    CHECK(rr.atom(1, 0) == doctest::Approx(0.0));
    CHECK(rr.atom(2, 0) == doctest::Approx(2.0));
    CHECK(rr.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rr.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rr.weights[2] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("convolution multiplies characteristic functions") {
    DualGrid grid = DualGrid::make(1);
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 5; ++rep) {
        LatticeMeasure mu = symmetric_unit_lattice(rng);
        Measure conv(convolve(mu, mu));
        for (double r : grid.radii)
            for (const auto& dir : grid.directions) {
                std::vector<double> t = {r * dir[0]};
                auto phi = char_fn(Measure(mu), t);
                CHECK(std::abs(char_fn(conv, t) - phi * phi) <= 1e-10);
            }
    }
}

TEST_CASE("convolution preserves mass and adds moments") {
    LatticeMeasure a = bernoulli(0.3);
    LatticeMeasure b = uniform_lattice(0.0, 4.0, 5);  // spacing 1, commensurable with {0,1}
    LatticeMeasure c = convolve(a, b);
    CHECK(std::abs(c.total_mass() - 1.0) <= 1e-10);
    CHECK(expectation(Measure(c))[0] ==
          doctest::Approx(expectation(Measure(a))[0] + expectation(Measure(b))[0]).epsilon(1e-12));
    CHECK(variance_matrix(Measure(c))(0, 0) ==
          doctest::Approx(variance_matrix(Measure(a))(0, 0) + variance_matrix(Measure(b))(0, 0))
              .epsilon(1e-12));
}

TEST_CASE("incommensurable lattices are rejected") {
    LatticeMeasure a = rademacher();  // spacing 2
    LatticeMeasure b = bernoulli(0.5);  // spacing 1
    CHECK_THROWS_AS(convolve(a, b), IncommensurableLattices);
    LatticeMeasure shifted = bernoulli(0.5);
    shifted.offset[0] = 0.3;  // offsets no longer integer multiples apart
    CHECK_THROWS_AS(convolve(bernoulli(0.5), shifted), IncommensurableLattices);
}

TEST_CASE("direct and fast convolution agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t na : {3u, 17u, 64u, 257u})
        for (std::size_t nb : {5u, 33u, 250u}) {
            std::vector<double> a(na), b(nb);
            for (auto& x : a) x = u(rng);
            for (auto& x : b) x = u(rng);
            auto direct = detail::conv_direct(a, b);
            auto fast = detail::conv_fft(a, b);
            REQUIRE(direct.size() == fast.size());
            for (std::size_t i = 0; i < direct.size(); ++i)
                CHECK(std::abs(direct[i] - fast[i]) <= 1e-10);
        }
}

TEST_CASE("dilation") {
    // Unit action.
    LatticeMeasure two = bernoulli(0.5);
    Measure same = dilate(1.0, Measure(two));
    CHECK(same.lattice().spacing == two.spacing);
    CHECK(same.lattice().offset == two.offset);
    CHECK(same.lattice().weights == two.weights);
    // dilate(1/sqrt(2), N(0, 2)) = N(0, 1).
    GaussianMeasure g{{0.0}, PsdMatrix::scalar(2.0)};
    Measure half = dilate(1.0 / std::sqrt(2.0), Measure(g));
    CHECK(half.gaussian().covariance(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    // Coordinates scale, weights do not.
    Measure scaled = dilate(0.5, Measure(bernoulli(0.3)));
    CHECK(scaled.lattice().atom(0, 0) == 0.0);
    CHECK(scaled.lattice().atom(1, 0) == 0.5);
    CHECK(scaled.lattice().weights == bernoulli(0.3).weights);
}

TEST_CASE("linear pushforward") {
    // Scalar on a lattice.
    Measure doubled = pushforward_linear({2.0}, 1, Measure(rademacher()));
    CHECK(doubled.lattice().atom(0, 0) == doctest::Approx(-2.0));
    CHECK(doubled.lattice().atom(1, 0) == doctest::Approx(2.0));
    CHECK(variance_matrix(doubled)(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
    // Scalar on a Gaussian: N(0, M) -> N(0, a^2 M).
    GaussianMeasure g{{0.0}, PsdMatrix::scalar(3.0)};
    Measure gp = pushforward_linear({0.5}, 1, Measure(g));
    CHECK(gp.gaussian().covariance(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    // Zero map collapses to the Dirac at the origin.
    Measure zero = pushforward_linear({0.0}, 1, Measure(bernoulli(0.3)));
    CHECK(zero.lattice().atom_count() == 1);
    CHECK(zero.lattice().atom(0, 0) == 0.0);
    // Expectation maps linearly.
    Measure tripled = pushforward_linear({3.0}, 1, Measure(bernoulli(0.3)));
    CHECK(expectation(tripled)[0] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("moments") {
    CHECK(expectation(Measure(rademacher()))[0] == 0.0);
    CHECK(variance_matrix(Measure(rademacher()))(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(abs_moment(Measure(rademacher()), 2.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(expectation(Measure(bernoulli(0.3)))[0] == doctest::Approx(0.3).epsilon(1e-15));
    // Independent products have block-diagonal variance.
    LatticeMeasure p = product(rademacher(), bernoulli(0.3));
    PsdMatrix v = variance_matrix(Measure(p));
    CHECK(v(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v(1, 1) == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(std::abs(v(0, 1)) <= 1e-12);
    CHECK(std::abs(v(1, 0)) <= 1e-12);
}

TEST_CASE("fourier distance basics") {
    DualGrid grid = DualGrid::make(1);
    Measure r(rademacher());
    CHECK(fourier_l_distance(r, r, 2.5, grid) == 0.0);
    // Moment gate: differing means force an infinite distance.
    double d = fourier_l_distance(Measure(dirac({0.0})), Measure(dirac({1.0})), 1.5, grid);
    CHECK(std::isinf(d));
    // Symmetry is exact.
    Measure g(GaussianMeasure{{0.0}, PsdMatrix::scalar(1.0)});
    CHECK(fourier_l_distance(r, g, 2.5, grid) == fourier_l_distance(g, r, 2.5, grid));
    CHECK(fourier_l_distance(r, g, 2.5, grid) > 0.0);
}

TEST_CASE("fourier distance moment gate for l in (2,3)") {
    DualGrid grid = DualGrid::make(1);
    // Equal means but different variances: gated at l = 2.5, open at l = 1.5.
    Measure a(rademacher());
    Measure b = dilate(0.5, a);
    CHECK(std::isinf(fourier_l_distance(a, b, 2.5, grid)));
    CHECK(std::isfinite(fourier_l_distance(a, b, 1.5, grid)));
}

TEST_CASE("dilation scaling law on the default grid") {
    DualGrid grid = DualGrid::make(1);
    std::mt19937_64 rng(13);
    for (double c : {0.3, 1.0 / std::sqrt(2.0), 0.9})
        for (int rep = 0; rep < 3; ++rep) {
            Measure mu(symmetric_unit_lattice(rng));
            Measure nu(symmetric_unit_lattice(rng));
            double d = fourier_l_distance(mu, nu, 2.5, grid);
            REQUIRE(std::isfinite(d));
            REQUIRE(d > 0.0);
            double dc = fourier_l_distance(dilate(c, mu), dilate(c, nu), 2.5, grid);
            CHECK(std::abs(dc - c * d) / (c * d) <= 0.02);
        }
}

TEST_CASE("convolution bound in the fourier distance") {
    DualGrid grid = DualGrid::make(1);
    std::mt19937_64 rng(29);
    const double l = 2.5;
    for (int rep = 0; rep < 5; ++rep) {
        LatticeMeasure mu = symmetric_unit_lattice(rng);
        LatticeMeasure nu = symmetric_unit_lattice(rng);
        double d = fourier_l_distance(Measure(mu), Measure(nu), l, grid);
        REQUIRE(std::isfinite(d));
        double dconv = fourier_l_distance(Measure(convolve(mu, mu)), Measure(convolve(nu, nu)), l,
                                          grid);
        CHECK(dconv <= std::pow(2.0, 1.0 / l) * d * (1.0 + 1e-9));
    }
}

TEST_CASE("truncation drops negligible atoms and renormalizes") {
    LatticeMeasure m;
    m.dim = 1;
    m.spacing = {1.0};
    m.offset = {0.0};
    m.shape = {3};
    m.weights = {0.5, 1e-18, 0.5};
    m.truncate(1e-15);
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-12);
    for (double w : m.weights) CHECK((w == 0.0 || w >= 1e-15));
}

TEST_CASE("lattice validation") {
    LatticeMeasure m = bernoulli(0.4);
    CHECK_NOTHROW(m.validate());
    m.weights[0] = -0.1;
    CHECK_THROWS_AS(m.validate(), Error);
    LatticeMeasure bad = bernoulli(0.4);
    bad.weights[1] = 0.9;  // mass 1.5
    CHECK_THROWS_AS(bad.validate(), Error);
}
