#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "zslice/errors.hpp"
#include "zslice/propagator.hpp"

using namespace zslice;
using namespace zslice::prop;

namespace {

const complex kI{0, 1};
const double kPi = 3.14159265358979323846;

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

// Straight transcription of the z-ordered integrand with its own branch choice.
complex naive_zform(const SpacetimePoint& p, double m, double eps, int n, double cutoff) {
    const double h = 2 * cutoff / n;
    complex acc = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double kx = -cutoff + (a + 0.5) * h, ky = -cutoff + (b + 0.5) * h, kt = -cutoff + (c + 0.5) * h;
                complex lam = std::sqrt(complex(kt * kt - kx * kx - ky * ky - m * m, eps));
                if (lam.imag() < 0) lam = -lam;
                const complex br = p.z > 0   ? std::exp(kI * lam * p.z) / (2. * lam)
                                   : p.z < 0 ? std::exp(-kI * lam * p.z) / (2. * lam)
                                             : 1. / (2. * lam);
                acc += std::exp(-kI * (kx * p.x + ky * p.y - kt * p.t)) * br;
            }
    return -kI * acc * std::pow(h / (2 * kPi), 3);
}

complex naive_tform(const SpacetimePoint& p, double m, double eps, int n, double cutoff) {
    const double h = 2 * cutoff / n;
    complex acc = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double kx = -cutoff + (a + 0.5) * h, ky = -cutoff + (b + 0.5) * h, kz = -cutoff + (c + 0.5) * h;
                complex w = std::sqrt(complex(kx * kx + ky * ky + kz * kz + m * m, -eps));
                if (w.real() < 0) w = -w;
                const complex br = p.t > 0   ? std::exp(-kI * w * p.t)
                                   : p.t < 0 ? std::exp(kI * w * p.t)
                                             : complex(1.0);
                acc += std::exp(kI * (kx * p.x + ky * p.y + kz * p.z)) * br / (2. * w);
            }
    return -kI * acc * std::pow(h / (2 * kPi), 3);
}

complex naive_4d(const SpacetimePoint& p, double m, double eps, int n, double cutoff) {
    const double h = 2 * cutoff / n;
    complex acc = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const double kx = -cutoff + (a + 0.5) * h, ky = -cutoff + (b + 0.5) * h;
                    const double kz = -cutoff + (c + 0.5) * h, kt = -cutoff + (d + 0.5) * h;
                    const complex den(kx * kx + ky * ky + kz * kz - kt * kt + m * m, -eps);
                    acc += std::exp(-kI * (kx * p.x + ky * p.y + kz * p.z - kt * p.t)) / den;
                }
    return -acc * std::pow(h / (2 * kPi), 4);
}

const MassParam kM{1.0, 0.1};
const QuadratureSpec kSmall{6.0, 16, 0.5};

}  // namespace

TEST_CASE("bracket closed form") {
    CHECK(std::abs(bracket_closed(1.0, 0.0) - 0.5) < 1e-15);
    CHECK(std::abs(bracket_closed(kI, 1.0) - std::exp(-1.0) / (2.0 * kI)) < 1e-15);
    CHECK(std::abs(bracket_closed(kI, 1.0) - complex(0, -0.1839397)) < 1e-7);
    CHECK(std::abs(bracket_closed(2.0, -3.0) - std::exp(6.0 * kI) / 4.0) < 1e-15);
    CHECK_THROWS_AS(bracket_closed(0.0, 1.0), PoleError);
}

TEST_CASE("contour integral reproduces the bracket") {
    const QuadratureSpec q{200.0, 200000, 0.5};
    for (double z : {1.0, -1.0}) {
        const complex lam(1.0, 0.1);
        CHECK(std::abs(kz_contour_numeric(lam, z, q) - bracket_closed(lam, z)) <= 1e-3);
    }
    CHECK_THROWS_AS(kz_contour_numeric(complex(1.0, 0.0), 1.0, q), PreconditionError);
    CHECK_THROWS_AS(kz_contour_numeric(complex(1.0, -0.1), 1.0, q), PreconditionError);
}

TEST_CASE("contour error shrinks as the cutoff doubles at fixed density") {
    const complex lam(2.0, 0.05);
    double prev = 1e300;
    for (int j = 0; j < 4; ++j) {
        const QuadratureSpec q{200.0 * (1 << j), 200000 * (1 << j), 0.5};
        const double err = std::abs(kz_contour_numeric(lam, 0.5, q) - bracket_closed(lam, 0.5));
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("momentum propagator") {
    CHECK(std::abs(momentum_propagator({0, 0, 0, 0}, {1.0, 0.0}) + 1.0) < 1e-15);
    const double kx = 0.3, ky = -0.4, kz = 1.2;
    const double w = std::sqrt(kx * kx + ky * ky + kz * kz + 1.0);
    CHECK(std::abs(momentum_propagator({kx, ky, kz, w}, {1.0, 0.01}) - complex(0, -100)) < 1e-8);
    CHECK_THROWS_AS(momentum_propagator({0, 0, 0, 1.0}, {1.0, 0.0}), PoleError);
}

TEST_CASE("quadratures match direct transcriptions of their integrands") {
    const SpacetimePoint p{0.5, -0.2, 0.5, 0.5};
    CHECK(rel(propagator_zform(p, kM, kSmall).value, naive_zform(p, 1.0, 0.1, 16, 6.0)) <= 1e-10);
    CHECK(rel(propagator_tform(p, kM, kSmall).value, naive_tform(p, 1.0, 0.1, 16, 6.0)) <= 1e-10);
    CHECK(rel(propagator_4d(p, kM, kSmall).value, naive_4d(p, 1.0, 0.1, 16, 6.0)) <= 1e-10);
}

TEST_CASE("error estimate is the node-halving difference") {
    const SpacetimePoint p{0.3, 0.3, 0.3, 0.8};
    const auto v = propagator_tform(p, kM, {6.0, 32, 0.5});
    const complex coarse = propagator_tform(p, kM, {6.0, 16, 0.5}).value;
    CHECK(v.error_estimate == doctest::Approx(std::abs(v.value - coarse)).epsilon(1e-12));
    CHECK(v.method == Method::TForm);
}

TEST_CASE("zform symmetries") {
    const SpacetimePoint p{0.4, 0.7, 0.6, 0.3};
    const complex v = propagator_zform(p, kM, kSmall).value;
    CHECK(rel(propagator_zform({-0.4, -0.7, 0.6, 0.3}, kM, kSmall).value, v) <= 1e-10);
    CHECK(rel(propagator_zform({0.4, 0.7, -0.6, 0.3}, kM, kSmall).value, v) <= 1e-10);
}

TEST_CASE("tform symmetries") {
    const QuadratureSpec q{6.0, 20, 0.5};
    const complex v = propagator_tform({0.2, 0.5, -0.1, 0.7}, kM, q).value;
    CHECK(rel(propagator_tform({0.2, 0.5, -0.1, -0.7}, kM, q).value, v) <= 1e-10);
    const complex a = propagator_tform({1, 0, 0, 0}, kM, q).value;
    CHECK(rel(propagator_tform({0, 1, 0, 0}, kM, q).value, a) <= 1e-10);
    CHECK(rel(propagator_tform({0, 0, 1, 0}, kM, q).value, a) <= 1e-10);
}

TEST_CASE("4D symmetries") {
    const complex a = propagator_4d({0.5, 0.2, 0.9, 0}, kM, kSmall).value;
    CHECK(rel(propagator_4d({0.9, 0.5, 0.2, 0}, kM, kSmall).value, a) <= 1e-10);
    CHECK(rel(propagator_4d({0.2, 0.9, 0.5, 0}, kM, kSmall).value, a) <= 1e-10);
}

TEST_CASE("unregulated propagators are rejected") {
    const MassParam bare{1.0, 0.0};
    CHECK_THROWS_AS(propagator_zform({}, bare, kSmall), PreconditionError);
    CHECK_THROWS_AS(propagator_tform({}, bare, kSmall), PreconditionError);
    CHECK_THROWS_AS(propagator_4d({}, bare, kSmall), PreconditionError);
    CHECK_THROWS_AS(propagator_4d({}, kM, {6.0, 8, 0.5}), PreconditionError);
    CHECK_THROWS_AS(propagator_4d({}, kM, {6.0, 16, 1.0}), PreconditionError);
}

TEST_CASE("results do not depend on the thread count") {
    const SpacetimePoint p{0.5, 0, 0.5, 0.5};
    setenv("ZSLICE_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    const complex one = propagator_zform(p, kM, {6.0, 24, 0.5}).value;
    const complex four_one = propagator_4d(p, kM, kSmall).value;
    setenv("ZSLICE_THREADS", "5", 1);
    CHECK(thread_count() == 5);
    const complex five = propagator_zform(p, kM, {6.0, 24, 0.5}).value;
    const complex four_five = propagator_4d(p, kM, kSmall).value;
    unsetenv("ZSLICE_THREADS");
    CHECK(one == five);
    CHECK(four_one == four_five);
}

TEST_CASE("default quadrature") {
    const auto q3 = default_quadrature_3d({2.0, 0.4});
    const auto q4 = default_quadrature_4d({2.0, 0.4});
    CHECK(q3.cutoff == doctest::Approx(3.0));
    CHECK(q3.nodes == 48);
    CHECK(q4.nodes == 32);
    CHECK(q3.offset == 0.5);
    CHECK(to_string(Method::FourD) == "fourd");
}
