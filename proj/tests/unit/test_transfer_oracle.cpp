#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "zslice/errors.hpp"
#include "zslice/transfer_oracle.hpp"

using namespace zslice;
using namespace zslice::lattice;

namespace {

using Site = std::tuple<int, int, int, int>;  // t, x, y, z

// Variable sites in the documented order: interior (t,x,y,z) row-major, then
// walls t=-1, t=n_t over (x,y,z) and z=-1, z=n_z over (t,x,y).
std::vector<Site> ordered_sites(const LatticeSpec4D& s) {
    std::vector<Site> out;
    for (int t = 0; t < s.n_t; ++t)
        for (int x = 0; x < s.n_x; ++x)
            for (int y = 0; y < s.n_y; ++y)
                for (int z = 0; z < s.n_z; ++z) out.emplace_back(t, x, y, z);
    for (int t : {-1, s.n_t})
        for (int x = 0; x < s.n_x; ++x)
            for (int y = 0; y < s.n_y; ++y)
                for (int z = 0; z < s.n_z; ++z) out.emplace_back(t, x, y, z);
    for (int z : {-1, s.n_z})
        for (int t = 0; t < s.n_t; ++t)
            for (int x = 0; x < s.n_x; ++x)
                for (int y = 0; y < s.n_y; ++y) out.emplace_back(t, x, y, z);
    return out;
}

// S[phi] summed site by site with forward differences.
complex action(const LatticeSpec4D& s, const std::map<Site, double>& phi) {
    const double e = s.spacing;
    const complex m2(s.m * s.m, -s.delta);
    complex total = 0;
    for (const auto& [site, v] : phi) {
        auto [t, x, y, z] = site;
        complex term = -m2 * v * v;
        const Site nb[4] = {{t + 1, x, y, z}, {t, (x + 1) % s.n_x, y, z}, {t, x, (y + 1) % s.n_y, z}, {t, x, y, z + 1}};
        const double sign[4] = {1, -1, -1, -1};
        for (int mu = 0; mu < 4; ++mu) {
            const auto it = phi.find(nb[mu]);
            if (it == phi.end()) continue;
            const double d = (it->second - v) / e;
            term += sign[mu] * d * d;
        }
        total += std::pow(e, 4) * term / 2.0;
    }
    return total;
}

MatrixXc full_matrix(const QuadraticLatticeForm& f) {
    const auto ni = f.interior.rows();
    const auto nb = f.boundary.rows();
    MatrixXc q(ni + nb, ni + nb);
    q.topLeftCorner(ni, ni) = f.interior;
    q.topRightCorner(ni, nb) = f.coupling;
    q.bottomLeftCorner(nb, ni) = f.coupling.transpose();
    q.bottomRightCorner(nb, nb) = f.boundary;
    return q;
}

LatticeSpec4D spec(int nt, int nx, int ny, int nz, double delta = 0.1, double spacing = 1.0, double m = 1.0) {
    LatticeSpec4D s;
    s.n_t = nt, s.n_x = nx, s.n_y = ny, s.n_z = nz, s.delta = delta, s.spacing = spacing, s.m = m;
    return s;
}

// Time reversal t -> n_t - 1 - t of a T-view boundary.
BoundaryData time_reversed(const LatticeSpec4D& s, const BoundaryData& b) {
    BoundaryData r = b;
    std::swap(r.initial, r.final);
    const int per_t = s.n_x * s.n_y;
    for (auto* wall : {&r.side_initial, &r.side_final}) {
        std::vector<double> w(wall->size());
        for (int t = 0; t < s.n_t; ++t)
            for (int k = 0; k < per_t; ++k)
                w[static_cast<std::size_t>((s.n_t - 1 - t) * per_t + k)] = (*wall)[static_cast<std::size_t>(t * per_t + k)];
        *wall = w;
    }
    return r;
}

}  // namespace

TEST_CASE("2x2x2x2 action matches an independent stencil assembly") {
    for (const auto& s : {spec(2, 2, 2, 2), spec(2, 3, 2, 2, 0.3, 0.7, 1.4)}) {
        const auto form = build_action(s);
        const MatrixXc q = full_matrix(form);
        const auto sites = ordered_sites(s);
        REQUIRE(static_cast<Eigen::Index>(sites.size()) == q.rows());

        auto unit = [&](std::initializer_list<std::size_t> idx) {
            std::map<Site, double> phi;
            for (const auto& site : sites) phi[site] = 0.0;
            for (auto i : idx) phi[sites[i]] += 1.0;
            return phi;
        };
        double worst = 0;
        for (std::size_t a = 0; a < sites.size(); ++a) {
            // S = 1/2 phi^T Q phi, so Q_aa = 2 S(e_a) and Q_ab = S(e_a+e_b) - S(e_a) - S(e_b).
            const complex sa = action(s, unit({a}));
            worst = std::max(worst, std::abs(q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) - 2.0 * sa));
            for (std::size_t b = a + 1; b < sites.size(); ++b) {
                const complex qab = action(s, unit({a, b})) - sa - action(s, unit({b}));
                worst = std::max(worst, std::abs(q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - qab));
            }
        }
        CHECK(worst <= 1e-12);
        CHECK((form.interior - form.interior.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((form.boundary - form.boundary.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("heavy mass makes the interior matrix diagonally dominant") {
    const auto form = build_action(spec(3, 2, 2, 3, 0.1, 1.0, 10.0));
    for (Eigen::Index i = 0; i < form.interior.rows(); ++i) {
        const double off = form.interior.row(i).cwiseAbs().sum() - std::abs(form.interior(i, i));
        CHECK(std::abs(form.interior(i, i)) > off);
    }
}

TEST_CASE("regulated interior matrix has no zero eigenvalue") {
    const auto form = build_action(spec(3, 2, 2, 3));
    Eigen::ComplexEigenSolver<MatrixXc> es(form.interior, false);
    // Im Q_II = spacing^4 delta I bounds every eigenvalue away from zero.
    CHECK(es.eigenvalues().cwiseAbs().minCoeff() >= 0.1 - 1e-12);
}

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS(build_action(spec(3, 2, 2, 3, 0.0)), RegulatorError);
    CHECK_THROWS_AS(build_action(spec(3, 2, 2, 3, -0.1)), RegulatorError);
    CHECK_THROWS_AS(build_action(spec(3, 2, 2, 3, 1e-14)), RegulatorError);
    CHECK_THROWS_AS(build_action(spec(1, 2, 2, 3)), InvalidInput);
    CHECK_THROWS_AS(build_action(spec(16, 16, 4, 5)), SizeCapError);
    CHECK_NOTHROW(spec(16, 16, 4, 4).validate());
}

TEST_CASE("zero boundary gives the normalization anchor") {
    const auto s = spec(3, 2, 2, 3);
    const auto form = build_action(s);
    const auto zero = zero_boundary(s, Axis::T);
    const auto a = amplitude_direct(form, zero);
    CHECK(std::abs(normalized(a, a).value() - 1.0) == 0.0);
    CHECK(relative_deviation(amplitude_sliced(form, zero, Axis::T), a) <= 1e-10);
}

TEST_CASE("log amplitude is quadratic in the boundary scale") {
    const auto s = spec(3, 2, 2, 3);
    const auto form = build_action(s);
    const auto b = random_boundary(s, Axis::T, 9, 0);
    auto scaled = [&](double f) {
        auto c = b;
        for (auto* w : {&c.initial, &c.final, &c.side_initial, &c.side_final})
            for (double& v : *w) v *= f;
        return amplitude_direct(form, c).log_value;
    };
    const complex l0 = scaled(0.0), l1 = scaled(1.0), l2 = scaled(2.0);
    CHECK(std::abs((l2 - l0) - 4.0 * (l1 - l0)) <= 1e-9 * std::abs(l2 - l0));

    // independent Schur-complement prediction of the quadratic coefficient
    const Eigen::VectorXcd phi = boundary_vector(s, b).cast<complex>();
    const Eigen::VectorXcd j = form.coupling * phi;
    const complex quad = (phi.transpose() * form.boundary * phi).value() -
                         (j.transpose() * form.interior.fullPivLu().solve(j)).value();
    CHECK(std::abs((l1 - l0) - complex(0, 0.5) * quad) <= 1e-9 * std::abs(quad));
}

TEST_CASE("time reversal of the boundary leaves the amplitude unchanged") {
    const auto s = spec(3, 2, 2, 4);
    const auto form = build_action(s);
    for (std::uint64_t c = 0; c < 5; ++c) {
        const auto b = random_boundary(s, Axis::T, 3, c);
        const auto a = amplitude_direct(form, b);
        const auto r = amplitude_direct(form, time_reversed(s, b));
        CHECK(std::abs(std::abs(a.value()) - std::abs(r.value())) <= 1e-10 * std::abs(a.value()));
    }
}

TEST_CASE("sliced eliminations agree with the direct one") {
    for (const auto& s : {spec(3, 2, 2, 3), spec(2, 3, 2, 4, 0.2, 0.5), spec(4, 2, 3, 2, 0.05, 1.3, 0.7)}) {
        const auto form = build_action(s);
        for (std::uint64_t c = 0; c < 20; ++c) {
            const auto bt = random_boundary(s, Axis::T, 42, c);
            const auto bz = random_boundary(s, Axis::Z, 42, c);
            const auto d = amplitude_direct(form, bt);
            const auto t = amplitude_sliced(form, bt, Axis::T);
            const auto z = amplitude_sliced(form, bz, Axis::Z);
            CHECK(relative_deviation(t, d) <= 1e-8);
            CHECK(relative_deviation(z, d) <= 1e-8);
            CHECK(relative_deviation(t, z) <= 1e-8);
            CHECK(relative_deviation(amplitude_direct(form, bz), d) <= 1e-12);
        }
    }
}

TEST_CASE("boundary data plumbing") {
    const auto s = spec(3, 2, 2, 4);
    const auto b = random_boundary(s, Axis::T, 1, 2);
    CHECK(b.initial.size() == 16);
    CHECK(b.side_initial.size() == 12);
    const auto r = reorient(b);
    CHECK(r.axis == Axis::Z);
    CHECK(r.initial == b.side_initial);
    CHECK(reorient(r).final == b.final);
    CHECK(boundary_vector(s, b) == boundary_vector(s, r));
    for (double v : b.initial) CHECK((v >= -1.0 && v < 1.0));
    CHECK(random_boundary(s, Axis::T, 1, 2).final == b.final);
    CHECK(random_boundary(s, Axis::T, 1, 3).final != b.final);

    const auto form = build_action(s);
    CHECK_THROWS_AS(amplitude_sliced(form, b, Axis::Z), PreconditionError);
    auto bad = b;
    bad.initial.pop_back();
    CHECK_THROWS_AS(amplitude_direct(form, bad), DimensionMismatch);
    CHECK(to_string(Axis::Z) == "Z");
}

TEST_CASE("log amplitude has constant second differences") {
    const auto s = spec(3, 2, 2, 3);
    const auto form = build_action(s);
    const auto base = random_boundary(s, Axis::T, 5, 0);
    const auto dir = random_boundary(s, Axis::T, 5, 1);
    std::vector<complex> l;
    for (int k = -2; k <= 2; ++k) {
        auto b = base;
        for (std::size_t i = 0; i < b.final.size(); ++i) b.final[i] += 0.5 * k * dir.final[i];
        for (std::size_t i = 0; i < b.side_initial.size(); ++i) b.side_initial[i] += 0.5 * k * dir.side_initial[i];
        l.push_back(amplitude_direct(form, b).log_value);
    }
    const complex d0 = l[2] - 2.0 * l[1] + l[0];
    for (std::size_t k = 1; k + 2 < l.size(); ++k) CHECK(std::abs(l[k + 2] - 2.0 * l[k + 1] + l[k] - d0) <= 1e-8);
}

TEST_CASE("normalized amplitudes converge as the regulator shrinks") {
    std::vector<complex> logs;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        const auto s = spec(3, 2, 2, 3, delta);
        const auto form = build_action(s);
        logs.push_back(normalized(amplitude_direct(form, random_boundary(s, Axis::T, 42, 0)),
                                  amplitude_direct(form, zero_boundary(s, Axis::T)))
                           .log_value);
    }
    for (std::size_t k = 0; k + 2 < logs.size(); ++k)
        CHECK(std::abs(logs[k + 2] - logs[k + 1]) < std::abs(logs[k + 1] - logs[k]));
}
