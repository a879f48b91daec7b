// Acceptance criteria, one pass/fail line each. Usage: acceptance [N ...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "zslice/cli.hpp"
#include "zslice/field_ops.hpp"
#include "zslice/invariants.hpp"
#include "zslice/mode_algebra.hpp"
#include "zslice/propagator.hpp"
#include "zslice/transfer_oracle.hpp"
#include "zslice/zevolution.hpp"

using namespace zslice;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const MassParam m{1.0, 0.1};
    const prop::QuadratureSpec q3{6.0, 48, 0.5};
    const prop::QuadratureSpec q4{6.0, 32, 0.5};
    const std::vector<prop::SpacetimePoint> pts{
        {0, 0, 0, 0}, {0.5, 0, 0.5, 0.5}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0.3, 0.3, 0.3, 0.8}};
    double worst = 0.0;
    int within_estimates = 0;
    bool ok = true;
    for (const auto& p : pts) {
        const prop::PropagatorValue v[3] = {prop::propagator_zform(p, m, q3), prop::propagator_tform(p, m, q3),
                                            prop::propagator_4d(p, m, q4)};
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const double scale = std::max(std::abs(v[a].value), std::abs(v[b].value));
                const double dev = std::abs(v[a].value - v[b].value) / scale;
                const double combined = (v[a].error_estimate + v[b].error_estimate) / scale;
                worst = std::max(worst, dev);
                if (dev <= combined) ++within_estimates;
                if (dev > 0.02) ok = false;
            }
    }
    const double secs = seconds_since(t0);
    ok = ok && secs <= 600.0;
    return {ok, "max pairwise relative deviation " + sci(worst) + " (limit 2e-2), " + std::to_string(within_estimates) +
                    "/15 pairs inside combined error estimates, runtime " + sci(secs) + " s"};
}

Outcome criterion2() {
    const prop::QuadratureSpec q{200.0, 200000, 0.5};
    double worst = 0.0;
    bool monotone = true;
    for (complex lam : {complex(1, 0.1), complex(2, 0.05), complex(0.5, 0.2)})
        for (double z : {0.5, -0.5, 2.0, -2.0}) {
            worst = std::max(worst, std::abs(prop::kz_contour_numeric(lam, z, q) - prop::bracket_closed(lam, z)));
            double prev = 1e300;
            for (int j = 0; j < 4; ++j) {
                const prop::QuadratureSpec qj{200.0 * (1 << j), 200000 * (1 << j), 0.5};
                const double e = std::abs(prop::kz_contour_numeric(lam, z, qj) - prop::bracket_closed(lam, z));
                if (!(e < prev)) monotone = false;
                prev = e;
            }
        }
    return {worst <= 1e-3 && monotone,
            "max |numeric - closed| " + sci(worst) + " (limit 1e-3), monotone over 3 doublings: " +
                (monotone ? "yes" : "no")};
}

Outcome criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    lattice::LatticeSpec4D s;
    s.n_t = 3, s.n_x = 2, s.n_y = 2, s.n_z = 3, s.delta = 0.1;
    const auto a = inv::oracle_agreement(s, 42, 20);
    const double worst = std::max({a.direct_vs_t, a.direct_vs_z, a.t_vs_z});
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs <= 60.0,
            "direct/T " + sci(a.direct_vs_t) + ", direct/Z " + sci(a.direct_vs_z) + ", T/Z " + sci(a.t_vs_z) +
                " (limit 1e-8), runtime " + sci(secs) + " s"};
}

Outcome criterion4() {
    const int dim = 16;
    const auto f = field::build_phi_pi_fock(1.0, dim);
    const double fock = CornerMask({dim}).restricted_max_abs(commutator(f.pi, f.phi).entries +
                                                              complex(0, 1) * MatrixXc::Identity(dim, dim));
    const field::SiteGrid g{64, 4.0};
    double grid = 0.0;
    for (const auto& psi : field::band_limited_test_vectors(g, 4)) grid = std::max(grid, field::grid_commutator_residual(g, psi));
    return {fock <= 1e-12 && grid <= 1e-8,
            "Fock residual " + sci(fock) + " (limit 1e-12), grid residual " + sci(grid) + " (limit 1e-8)"};
}

Outcome criterion5() {
    const int dim = 16;
    const MassParam m{1.0, 0.0};
    const MomentumTriple kp{0, 0, 2};
    const double lam = lambda_of(kp, m).lambda.real();
    // H built independently as lam (a^dag a + 1/2) on the same Fock space.
    const auto f = field::build_phi_pi_fock(lam, dim);
    MatrixXc h = MatrixXc::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) h(n, n) = lam * (n + 0.5);
    const OperatorMatrix hp = field::build_Hprime_modes({kp}, m, dim);
    const auto rep = field::check_evolution_commutators(OperatorMatrix(h), hp, f.phi, f.pi, CornerMask({dim}));
    const bool ok = rep.t_residual <= 1e-10 && rep.z_residual <= 1e-10 && rep.z_residual_same_sign > 1.0;
    return {ok, "i[H,phi]-Pi " + sci(rep.t_residual) + ", i[H',phi]+Pi " + sci(rep.z_residual) +
                    " (limit 1e-10), i[H',phi]-Pi " + sci(rep.z_residual_same_sign) + " (must be O(1))"};
}

Outcome criterion6() {
    const auto rep = inv::algebra_suite();
    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.passed) failed += " " + c.name;
    double worst = 0.0;
    for (const auto& c : rep.checks)
        if (c.comparison == inv::Comparison::AtMost) worst = std::max(worst, c.measured);
    return {rep.all_passed(), std::to_string(rep.checks.size()) + " ladder-algebra checks, max residual " + sci(worst) +
                                  (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome criterion7() {
    double spectrum = 0.0, schr = 0.0, resid = 0.0, overlap = 1e300;
    for (int dim : {2, 4, 16, 32}) {
        const auto f = field::build_phi_pi_fock(1.0, std::max(dim, 4));
        const OperatorMatrix phi(f.phi.entries.topLeftCorner(dim, dim), "phi");
        const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(dim, 42));
        const OperatorMatrix moved = zevo::heisenberg_transport(phi, 1.0, ctx);
        Eigen::ComplexEigenSolver<MatrixXc> es(moved.entries, false);
        spectrum = std::max(spectrum, es.eigenvalues().imag().cwiseAbs().maxCoeff());
        const auto lr = zevo::left_right_eigen_check(phi, 1.0, ctx);
        resid = std::max({resid, lr.right_residual, lr.left_residual});
        overlap = std::min(overlap, lr.overlap_defect);
    }
    const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(4, 42));
    const OperatorMatrix op = zevo::hermitian_fixture(4, 43);
    const OperatorMatrix moved = zevo::heisenberg_transport(op, 1.0, ctx);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const VectorXc psi = zevo::random_state(4, 1000 + s);
        const auto p = zevo::evolve_pair(zevo::StatePair::at_origin(psi), 1.0, ctx);
        schr = std::max(schr, std::abs(zevo::expectation(p, op) - psi.dot(moved.entries * psi)));
    }
    const bool ok = spectrum <= 1e-8 && schr <= 1e-10 && resid <= 1e-9 && overlap > 0.0;
    return {ok, "max |Im spectrum| " + sci(spectrum) + " (limit 1e-8), Schroedinger-Heisenberg " + sci(schr) +
                    " (limit 1e-10), eigen residual " + sci(resid) + " (limit 1e-9), min overlap defect " + sci(overlap)};
}

Outcome criterion8() {
    const MassParam m{1.0, 0.0};
    const MomentumTriple k{1, 0, 1};
    const auto r = algebra::realize_p2_pair(k, m, 8);
    double full = 0.0, off = 0.0;
    for (const auto& modes : {std::vector<MomentumTriple>{k}, std::vector<MomentumTriple>{k, k.negated()}}) {
        const OperatorMatrix hp = algebra::build_hprime_modes(modes, m, r);
        full = std::max(full, zevo::normality_check(hp));
        off = std::max(off, zevo::normality_check(hp, r.corner_mask()));
    }
    return {off <= 1e-8, "P2-pair H' normality off corner " + sci(off) + " (limit 1e-8), full truncated space " +
                             sci(full) + " (reported)"};
}

Outcome criterion9() {
    const std::vector<std::vector<std::string>> cmds{
        {"oracle", "--seed", "42"},
        {"oracle", "--seed", "42", "--format", "json"},
        {"lambda-map", "--eps", "0.1"},
        {"invariants", "--suite", "all", "--seed", "42"},
        {"propagator", "--nodes", "16", "--point", "0.5,0,0.5,0.5"}};
    bool ok = true;
    for (const auto& c : cmds) {
        std::ostringstream a, b, ea, eb;
        cli::run(c, a, ea);
        cli::run(c, b, eb);
        if (a.str() != b.str() || a.str().empty()) ok = false;
    }
    return {ok, std::to_string(cmds.size()) + " commands run twice, outputs " + (ok ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"propagator equivalence", criterion1}, {"contour identity", criterion2},
        {"lattice slicing equivalence", criterion3}, {"canonical commutator", criterion4},
        {"evolution commutators", criterion5}, {"ladder algebra", criterion6},
        {"non-hermitian evolution", criterion7}, {"normality", criterion8}, {"cli determinism", criterion9}};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 9; ++i) which.push_back(i);

    bool all = true;
    for (int n : which) {
        if (n < 1 || n > 9) {
            std::printf("criterion %d: unknown\n", n);
            return 2;
        }
        const auto& [name, fn] = criteria[static_cast<std::size_t>(n - 1)];
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d [%s]: %s: %s\n", n, name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
