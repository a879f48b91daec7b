#include "zslice/invariants.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "zslice/errors.hpp"
#include "zslice/field_ops.hpp"
#include "zslice/mode_algebra.hpp"
#include "zslice/zevolution.hpp"

namespace zslice::inv {

namespace {

using algebra::ModeOpSymbol;
using algebra::OpKind;

CheckResult at_most(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, Comparison::AtMost, std::isfinite(measured) && measured <= threshold};
}

CheckResult above(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, Comparison::Above, std::isfinite(measured) && measured > threshold};
}

CheckResult report(std::string name, double measured) {
    return {std::move(name), measured, 0.0, Comparison::Report, true};
}

const MassParam kMass{1.0, 0.0};
const MomentumTriple kP1Mode{0.0, 0.0, 2.0};      // lambda = sqrt(3)
const MomentumTriple kP2Mode{1.0, 0.0, 1.0};      // lambda = i
const MomentumTriple kP1Other{0.5, -0.25, 3.0};
const MomentumTriple kP2Other{2.0, 1.0, 0.5};

std::vector<ModeOpSymbol> sample_symbols() {
    std::vector<ModeOpSymbol> out;
    for (const auto& k : {kP1Mode, kP2Mode, kP1Other, kP2Other, kP2Mode.negated()})
        for (OpKind kind : {OpKind::A, OpKind::ABar}) out.push_back({kind, k});
    return out;
}

}  // namespace

std::string to_string(Comparison c) {
    switch (c) {
        case Comparison::AtMost: return "<=";
        case Comparison::Above: return ">";
        case Comparison::Report: return "report";
    }
    return "?";
}

bool SuiteReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "fieldops", "evolution", "oracle", "all"};
    return names;
}

SuiteReport algebra_suite() {
    SuiteReport r{"algebra", {}};
    const auto symbols = sample_symbols();

    double conj_defect = 0.0;
    double antisym_defect = 0.0;
    for (const auto& x : symbols)
        for (const auto& y : symbols) {
            const complex c = algebra::commutator_coeff(x, y, kMass);
            const complex c_conj =
                algebra::commutator_coeff(algebra::conjugate_symbol(y, kMass), algebra::conjugate_symbol(x, kMass), kMass);
            conj_defect = std::max(conj_defect, std::abs(c_conj - std::conj(c)));
            antisym_defect = std::max(antisym_defect, std::abs(c + algebra::commutator_coeff(y, x, kMass)));
        }
    r.checks.push_back(at_most("structure_constant_conjugation", conj_defect, 1e-12));
    r.checks.push_back(at_most("structure_constant_antisymmetry", antisym_defect, 1e-12));

    // Symbolic [H', a'] = lambda a' and [H', abar'] = -lambda abar'.
    double symbolic = 0.0;
    const std::vector<MomentumTriple> modes{kP1Mode, kP1Other, kP2Mode, kP2Mode.negated()};
    const auto hp = algebra::hprime_element(modes, kMass);
    for (const auto& k : modes) {
        const complex lam = lambda_of(k, kMass).lambda;
        const auto a = algebra::AlgebraElement::symbol({OpKind::A, k});
        const auto ab = algebra::AlgebraElement::symbol({OpKind::ABar, k});
        symbolic = std::max(symbolic, algebra::commutator(hp, a, kMass).distance(lam * a));
        symbolic = std::max(symbolic, algebra::commutator(hp, ab, kMass).distance(-lam * ab));
    }
    r.checks.push_back(at_most("hprime_ladder_symbolic", symbolic, 1e-12));

    std::vector<MomentumTriple> perm = modes;
    std::reverse(perm.begin(), perm.end());
    r.checks.push_back(at_most("zero_point_permutation",
                               std::abs(algebra::zero_point_constant(modes, kMass) -
                                        algebra::zero_point_constant(perm, kMass)),
                               1e-12));

    {
        const int dim = 8;
        const auto real = algebra::realize_p1_mode(dim, kP1Mode);
        const OperatorMatrix hp_m = algebra::build_hprime_modes({kP1Mode}, kMass, real);
        const complex lam = lambda_of(kP1Mode, kMass).lambda;
        const auto& a = real.at({OpKind::A, kP1Mode});
        const auto& ab = real.at({OpKind::ABar, kP1Mode});
        const CornerMask mask = real.corner_mask();
        const double ra = mask.restricted_max_abs(commutator(hp_m, a).entries - lam * a.entries);
        const double rb = mask.restricted_max_abs(commutator(hp_m, ab).entries + lam * ab.entries);
        r.checks.push_back(at_most("p1_hprime_lowers", ra, 1e-10));
        r.checks.push_back(at_most("p1_hprime_raises", rb, 1e-10));
        r.checks.push_back(at_most("p1_hprime_hermitian", hermiticity_defect(hp_m), 1e-12));
    }

    {
        const int dim = 8;
        const auto real = algebra::realize_p2_pair(kP2Mode, kMass, dim);
        const MomentumTriple km = kP2Mode.negated();
        const CornerMask mask = real.corner_mask();
        const MatrixXc& a = real.at({OpKind::A, kP2Mode}).entries;
        const MatrixXc& ab = real.at({OpKind::ABar, kP2Mode}).entries;
        const MatrixXc& am = real.at({OpKind::A, km}).entries;
        const MatrixXc& abm = real.at({OpKind::ABar, km}).entries;
        const MatrixXc id = MatrixXc::Identity(a.rows(), a.cols());
        r.checks.push_back(at_most("p2_commutator", mask.restricted_max_abs(a * ab - ab * a + complex(0, 1) * id), 1e-10));
        r.checks.push_back(at_most("p2_adjoint_a", max_abs(a.adjoint() - am), 0.0));
        r.checks.push_back(at_most("p2_adjoint_abar", max_abs(ab.adjoint() - abm), 0.0));
        r.checks.push_back(at_most("p2_a_commute", mask.restricted_max_abs(a * am - am * a), 1e-12));
        const OperatorMatrix hp_m = algebra::build_hprime_modes({kP2Mode}, kMass, real);
        r.checks.push_back(above("p2_hprime_nonhermitian", hermiticity_defect(hp_m), 0.0));
    }
    return r;
}

SuiteReport fieldops_suite() {
    SuiteReport r{"fieldops", {}};
    const int dim = 16;
    const double w = std::sqrt(3.0);
    const auto fields = field::build_phi_pi_fock(w, dim);
    const CornerMask mask({dim});
    const MatrixXc id = MatrixXc::Identity(dim, dim);
    r.checks.push_back(at_most("fock_canonical_commutator",
                               mask.restricted_max_abs(commutator(fields.pi, fields.phi).entries + complex(0, 1) * id),
                               1e-12));
    r.checks.push_back(at_most("fock_phi_hermitian", hermiticity_defect(fields.phi), 1e-12));
    r.checks.push_back(at_most("fock_pi_hermitian", hermiticity_defect(fields.pi), 1e-12));

    const field::SiteGrid g{64, 4.0};
    double grid_res = 0.0;
    double band = 0.0;
    for (const auto& psi : field::band_limited_test_vectors(g, 4)) {
        grid_res = std::max(grid_res, field::grid_commutator_residual(g, psi));
        band = std::max(band, field::out_of_band_fraction(g, psi));
    }
    r.checks.push_back(at_most("grid_canonical_commutator", grid_res, 1e-8));
    r.checks.push_back(at_most("grid_test_vectors_band_limited", band, 1e-9));
    r.checks.push_back(at_most("grid_pi_hermitian", hermiticity_defect(field::build_pi_grid(g)), 1e-12));

    // Single P1 mode with lambda = omega = sqrt(3): the same phi, Pi obey
    // i[H, phi] = Pi and i[H', phi] = -Pi.
    const OperatorMatrix h = field::build_H_modes({SpatialMomentum{std::sqrt(2.0), 0.0, 0.0}}, kMass, dim);
    const OperatorMatrix hp = field::build_Hprime_modes({kP1Mode}, kMass, dim);
    const auto rep = field::check_evolution_commutators(h, hp, fields.phi, fields.pi, mask);
    r.checks.push_back(at_most("t_evolution_commutator", rep.t_residual, 1e-10));
    r.checks.push_back(at_most("z_evolution_commutator", rep.z_residual, 1e-10));
    r.checks.push_back(above("z_evolution_sign_flip", rep.z_residual_same_sign, 0.1));
    return r;
}

SuiteReport evolution_suite(std::uint64_t seed) {
    SuiteReport r{"evolution", {}};
    const double z = 1.0;

    // Transported phi keeps its real spectrum under non-hermitian H'.
    for (int dim : {4, 16, 32}) {
        const auto fields = field::build_phi_pi_fock(1.0, dim);
        const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(dim, seed));
        const OperatorMatrix moved = zevo::heisenberg_transport(fields.phi, z, ctx);
        Eigen::SelfAdjointEigenSolver<MatrixXc> ref(fields.phi.entries);
        Eigen::ComplexEigenSolver<MatrixXc> got(moved.entries, false);
        std::vector<complex> ev(got.eigenvalues().data(), got.eigenvalues().data() + dim);
        std::sort(ev.begin(), ev.end(), [](complex a, complex b) { return a.real() < b.real(); });
        double drift = 0.0;
        double imag = 0.0;
        for (int i = 0; i < dim; ++i) {
            drift = std::max(drift, std::abs(ev[static_cast<std::size_t>(i)] - ref.eigenvalues()(i)));
            imag = std::max(imag, std::abs(ev[static_cast<std::size_t>(i)].imag()));
        }
        const std::string tag = "_dim" + std::to_string(dim);
        r.checks.push_back(at_most("transported_spectrum_drift" + tag, drift, 1e-8));
        r.checks.push_back(at_most("transported_spectrum_imag" + tag, imag, 1e-8));
        r.checks.push_back(above("transported_phi_nonhermitian" + tag, hermiticity_defect(moved), 0.0));
    }

    // Schroedinger vs Heisenberg over 50 random states.
    {
        const int dim = 4;
        const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(dim, seed));
        const OperatorMatrix op = zevo::hermitian_fixture(dim, seed + 1);
        const OperatorMatrix moved = zevo::heisenberg_transport(op, z, ctx);
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const VectorXc psi = zevo::random_state(dim, seed + 100 + static_cast<std::uint64_t>(s));
            const auto pair = zevo::evolve_pair(zevo::StatePair::at_origin(psi), z, ctx);
            const complex schr = zevo::expectation(pair, op);
            const complex heis = psi.dot(moved.entries * psi);
            worst = std::max(worst, std::abs(schr - heis));
        }
        r.checks.push_back(at_most("schroedinger_heisenberg", worst, 1e-10));
    }

    for (int dim : {2, 4}) {
        const auto fields = field::build_phi_pi_fock(1.0, dim == 2 ? 4 : dim);
        const OperatorMatrix phi = dim == 2 ? OperatorMatrix(fields.phi.entries.topLeftCorner(2, 2), "phi") : fields.phi;
        const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(dim, seed));
        const auto rep = zevo::left_right_eigen_check(phi, z, ctx);
        const std::string tag = "_dim" + std::to_string(dim);
        r.checks.push_back(at_most("right_eigen_residual" + tag, rep.right_residual, 1e-9));
        r.checks.push_back(at_most("left_eigen_residual" + tag, rep.left_residual, 1e-9));
        r.checks.push_back(above("left_right_overlap_defect" + tag, rep.overlap_defect, 1e-3));
    }

    {
        const int dim = 8;
        const zevo::EvolutionContext ctx(zevo::nonhermitian_fixture(dim, seed));
        const VectorXc psi = zevo::random_state(dim, seed + 7);
        const auto once = zevo::evolve_pair(zevo::StatePair::at_origin(psi), 0.7, ctx);
        const auto twice = zevo::evolve_pair(zevo::evolve_pair(zevo::StatePair::at_origin(psi), 0.3, ctx), 0.4, ctx);
        const double d = std::max((once.right - twice.right).cwiseAbs().maxCoeff(),
                                  (once.left - twice.left).cwiseAbs().maxCoeff());
        r.checks.push_back(at_most("group_law", d, 1e-10));
    }

    // Hermitian H' collapses to unitary evolution.
    {
        const int dim = 8;
        const zevo::EvolutionContext ctx(zevo::hermitian_fixture(dim, seed));
        const OperatorMatrix op = zevo::hermitian_fixture(dim, seed + 3);
        const VectorXc psi = zevo::random_state(dim, seed + 5);
        const auto p = zevo::evolve_pair(zevo::StatePair::at_origin(psi), 1.3, ctx);
        r.checks.push_back(at_most("hermitian_left_equals_right", (p.left - p.right).cwiseAbs().maxCoeff(), 1e-10));
        r.checks.push_back(at_most("hermitian_norm_conserved", std::abs(p.right.norm() - psi.norm()), 1e-12));
        r.checks.push_back(at_most("hermitian_expectation_real", std::abs(zevo::expectation(p, op).imag()), 1e-12));
        const auto rep = zevo::left_right_eigen_check(op, 1.3, ctx);
        r.checks.push_back(at_most("hermitian_overlap_defect", rep.overlap_defect, 1e-10));
    }

    r.checks.push_back(at_most("normal_fixture_normality", zevo::normality_check(zevo::normal_fixture(4, seed)), 1e-12));

    // Normality of the P2-pair H' over {k} and {k, -k}: reported on the full
    // truncated space and asserted off the truncation corner.
    {
        const auto real = algebra::realize_p2_pair(kP2Mode, kMass, 8);
        for (const auto& modes : {std::vector<MomentumTriple>{kP2Mode}, std::vector<MomentumTriple>{kP2Mode, kP2Mode.negated()}}) {
            const OperatorMatrix hp = algebra::build_hprime_modes(modes, kMass, real);
            const std::string tag = modes.size() == 1 ? "_single" : "_pair";
            r.checks.push_back(report("p2_hprime_normality_full" + tag, zevo::normality_check(hp)));
            r.checks.push_back(
                at_most("p2_hprime_normality_off_corner" + tag, zevo::normality_check(hp, real.corner_mask()), 1e-8));
        }
    }
    return r;
}

OracleAgreement oracle_agreement(const lattice::LatticeSpec4D& spec, std::uint64_t seed, int configurations) {
    const auto form = lattice::build_action(spec);
    OracleAgreement out;
    for (int c = 0; c < configurations; ++c) {
        const auto bt = lattice::random_boundary(spec, lattice::Axis::T, seed, static_cast<std::uint64_t>(c));
        const auto d = lattice::amplitude_direct(form, bt);
        const auto t = lattice::amplitude_sliced(form, bt, lattice::Axis::T);
        const auto z = lattice::amplitude_sliced(form, lattice::reorient(bt), lattice::Axis::Z);
        out.direct_vs_t = std::max(out.direct_vs_t, lattice::relative_deviation(t, d));
        out.direct_vs_z = std::max(out.direct_vs_z, lattice::relative_deviation(z, d));
        out.t_vs_z = std::max(out.t_vs_z, lattice::relative_deviation(t, z));
    }
    return out;
}

SuiteReport oracle_suite(const SuiteOptions& opts) {
    SuiteReport r{"oracle", {}};
    const auto& spec = opts.lattice;
    const auto agree = oracle_agreement(spec, opts.seed, opts.configurations);
    r.checks.push_back(at_most("direct_vs_t_sliced", agree.direct_vs_t, 1e-8));
    r.checks.push_back(at_most("direct_vs_z_sliced", agree.direct_vs_z, 1e-8));
    r.checks.push_back(at_most("t_sliced_vs_z_sliced", agree.t_vs_z, 1e-8));

    const auto form = lattice::build_action(spec);

    // log A is quadratic along any boundary direction.
    {
        const auto base = lattice::random_boundary(spec, lattice::Axis::T, opts.seed, 0);
        const auto dir = lattice::random_boundary(spec, lattice::Axis::T, opts.seed, 1);
        auto along = [&](double s) {
            auto b = base;
            for (auto [dst, src] : {std::pair{&b.initial, &dir.initial}, std::pair{&b.final, &dir.final},
                                    std::pair{&b.side_initial, &dir.side_initial},
                                    std::pair{&b.side_final, &dir.side_final}})
                for (std::size_t i = 0; i < dst->size(); ++i) (*dst)[i] += s * (*src)[i];
            return lattice::amplitude_direct(form, b).log_value;
        };
        const complex l0 = along(-1.0), l1 = along(0.0), l2 = along(1.0), l3 = along(2.0);
        const complex d1 = l2 - 2.0 * l1 + l0;
        const complex d2 = l3 - 2.0 * l2 + l1;
        r.checks.push_back(at_most("gaussian_second_difference", std::abs(d1 - d2) / std::max(1.0, std::abs(d1)), 1e-8));
    }

    // Interior matrix stays invertible for delta > 0.
    {
        Eigen::ComplexEigenSolver<MatrixXc> es(form.interior, false);
        r.checks.push_back(above("interior_min_abs_eigenvalue", es.eigenvalues().cwiseAbs().minCoeff(), 0.0));
    }

    // Normalized log amplitudes converge as delta -> 0+.
    {
        std::vector<complex> vals;
        for (double delta : {0.2, 0.1, 0.05}) {
            auto s = spec;
            s.delta = delta;
            const auto f = lattice::build_action(s);
            const auto b = lattice::random_boundary(s, lattice::Axis::T, opts.seed, 0);
            vals.push_back(lattice::normalized(lattice::amplitude_direct(f, b),
                                               lattice::amplitude_direct(f, lattice::zero_boundary(s, lattice::Axis::T)))
                               .log_value);
        }
        const double first = std::abs(vals[1] - vals[0]);
        const double second = std::abs(vals[2] - vals[1]);
        r.checks.push_back(at_most("regulator_cauchy_ratio", second / first, 1.0));
    }
    return r;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opts) {
    if (name == "algebra") return algebra_suite();
    if (name == "fieldops") return fieldops_suite();
    if (name == "evolution") return evolution_suite(opts.seed);
    if (name == "oracle") return oracle_suite(opts);
    if (name == "all") {
        SuiteReport all{"all", {}};
        for (const auto& part : {algebra_suite(), fieldops_suite(), evolution_suite(opts.seed), oracle_suite(opts)})
            for (auto c : part.checks) {
                c.name = part.suite + "." + c.name;
                all.checks.push_back(std::move(c));
            }
        return all;
    }
    throw InvalidInput("unknown suite '" + name + "'");
}

}  // namespace zslice::inv
