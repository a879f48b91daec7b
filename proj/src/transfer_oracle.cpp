#include "zslice/transfer_oracle.hpp"

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "zslice/errors.hpp"
#include "zslice/random.hpp"

namespace zslice::lattice {

namespace {

constexpr complex kI{0.0, 1.0};

// Smallest regulated diagonal weight spacing^4*delta allowed relative to the
// gradient stencil scale spacing^2.
constexpr double kMinRelativeRegulator = 1e-12;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Global site index over interior plus boundary walls, or -1 for sites
// outside the variable set (t/z corners and beyond).
class SiteMap {
public:
    explicit SiteMap(const LatticeSpec4D& s) : s_(s) {
        n_int_ = s.interior_sites();
        wall_t_ = s.t_wall_sites();
        wall_z_ = s.z_wall_sites();
    }

    int n_total() const { return n_int_ + 2 * wall_t_ + 2 * wall_z_; }
    int n_interior() const { return n_int_; }

    int index(int t, int x, int y, int z) const {
        x = wrap(x, s_.n_x);
        y = wrap(y, s_.n_y);
        const bool t_in = t >= 0 && t < s_.n_t;
        const bool z_in = z >= 0 && z < s_.n_z;
        if (t_in && z_in) return ((t * s_.n_x + x) * s_.n_y + y) * s_.n_z + z;
        if (!t_in && !z_in) return -1;
        if (!t_in) {
            if (t != -1 && t != s_.n_t) return -1;
            const int wall = t == -1 ? 0 : 1;
            return n_int_ + wall * wall_t_ + (x * s_.n_y + y) * s_.n_z + z;
        }
        if (z != -1 && z != s_.n_z) return -1;
        const int wall = z == -1 ? 0 : 1;
        return n_int_ + 2 * wall_t_ + wall * wall_z_ + (t * s_.n_x + x) * s_.n_y + y;
    }

private:
    static int wrap(int v, int n) { return ((v % n) + n) % n; }

    LatticeSpec4D s_;
    int n_int_ = 0;
    int wall_t_ = 0;
    int wall_z_ = 0;
};

// Sum of principal logs of the eigenvalues of -i*block.
complex logdet_eigen(const MatrixXc& block) {
    Eigen::ComplexEigenSolver<MatrixXc> es(complex(0.0, -1.0) * block, false);
    if (es.info() != Eigen::Success) throw SingularMatrixError("slice block eigensolver did not converge");
    complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const complex ev = es.eigenvalues()(i);
        if (std::abs(ev) == 0.0) throw SingularMatrixError("singular slice block");
        acc += std::log(ev);
    }
    return acc;
}

std::vector<std::vector<int>> slice_indices(const LatticeSpec4D& s, Axis axis) {
    const SiteMap map(s);
    const int n_slices = axis == Axis::T ? s.n_t : s.n_z;
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n_slices));
    for (int t = 0; t < s.n_t; ++t)
        for (int x = 0; x < s.n_x; ++x)
            for (int y = 0; y < s.n_y; ++y)
                for (int z = 0; z < s.n_z; ++z)
                    out[static_cast<std::size_t>(axis == Axis::T ? t : z)].push_back(map.index(t, x, y, z));
    return out;
}

void check_boundary(const LatticeSpec4D& s, const BoundaryData& b) {
    const auto n_init = static_cast<std::size_t>(b.axis == Axis::T ? s.t_wall_sites() : s.z_wall_sites());
    const auto n_side = static_cast<std::size_t>(b.axis == Axis::T ? s.z_wall_sites() : s.t_wall_sites());
    if (b.initial.size() != n_init || b.final.size() != n_init || b.side_initial.size() != n_side ||
        b.side_final.size() != n_side)
        throw DimensionMismatch("boundary data does not match lattice wall sizes");
}

}  // namespace

std::string_view to_string(Axis a) noexcept { return a == Axis::T ? "T" : "Z"; }

void LatticeSpec4D::validate() const {
    if (n_t < 2 || n_x < 2 || n_y < 2 || n_z < 2) throw DomainError("lattice extents must be >= 2");
    if (!finite_positive(spacing)) throw DomainError("lattice spacing must be finite and > 0");
    if (!finite_positive(m)) throw DomainError("mass must be finite and > 0");
    if (!std::isfinite(delta) || delta <= 0.0) throw RegulatorError("regulator delta must be > 0");
    if (static_cast<long long>(n_t) * n_x * n_y * n_z > kMaxInteriorSites)
        throw SizeCapError("lattice has " + std::to_string(static_cast<long long>(n_t) * n_x * n_y * n_z) +
                           " interior sites, cap is " + std::to_string(kMaxInteriorSites));
    if (delta * spacing * spacing < kMinRelativeRegulator)
        throw RegulatorError("regulator too small for lattice spacing");
}

BoundaryData reorient(const BoundaryData& b) {
    BoundaryData out;
    out.axis = b.axis == Axis::T ? Axis::Z : Axis::T;
    out.initial = b.side_initial;
    out.final = b.side_final;
    out.side_initial = b.initial;
    out.side_final = b.final;
    return out;
}

BoundaryData zero_boundary(const LatticeSpec4D& spec, Axis axis) {
    BoundaryData b;
    b.axis = Axis::T;
    b.initial.assign(static_cast<std::size_t>(spec.t_wall_sites()), 0.0);
    b.final.assign(static_cast<std::size_t>(spec.t_wall_sites()), 0.0);
    b.side_initial.assign(static_cast<std::size_t>(spec.z_wall_sites()), 0.0);
    b.side_final.assign(static_cast<std::size_t>(spec.z_wall_sites()), 0.0);
    return axis == Axis::T ? b : reorient(b);
}

BoundaryData random_boundary(const LatticeSpec4D& spec, Axis axis, std::uint64_t seed, std::uint64_t index) {
    BoundaryData b = zero_boundary(spec, Axis::T);
    CounterRng rng(splitmix64(seed, index));
    for (auto* wall : {&b.initial, &b.final, &b.side_initial, &b.side_final})
        for (double& v : *wall) v = rng.uniform(-1.0, 1.0);
    return axis == Axis::T ? b : reorient(b);
}

Eigen::VectorXd boundary_vector(const LatticeSpec4D& spec, const BoundaryData& b) {
    check_boundary(spec, b);
    const BoundaryData t = b.axis == Axis::T ? b : reorient(b);
    Eigen::VectorXd v(spec.boundary_sites());
    Eigen::Index k = 0;
    for (const auto* wall : {&t.initial, &t.final, &t.side_initial, &t.side_final})
        for (double x : *wall) v(k++) = x;
    return v;
}

QuadraticLatticeForm build_action(const LatticeSpec4D& spec) {
    spec.validate();
    const SiteMap map(spec);
    const int n = map.n_total();
    MatrixXc q = MatrixXc::Zero(n, n);

    const double e2 = spec.spacing * spec.spacing;
    const complex mass_weight = -e2 * e2 * complex(spec.m * spec.m, -spec.delta);
    constexpr std::array<std::array<int, 4>, 4> kSteps{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    constexpr std::array<double, 4> kSign{1.0, -1.0, -1.0, -1.0};

    for (int t = -1; t <= spec.n_t; ++t)
        for (int x = 0; x < spec.n_x; ++x)
            for (int y = 0; y < spec.n_y; ++y)
                for (int z = -1; z <= spec.n_z; ++z) {
                    const int a = map.index(t, x, y, z);
                    if (a < 0) continue;
                    q(a, a) += mass_weight;
                    for (std::size_t mu = 0; mu < 4; ++mu) {
                        const auto& d = kSteps[mu];
                        const int b = map.index(t + d[0], x + d[1], y + d[2], z + d[3]);
                        if (b < 0) continue;
                        const double w = kSign[mu] * e2;
                        q(a, a) += w;
                        q(b, b) += w;
                        q(a, b) -= w;
                        q(b, a) -= w;
                    }
                }

    const int ni = map.n_interior();
    const int nb = n - ni;
    QuadraticLatticeForm form;
    form.spec = spec;
    form.interior = q.topLeftCorner(ni, ni);
    form.coupling = q.topRightCorner(ni, nb);
    form.boundary = q.bottomRightCorner(nb, nb);
    return form;
}

double relative_deviation(const Amplitude& a, const Amplitude& b) {
    return std::abs(std::exp(a.log_value - b.log_value) - 1.0);
}

Amplitude normalized(const Amplitude& a, const Amplitude& reference) {
    return Amplitude{a.log_value - reference.log_value};
}

Amplitude amplitude_direct(const QuadraticLatticeForm& form, const BoundaryData& b) {
    const Eigen::VectorXcd phi_b = boundary_vector(form.spec, b).cast<complex>();
    const Eigen::Index n = form.interior.rows();

    // Unpivoted LDL^T of the complex symmetric matrix -i Q_II. Its symmetric
    // real part is spacing^4 * delta * I, so every pivot has positive real
    // part and the sum of principal logs of the pivots is log det on the
    // branch continuous from real positive definite matrices.
    MatrixXc f = complex(0.0, -1.0) * form.interior;
    const double scale = f.cwiseAbs().maxCoeff();
    complex logdet{0.0, 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
        const complex d = f(k, k);
        if (std::abs(d) <= 1e-14 * scale) throw RegulatorError("interior matrix singular: regulator too small");
        logdet += std::log(d);
        const Eigen::Index rest = n - k - 1;
        if (rest == 0) break;
        Eigen::VectorXcd l = f.col(k).tail(rest) / d;
        f.bottomRightCorner(rest, rest).noalias() -= d * l * l.transpose();
        f.col(k).tail(rest) = l;
    }

    // Solve (-i Q_II) x = -i J with the factors, so x = Q_II^-1 J.
    Eigen::VectorXcd x = complex(0.0, -1.0) * (form.coupling * phi_b);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index r = k + 1; r < n; ++r) x(r) -= f(r, k) * x(k);
    for (Eigen::Index k = 0; k < n; ++k) x(k) /= f(k, k);
    for (Eigen::Index k = n - 1; k >= 0; --k)
        for (Eigen::Index r = k + 1; r < n; ++r) x(k) -= f(r, k) * x(r);

    const Eigen::VectorXcd j = form.coupling * phi_b;
    const complex quad = phi_b.dot(form.boundary * phi_b) - (j.transpose() * x).value();
    return Amplitude{-0.5 * logdet + 0.5 * kI * quad};
}

Amplitude amplitude_sliced(const QuadraticLatticeForm& form, const BoundaryData& b, Axis axis) {
    if (b.axis != axis) throw PreconditionError("boundary data axis does not match slicing axis");
    const LatticeSpec4D& s = form.spec;
    const Eigen::VectorXcd phi_b = boundary_vector(s, b).cast<complex>();
    const auto slices = slice_indices(s, axis);
    const Eigen::Index nb = form.boundary.rows();
    const auto ns = static_cast<Eigen::Index>(slices.front().size());

    auto block = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
        MatrixXc out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = form.interior(rows[r], cols[c]);
        return out;
    };
    auto coupling_rows = [&](const std::vector<int>& rows) {
        MatrixXc out(static_cast<Eigen::Index>(rows.size()), nb);
        for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = form.coupling.row(rows[r]);
        return out;
    };

    // Running kernel over [boundary, current slice].
    MatrixXc m(nb + ns, nb + ns);
    m.topLeftCorner(nb, nb) = form.boundary;
    m.bottomLeftCorner(ns, nb) = coupling_rows(slices[0]);
    m.topRightCorner(nb, ns) = m.bottomLeftCorner(ns, nb).transpose();
    m.bottomRightCorner(ns, ns) = block(slices[0], slices[0]);

    complex logdet{0.0, 0.0};
    for (std::size_t k = 0; k < slices.size(); ++k) {
        const bool has_next = k + 1 < slices.size();
        const Eigen::Index nn = has_next ? static_cast<Eigen::Index>(slices[k + 1].size()) : 0;
        MatrixXc ext = MatrixXc::Zero(nb + ns + nn, nb + ns + nn);
        ext.topLeftCorner(nb + ns, nb + ns) = m;
        if (has_next) {
            const MatrixXc cb = coupling_rows(slices[k + 1]);
            const MatrixXc cs = block(slices[k + 1], slices[k]);
            ext.block(nb + ns, 0, nn, nb) = cb;
            ext.block(0, nb + ns, nb, nn) = cb.transpose();
            ext.block(nb + ns, nb, nn, ns) = cs;
            ext.block(nb, nb + ns, ns, nn) = cs.transpose();
            ext.bottomRightCorner(nn, nn) = block(slices[k + 1], slices[k + 1]);
        }

        // Integrate out the current slice.
        const MatrixXc q_ss = ext.block(nb, nb, ns, ns);
        logdet += logdet_eigen(q_ss);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < nb; ++i) keep.push_back(i);
        for (Eigen::Index i = nb + ns; i < nb + ns + nn; ++i) keep.push_back(i);
        const auto nk = static_cast<Eigen::Index>(keep.size());
        MatrixXc q_rr(nk, nk), q_rs(nk, ns);
        for (Eigen::Index r = 0; r < nk; ++r) {
            for (Eigen::Index c = 0; c < nk; ++c) q_rr(r, c) = ext(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]);
            q_rs.row(r) = ext.block(keep[static_cast<std::size_t>(r)], nb, 1, ns);
        }
        const Eigen::PartialPivLU<MatrixXc> lu(q_ss);
        m = q_rr - q_rs * lu.solve(q_rs.transpose());
    }

    const complex quad = phi_b.dot(m * phi_b);
    return Amplitude{-0.5 * logdet + 0.5 * kI * quad};
}

}  // namespace zslice::lattice
