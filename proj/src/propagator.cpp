#include "zslice/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "zslice/errors.hpp"

namespace zslice::prop {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_regulated(const MassParam& m) {
    m.validate();
    if (!(m.eps > 0.0)) throw PreconditionError("propagator quadrature needs eps > 0");
}

void require_finite_point(const SpacetimePoint& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) || !std::isfinite(p.t)) {
        throw DomainError("non-finite spacetime point");
    }
}

// Sums slab_value(0..slabs-1) in index order. Slabs are evaluated in
// parallel, but the reduction order is fixed, so the result is bitwise
// independent of the thread count.
template <class SlabFn>
complex ordered_parallel_sum(int slabs, SlabFn&& slab_value) {
    std::vector<complex> partial(static_cast<std::size_t>(slabs));
    const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), static_cast<unsigned>(slabs)));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (int i = next++; i < slabs; i = next++) partial[static_cast<std::size_t>(i)] = slab_value(i);
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = slabs;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    complex total = 0.0;
    for (const complex& v : partial) total += v;
    return total;
}

std::vector<double> nodes_of(const QuadratureSpec& q) {
    std::vector<double> k(static_cast<std::size_t>(q.nodes));
    for (int i = 0; i < q.nodes; ++i) k[static_cast<std::size_t>(i)] = q.node(i);
    return k;
}

// e^{i sign k c} for every node k.
std::vector<complex> phases(const std::vector<double>& k, double c, double sign) {
    std::vector<complex> out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) out[i] = std::polar(1.0, sign * k[i] * c);
    return out;
}

// [e^{-i w s} Theta(s) + e^{i w s} Theta(-s)] / (2 w), the t-ordered analog of
// bracket_closed.
complex t_bracket(complex w, double s) {
    if (s > 0.0) return std::exp(-kI * w * s) / (2.0 * w);
    if (s < 0.0) return std::exp(kI * w * s) / (2.0 * w);
    return 1.0 / (2.0 * w);
}

complex zform_sum(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    const std::vector<double> k = nodes_of(q);
    const auto ex = phases(k, p.x, -1.0);
    const auto ey = phases(k, p.y, -1.0);
    const auto et = phases(k, p.t, +1.0);
    const double h = q.spacing();
    const complex sum = ordered_parallel_sum(q.nodes, [&](int i) {
        complex slab = 0.0;
        for (int j = 0; j < q.nodes; ++j) {
            const complex exy = ex[static_cast<std::size_t>(i)] * ey[static_cast<std::size_t>(j)];
            for (int l = 0; l < q.nodes; ++l) {
                const auto li = static_cast<std::size_t>(l);
                const complex lam = lambda_of({k[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(j)], k[li]}, m).lambda;
                slab += exy * et[li] * bracket_closed(lam, p.z);
            }
        }
        return slab;
    });
    return -kI * sum * (h * h * h) / (kTwoPi * kTwoPi * kTwoPi);
}

complex tform_sum(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    const std::vector<double> k = nodes_of(q);
    const auto ex = phases(k, p.x, +1.0);
    const auto ey = phases(k, p.y, +1.0);
    const auto ez = phases(k, p.z, +1.0);
    const double h = q.spacing();
    const complex sum = ordered_parallel_sum(q.nodes, [&](int i) {
        complex slab = 0.0;
        for (int j = 0; j < q.nodes; ++j) {
            const complex exy = ex[static_cast<std::size_t>(i)] * ey[static_cast<std::size_t>(j)];
            for (int l = 0; l < q.nodes; ++l) {
                const auto li = static_cast<std::size_t>(l);
                const complex w =
                    omega_regulated({k[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(j)], k[li]}, m);
                slab += exy * ez[li] * t_bracket(w, p.t);
            }
        }
        return slab;
    });
    return -kI * sum * (h * h * h) / (kTwoPi * kTwoPi * kTwoPi);
}

complex fourd_sum(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    const std::vector<double> k = nodes_of(q);
    const auto ex = phases(k, p.x, -1.0);
    const auto ey = phases(k, p.y, -1.0);
    const auto ez = phases(k, p.z, -1.0);
    const auto et = phases(k, p.t, +1.0);
    const double h = q.spacing();
    const complex sum = ordered_parallel_sum(q.nodes, [&](int i) {
        complex slab = 0.0;
        for (int j = 0; j < q.nodes; ++j) {
            const complex exy = ex[static_cast<std::size_t>(i)] * ey[static_cast<std::size_t>(j)];
            for (int l = 0; l < q.nodes; ++l) {
                const complex exyz = exy * ez[static_cast<std::size_t>(l)];
                for (int s = 0; s < q.nodes; ++s) {
                    const auto si = static_cast<std::size_t>(s);
                    const FourMomentum km{k[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(j)],
                                          k[static_cast<std::size_t>(l)], k[si]};
                    slab += exyz * et[si] * momentum_propagator(km, m);
                }
            }
        }
        return slab;
    });
    const double h2 = h * h;
    return sum * (h2 * h2) / (kTwoPi * kTwoPi * kTwoPi * kTwoPi);
}

template <class SumFn>
PropagatorValue with_error_estimate(Method method, const SpacetimePoint& p, const MassParam& m,
                                    const QuadratureSpec& q, SumFn&& sum) {
    require_regulated(m);
    require_finite_point(p);
    q.validate();
    const complex fine = sum(p, m, q);
    const complex coarse = sum(p, m, q.halved());
    return {fine, method, std::abs(fine - coarse)};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw PreconditionError("quadrature cutoff must be positive");
    if (nodes < 16) throw PreconditionError("quadrature needs at least 16 nodes per axis");
    if (!(offset > 0.0 && offset < 1.0)) throw PreconditionError("quadrature offset must lie in (0, 1)");
}

QuadratureSpec default_quadrature_3d(const MassParam& m) {
    m.validate();
    return {6.0 / m.m, 48, 0.5};
}

QuadratureSpec default_quadrature_4d(const MassParam& m) {
    m.validate();
    return {6.0 / m.m, 32, 0.5};
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::ZForm: return "zform";
        case Method::TForm: return "tform";
        case Method::FourD: return "fourd";
    }
    return "?";
}

complex bracket_closed(complex lambda, double z) {
    if (lambda == complex(0.0)) throw PoleError("bracket has a pole at lambda = 0");
    if (z > 0.0) return std::exp(kI * lambda * z) / (2.0 * lambda);
    if (z < 0.0) return std::exp(-kI * lambda * z) / (2.0 * lambda);
    return 1.0 / (2.0 * lambda);
}

complex kz_contour_numeric(complex lambda, double z, const QuadratureSpec& q) {
    if (!(lambda.imag() > 0.0)) throw PreconditionError("contour integral needs Im(lambda) > 0; the pole sits on the real axis");
    q.validate();
    const complex lam2 = lambda * lambda;
    const double h = q.spacing();
    constexpr int kSlabSize = 4096;
    const int slabs = (q.nodes + kSlabSize - 1) / kSlabSize;
    const complex sum = ordered_parallel_sum(slabs, [&](int s) {
        complex slab = 0.0;
        const int end = std::min(q.nodes, (s + 1) * kSlabSize);
        for (int i = s * kSlabSize; i < end; ++i) {
            const double k = q.node(i);
            slab += std::polar(1.0, -k * z) / (k * k - lam2);
        }
        return slab;
    });
    return -kI * sum * h / kTwoPi;
}

PropagatorValue propagator_zform(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    return with_error_estimate(Method::ZForm, p, m, q, zform_sum);
}

PropagatorValue propagator_tform(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    return with_error_estimate(Method::TForm, p, m, q, tform_sum);
}

PropagatorValue propagator_4d(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    return with_error_estimate(Method::FourD, p, m, q, fourd_sum);
}

PropagatorValue propagator(Method method, const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q) {
    switch (method) {
        case Method::ZForm: return propagator_zform(p, m, q);
        case Method::TForm: return propagator_tform(p, m, q);
        case Method::FourD: return propagator_4d(p, m, q);
    }
    throw PreconditionError("unknown propagator method");
}

complex momentum_propagator(const FourMomentum& k, const MassParam& m) {
    m.validate();
    const double re = k.kt * k.kt - k.kx * k.kx - k.ky * k.ky - k.kz * k.kz - m.m * m.m;
    const complex denom(re, m.eps);
    if (denom == complex(0.0)) throw PoleError("momentum-space propagator is on shell with eps = 0");
    return 1.0 / denom;
}

unsigned thread_count() {
    if (const char* env = std::getenv("ZSLICE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace zslice::prop
