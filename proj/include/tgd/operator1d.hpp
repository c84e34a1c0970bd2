#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tgd/error.hpp"
#include "tgd/kernel.hpp"
#include "tgd/quadrature.hpp"

namespace tgd {

enum class Order { first, second, smooth };
enum class Mode { float_normalized, integer_scaled };
enum class Provenance { interval_integral, direct_sample };

constexpr std::string_view to_string(Order o) noexcept {
    switch (o) {
        case Order::first: return "first";
        case Order::second: return "second";
        case Order::smooth: return "smooth";
    }
    return "unknown";
}
constexpr std::string_view to_string(Mode m) noexcept {
    return m == Mode::float_normalized ? "float_normalized" : "integer_scaled";
}
constexpr std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::interval_integral ? "interval_integral" : "direct_sample";
}

inline Order parse_order(std::string_view s) {
    if (s == "first" || s == "1") return Order::first;
    if (s == "second" || s == "2") return Order::second;
    if (s == "smooth") return Order::smooth;
    throw Error(ErrorCode::InvalidParam, "unknown order '" + std::string(s) + "'");
}
inline Mode parse_mode(std::string_view s) {
    if (s == "float_normalized") return Mode::float_normalized;
    if (s == "integer_scaled") return Mode::integer_scaled;
    throw Error(ErrorCode::InvalidParam, "unknown mode '" + std::string(s) + "'");
}
inline Provenance parse_provenance(std::string_view s) {
    if (s == "interval_integral") return Provenance::interval_integral;
    if (s == "direct_sample") return Provenance::direct_sample;
    throw Error(ErrorCode::InvalidParam, "unknown provenance '" + std::string(s) + "'");
}

/// Continuous operator T (first), R (second) or S (smooth) on [-W, W].
class ContinuousOperator {
public:
    ContinuousOperator(KernelSpec k, Order order) : kernel_(std::move(k)), order_(order), smooth_(kernel_) {
        C1_ = 1.0 / (2.0 * kernel_moment(kernel_, 1));
        C2_ = 1.0 / kernel_moment(kernel_, 2);
        center_mass_ = order_ == Order::second ? -2.0 * kernel_moment(kernel_, 0) : 0.0;
    }

    /// Pointwise value. The Dirac part of R at t = 0 is carried by center_mass().
    double operator()(double t) const {
        switch (order_) {
            case Order::first:
                if (t > 0.0) return -eval_kernel(kernel_, t);
                if (t < 0.0) return eval_kernel(kernel_, -t);
                return 0.0;
            case Order::second:
                return t == 0.0 ? 0.0 : eval_kernel(kernel_, std::abs(t));
            case Order::smooth:
                return smooth_(t);
        }
        return 0.0;
    }

    /// Integral over [a, b] of the regular part.
    double integrate(double a, double b) const {
        if (b < a) return -integrate(b, a);
        if (order_ == Order::smooth) {
            if (a < 0.0 && b > 0.0) return integrate(a, 0.0) + integrate(0.0, b);
            return quad::simpson([this](double x) { return smooth_(x); }, a, b, 256);
        }
        auto pos = [this](double lo, double hi) { return kernel_cdf(kernel_, hi) - kernel_cdf(kernel_, lo); };
        double neg_part = 0.0;
        double pos_part = 0.0;
        if (a < 0.0) neg_part = pos(std::max(0.0, -b), -a);
        if (b > 0.0) pos_part = pos(std::max(0.0, a), b);
        if (order_ == Order::first) return neg_part - pos_part;
        return neg_part + pos_part;
    }

    Order order() const noexcept { return order_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    const SmoothProfile& smooth() const noexcept { return smooth_; }
    double C1() const noexcept { return C1_; }
    double C2() const noexcept { return C2_; }
    double center_mass() const noexcept { return center_mass_; }

private:
    KernelSpec kernel_;
    Order order_;
    SmoothProfile smooth_;
    double C1_ = 0.0;
    double C2_ = 0.0;
    double center_mass_ = 0.0;
};

inline ContinuousOperator build_continuous(const KernelSpec& k, Order order) {
    const auto rep = validate_constraints(k);
    if (!rep.c1_ok || !rep.c2_ok) {
        throw Error(ErrorCode::ConstraintViolation, "kernel fails the normalization or monotonic constraint");
    }
    if (order == Order::smooth && !rep.c3_ok) {
        throw Error(ErrorCode::ConstraintViolation, "induced smooth operator fails the monotonic convexity constraint");
    }
    return ContinuousOperator(k, order);
}

/// (2N+1)-weight stencil listed from offset -N to +N.
struct DiscreteOperator1D {
    Order order = Order::first;
    int N = 0;
    std::vector<double> weights;
    Mode mode = Mode::float_normalized;
    double scale = 1.0;
    Provenance provenance = Provenance::interval_integral;
    double norm_constant = 1.0;
    bool constraint_violating = false;
    bool coarse_warning = false;

    double at(int offset) const { return weights[static_cast<std::size_t>(offset + N)]; }
};

/// C1 = 1/(-Σ i w_i) for first order, C2 = 2/Σ i² w_i for second order.
inline double norm_constant(const std::vector<double>& w, Order order) {
    const int N = static_cast<int>(w.size() / 2);
    long double m = 0.0L;
    for (int i = -N; i <= N; ++i) {
        const long double x = i;
        m += (order == Order::first ? x : x * x) * w[static_cast<std::size_t>(i + N)];
    }
    if (order == Order::first) return static_cast<double>(-1.0L / m);
    return static_cast<double>(2.0L / m);
}

namespace detail {

inline DiscreteOperator1D assemble(Order order, int N, const std::vector<double>& side, Provenance prov) {
    DiscreteOperator1D op;
    op.order = order;
    op.N = N;
    op.provenance = prov;
    op.weights.assign(static_cast<std::size_t>(2 * N + 1), 0.0);
    double side_sum = 0.0;
    for (int i = 1; i <= N; ++i) side_sum += side[static_cast<std::size_t>(i - 1)];
    std::vector<double> b(side.size());
    for (std::size_t i = 0; i < side.size(); ++i) b[i] = side[i] / side_sum;
    double normalized_sum = 0.0;
    for (double v : b) normalized_sum += v;
    for (int i = 1; i <= N; ++i) {
        const double v = b[static_cast<std::size_t>(i - 1)];
        op.weights[static_cast<std::size_t>(N - i)] = v;
        op.weights[static_cast<std::size_t>(N + i)] = order == Order::first ? -v : v;
    }
    if (order == Order::second) op.weights[static_cast<std::size_t>(N)] = -2.0 * normalized_sum;
    op.norm_constant = norm_constant(op.weights, order);
    return op;
}

inline void require_order(Order order) {
    if (order == Order::smooth) {
        throw Error(ErrorCode::InvalidParam, "only first and second order operators have difference stencils");
    }
}

} // namespace detail

/// Interval integrals of T or R over [i-1/2, i+1/2] with W = N + 1/2.
inline DiscreteOperator1D discretize(const ContinuousOperator& op, int N) {
    if (N < 1) throw Error(ErrorCode::DegenerateSize, "N must be at least 1");
    detail::require_order(op.order());
    const KernelSpec k = with_support(op.kernel(), N + 0.5);
    std::vector<double> side(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) {
        side[static_cast<std::size_t>(i - 1)] = kernel_cdf(k, i + 0.5) - kernel_cdf(k, i - 0.5);
    }
    return detail::assemble(op.order(), N, side, Provenance::interval_integral);
}

/// Center weight of the unnormalized interval-integral R stencil, 2∫₀^½ w - 2,
/// divided by the side sum; equals -2 for every valid kernel.
inline double second_order_center_closed_form(const KernelSpec& kernel, int N) {
    const KernelSpec k = with_support(kernel, N + 0.5);
    const double half = kernel_cdf(k, 0.5);
    return (2.0 * half - 2.0) / (kernel_cdf(k, k.W) - half);
}

namespace detail {

inline std::vector<double> sampled_side(const KernelSpec& kernel, int N) {
    const KernelSpec k = with_support(kernel, N + 0.5);
    std::vector<double> side(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) side[static_cast<std::size_t>(i - 1)] = eval_kernel(k, i);
    return side;
}

} // namespace detail

inline DiscreteOperator1D discretize_by_sampling(const KernelSpec& kernel, int N, Order order) {
    detail::require_order(order);
    if (N < 3) throw Error(ErrorCode::SampleTooCoarse, "direct sampling needs N >= 3");
    auto op = detail::assemble(order, N, detail::sampled_side(kernel, N), Provenance::direct_sample);
    op.coarse_warning = N < 5;
    return op;
}

/// Scale so the smallest nonzero magnitude becomes 1, round half away from zero,
/// and repair the center so the stencil sums to exactly zero.
inline DiscreteOperator1D to_integer_scale(const DiscreteOperator1D& in) {
    DiscreteOperator1D out = in;
    if (in.mode == Mode::integer_scaled) return out;
    const int N = in.N;
    double min_mag = 0.0;
    for (int i = 1; i <= N; ++i) {
        const double m = std::abs(in.at(-i));
        if (m > 0.0 && (min_mag == 0.0 || m < min_mag)) min_mag = m;
    }
    if (min_mag == 0.0) {
        out.mode = Mode::integer_scaled;
        return out;
    }
    const double base = 1.0 / min_mag;
    std::vector<double> side(static_cast<std::size_t>(N));
    double scale = base;
    for (int mult = 1; mult <= 1000; ++mult) {
        scale = base * mult;
        bool ordered = true;
        for (int i = 1; i <= N; ++i) {
            side[static_cast<std::size_t>(i - 1)] = std::round(in.at(-i) * scale);
            if (i > 1 && std::abs(in.at(-i)) < std::abs(in.at(-(i - 1))) &&
                !(std::abs(side[static_cast<std::size_t>(i - 1)]) < std::abs(side[static_cast<std::size_t>(i - 2)]))) {
                ordered = false;
            }
        }
        if (ordered) break;
    }
    double side_sum = 0.0;
    for (int i = 1; i <= N; ++i) {
        const double v = side[static_cast<std::size_t>(i - 1)];
        out.weights[static_cast<std::size_t>(N - i)] = v;
        out.weights[static_cast<std::size_t>(N + i)] = in.order == Order::first ? -v : v;
        side_sum += v;
    }
    out.weights[static_cast<std::size_t>(N)] = in.order == Order::second ? -2.0 * side_sum : 0.0;
    out.mode = Mode::integer_scaled;
    out.scale = scale;
    out.norm_constant = norm_constant(out.weights, in.order);
    return out;
}

/// Lanczos-style stencil from w(t) = 2t/W², sampled and side-normalized.
/// Violates the monotonic constraint; kept as a baseline.
inline DiscreteOperator1D baseline_ld_operator(int N) {
    if (N < 1) throw Error(ErrorCode::DegenerateSize, "N must be at least 1");
    const double W = N + 0.5;
    std::vector<double> side(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) side[static_cast<std::size_t>(i - 1)] = 2.0 * i / (W * W);
    auto op = detail::assemble(Order::first, N, side, Provenance::direct_sample);
    op.constraint_violating = true;
    return op;
}

/// Smooth operator weights on offsets -N..N, normalized to unit sum.
inline std::vector<double> smooth_weights(const KernelSpec& kernel, int N,
                                          Provenance prov = Provenance::interval_integral) {
    if (N < 0) throw Error(ErrorCode::DegenerateSize, "N must be non-negative");
    const ContinuousOperator op(with_support(kernel, N + 0.5), Order::smooth);
    std::vector<double> s(static_cast<std::size_t>(2 * N + 1));
    for (int i = 0; i <= N; ++i) {
        const double v = prov == Provenance::interval_integral ? op.integrate(i - 0.5, i + 0.5) : op(i);
        s[static_cast<std::size_t>(N + i)] = v;
        s[static_cast<std::size_t>(N - i)] = v;
    }
    long double total = 0.0L;
    for (double v : s) total += v;
    for (double& v : s) v = static_cast<double>(v / total);
    return s;
}

/// Stencil from sampled side weights without the coarse-size gate; used by
/// constructions that sample the continuous operator directly.
inline DiscreteOperator1D sample_operator(const KernelSpec& kernel, int N, Order order) {
    detail::require_order(order);
    if (N < 1) throw Error(ErrorCode::DegenerateSize, "N must be at least 1");
    return detail::assemble(order, N, detail::sampled_side(kernel, N), Provenance::direct_sample);
}

} // namespace tgd
