#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tgd/error.hpp"
#include "tgd/kernel.hpp"
#include "tgd/operator1d.hpp"
#include "tgd/rotation_weight.hpp"

namespace tgd {

enum class NDKind { directional_first, directional_second, partial_first, partial_second, lot };
enum class Construction { rotational, orthogonal };

constexpr std::string_view to_string(NDKind k) noexcept {
    switch (k) {
        case NDKind::directional_first: return "directional_first";
        case NDKind::directional_second: return "directional_second";
        case NDKind::partial_first: return "partial_first";
        case NDKind::partial_second: return "partial_second";
        case NDKind::lot: return "lot";
    }
    return "unknown";
}
constexpr std::string_view to_string(Construction c) noexcept {
    return c == Construction::rotational ? "rotational" : "orthogonal";
}

inline NDKind parse_nd_kind(std::string_view s) {
    for (auto k : {NDKind::directional_first, NDKind::directional_second, NDKind::partial_first,
                   NDKind::partial_second, NDKind::lot}) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorCode::InvalidParam, "unknown operator kind '" + std::string(s) + "'");
}
inline Construction parse_construction(std::string_view s) {
    if (s == "rotational") return Construction::rotational;
    if (s == "orthogonal") return Construction::orthogonal;
    throw Error(ErrorCode::InvalidParam, "unknown construction '" + std::string(s) + "'");
}

constexpr bool is_first_order(NDKind k) noexcept {
    return k == NDKind::directional_first || k == NDKind::partial_first;
}

/// Dense (2N+1)^dims operator, row-major with axis 0 outermost.
struct DiscreteOperatorND {
    int dims = 2;
    int N = 0;
    NDKind kind = NDKind::partial_first;
    std::vector<double> direction; // unit vector in axis order; empty for lot
    Construction construction = Construction::orthogonal;
    Mode mode = Mode::float_normalized;
    double scale = 1.0;
    std::vector<double> weights;
    std::optional<std::vector<std::vector<double>>> separable_factors;
    double norm_constant = 1.0;

    std::size_t side() const noexcept { return static_cast<std::size_t>(2 * N + 1); }

    std::vector<std::size_t> shape() const { return std::vector<std::size_t>(static_cast<std::size_t>(dims), side()); }

    std::size_t index(const std::vector<int>& offset) const {
        std::size_t lin = 0;
        for (int o : offset) lin = lin * side() + static_cast<std::size_t>(o + N);
        return lin;
    }

    double at(const std::vector<int>& offset) const { return weights[index(offset)]; }

    std::vector<int> offset_of(std::size_t lin) const {
        std::vector<int> o(static_cast<std::size_t>(dims));
        for (std::size_t a = o.size(); a-- > 0;) {
            o[a] = static_cast<int>(lin % side()) - N;
            lin /= side();
        }
        return o;
    }
};

namespace detail {

inline void check_nd(int dims, int N, int min_N) {
    if (dims != 2 && dims != 3) throw Error(ErrorCode::UnsupportedDims, "only 2D and 3D operators are supported");
    if (N < min_N) throw Error(ErrorCode::DegenerateSize, "N must be at least " + std::to_string(min_N));
    if (dims == 3 && N > 12) throw Error(ErrorCode::DegenerateSize, "3D operators are capped at N = 12");
}

inline std::vector<double> unit(std::vector<double> v, int dims) {
    if (static_cast<int>(v.size()) != dims) {
        throw Error(ErrorCode::DimsMismatch, "direction length must equal dims");
    }
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error(ErrorCode::InvalidParam, "direction must be a nonzero vector");
    const double n = std::sqrt(n2);
    for (double& x : v) x /= n;
    return v;
}

inline double dot(const std::vector<double>& v, const std::vector<int>& o) {
    double s = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) s += v[a] * o[a];
    return s;
}

inline double radius(const std::vector<int>& o) {
    long long s = 0;
    for (int x : o) s += static_cast<long long>(x) * x;
    return std::sqrt(static_cast<double>(s));
}

// Scale so positive weights sum to 1.
inline void normalize_first(std::vector<double>& w) {
    double pos = 0.0;
    for (double x : w) {
        if (x > 0.0) pos += x;
    }
    for (double& x : w) x /= pos;
}

// Scale so the weights flagged off-center sum to 2; the rest get the opposite
// mass, split in proportion to `line_share`.
inline void normalize_second(std::vector<double>& w, const std::vector<char>& on_line,
                             const std::vector<double>& line_share) {
    double off = 0.0;
    double share = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (on_line[i]) {
            share += line_share[i];
        } else {
            off += w[i];
        }
    }
    double off_sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!on_line[i]) {
            w[i] = w[i] * (2.0 / off);
            off_sum += w[i];
        }
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (on_line[i]) w[i] = -off_sum * (line_share[i] / share);
    }
}

} // namespace detail

/// K·Σ op(i) f(n-i) reproduces κ·(v·a) on f = a·x (first order) and 2κ₂ on
/// f = (v·x)² (second order).
inline double directional_norm_constant(const DiscreteOperatorND& op, double kappa) {
    long double m = 0.0L;
    const bool first = is_first_order(op.kind);
    for (std::size_t lin = 0; lin < op.weights.size(); ++lin) {
        const auto o = op.offset_of(lin);
        long double p = 0.0L;
        if (op.kind == NDKind::lot) {
            for (int x : o) p += static_cast<long double>(x) * x;
        } else {
            p = detail::dot(op.direction, o);
            if (!first) p *= p;
        }
        m += p * op.weights[lin];
    }
    if (first) return static_cast<double>(kappa / -m);
    return static_cast<double>(2.0L * kappa / m);
}

namespace detail {

inline DiscreteOperatorND rotational_impl(const KernelSpec& kernel, const RotationWeight& rw,
                                          std::vector<double> direction, Order order, int dims, int N) {
    check_nd(dims, N, 3);
    require_order(order);
    DiscreteOperatorND op;
    op.dims = dims;
    op.N = N;
    op.kind = order == Order::first ? NDKind::directional_first : NDKind::directional_second;
    op.direction = unit(std::move(direction), dims);
    op.construction = Construction::rotational;
    const KernelSpec k = with_support(kernel, N + 0.5);
    const double W = k.W;
    std::size_t total = 1;
    for (int a = 0; a < dims; ++a) total *= op.side();
    op.weights.assign(total, 0.0);
    std::vector<char> center(total, 0);
    std::vector<double> share(total, 0.0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        const auto o = op.offset_of(lin);
        const double r = radius(o);
        if (r == 0.0) {
            center[lin] = 1;
            share[lin] = 1.0;
            continue;
        }
        if (r > W) continue;
        const double c = dot(op.direction, o) / r;
        if (std::abs(c) <= 1e-12) continue;
        const double ang = std::acos(std::min(1.0, std::abs(c)));
        const double mag = eval_kernel(k, r) * rw(ang);
        if (order == Order::first) {
            op.weights[lin] = c > 0.0 ? -mag : mag;
        } else {
            op.weights[lin] = mag;
        }
    }
    if (order == Order::first) {
        normalize_first(op.weights);
    } else {
        normalize_second(op.weights, center, share);
    }
    op.norm_constant = directional_norm_constant(op, rotation_kappa(rw, dims, order == Order::first ? 1 : 2));
    return op;
}

} // namespace detail

/// Directional operator from the rotational construction, sampled on the lattice
/// within radius W = N + 1/2.
inline DiscreteOperatorND rotational_operator(const KernelSpec& kernel, const RotationWeight& rw,
                                              std::vector<double> direction, Order order, int dims, int N) {
    const auto rep = validate_constraints(kernel);
    if (!rep.c1_ok || !rep.c2_ok) throw Error(ErrorCode::ConstraintViolation, "kernel fails C1/C2");
    return detail::rotational_impl(kernel, rw, std::move(direction), order, dims, N);
}

/// Isotropic second-order operator: R(|i|)/pi off center, center = -(sum of the rest).
inline DiscreteOperatorND lot_operator(const KernelSpec& kernel, int dims, int N) {
    detail::check_nd(dims, N, 3);
    const auto rep = validate_constraints(kernel);
    if (!rep.c1_ok || !rep.c2_ok) throw Error(ErrorCode::ConstraintViolation, "kernel fails C1/C2");
    DiscreteOperatorND op;
    op.dims = dims;
    op.N = N;
    op.kind = NDKind::lot;
    op.construction = Construction::rotational;
    const KernelSpec k = with_support(kernel, N + 0.5);
    std::size_t total = 1;
    for (int a = 0; a < dims; ++a) total *= op.side();
    op.weights.assign(total, 0.0);
    std::vector<char> center(total, 0);
    std::vector<double> share(total, 0.0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        const auto o = op.offset_of(lin);
        const double r = detail::radius(o);
        if (r == 0.0) {
            center[lin] = 1;
            share[lin] = 1.0;
        } else if (r <= k.W) {
            op.weights[lin] = eval_kernel(k, r) / std::numbers::pi;
        }
    }
    detail::normalize_second(op.weights, center, share);
    op.norm_constant = directional_norm_constant(op, 1.0);
    return op;
}

enum class Discretization { interval_integral, direct_sample };

namespace detail {

inline std::vector<double> outer(const std::vector<std::vector<double>>& f) {
    std::vector<double> w{1.0};
    for (const auto& fac : f) {
        std::vector<double> next;
        next.reserve(w.size() * fac.size());
        for (double a : w) {
            for (double b : fac) next.push_back(a * b);
        }
        w = std::move(next);
    }
    return w;
}

} // namespace detail

/// Partial operator along `axis`: T or R on the axis, S on every other axis.
inline DiscreteOperatorND orthogonal_operator(const KernelSpec& kernel, int axis, Order order, int dims, int N,
                                              Discretization disc = Discretization::interval_integral) {
    detail::check_nd(dims, N, 2);
    detail::require_order(order);
    if (axis < 0 || axis >= dims) throw Error(ErrorCode::InvalidParam, "axis out of range");
    const auto rep = validate_constraints(kernel);
    if (!rep.c1_ok || !rep.c2_ok || !rep.c3_ok) throw Error(ErrorCode::ConstraintViolation, "kernel fails C1/C2/C3");
    const KernelSpec k = with_support(kernel, N + 0.5);
    const bool integral = disc == Discretization::interval_integral;
    const auto diff = integral ? discretize(ContinuousOperator(k, order), N) : sample_operator(k, N, order);
    const auto smooth = smooth_weights(k, N, integral ? Provenance::interval_integral : Provenance::direct_sample);

    DiscreteOperatorND op;
    op.dims = dims;
    op.N = N;
    op.kind = order == Order::first ? NDKind::partial_first : NDKind::partial_second;
    op.construction = Construction::orthogonal;
    op.direction.assign(static_cast<std::size_t>(dims), 0.0);
    op.direction[static_cast<std::size_t>(axis)] = 1.0;
    std::vector<std::vector<double>> factors(static_cast<std::size_t>(dims), smooth);
    factors[static_cast<std::size_t>(axis)] = diff.weights;
    op.weights = detail::outer(factors);
    op.separable_factors = std::move(factors);
    op.norm_constant = directional_norm_constant(op, 1.0);
    return op;
}

/// Marker selecting the orthogonal x-constructor in rotate_operator.
struct OrthogonalSpec {};
using RotationSpec = std::variant<RotationWeight, OrthogonalSpec>;

/// Rotate a 2D operator by quarter turns on the lattice:
/// out(x, y) = in(x cos q + y sin q, -x sin q + y cos q) with q = turns·pi/2.
inline DiscreteOperatorND rotate_lattice(const DiscreteOperatorND& in, int quarter_turns) {
    if (in.dims != 2) throw Error(ErrorCode::UnsupportedDims, "lattice rotation is 2D only");
    const int q = ((quarter_turns % 4) + 4) % 4;
    DiscreteOperatorND out = in;
    for (int t = 0; t < q; ++t) {
        DiscreteOperatorND src = out;
        for (int y = -in.N; y <= in.N; ++y) {
            for (int x = -in.N; x <= in.N; ++x) {
                // one quarter turn: out(x, y) = src(y, -x)  (x' = y, y' = -x)
                out.weights[out.index({y, x})] = src.at({-x, y});
            }
        }
        if (src.separable_factors) {
            const auto& f = *src.separable_factors;
            std::vector<double> g1(f[0].rbegin(), f[0].rend());
            out.separable_factors = std::vector<std::vector<double>>{f[1], g1};
        }
        if (!src.direction.empty()) {
            // direction (dy, dx) turns to (dx, -dy) in axis order
            out.direction = {src.direction[1], -src.direction[0]};
            for (double& d : out.direction) d = d == 0.0 ? 0.0 : d;
        }
    }
    return out;
}

namespace detail {

// cos/sin with exact values at multiples of pi/4.
inline std::pair<double, double> snapped_cos_sin(double theta) {
    const double q = theta / (std::numbers::pi / 4.0);
    const double rq = std::round(q);
    if (std::abs(q - rq) < 1e-12) {
        const int e = static_cast<int>(((static_cast<long long>(rq) % 8) + 8) % 8);
        const double h = std::sqrt(0.5);
        static constexpr int cs[8][2] = {{2, 0}, {1, 1}, {0, 2}, {-1, 1}, {-2, 0}, {-1, -1}, {0, -2}, {1, -1}};
        auto val = [h](int code) {
            if (code == 2) return 1.0;
            if (code == -2) return -1.0;
            if (code == 0) return 0.0;
            return code > 0 ? h : -h;
        };
        return {val(cs[e][0]), val(cs[e][1])};
    }
    return {std::cos(theta), std::sin(theta)};
}

inline std::optional<int> quarter_turns(double theta) {
    const double q = theta / (std::numbers::pi / 2.0);
    const double rq = std::round(q);
    if (std::abs(q - rq) < 1e-12) return static_cast<int>(((static_cast<long long>(rq) % 4) + 4) % 4);
    return std::nullopt;
}

inline DiscreteOperatorND rotated_orthogonal(const KernelSpec& kernel, double c, double s, Order order, int N) {
    check_nd(2, N, 2);
    require_order(order);
    const KernelSpec k = with_support(kernel, N + 0.5);
    const SmoothProfile S(k);
    DiscreteOperatorND op;
    op.dims = 2;
    op.N = N;
    op.kind = order == Order::first ? NDKind::directional_first : NDKind::directional_second;
    op.construction = Construction::orthogonal;
    op.direction = {s, c};
    const std::size_t total = op.side() * op.side();
    op.weights.assign(total, 0.0);
    std::vector<char> line(total, 0);
    std::vector<double> share(total, 0.0);
    for (int y = -N; y <= N; ++y) {
        for (int x = -N; x <= N; ++x) {
            const std::size_t lin = op.index({y, x});
            const double xr = x * c + y * s;
            const double yr = -x * s + y * c;
            const double sv = S(yr);
            if (std::abs(xr) <= 1e-12) {
                line[lin] = 1;
                share[lin] = sv;
                continue;
            }
            const double mag = eval_kernel(k, std::abs(xr)) * sv;
            if (order == Order::first) {
                op.weights[lin] = xr > 0.0 ? -mag : mag;
            } else {
                op.weights[lin] = mag;
            }
        }
    }
    if (order == Order::first) {
        normalize_first(op.weights);
    } else {
        normalize_second(op.weights, line, share);
    }
    op.norm_constant = directional_norm_constant(op, 1.0);
    return op;
}

} // namespace detail

/// 2D operator for direction (cos θ, sin θ) in (x, y), with x = axis 1 and
/// y = axis 0. The x-constructor is evaluated at the rotated continuous
/// coordinates and sampled on the lattice.
inline DiscreteOperatorND rotate_operator(const KernelSpec& kernel, const RotationSpec& spec, double theta,
                                          Order order, int N) {
    const auto [c, s] = detail::snapped_cos_sin(theta);
    const auto rep = validate_constraints(kernel);
    if (!rep.c1_ok || !rep.c2_ok) throw Error(ErrorCode::ConstraintViolation, "kernel fails C1/C2");
    if (const auto* rw = std::get_if<RotationWeight>(&spec)) {
        return detail::rotational_impl(kernel, *rw, {s, c}, order, 2, N);
    }
    if (!rep.c3_ok) throw Error(ErrorCode::ConstraintViolation, "kernel fails C3");
    if (const auto q = detail::quarter_turns(theta)) {
        auto base = orthogonal_operator(kernel, 1, order, 2, N, Discretization::direct_sample);
        base.kind = order == Order::first ? NDKind::directional_first : NDKind::directional_second;
        auto out = rotate_lattice(base, *q);
        out.direction = {s, c};
        out.norm_constant = directional_norm_constant(out, 1.0);
        return out;
    }
    return detail::rotated_orthogonal(kernel, c, s, order, N);
}

inline DiscreteOperatorND rotate_operator(const KernelSpec& kernel, const RotationSpec& spec, double theta,
                                          NDKind kind, int N) {
    return rotate_operator(kernel, spec, theta, is_first_order(kind) ? Order::first : Order::second, N);
}

/// Integer presentation: smallest nonzero magnitude scaled to 1, rounded half
/// away from zero, center repaired to restore an exact zero sum.
inline DiscreteOperatorND to_integer_scale_nd(const DiscreteOperatorND& in) {
    DiscreteOperatorND out = in;
    if (in.mode == Mode::integer_scaled) return out;
    const std::size_t center = in.weights.size() / 2;
    double min_mag = 0.0;
    for (std::size_t i = 0; i < in.weights.size(); ++i) {
        const double m = std::abs(in.weights[i]);
        if (i != center && m > 0.0 && (min_mag == 0.0 || m < min_mag)) min_mag = m;
    }
    out.mode = Mode::integer_scaled;
    out.separable_factors.reset();
    if (min_mag == 0.0) return out;
    out.scale = 1.0 / min_mag;
    double rest = 0.0;
    for (std::size_t i = 0; i < in.weights.size(); ++i) {
        out.weights[i] = std::round(in.weights[i] * out.scale);
        if (i != center) rest += out.weights[i];
    }
    out.weights[center] = -rest;
    const double kappa_ratio = in.norm_constant / directional_norm_constant(in, 1.0);
    out.norm_constant = directional_norm_constant(out, kappa_ratio);
    return out;
}

} // namespace tgd
