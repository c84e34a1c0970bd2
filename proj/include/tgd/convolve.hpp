#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "tgd/error.hpp"
#include "tgd/field.hpp"
#include "tgd/operator1d.hpp"
#include "tgd/operator_nd.hpp"

namespace tgd {

/// Worker count from TGD_THREADS (default: hardware concurrency, at most 8).
inline unsigned thread_count() {
    if (const char* env = std::getenv("TGD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
    }
    return std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
}

/// Run body(begin, end) over [0, n) in contiguous chunks.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(n / 1024, 1)));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& t : pool) t.join();
}

namespace detail {

// Input index for padded position p in [-N, L + N), or -1 for a zero sample.
inline std::vector<long> boundary_map(std::size_t L, int N, Boundary b) {
    const long len = static_cast<long>(L);
    std::vector<long> map(static_cast<std::size_t>(len + 2 * N));
    for (long p = -N; p < len + N; ++p) {
        long idx = p;
        if (p < 0 || p >= len) {
            switch (b) {
                case Boundary::replicate: idx = std::clamp(p, 0L, len - 1); break;
                case Boundary::reflect: {
                    const long period = 2 * len;
                    long m = ((p % period) + period) % period;
                    idx = m < len ? m : period - 1 - m;
                    break;
                }
                case Boundary::zero:
                case Boundary::valid: idx = -1; break;
            }
        }
        map[static_cast<std::size_t>(p + N)] = idx;
    }
    return map;
}

struct Tap {
    double weight;
    std::array<int, 3> offset;
};

template <std::floating_point T>
SampledField<T> convolve_dense(const SampledField<T>& field, const std::vector<double>& weights, int dims, int N,
                               Boundary boundary) {
    if (field.size() == 0) throw Error(ErrorCode::EmptySignal, "field is empty");
    if (field.dims() != dims) throw Error(ErrorCode::DimsMismatch, "field and operator dimensions differ");
    const std::size_t side = static_cast<std::size_t>(2 * N + 1);

    // Pad everything to three axes; leading axes get size 1 and no taps.
    std::array<std::size_t, 3> in_shape{1, 1, 1};
    std::array<int, 3> n_axis{0, 0, 0};
    for (int a = 0; a < dims; ++a) {
        in_shape[static_cast<std::size_t>(3 - dims + a)] = field.shape[static_cast<std::size_t>(a)];
        n_axis[static_cast<std::size_t>(3 - dims + a)] = N;
    }
    const bool valid = boundary == Boundary::valid;
    std::array<std::size_t, 3> out_shape = in_shape;
    for (std::size_t a = 0; a < 3; ++a) {
        if (valid) {
            if (in_shape[a] < static_cast<std::size_t>(2 * n_axis[a] + 1)) {
                throw Error(ErrorCode::FieldTooSmall, "field is smaller than the operator in valid mode");
            }
            out_shape[a] = in_shape[a] - static_cast<std::size_t>(2 * n_axis[a]);
        }
    }
    std::array<std::vector<long>, 3> maps;
    for (std::size_t a = 0; a < 3; ++a) maps[a] = boundary_map(in_shape[a], n_axis[a], boundary);

    std::vector<Tap> taps;
    for (std::size_t lin = 0; lin < weights.size(); ++lin) {
        if (weights[lin] == 0.0) continue;
        Tap t{weights[lin], {0, 0, 0}};
        std::size_t rem = lin;
        for (int a = dims; a-- > 0;) {
            t.offset[static_cast<std::size_t>(3 - dims + a)] = static_cast<int>(rem % side) - N;
            rem /= side;
        }
        taps.push_back(t);
    }

    std::vector<std::size_t> shape_out;
    for (int a = 0; a < dims; ++a) shape_out.push_back(out_shape[static_cast<std::size_t>(3 - dims + a)]);
    SampledField<T> out(shape_out);
    out.spacing = field.spacing;
    const std::size_t total = out.size();
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t lin = begin; lin < end; ++lin) {
            const std::size_t i2 = lin % out_shape[2];
            const std::size_t i1 = (lin / out_shape[2]) % out_shape[1];
            const std::size_t i0 = lin / (out_shape[2] * out_shape[1]);
            // centre position in padded-map coordinates
            const long c0 = static_cast<long>(i0) + (valid ? n_axis[0] : 0) + n_axis[0];
            const long c1 = static_cast<long>(i1) + (valid ? n_axis[1] : 0) + n_axis[1];
            const long c2 = static_cast<long>(i2) + (valid ? n_axis[2] : 0) + n_axis[2];
            long double acc = 0.0L;
            for (const Tap& t : taps) {
                const long p0 = maps[0][static_cast<std::size_t>(c0 - t.offset[0])];
                const long p1 = maps[1][static_cast<std::size_t>(c1 - t.offset[1])];
                const long p2 = maps[2][static_cast<std::size_t>(c2 - t.offset[2])];
                if (p0 < 0 || p1 < 0 || p2 < 0) continue;
                const std::size_t idx = (static_cast<std::size_t>(p0) * in_shape[1] + static_cast<std::size_t>(p1)) *
                                            in_shape[2] +
                                        static_cast<std::size_t>(p2);
                acc += static_cast<long double>(t.weight) * static_cast<long double>(field.values[idx]);
            }
            out.values[lin] = static_cast<T>(acc);
        }
    });
    return out;
}

} // namespace detail

/// out(n) = Σ_i op(i)·X(n - i) with the chosen boundary policy.
template <std::floating_point T>
SampledField<T> convolve(const SampledField<T>& field, const DiscreteOperator1D& op, Boundary boundary = Boundary::replicate) {
    return detail::convolve_dense(field, op.weights, 1, op.N, boundary);
}

template <std::floating_point T>
SampledField<T> convolve(const SampledField<T>& field, const DiscreteOperatorND& op, Boundary boundary = Boundary::replicate) {
    return detail::convolve_dense(field, op.weights, op.dims, op.N, boundary);
}

/// Convolve with a centred 1-D stencil along one axis of an N-D field.
template <std::floating_point T>
SampledField<T> convolve_axis(const SampledField<T>& field, const std::vector<double>& stencil, int axis,
                              Boundary boundary = Boundary::replicate) {
    if (field.size() == 0) throw Error(ErrorCode::EmptySignal, "field is empty");
    if (axis < 0 || axis >= field.dims()) throw Error(ErrorCode::DimsMismatch, "axis out of range");
    if (stencil.size() % 2 == 0) throw Error(ErrorCode::InvalidParam, "stencil length must be odd");
    const int N = static_cast<int>(stencil.size() / 2);
    const auto a = static_cast<std::size_t>(axis);
    const std::size_t L = field.shape[a];
    const bool valid = boundary == Boundary::valid;
    if (valid && L < stencil.size()) throw Error(ErrorCode::FieldTooSmall, "field is smaller than the operator in valid mode");
    std::size_t inner = 1;
    for (std::size_t q = a + 1; q < field.shape.size(); ++q) inner *= field.shape[q];
    std::size_t outer = 1;
    for (std::size_t q = 0; q < a; ++q) outer *= field.shape[q];
    const std::size_t Lout = valid ? L - 2 * static_cast<std::size_t>(N) : L;
    const auto map = detail::boundary_map(L, N, boundary);

    auto shape = field.shape;
    shape[a] = Lout;
    SampledField<T> out(shape);
    out.spacing = field.spacing;
    const std::size_t total = out.size();
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t lin = begin; lin < end; ++lin) {
            const std::size_t in_idx = lin % inner;
            const std::size_t n = (lin / inner) % Lout;
            const std::size_t o = lin / (inner * Lout);
            const long c = static_cast<long>(n) + (valid ? N : 0) + N;
            long double acc = 0.0L;
            for (int k = -N; k <= N; ++k) {
                const double w = stencil[static_cast<std::size_t>(k + N)];
                if (w == 0.0) continue;
                const long p = map[static_cast<std::size_t>(c - k)];
                if (p < 0) continue;
                acc += static_cast<long double>(w) *
                       static_cast<long double>(field.values[(o * L + static_cast<std::size_t>(p)) * inner + in_idx]);
            }
            out.values[lin] = static_cast<T>(acc);
        }
    });
    return out;
}

/// Sequential per-axis passes with the operator's separable factors.
template <std::floating_point T>
SampledField<T> convolve_separable(const SampledField<T>& field, const DiscreteOperatorND& op,
                                   Boundary boundary = Boundary::replicate) {
    if (!op.separable_factors) throw Error(ErrorCode::NotSeparable, "operator has no separable factors");
    if (field.dims() != op.dims) throw Error(ErrorCode::DimsMismatch, "field and operator dimensions differ");
    SampledField<T> cur = field;
    for (int a = 0; a < op.dims; ++a) {
        cur = convolve_axis(cur, (*op.separable_factors)[static_cast<std::size_t>(a)], a, boundary);
    }
    return cur;
}

/// First- or second-order TGD of a 1-D signal; with the norm constant the
/// result is in derivative units (divided by the spacing).
template <std::floating_point T>
SampledField<T> tgd_1d(const SampledField<T>& signal, const DiscreteOperator1D& op,
                       Boundary boundary = Boundary::replicate, bool apply_norm_constant = false) {
    if (signal.size() == 0) throw Error(ErrorCode::EmptySignal, "signal is empty");
    if (signal.dims() != 1) throw Error(ErrorCode::DimsMismatch, "tgd_1d needs a 1-D signal");
    if (boundary == Boundary::valid && signal.size() < op.weights.size()) {
        throw Error(ErrorCode::SignalTooShort, "signal shorter than the operator in valid mode");
    }
    auto out = convolve(signal, op, boundary);
    if (apply_norm_constant) {
        const double h = signal.spacing.empty() ? 1.0 : signal.spacing[0];
        const double k = op.norm_constant / (op.order == Order::first ? h : h * h);
        for (auto& v : out.values) v = static_cast<T>(v * k);
    }
    return out;
}

/// N-D counterpart of tgd_1d; assumes isotropic spacing.
template <std::floating_point T>
SampledField<T> tgd_nd(const SampledField<T>& field, const DiscreteOperatorND& op,
                       Boundary boundary = Boundary::replicate, bool apply_norm_constant = false,
                       bool separable = false) {
    auto out = separable ? convolve_separable(field, op, boundary) : convolve(field, op, boundary);
    if (apply_norm_constant) {
        const double h = field.spacing.empty() ? 1.0 : field.spacing[0];
        const double k = op.norm_constant / (is_first_order(op.kind) ? h : h * h);
        for (auto& v : out.values) v = static_cast<T>(v * k);
    }
    return out;
}

} // namespace tgd
