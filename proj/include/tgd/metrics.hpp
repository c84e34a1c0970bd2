#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tgd/error.hpp"

namespace tgd {

inline void require_same_size(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "fields have different sizes");
    if (a.empty()) throw Error(ErrorCode::EmptySignal, "fields are empty");
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    require_same_size(a, b);
    const auto n = static_cast<long double>(a.size());
    long double ma = 0.0L;
    long double mb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    long double sab = 0.0L;
    long double saa = 0.0L;
    long double sbb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double da = a[i] - ma;
        const long double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0L || sbb == 0.0L) return 0.0;
    return static_cast<double>(sab / std::sqrt(saa * sbb));
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    require_same_size(a, b);
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i];
        s += d * d;
    }
    return static_cast<double>(std::sqrt(s / static_cast<long double>(a.size())));
}

namespace detail {
inline double peak_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}
} // namespace detail

/// Sign changes between neighbouring samples whose magnitude exceeds
/// rel_tol·max|v|. A crossing between n and n+1 is reported at n + 1/2;
/// a run of negligible samples between opposite signs is reported at its middle.
inline std::vector<double> zero_crossings(const std::vector<double>& v, double rel_tol = 1e-9) {
    std::vector<double> out;
    const double tol = rel_tol * detail::peak_abs(v);
    long last = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) <= tol) continue;
        if (last >= 0 && (v[static_cast<std::size_t>(last)] > 0.0) != (v[i] > 0.0)) {
            out.push_back(0.5 * (static_cast<double>(last) + static_cast<double>(i)));
        }
        last = static_cast<long>(i);
    }
    return out;
}

/// Indices of local maxima of |v| (plateaus report their first sample).
inline std::vector<std::size_t> local_extrema(const std::vector<double>& v, double rel_tol = 1e-3) {
    std::vector<std::size_t> out;
    const double tol = rel_tol * detail::peak_abs(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m <= tol) continue;
        const double left = i > 0 ? std::abs(v[i - 1]) : -1.0;
        std::size_t j = i;
        while (j + 1 < v.size() && std::abs(v[j + 1]) == m) ++j;
        const double right = j + 1 < v.size() ? std::abs(v[j + 1]) : -1.0;
        if (m > left && m > right) out.push_back(i);
        i = j;
    }
    return out;
}

/// Distance from `pos` to an edge lying between samples e-1 and e: zero
/// when pos is either neighbouring sample or the midpoint.
inline double edge_distance(double pos, std::size_t e) {
    const double lo = static_cast<double>(e) - 1.0;
    const double hi = static_cast<double>(e);
    if (pos >= lo && pos <= hi) return 0.0;
    return pos < lo ? lo - pos : pos - hi;
}

/// For each edge, the worst distance among samples attaining max|r| inside
/// [e - window, e + window).
inline std::vector<double> argmax_edge_offsets(const std::vector<double>& r, const std::vector<std::size_t>& edges,
                                               std::size_t window) {
    std::vector<double> out;
    for (std::size_t e : edges) {
        const std::size_t lo = e >= window ? e - window : 0;
        const std::size_t hi = std::min(r.size(), e + window);
        double best = -1.0;
        for (std::size_t i = lo; i < hi; ++i) best = std::max(best, std::abs(r[i]));
        double worst = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            if (std::abs(r[i]) == best) worst = std::max(worst, edge_distance(static_cast<double>(i), e));
        }
        out.push_back(worst);
    }
    return out;
}

/// For each edge, distance to the nearest zero crossing inside the window
/// (window size if none).
inline std::vector<double> crossing_edge_offsets(const std::vector<double>& r, const std::vector<std::size_t>& edges,
                                                 std::size_t window, double rel_tol = 1e-9) {
    const auto zc = zero_crossings(r, rel_tol);
    std::vector<double> out;
    for (std::size_t e : edges) {
        double best = static_cast<double>(window);
        for (double z : zc) {
            if (std::abs(z - (static_cast<double>(e) - 0.5)) <= static_cast<double>(window)) {
                best = std::min(best, edge_distance(z, e));
            }
        }
        out.push_back(best);
    }
    return out;
}

/// Edges that have no local maximum of |r| within `tol` samples.
inline std::vector<std::size_t> missed_edges(const std::vector<double>& r, const std::vector<std::size_t>& edges,
                                             double tol = 1.0) {
    const auto ext = local_extrema(r);
    std::vector<std::size_t> missed;
    for (std::size_t e : edges) {
        const bool hit = std::any_of(ext.begin(), ext.end(),
                                     [&](std::size_t i) { return edge_distance(static_cast<double>(i), e) <= tol; });
        if (!hit) missed.push_back(e);
    }
    return missed;
}

} // namespace tgd
