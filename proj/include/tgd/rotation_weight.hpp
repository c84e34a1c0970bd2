#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tgd/error.hpp"
#include "tgd/quadrature.hpp"

namespace tgd {

enum class RotationFamily { cosine, constant, table };

constexpr std::string_view to_string(RotationFamily f) noexcept {
    switch (f) {
        case RotationFamily::cosine: return "cosine";
        case RotationFamily::constant: return "constant";
        case RotationFamily::table: return "table";
    }
    return "unknown";
}

inline RotationFamily parse_rotation_family(std::string_view s) {
    for (auto f : {RotationFamily::cosine, RotationFamily::constant, RotationFamily::table}) {
        if (to_string(f) == s) return f;
    }
    throw Error(ErrorCode::InvalidParam, "unknown rotation weight '" + std::string(s) + "'");
}

/// Even angular weight on (-pi/2, pi/2) with unit integral.
struct RotationWeight {
    RotationFamily family = RotationFamily::cosine;
    double normalization = 0.5;
    std::vector<double> table; // samples on [0, pi/2], uniformly spaced

    double shape(double theta) const {
        const double a = std::abs(theta);
        if (a > std::numbers::pi / 2.0) return 0.0;
        switch (family) {
            case RotationFamily::cosine: return std::cos(a);
            case RotationFamily::constant: return 1.0;
            case RotationFamily::table: {
                const std::size_t m = table.size();
                const double pos = a / (std::numbers::pi / 2.0) * static_cast<double>(m - 1);
                const std::size_t j = std::min(static_cast<std::size_t>(pos), m - 2);
                const double frac = pos - static_cast<double>(j);
                return table[j] + frac * (table[j + 1] - table[j]);
            }
        }
        return 0.0;
    }

    double operator()(double theta) const { return normalization * shape(theta); }
};

inline RotationWeight make_rotation_weight(RotationFamily family, std::vector<double> table = {}) {
    RotationWeight rw;
    rw.family = family;
    if (family == RotationFamily::table) {
        if (table.size() < 2) throw Error(ErrorCode::InvalidParam, "rotation weight table needs two samples");
        for (std::size_t j = 0; j < table.size(); ++j) {
            if (!(table[j] >= 0.0) || !std::isfinite(table[j])) {
                throw Error(ErrorCode::InvalidParam, "rotation weight samples must be finite and >= 0");
            }
            if (j > 0 && table[j] > table[j - 1]) {
                throw Error(ErrorCode::InvalidParam, "rotation weight must be non-increasing in |theta|");
            }
        }
        if (!(table[0] > 0.0)) throw Error(ErrorCode::InvalidParam, "rotation weight is identically zero");
        rw.table = std::move(table);
    }
    const double half = quad::simpson([&](double t) { return rw.shape(t); }, 0.0, std::numbers::pi / 2.0);
    rw.normalization = 1.0 / (2.0 * half);
    return rw;
}

/// Ratio ∫cos^p θ·w̃ / ∫w̃ over the half plane (2D) or hemisphere (3D).
inline double rotation_kappa(const RotationWeight& rw, int dims, int power) {
    const double end = std::numbers::pi / 2.0;
    auto jac = [dims](double t) { return dims == 3 ? std::sin(t) : 1.0; };
    const double num = quad::simpson([&](double t) { return std::pow(std::cos(t), power) * rw(t) * jac(t); }, 0.0, end);
    const double den = quad::simpson([&](double t) { return rw(t) * jac(t); }, 0.0, end);
    return num / den;
}

} // namespace tgd
