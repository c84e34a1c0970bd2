#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "tgd/error.hpp"

namespace tgd {

enum class Boundary { replicate, reflect, zero, valid };

constexpr std::string_view to_string(Boundary b) noexcept {
    switch (b) {
        case Boundary::replicate: return "replicate";
        case Boundary::reflect: return "reflect";
        case Boundary::zero: return "zero";
        case Boundary::valid: return "valid";
    }
    return "unknown";
}

inline Boundary parse_boundary(std::string_view s) {
    for (Boundary b : {Boundary::replicate, Boundary::reflect, Boundary::zero, Boundary::valid}) {
        if (to_string(b) == s) return b;
    }
    throw Error(ErrorCode::InvalidParam, "unknown boundary '" + std::string(s) + "'");
}

/// Dense row-major samples on a uniform grid (axis 0 outermost).
template <std::floating_point T = double>
struct SampledField {
    std::vector<std::size_t> shape;
    std::vector<double> spacing;
    std::vector<T> values;

    SampledField() = default;

    explicit SampledField(std::vector<std::size_t> shp, T fill = T{})
        : shape(std::move(shp)), spacing(shape.size(), 1.0), values(count(shape), fill) {}

    SampledField(std::vector<std::size_t> shp, std::vector<T> vals)
        : shape(std::move(shp)), spacing(shape.size(), 1.0), values(std::move(vals)) {
        if (values.size() != count(shape)) {
            throw Error(ErrorCode::ShapeMismatch, "value count does not match shape");
        }
    }

    static std::size_t count(const std::vector<std::size_t>& shp) {
        return std::accumulate(shp.begin(), shp.end(), std::size_t{1}, std::multiplies<>());
    }

    int dims() const noexcept { return static_cast<int>(shape.size()); }
    std::size_t size() const noexcept { return values.size(); }

    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }

    std::size_t index(std::initializer_list<std::size_t> idx) const {
        std::size_t lin = 0;
        std::size_t a = 0;
        for (std::size_t v : idx) lin = lin * shape[a++] + v;
        return lin;
    }
    T& at(std::initializer_list<std::size_t> idx) { return values[index(idx)]; }
    const T& at(std::initializer_list<std::size_t> idx) const { return values[index(idx)]; }

    bool all_finite() const {
        for (const T& v : values) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

template <std::floating_point T>
SampledField<T> make_field_1d(std::vector<T> values) {
    const std::size_t n = values.size();
    return SampledField<T>({n}, std::move(values));
}

/// Fill a field from f(coords) where coords are sample positions in axis order.
template <std::floating_point T = double, typename F>
SampledField<T> sample_field(const std::vector<std::size_t>& shape, F&& f) {
    SampledField<T> out(shape);
    std::vector<double> pos(shape.size());
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        std::size_t rem = lin;
        for (std::size_t a = shape.size(); a-- > 0;) {
            pos[a] = static_cast<double>(rem % shape[a]) * out.spacing[a];
            rem /= shape[a];
        }
        out.values[lin] = static_cast<T>(f(pos));
    }
    return out;
}

} // namespace tgd
