#pragma once

#include <cmath>
#include <vector>

#include "tgd/convolve.hpp"
#include "tgd/error.hpp"
#include "tgd/field.hpp"

namespace tgd {

/// Classical (X(n+1) - X(n-1))/2 or X(n+1) - 2X(n) + X(n-1).
template <std::floating_point T>
SampledField<T> baseline_central_difference(const SampledField<T>& signal, int order,
                                            Boundary boundary = Boundary::replicate) {
    if (signal.size() < 3) throw Error(ErrorCode::SignalTooShort, "central difference needs at least 3 samples");
    if (order != 1 && order != 2) throw Error(ErrorCode::InvalidParam, "order must be 1 or 2");
    const std::vector<double> st = order == 1 ? std::vector<double>{0.5, 0.0, -0.5} : std::vector<double>{1.0, -2.0, 1.0};
    return convolve_axis(signal, st, 0, boundary);
}

/// Unit-sum Gaussian truncated at ceil(3 sigma).
inline std::vector<double> gaussian_filter(double sigma) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParam, "sigma must be positive");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> g(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-0.5 * i * i / (sigma * sigma));
        g[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (double& v : g) v /= sum;
    return g;
}

/// Gaussian smoothing followed by first-order central difference.
template <std::floating_point T>
SampledField<T> baseline_smooth_then_diff(const SampledField<T>& signal, double sigma,
                                          Boundary boundary = Boundary::replicate) {
    const auto smoothed = convolve_axis(signal, gaussian_filter(sigma), 0, boundary);
    return baseline_central_difference(smoothed, 1, boundary);
}

} // namespace tgd
