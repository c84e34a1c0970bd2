#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "tgd/error.hpp"

namespace tgd {

/// |DFT| of the zero-padded weights at bins 0..n_fft/2, evaluated directly.
inline std::vector<double> spectrum(const std::vector<double>& weights, std::size_t n_fft) {
    if (n_fft < weights.size() || n_fft == 0 || (n_fft & (n_fft - 1)) != 0) {
        throw Error(ErrorCode::InvalidParam, "n_fft must be a power of two no shorter than the operator");
    }
    std::vector<double> mag(n_fft / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            const std::size_t phase = (j * k) % n_fft;
            const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(phase) /
                                    static_cast<long double>(n_fft);
            re += weights[j] * std::cos(ang);
            im += weights[j] * std::sin(ang);
        }
        mag[k] = static_cast<double>(std::sqrt(re * re + im * im));
    }
    return mag;
}

/// Mean magnitude over bins k with n_fft/4 < k <= n_fft/2.
inline double upper_band_mean(const std::vector<double>& mag) {
    const std::size_t n_fft = 2 * (mag.size() - 1);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = n_fft / 4 + 1; k < mag.size(); ++k) {
        sum += mag[k];
        ++count;
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

/// Unit-sum Gaussian on offsets -N..N with sigma = (N + 1/2)/3.
inline std::vector<double> equal_support_gaussian(int N) {
    const double sigma = (N + 0.5) / 3.0;
    std::vector<double> g(static_cast<std::size_t>(2 * N + 1));
    double sum = 0.0;
    for (int i = -N; i <= N; ++i) {
        g[static_cast<std::size_t>(i + N)] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += g[static_cast<std::size_t>(i + N)];
    }
    for (double& v : g) v /= sum;
    return g;
}

} // namespace tgd
