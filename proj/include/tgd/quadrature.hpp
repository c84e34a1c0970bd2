#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>

namespace tgd::quad {

/// Default number of Simpson panels used for kernel integrals.
inline constexpr std::size_t kPanels = 4096;

/// Composite Simpson rule on [a, b] with an even number of sub-intervals.
template <typename F>
    requires std::invocable<F, double>
double simpson(F&& f, double a, double b, std::size_t panels = kPanels) {
    if (b == a) return 0.0;
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < panels; ++i) {
        const double x = a + h * static_cast<double>(i);
        if (i % 2 == 1) {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Simpson on [0, b] after the substitution t = b * s^power, which removes an
/// integrable t^(p) singularity at the origin when power > 1.
template <typename F>
    requires std::invocable<F, double>
double simpson_origin_graded(F&& f, double b, double power, std::size_t panels = kPanels) {
    auto g = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double t = b * std::pow(s, power);
        return f(t) * b * power * std::pow(s, power - 1.0);
    };
    return simpson(g, 0.0, 1.0, panels);
}

} // namespace tgd::quad
