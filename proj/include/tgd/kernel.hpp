#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tgd/error.hpp"
#include "tgd/quadrature.hpp"

namespace tgd {

enum class Family { gaussian, linear, exponential, landau, weibull, table };

constexpr std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::linear: return "linear";
        case Family::exponential: return "exponential";
        case Family::landau: return "landau";
        case Family::weibull: return "weibull";
        case Family::table: return "table";
    }
    return "unknown";
}

inline Family parse_family(std::string_view name) {
    for (Family f : {Family::gaussian, Family::linear, Family::exponential, Family::landau,
                     Family::weibull, Family::table}) {
        if (to_string(f) == name) return f;
    }
    throw Error(ErrorCode::InvalidParam, "unknown kernel family '" + std::string(name) + "'");
}

using ParamMap = std::map<std::string, double>;

/// A kernel w(t) supported on (0, W], scaled to unit integral.
///
/// `params` keeps exactly what the caller supplied so the kernel can be
/// rebuilt on a different support with defaults recomputed; `resolved`
/// holds the values actually in use.
struct KernelSpec {
    Family family = Family::gaussian;
    ParamMap params;
    ParamMap resolved;
    std::vector<double> table;
    double W = 0.0;
    double norm_coeff = 1.0;

    double param(const std::string& name) const { return resolved.at(name); }
};

namespace detail {

inline bool weibull_singular(const KernelSpec& k) {
    return k.family == Family::weibull && k.resolved.at("k") < 1.0;
}

// Unnormalized family function on (0, W].
inline double raw_kernel(const KernelSpec& k, double t) {
    const auto& p = k.resolved;
    switch (k.family) {
        case Family::gaussian: {
            const double d = p.at("delta");
            return std::exp(-t * t / (2.0 * d * d));
        }
        case Family::linear:
            return -p.at("k") * t - p.at("c");
        case Family::exponential: {
            const double d = p.at("delta");
            return std::exp(-t / (d * d));
        }
        case Family::landau: {
            const double u = t / p.at("tau");
            return std::pow(std::max(0.0, 1.0 - u * u), p.at("n"));
        }
        case Family::weibull: {
            const double kk = p.at("k");
            const double lam = p.at("lambda");
            const double z = t / lam;
            return kk / lam * std::pow(z, kk - 1.0) * std::exp(-std::pow(z, kk));
        }
        case Family::table: {
            const std::size_t m = k.table.size();
            const double pos = t / k.W * static_cast<double>(m - 1);
            const auto j = std::min(static_cast<std::size_t>(pos), m - 2);
            const double frac = pos - static_cast<double>(j);
            return k.table[j] + frac * (k.table[j + 1] - k.table[j]);
        }
    }
    return 0.0;
}

inline double landau_upper(double tau, double n, double x) {
    const double rn = std::round(n);
    if (std::abs(n - rn) < 1e-12 && rn <= 40.0) {
        // (1-u^2)^n expanded binomially; exact for integer exponents.
        const int ni = static_cast<int>(rn);
        const double u = std::min(x / tau, 1.0);
        double sum = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= ni; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            sum += sign * binom * (1.0 - std::pow(u, 2 * j + 1)) / (2.0 * j + 1.0);
            binom = binom * (ni - j) / (j + 1.0);
        }
        return tau * sum;
    }
    auto f = [&](double t) {
        const double u = t / tau;
        return std::pow(std::max(0.0, 1.0 - u * u), n);
    };
    return quad::simpson(f, x, tau, 1024);
}

// Unnormalized integral of the family function from x to the family's
// natural end of support (infinity for the unbounded families).
inline double raw_upper(const KernelSpec& k, double x) {
    const auto& p = k.resolved;
    x = std::max(x, 0.0);
    switch (k.family) {
        case Family::gaussian: {
            const double d = p.at("delta");
            return d * std::sqrt(std::numbers::pi / 2.0) * std::erfc(x / (std::numbers::sqrt2 * d));
        }
        case Family::linear: {
            const double kk = p.at("k");
            const double c = p.at("c");
            const double end = -c / kk;
            if (x >= end) return 0.0;
            const double v = -kk * x - c;
            return v * v / (2.0 * kk);
        }
        case Family::exponential: {
            const double d2 = p.at("delta") * p.at("delta");
            return d2 * std::exp(-x / d2);
        }
        case Family::landau:
            return landau_upper(p.at("tau"), p.at("n"), x);
        case Family::weibull:
            return std::exp(-std::pow(x / p.at("lambda"), p.at("k")));
        case Family::table: {
            if (x >= k.W) return 0.0;
            const std::size_t m = k.table.size();
            const double h = k.W / static_cast<double>(m - 1);
            const double pos = x / h;
            const auto j = std::min(static_cast<std::size_t>(pos), m - 2);
            double acc = 0.0;
            for (std::size_t q = m - 1; q > j + 1; --q) {
                acc += 0.5 * h * (k.table[q - 1] + k.table[q]);
            }
            const double fx = raw_kernel(k, x);
            acc += 0.5 * (static_cast<double>(j + 1) * h - x) * (fx + k.table[j + 1]);
            return acc;
        }
    }
    return 0.0;
}

template <typename F>
double integrate_on_support(const KernelSpec& k, F&& f, double b) {
    if (weibull_singular(k)) {
        return quad::simpson_origin_graded(f, b, 2.0 / k.resolved.at("k"));
    }
    return quad::simpson(f, 0.0, b);
}

inline void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::InvalidParam, message);
}

inline double take(const ParamMap& given, const char* name, double fallback) {
    auto it = given.find(name);
    return it == given.end() ? fallback : it->second;
}

inline void check_known(const ParamMap& given, std::initializer_list<const char*> names) {
    for (const auto& [key, value] : given) {
        const bool known = std::any_of(names.begin(), names.end(),
                                       [&](const char* n) { return key == n; });
        require(known, "unexpected parameter '" + key + "'");
        require(std::isfinite(value), "parameter '" + key + "' is not finite");
    }
}

} // namespace detail

/// Build and normalize a kernel. Omitted parameters take family defaults
/// derived from W (gaussian delta = W/3, linear c = -kW, ...).
inline KernelSpec make_kernel(Family family, const ParamMap& params, double W,
                              std::vector<double> table = {}) {
    if (!(W > 0.0) || !std::isfinite(W)) {
        throw Error(ErrorCode::NonPositiveSupport, "support half-width W must be positive");
    }
    using detail::require;
    using detail::take;
    KernelSpec k;
    k.family = family;
    k.params = params;
    k.W = W;
    auto& r = k.resolved;
    const double tol = 1e-12 * W;
    switch (family) {
        case Family::gaussian: {
            detail::check_known(params, {"delta"});
            r["delta"] = take(params, "delta", W / 3.0);
            require(r["delta"] > 0.0, "gaussian delta must be positive");
            break;
        }
        case Family::linear: {
            detail::check_known(params, {"k", "c"});
            r["k"] = take(params, "k", 1.0);
            require(r["k"] > 0.0, "linear k must be positive");
            r["c"] = take(params, "c", -r["k"] * W);
            require(r["c"] < 0.0, "linear c must be negative");
            require(r["c"] <= -r["k"] * W + r["k"] * tol, "linear c must satisfy c <= -k*W");
            break;
        }
        case Family::exponential: {
            detail::check_known(params, {"delta"});
            r["delta"] = take(params, "delta", std::sqrt(W / 5.0));
            require(r["delta"] > 0.0, "exponential delta must be positive");
            break;
        }
        case Family::landau: {
            detail::check_known(params, {"tau", "n"});
            r["tau"] = take(params, "tau", W);
            r["n"] = take(params, "n", 2.0);
            require(r["tau"] >= W - tol, "landau tau must be at least W");
            require(r["n"] > 0.0, "landau n must be positive");
            break;
        }
        case Family::weibull: {
            detail::check_known(params, {"k", "lambda"});
            r["k"] = take(params, "k", 1.0);
            require(r["k"] > 0.0 && r["k"] <= 1.0, "weibull k must lie in (0, 1]");
            r["lambda"] = take(params, "lambda", W / std::pow(5.0, 1.0 / r["k"]));
            require(r["lambda"] > 0.0, "weibull lambda must be positive");
            break;
        }
        case Family::table: {
            detail::check_known(params, {});
            require(table.size() >= 2, "table kernel needs at least two samples");
            for (double v : table) require(std::isfinite(v) && v >= 0.0, "table samples must be finite and >= 0");
            k.table = std::move(table);
            break;
        }
    }

    double integral = 0.0;
    if (family == Family::table) {
        integral = detail::raw_upper(k, 0.0);
    } else {
        integral = detail::integrate_on_support(k, [&](double t) { return detail::raw_kernel(k, t); }, W);
    }
    require(integral > 0.0 && std::isfinite(integral), "kernel has no positive mass on (0, W]");
    k.norm_coeff = 1.0 / integral;
    return k;
}

inline KernelSpec make_kernel(std::string_view family, const ParamMap& params, double W,
                              std::vector<double> table = {}) {
    return make_kernel(parse_family(family), params, W, std::move(table));
}

/// Same family and caller parameters on a new support; defaults are recomputed.
inline KernelSpec with_support(const KernelSpec& k, double W) {
    if (k.family == Family::table) return make_kernel(k.family, k.params, W, k.table);
    return make_kernel(k.family, k.params, W);
}

/// LD counterexample kernel (power+1) t^power / W^(power+1), tabulated.
inline KernelSpec make_ld_kernel(double W, double power = 1.0, std::size_t samples = 1025) {
    std::vector<double> tab(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = W * static_cast<double>(j) / static_cast<double>(samples - 1);
        tab[j] = (power + 1.0) * std::pow(t, power) / std::pow(W, power + 1.0);
    }
    return make_kernel(Family::table, {}, W, std::move(tab));
}

inline double eval_kernel(const KernelSpec& k, double t) {
    if (!(t > 0.0) || t > k.W) return 0.0;
    return k.norm_coeff * detail::raw_kernel(k, t);
}

/// Integral of w from 0 to t (t clamped to [0, W]).
inline double kernel_cdf(const KernelSpec& k, double t) {
    t = std::clamp(t, 0.0, k.W);
    return k.norm_coeff * (detail::raw_upper(k, 0.0) - detail::raw_upper(k, t));
}

/// Integral of the normalized kernel family function from W to its natural end.
inline double kernel_tail(const KernelSpec& k) {
    return k.norm_coeff * detail::raw_upper(k, k.W);
}

inline double kernel_moment(const KernelSpec& k, int p) {
    if (p < 0 || p > 2) {
        throw Error(ErrorCode::UnsupportedMoment, "moment order must be 0, 1 or 2");
    }
    if (k.family == Family::table) {
        // Piecewise linear: Simpson per segment is exact up to cubic integrands.
        const std::size_t m = k.table.size();
        const double h = k.W / static_cast<double>(m - 1);
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < m; ++j) {
            const double a = h * static_cast<double>(j);
            acc += quad::simpson([&](double t) { return std::pow(t, p) * k.norm_coeff * detail::raw_kernel(k, t); }, a, a + h, 2);
        }
        return acc;
    }
    // Closed interval [0, W]: the integrand uses the family's limit value at t = 0.
    return detail::integrate_on_support(
        k, [&](double t) { return std::pow(t, p) * k.norm_coeff * detail::raw_kernel(k, t); }, k.W);
}

/// Smooth operator S(x) induced by the kernel, rescaled to unit integral over [-W, W].
class SmoothProfile {
public:
    explicit SmoothProfile(KernelSpec k) : k_(std::move(k)) {
        const double mass = 2.0 * (kernel_moment(k_, 1) + k_.W * kernel_tail(k_));
        scale_ = 1.0 / mass;
    }

    double operator()(double x) const {
        const double ax = std::abs(x);
        if (ax > k_.W) return 0.0;
        return scale_ * k_.norm_coeff * detail::raw_upper(k_, ax);
    }

    const KernelSpec& kernel() const noexcept { return k_; }
    double W() const noexcept { return k_.W; }

private:
    KernelSpec k_;
    double scale_ = 1.0;
};

struct Violation {
    double magnitude = 0.0;
    double location = 0.0;
};

/// Monotonic convexity check of a smooth operator on (0, W].
struct SmoothReport {
    bool ok = false;
    bool interior_ok = false;
    bool boundary_ok = false;
    Violation slope;      // worst S' >= 0 in the interior
    Violation curvature;  // worst S'' <= 0 in the interior
    double s_at_W = 0.0;  // relative to max |S|
    double ds_at_W = 0.0; // relative to max |S'|
    double d2s_at_W = 0.0; // relative to max |S''|, informational
};

struct ConstraintReport {
    bool c1_ok = false;
    bool c2_ok = false;
    bool c3_ok = false;
    double c1_error = 0.0;     // |∫w - 1|
    Violation positivity;      // smallest sample on the open interval
    Violation monotonicity;    // largest increase between neighbouring grid points
    SmoothReport smooth;
};

inline constexpr std::size_t kCheckGrid = 4096;
inline constexpr double kBoundaryDecay = 0.02;

inline SmoothReport validate_smooth_operator(const std::function<double(double)>& S, double W) {
    const std::size_t n = kCheckGrid;
    const double h = W / static_cast<double>(n);
    std::vector<double> s(n + 1);
    for (std::size_t j = 0; j <= n; ++j) s[j] = S(h * static_cast<double>(j));

    SmoothReport rep;
    double max_s = 0.0;
    double max_d1 = 0.0;
    double max_d2 = 0.0;
    for (double v : s) max_s = std::max(max_s, std::abs(v));
    bool interior = true;
    for (std::size_t j = 1; j < n; ++j) {
        const double x = h * static_cast<double>(j);
        const double d1 = (s[j + 1] - s[j - 1]) / (2.0 * h);
        const double d2 = (s[j + 1] - 2.0 * s[j] + s[j - 1]) / (h * h);
        max_d1 = std::max(max_d1, std::abs(d1));
        max_d2 = std::max(max_d2, std::abs(d2));
        if (!(d1 < 0.0)) {
            interior = false;
            if (d1 >= rep.slope.magnitude) rep.slope = {d1, x};
        }
        if (!(d2 > 0.0)) {
            interior = false;
            if (-d2 >= rep.curvature.magnitude) rep.curvature = {-d2, x};
        }
    }
    const double d1_end = (s[n] - s[n - 1]) / h;
    const double d2_end = (s[n] - 2.0 * s[n - 1] + s[n - 2]) / (h * h);
    rep.s_at_W = max_s > 0.0 ? std::abs(s[n]) / max_s : 0.0;
    rep.ds_at_W = max_d1 > 0.0 ? std::abs(d1_end) / max_d1 : 0.0;
    rep.d2s_at_W = max_d2 > 0.0 ? std::abs(d2_end) / max_d2 : 0.0;
    rep.interior_ok = interior;
    rep.boundary_ok = rep.s_at_W <= kBoundaryDecay && rep.ds_at_W <= kBoundaryDecay;
    rep.ok = rep.interior_ok && rep.boundary_ok;
    return rep;
}

inline ConstraintReport validate_constraints(const KernelSpec& k) {
    ConstraintReport rep;
    rep.c1_error = std::abs(kernel_moment(k, 0) - 1.0);

    const std::size_t n = kCheckGrid;
    const double h = k.W / static_cast<double>(n);
    double min_w = std::numeric_limits<double>::infinity();
    double prev = eval_kernel(k, h);
    double scale = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double t = h * static_cast<double>(j);
        const double w = eval_kernel(k, t);
        scale = std::max(scale, std::abs(w));
        if (j < n && w < min_w) {
            min_w = w;
            rep.positivity = {w, t};
        }
        if (j > 1 && w - prev > rep.monotonicity.magnitude) rep.monotonicity = {w - prev, t};
        prev = w;
    }
    rep.c1_ok = rep.c1_error <= 1e-6 && min_w > 0.0;
    rep.c2_ok = rep.monotonicity.magnitude <= 1e-12 * scale;

    SmoothProfile S(k);
    rep.smooth = validate_smooth_operator([&](double x) { return S(x); }, k.W);
    rep.c3_ok = rep.smooth.ok;
    return rep;
}

} // namespace tgd
