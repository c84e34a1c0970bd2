#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tgd/convolve.hpp"
#include "tgd/noise.hpp"
#include "tgd/operator1d.hpp"

using namespace tgd;

namespace {

struct Draw {
    KernelSpec kernel;
    int N;
};

// Random kernel drawn from the families' valid parameter ranges, keeping
// only draws that satisfy all three constraints.
std::vector<Draw> draws(std::size_t count, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pickN(2, 16);
    std::uniform_int_distribution<int> pickF(0, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Draw> out;
    while (out.size() < count) {
        const int N = pickN(rng);
        const double W = N + 0.5;
        ParamMap p;
        Family f = Family::gaussian;
        switch (pickF(rng)) {
            case 0: p["delta"] = W * (0.2 + 0.2 * u(rng)); break;
            case 1:
                f = Family::linear;
                p["k"] = 0.5 + 2.0 * u(rng);
                p["c"] = -p["k"] * W * (1.0 + 0.01 * u(rng));
                break;
            case 2:
                f = Family::exponential;
                p["delta"] = std::sqrt(W / (4.0 + 3.0 * u(rng)));
                break;
            case 3:
                f = Family::landau;
                p["tau"] = W * (1.0 + 0.05 * u(rng));
                p["n"] = static_cast<double>(1 + static_cast<int>(4.0 * u(rng)));
                break;
            default:
                f = Family::weibull;
                p["k"] = 0.5 + 0.5 * u(rng);
                p["lambda"] = W / (5.0 + 3.0 * u(rng));
                break;
        }
        auto k = make_kernel(f, p, W);
        const auto rep = validate_constraints(k);
        if (rep.c1_ok && rep.c2_ok && rep.c3_ok) out.push_back({std::move(k), N});
    }
    return out;
}

const std::vector<Draw>& corpus() {
    static const auto d = draws(200, 20240611u);
    return d;
}

double sum(const std::vector<double>& w) {
    long double s = 0.0L;
    for (double v : w) s += v;
    return static_cast<double>(s);
}

} // namespace

TEST(Properties, ZeroSumAndSymmetry) {
    for (const auto& d : corpus()) {
        for (Order o : {Order::first, Order::second}) {
            const auto op = discretize(build_continuous(d.kernel, o), d.N);
            EXPECT_LE(std::abs(sum(op.weights)), 1e-13) << to_string(d.kernel.family) << " N=" << d.N;
            for (int i = 1; i <= d.N; ++i) {
                const double sign = o == Order::first ? -1.0 : 1.0;
                EXPECT_EQ(op.at(i), sign * op.at(-i));
            }
        }
    }
}

TEST(Properties, WeightsDecayAwayFromCentre) {
    for (const auto& d : corpus()) {
        const auto op = discretize(build_continuous(d.kernel, Order::first), d.N);
        for (int i = 1; i < d.N; ++i) EXPECT_GT(op.at(-i), op.at(-i - 1)) << to_string(d.kernel.family) << " N=" << d.N;
        EXPECT_GT(op.at(-d.N), 0.0);
        const auto op2 = discretize(build_continuous(d.kernel, Order::second), d.N);
        EXPECT_LT(op2.at(0), 0.0);
        for (int i = 1; i < d.N; ++i) EXPECT_GE(op2.at(i), op2.at(i + 1));
    }
}

TEST(Properties, IntegerScalingIsExact) {
    for (const auto& d : corpus()) {
        for (Order o : {Order::first, Order::second}) {
            const auto op = to_integer_scale(discretize(build_continuous(d.kernel, o), d.N));
            EXPECT_EQ(sum(op.weights), 0.0);
            for (double w : op.weights) EXPECT_EQ(w, std::round(w));
            for (int i = 1; i < d.N; ++i) EXPECT_GE(std::abs(op.at(-i)), std::abs(op.at(-i - 1)));
            EXPECT_GE(std::abs(op.at(-d.N)), 1.0);
        }
    }
}

TEST(Properties, PolynomialExactness) {
    for (const auto& d : corpus()) {
        const auto op1 = discretize(build_continuous(d.kernel, Order::first), d.N);
        const auto op2 = discretize(build_continuous(d.kernel, Order::second), d.N);
        const std::size_t n = static_cast<std::size_t>(4 * d.N + 3);
        const auto lin = sample_field({n}, [](const std::vector<double>& p) { return 0.7 * p[0] - 3.0; });
        const auto quad = sample_field({n}, [](const std::vector<double>& p) { return 0.25 * p[0] * p[0] + p[0]; });
        for (double v : tgd_1d(lin, op1, Boundary::valid, true).values) EXPECT_NEAR(v, 0.7, 1e-9);
        for (double v : tgd_1d(quad, op2, Boundary::valid, true).values) EXPECT_NEAR(v, 0.5, 1e-9);
        for (double v : tgd_1d(lin, op2, Boundary::valid, true).values) EXPECT_NEAR(v, 0.0, 1e-9);
    }
}

TEST(Properties, LinearityOfResponse) {
    std::size_t i = 0;
    for (const auto& d : corpus()) {
        const auto op = discretize(build_continuous(d.kernel, Order::first), d.N);
        const auto a = add_gaussian_noise(SampledField<double>({64}), 1.0, 2 * i);
        const auto b = add_gaussian_noise(SampledField<double>({64}), 1.0, 2 * i + 1);
        ++i;
        auto m = a;
        for (std::size_t j = 0; j < m.size(); ++j) m.values[j] = -1.5 * a.values[j] + 4.0 * b.values[j];
        const auto ra = convolve(a, op, Boundary::reflect);
        const auto rb = convolve(b, op, Boundary::reflect);
        const auto rm = convolve(m, op, Boundary::reflect);
        for (std::size_t j = 0; j < rm.size(); ++j) EXPECT_NEAR(rm.values[j], -1.5 * ra.values[j] + 4.0 * rb.values[j], 1e-11);
    }
}

TEST(Properties, ProductRuleOnSmoothFields) {
    // first-order response to f·g is close to f'·g + f·g' for slowly varying inputs
    const auto k = make_kernel(Family::gaussian, {}, 4.5);
    const auto op = discretize(build_continuous(k, Order::first), 4);
    const std::size_t n = 400;
    auto make = [&](auto fn) {
        auto fld = sample_field({n}, [&](const std::vector<double>& p) { return fn(p[0] * 0.01); });
        fld.spacing = {0.01};
        return fld;
    };
    auto f = make([](double x) { return std::sin(x); });
    auto g = make([](double x) { return std::exp(0.5 * x); });
    auto fg = make([](double x) { return std::sin(x) * std::exp(0.5 * x); });
    f.spacing = g.spacing = fg.spacing = {0.01};
    const auto df = tgd_1d(f, op, Boundary::valid, true);
    const auto dg = tgd_1d(g, op, Boundary::valid, true);
    const auto dfg = tgd_1d(fg, op, Boundary::valid, true);
    for (std::size_t j = 0; j < dfg.size(); ++j) {
        const double rhs = df.values[j] * g.values[j + 4] + f.values[j + 4] * dg.values[j];
        EXPECT_NEAR(dfg.values[j], rhs, 1e-3);
    }
}

TEST(Properties, ConvergesUnderRefinement) {
    const auto k = make_kernel(Family::gaussian, {}, 3.5);
    const auto op = discretize(build_continuous(k, Order::first), 3);
    double prev = 1e9;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        const std::size_t n = static_cast<std::size_t>(std::round(6.0 / h)) + 1;
        auto f = sample_field({n}, [&](const std::vector<double>& p) { return std::sin(p[0] * h); });
        f.spacing = {h};
        const auto d = tgd_1d(f, op, Boundary::valid, true);
        double err = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) err = std::max(err, std::abs(d.values[j] - std::cos((static_cast<double>(j) + 3) * h)));
        EXPECT_LT(err, prev * 0.3);
        prev = err;
    }
}

TEST(Properties, UnbiasedUnderNoise) {
    // the mean response to pure noise is zero and its spread tracks the weights
    const auto k = make_kernel(Family::gaussian, {}, 5.5);
    const auto op = discretize(build_continuous(k, Order::first), 5);
    const auto x = add_gaussian_noise(SampledField<double>({20000}), 1.0, 99);
    const auto y = convolve(x, op, Boundary::valid);
    double m = 0.0, s = 0.0;
    for (double v : y.values) m += v;
    m /= static_cast<double>(y.size());
    for (double v : y.values) s += (v - m) * (v - m);
    s /= static_cast<double>(y.size() - 1);
    double w2 = 0.0;
    for (double w : op.weights) w2 += w * w;
    EXPECT_NEAR(m, 0.0, 5.0 * std::sqrt(w2 / static_cast<double>(y.size())));
    EXPECT_NEAR(s, w2, 0.05 * w2);
}
