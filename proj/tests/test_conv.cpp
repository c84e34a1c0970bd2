#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "tgd/convolve.hpp"
#include "tgd/noise.hpp"
#include "tgd/operator_nd.hpp"

using namespace tgd;

namespace {

SampledField<double> noisy(std::vector<std::size_t> shape, std::uint64_t seed) {
    return add_gaussian_noise(SampledField<double>(std::move(shape)), 1.0, seed);
}

DiscreteOperator1D op1(Order o = Order::first, int N = 4) {
    return discretize(build_continuous(make_kernel(Family::gaussian, {}, N + 0.5), o), N);
}

} // namespace

TEST(Convolve, ZeroOperatorGivesZero) {
    auto op = op1();
    for (auto& w : op.weights) w = 0.0;
    for (double v : convolve(noisy({50}, 1), op).values) EXPECT_EQ(v, 0.0);
}

TEST(Convolve, MatchesDirectSum) {
    const auto op = op1(Order::first, 3);
    const auto x = noisy({40}, 2);
    const auto y = convolve(x, op, Boundary::zero);
    for (int n = 0; n < 40; ++n) {
        double ref = 0.0;
        for (int k = -3; k <= 3; ++k) {
            const int m = n - k;
            if (m >= 0 && m < 40) ref += op.at(k) * x.values[static_cast<std::size_t>(m)];
        }
        EXPECT_NEAR(y.values[static_cast<std::size_t>(n)], ref, 1e-12);
    }
}

TEST(Convolve, RampSlopeInteriorAndBoundaries) {
    const auto op = op1(Order::first, 4);
    const auto x = sample_field({30}, [](const std::vector<double>& p) { return 2.0 * p[0]; });
    const auto y = tgd_1d(x, op, Boundary::replicate, true);
    for (std::size_t n = 4; n < 26; ++n) EXPECT_NEAR(y.values[n], 2.0, 1e-12);
    EXPECT_LT(y.values[0], 2.0);
    EXPECT_EQ(tgd_1d(x, op, Boundary::valid).size(), 22u);
    const auto z = tgd_1d(x, op, Boundary::zero, true);
    EXPECT_GT(std::abs(z.values[29] - 2.0), 1.0);
}

TEST(Convolve, ReflectBoundaryIsHalfSample) {
    const auto m = detail::boundary_map(4, 5, Boundary::reflect);
    // index p maps to position p - N
    const std::vector<long> expect{3, 3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0, 0};
    EXPECT_EQ(m, expect);
    const auto r = detail::boundary_map(3, 2, Boundary::replicate);
    EXPECT_EQ(r, (std::vector<long>{0, 0, 0, 1, 2, 2, 2}));
    const auto z = detail::boundary_map(3, 1, Boundary::zero);
    EXPECT_EQ(z, (std::vector<long>{-1, 0, 1, 2, -1}));
}

TEST(Convolve, SeparableEqualsDense) {
    const auto k = make_kernel(Family::gaussian, {}, 4.5);
    for (Boundary b : {Boundary::replicate, Boundary::reflect, Boundary::zero, Boundary::valid}) {
        for (int axis : {0, 1}) {
            for (Order o : {Order::first, Order::second}) {
                const auto op = orthogonal_operator(k, axis, o, 2, 4);
                const auto f = noisy({17, 23}, 3);
                const auto a = convolve(f, op, b);
                const auto s = convolve_separable(f, op, b);
                ASSERT_EQ(a.shape, s.shape);
                for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], s.values[i], 1e-12);
            }
        }
        const auto op3 = orthogonal_operator(k, 2, Order::first, 3, 4);
        const auto f3 = noisy({10, 11, 12}, 4);
        const auto a3 = convolve(f3, op3, b);
        const auto s3 = convolve_separable(f3, op3, b);
        ASSERT_EQ(a3.shape, s3.shape);
        for (std::size_t i = 0; i < a3.size(); ++i) EXPECT_NEAR(a3.values[i], s3.values[i], 1e-12);
    }
}

TEST(Convolve, TranslationEquivariance) {
    const auto op = op1(Order::second, 5);
    const auto x = noisy({64}, 5);
    std::vector<double> shifted(x.values.begin() + 7, x.values.end());
    const auto y = convolve(x, op, Boundary::valid);
    const auto ys = convolve(make_field_1d(shifted), op, Boundary::valid);
    for (std::size_t n = 0; n < ys.size(); ++n) EXPECT_DOUBLE_EQ(ys.values[n], y.values[n + 7]);
}

TEST(Convolve, Linearity) {
    const auto k = make_kernel(Family::exponential, {}, 3.5);
    const auto op = lot_operator(k, 2, 3);
    const auto a = noisy({20, 20}, 6);
    const auto b = noisy({20, 20}, 7);
    auto mix = a;
    for (std::size_t i = 0; i < mix.size(); ++i) mix.values[i] = 2.5 * a.values[i] - 0.75 * b.values[i];
    const auto ra = convolve(a, op, Boundary::reflect);
    const auto rb = convolve(b, op, Boundary::reflect);
    const auto rm = convolve(mix, op, Boundary::reflect);
    for (std::size_t i = 0; i < rm.size(); ++i) EXPECT_NEAR(rm.values[i], 2.5 * ra.values[i] - 0.75 * rb.values[i], 1e-12);
}

TEST(Convolve, ThreadCountDoesNotChangeResult) {
    const auto k = make_kernel(Family::gaussian, {}, 5.5);
    const auto op = rotational_operator(k, make_rotation_weight(RotationFamily::cosine), {0.6, 0.8}, Order::first, 2, 5);
    const auto f = noisy({61, 47}, 8);
    setenv("TGD_THREADS", "1", 1);
    EXPECT_EQ(thread_count(), 1u);
    const auto one = convolve(f, op);
    setenv("TGD_THREADS", "4", 1);
    EXPECT_EQ(thread_count(), 4u);
    const auto four = convolve(f, op);
    setenv("TGD_THREADS", "7", 1);
    const auto seven = convolve(f, op);
    unsetenv("TGD_THREADS");
    EXPECT_EQ(one.values, four.values);
    EXPECT_EQ(one.values, seven.values);
}

TEST(Convolve, FloatFieldsSupported) {
    const auto op = op1();
    SampledField<float> x({20}, 1.0f);
    const auto y = convolve(x, op);
    for (float v : y.values) EXPECT_NEAR(v, 0.0f, 1e-6f);
}

TEST(Convolve, ErrorCodes) {
    const auto k = make_kernel(Family::gaussian, {}, 4.5);
    const auto op2 = lot_operator(k, 2, 4);
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Usage;
    };
    EXPECT_EQ(code([&] { convolve(noisy({30}, 1), op2); }), ErrorCode::DimsMismatch);
    EXPECT_EQ(code([&] { convolve(noisy({5, 30}, 1), op2, Boundary::valid); }), ErrorCode::FieldTooSmall);
    EXPECT_EQ(code([&] { convolve_separable(noisy({30, 30}, 1), op2); }), ErrorCode::NotSeparable);
    EXPECT_EQ(code([&] { convolve(SampledField<double>({0, 0}), op2); }), ErrorCode::EmptySignal);
    EXPECT_EQ(code([&] { tgd_1d(noisy({5}, 1), op1(), Boundary::valid); }), ErrorCode::SignalTooShort);
    EXPECT_EQ(code([&] { tgd_1d(SampledField<double>({0}), op1()); }), ErrorCode::EmptySignal);
}

TEST(Convolve, LotResponseOnSquareIsOneSignedOutside) {
    const auto k = make_kernel(Family::gaussian, {}, 3.5);
    const auto op = lot_operator(k, 2, 3);
    auto f = sample_field({32, 32}, [](const std::vector<double>& p) {
        return (p[0] >= 10 && p[0] < 22 && p[1] >= 10 && p[1] < 22) ? 1.0 : 0.0;
    });
    const auto y = convolve(f, op, Boundary::replicate);
    // outside the square, next to the edge, the Laplacian of a bright box is positive
    EXPECT_GT(y.at({16, 9}), 0.0);
    EXPECT_LT(y.at({16, 10}), 0.0);
    EXPECT_NEAR(y.at({16, 16}), 0.0, 1e-12);
    EXPECT_NEAR(y.at({2, 2}), 0.0, 1e-12);
}
