#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tgd/convolve.hpp"
#include "tgd/operator_nd.hpp"

using namespace tgd;

namespace {

double total(const DiscreteOperatorND& op) {
    long double s = 0.0L;
    for (double w : op.weights) s += w;
    return static_cast<double>(s);
}

double peak(const DiscreteOperatorND& op) {
    double m = 0.0;
    for (double w : op.weights) m = std::max(m, std::abs(w));
    return m;
}

const auto kCos = make_rotation_weight(RotationFamily::cosine);

} // namespace

TEST(RotationWeight, Normalization) {
    EXPECT_NEAR(kCos.normalization, 0.5, 1e-12);
    EXPECT_NEAR(make_rotation_weight(RotationFamily::constant)(0.3), 1.0 / std::numbers::pi, 1e-12);
    EXPECT_NEAR(rotation_kappa(kCos, 2, 1), std::numbers::pi / 4.0, 1e-10);
    EXPECT_NEAR(rotation_kappa(kCos, 3, 1), 2.0 / 3.0, 1e-10);
    const auto tab = make_rotation_weight(RotationFamily::table, {1.0, 1.0, 0.5, 0.0});
    EXPECT_NEAR(quad::simpson([&](double t) { return tab(t); }, -std::numbers::pi / 2, std::numbers::pi / 2), 1.0, 1e-6);
    EXPECT_THROW(make_rotation_weight(RotationFamily::table, {0.5, 1.0}), Error);
}

TEST(Rotational, XDirectionAntisymmetry) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto op = rotational_operator(k, kCos, {0.0, 1.0}, Order::first, 2, 6);
    for (int y = -6; y <= 6; ++y) {
        EXPECT_EQ(op.at({y, 0}), 0.0);
        for (int x = -6; x <= 6; ++x) EXPECT_EQ(op.at({y, x}), -op.at({-y, -x}));
        for (int x = 1; x <= 6; ++x) EXPECT_EQ(op.at({y, x}), -op.at({y, -x}));
    }
    EXPECT_LE(std::abs(total(op)), 1e-12);
}

TEST(Rotational, CosineWeightProfile) {
    // weight ∝ T(r)·x/(2r) for x > 0
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto op = rotational_operator(k, kCos, {0.0, 1.0}, Order::first, 2, 6);
    auto expect = [&](int y, int x) {
        const double r = std::hypot(x, y);
        return -eval_kernel(k, r) * x / (2.0 * r);
    };
    const double ratio = op.at({0, 1}) / expect(0, 1);
    for (auto [y, x] : std::vector<std::pair<int, int>>{{1, 2}, {3, 3}, {-2, 4}, {0, 6}}) {
        EXPECT_NEAR(op.at({y, x}) / expect(y, x), ratio, 1e-12);
    }
    EXPECT_EQ(op.at({5, 5}), 0.0); // outside radius 6.5
}

TEST(Rotational, SecondOrderSymmetricAndZeroSum) {
    const auto k = make_kernel(Family::exponential, {}, 5.5);
    const auto op = rotational_operator(k, kCos, {1.0, 2.0}, Order::second, 2, 5);
    for (std::size_t i = 0; i < op.weights.size(); ++i) {
        EXPECT_EQ(op.weights[i], op.weights[op.weights.size() - 1 - i]);
    }
    EXPECT_LE(std::abs(total(op)), 1e-12);
}

TEST(Rotational, Errors) {
    const auto k = make_kernel(Family::gaussian, {}, 3.5);
    try {
        rotational_operator(k, kCos, {1.0, 0.0, 0.0, 0.0}, Order::first, 4, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedDims);
    }
    try {
        rotational_operator(k, kCos, {1.0, 0.0}, Order::first, 2, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateSize);
    }
    EXPECT_THROW(rotational_operator(k, kCos, {0.0, 0.0}, Order::first, 2, 4), Error);
    EXPECT_THROW(orthogonal_operator(k, 0, Order::first, 3, 13), Error);
}

TEST(Lot, IsotropicAndZeroSum) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto op = lot_operator(k, 2, 6);
    EXPECT_LE(std::abs(total(op)), 1e-14);
    for (int y = -6; y <= 6; ++y) {
        for (int x = -6; x <= 6; ++x) {
            EXPECT_EQ(op.at({y, x}), op.at({x, -y}));
            EXPECT_EQ(op.at({y, x}), op.at({-y, x}));
            EXPECT_EQ(op.at({y, x}), op.at({x, y}));
        }
    }
    // ring values fall off with radius
    EXPECT_GT(op.at({0, 1}), op.at({1, 1}));
    EXPECT_GT(op.at({1, 1}), op.at({0, 2}));
    EXPECT_GT(op.at({0, 5}), op.at({0, 6}));
    const auto op3 = lot_operator(k, 3, 4);
    EXPECT_EQ(op3.at({1, 2, 3}), op3.at({3, 1, 2}));
    EXPECT_EQ(op3.at({1, 2, 3}), op3.at({-1, 2, -3}));
}

TEST(Orthogonal, OuterProductOfFactors) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto op = orthogonal_operator(k, 1, Order::first, 2, 6);
    ASSERT_TRUE(op.separable_factors.has_value());
    const auto& f = *op.separable_factors;
    for (int y = -6; y <= 6; ++y) {
        EXPECT_EQ(op.at({y, 0}), 0.0);
        for (int x = -6; x <= 6; ++x) {
            EXPECT_EQ(op.at({y, x}), f[0][static_cast<std::size_t>(y + 6)] * f[1][static_cast<std::size_t>(x + 6)]);
        }
    }
    double s = 0.0;
    for (double v : f[0]) s += v;
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_LE(std::abs(total(op)), 1e-15);
}

TEST(Orthogonal, AffineExactness2D3D) {
    const auto k = make_kernel(Family::gaussian, {}, 4.5);
    const auto op2 = orthogonal_operator(k, 1, Order::first, 2, 4);
    const auto f2 = sample_field({20, 20}, [](const std::vector<double>& p) { return 3.0 * p[1] - 2.0 * p[0] + 1.0; });
    for (double v : tgd_nd(f2, op2, Boundary::valid, true).values) EXPECT_NEAR(v, 3.0, 1e-9);
    const auto op3 = orthogonal_operator(k, 0, Order::first, 3, 4);
    const auto f3 = sample_field({12, 12, 12}, [](const std::vector<double>& p) { return -0.5 * p[0] + p[1] + 2.0 * p[2]; });
    for (double v : tgd_nd(f3, op3, Boundary::valid, true).values) EXPECT_NEAR(v, -0.5, 1e-9);
}

TEST(Rotate, ZeroAngleEqualsDirectSampledOrthogonal) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto a = rotate_operator(k, OrthogonalSpec{}, 0.0, Order::first, 6);
    const auto b = orthogonal_operator(k, 1, Order::first, 2, 6, Discretization::direct_sample);
    EXPECT_EQ(a.weights, b.weights);
    const auto c = rotate_operator(k, kCos, 0.0, Order::first, 6);
    const auto d = rotational_operator(k, kCos, {0.0, 1.0}, Order::first, 2, 6);
    EXPECT_EQ(c.weights, d.weights);
}

TEST(Rotate, QuarterTurnIsAxisOperator) {
    const auto k = make_kernel(Family::gaussian, {}, 5.5);
    const auto y_op = rotate_operator(k, OrthogonalSpec{}, std::numbers::pi / 2.0, Order::first, 5);
    const auto ref = orthogonal_operator(k, 0, Order::first, 2, 5, Discretization::direct_sample);
    for (std::size_t i = 0; i < ref.weights.size(); ++i) EXPECT_EQ(y_op.weights[i], ref.weights[i]);
    ASSERT_TRUE(y_op.separable_factors.has_value());
    EXPECT_NEAR(y_op.direction[0], 1.0, 0.0);
}

TEST(Rotate, LatticeInverse) {
    const auto k = make_kernel(Family::linear, {}, 5.5);
    for (int q = -3; q <= 3; ++q) {
        const double th = q * std::numbers::pi / 2.0;
        for (Order o : {Order::first, Order::second}) {
            const auto op = rotate_operator(k, OrthogonalSpec{}, th, o, 5);
            const auto back = rotate_lattice(op, -q);
            EXPECT_EQ(back.weights, rotate_operator(k, OrthogonalSpec{}, 0.0, o, 5).weights) << q;
            EXPECT_EQ(rotate_lattice(rotate_lattice(op, q), -q).weights, op.weights);
        }
    }
}

TEST(Rotate, FortyFiveDegreesAntisymmetricAboutDiagonal) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    const auto op = rotate_operator(k, OrthogonalSpec{}, -std::numbers::pi / 4.0, Order::first, 6);
    for (int r = -6; r <= 6; ++r) {
        for (int c = -6; c <= 6; ++c) EXPECT_EQ(op.at({r, c}), -op.at({c, r}));
    }
    EXPECT_FALSE(op.separable_factors.has_value());
    EXPECT_LE(std::abs(total(op)), 1e-12);
}

TEST(Rotate, UnsupportedDims) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    auto op = orthogonal_operator(k, 0, Order::first, 3, 3);
    try {
        rotate_lattice(op, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedDims);
    }
}

TEST(IntegerND, SymmetryAndZeroSum) {
    const auto k = make_kernel(Family::gaussian, {}, 6.5);
    for (const auto& op : {orthogonal_operator(k, 1, Order::second, 2, 6), lot_operator(k, 2, 6),
                           rotational_operator(k, kCos, {1.0, 1.0}, Order::first, 2, 6)}) {
        const auto i = to_integer_scale_nd(op);
        EXPECT_EQ(total(i), 0.0);
        EXPECT_FALSE(i.separable_factors.has_value());
        const bool first = is_first_order(i.kind);
        for (std::size_t j = 0; j < i.weights.size(); ++j) {
            const double mirror = i.weights[i.weights.size() - 1 - j];
            EXPECT_EQ(i.weights[j], first ? -mirror : mirror);
            EXPECT_EQ(i.weights[j], std::round(i.weights[j]));
        }
        EXPECT_GT(peak(i), 1.0);
    }
}

TEST(NormConstant, RotationalPlaneResponse) {
    const auto k = make_kernel(Family::gaussian, {}, 5.5);
    const double kappa = std::numbers::pi / 4.0;
    for (int d = 0; d < 8; ++d) {
        const double th = d * std::numbers::pi / 4.0 + 0.1;
        const std::vector<double> v{std::sin(th), std::cos(th)};
        const auto op = rotational_operator(k, kCos, v, Order::first, 2, 5);
        const auto f = sample_field({16, 16}, [&](const std::vector<double>& p) { return 1.7 * (v[0] * p[0] + v[1] * p[1]); });
        for (double x : tgd_nd(f, op, Boundary::valid, true).values) EXPECT_NEAR(x, 1.7 * kappa, 1e-9);
    }
}

TEST(NormConstant, LotRadialResponse) {
    const auto k = make_kernel(Family::gaussian, {}, 4.5);
    for (int dims : {2, 3}) {
        const auto op = lot_operator(k, dims, 4);
        const std::vector<std::size_t> shape(static_cast<std::size_t>(dims), 12);
        const auto f = sample_field(shape, [](const std::vector<double>& p) {
            double s = 0.0;
            for (double v : p) s += (v - 5.0) * (v - 5.0);
            return s;
        });
        for (double v : tgd_nd(f, op, Boundary::valid, true).values) EXPECT_NEAR(v, 2.0, 1e-9);
    }
}
