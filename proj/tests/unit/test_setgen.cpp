#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fracdim/error.hpp"
#include "fracdim/setgen.hpp"

using namespace fracdim;

namespace {

std::vector<double> values(const PointSet& p) { return {p.coords().begin(), p.coords().end()}; }

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::io;
}

}  // namespace

TEST(ExampleE, FirstBlock) {
    EXPECT_EQ(values(gen_example_E(2)), (std::vector<double>{2.0, 2.25, 2.5}));
    EXPECT_DOUBLE_EQ(example_delta(2), 0.25);
}

TEST(ExampleE, SecondBlock) {
    const auto p = gen_example_E(3);
    ASSERT_EQ(p.size(), 7u);
    const double d3 = std::pow(3.0, -1.5);
    EXPECT_NEAR(example_delta(3), 0.19245, 1e-5);
    for (int i = 0; i <= 3; ++i) EXPECT_NEAR(p.point(3 + i)[0], 3.0 + i * d3, 1e-15);
}

TEST(ExampleE, PointCountIsSumOfBlockSizes) {
    EXPECT_EQ(gen_example_E(10).size(), 63u);
    EXPECT_EQ(gen_example_E(100).size(), 5148u);
}

TEST(ExampleE, BlockSpacingIsDelta) {
    const auto p = gen_example_E(200);
    std::size_t at = 0;
    for (int n = 2; n <= 200; ++n) {
        const double d = example_delta(n);
        for (int i = 1; i <= n; ++i) {
            const double gap = p.point(at + i)[0] - p.point(at + i - 1)[0];
            EXPECT_LE(std::fabs(gap - d), 4 * std::ldexp(1.0, std::ilogb(2.0 * n) - 52)) << n;
        }
        at += n + 1;
    }
}

TEST(ExampleE, RejectsSmallNMax) {
    EXPECT_EQ(kind_of([] { gen_example_E(1); }), ErrorKind::parameter_domain);
}

TEST(Ek, SecondRowForKTwo) {
    EXPECT_DOUBLE_EQ(ek_delta(2, 2), 0.25);
    const auto p = gen_Ek(2, 2);
    const std::set<double> s(p.coords().begin(), p.coords().end());
    EXPECT_TRUE(s.count(0.25) && s.count(0.5) && s.count(0.0) && s.count(1.0));
    EXPECT_EQ(p.size(), 4u);
}

TEST(Ek, FirstRowOnly) { EXPECT_EQ(values(gen_Ek(2, 1)), (std::vector<double>{0.0, 1.0})); }

TEST(Ek, ContainedInUnitInterval) {
    for (int k : {2, 3, 5}) {
        const auto p = gen_Ek(k, 300);
        for (double x : p.coords()) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 1.0);
        }
        EXPECT_NEAR(300 * ek_delta(k, 300), std::pow(300.0, -1.0 / (k - 1)), 1e-14);
    }
}

TEST(Ek, NoDuplicates) {
    const auto p = gen_Ek(2, 100);
    const std::set<double> s(p.coords().begin(), p.coords().end());
    EXPECT_EQ(s.size(), p.size());
}

TEST(Ek, RejectsBadParameters) {
    EXPECT_EQ(kind_of([] { gen_Ek(1, 5); }), ErrorKind::parameter_domain);
    EXPECT_EQ(kind_of([] { gen_Ek(2, 0); }), ErrorKind::parameter_domain);
}

TEST(EgbUnion, SingleTermIsShiftedEk) {
    const double two[] = {2.0};
    // Shifting by 2 merges rows whose points differed only by rounding.
    EXPECT_EQ(gen_egb_union(2, 7), dedupe(affine_image(gen_Ek(2, 7), 1.0, two)));
}

TEST(EgbUnion, FirstRowsOverlap) {
    EXPECT_EQ(values(gen_egb_union(3, 1)), (std::vector<double>{2.0, 3.0, 4.0}));
}

TEST(Cantor, Levels) {
    const auto l1 = values(gen_cantor_midpoints(1));
    ASSERT_EQ(l1.size(), 2u);
    EXPECT_DOUBLE_EQ(l1[0], 1.0 / 6);
    EXPECT_DOUBLE_EQ(l1[1], 5.0 / 6);
    const auto l2 = values(gen_cantor_midpoints(2));
    const std::vector<double> want{1.0 / 18, 5.0 / 18, 13.0 / 18, 17.0 / 18};
    ASSERT_EQ(l2.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(l2[i], want[i], 1e-16);
    EXPECT_EQ(gen_cantor_midpoints(10).size(), 1024u);
}

TEST(Poly, SmallCases) {
    EXPECT_EQ(values(gen_poly_sequence(1.0, 3)), (std::vector<double>{0.0, 1.0, 0.5, 1.0 / 3}));
    EXPECT_EQ(values(gen_poly_sequence(2.0, 2)), (std::vector<double>{0.0, 1.0, 0.25}));
}

TEST(Poly, MinimumGapBetweenLastTwoPoints) {
    const auto p = gen_poly_sequence(1.0, 500);
    EXPECT_NEAR(min_positive_gap(p), 1.0 / (500.0 * 499.0), 1e-18);
}

TEST(Grid, OneAndTwoDimensions) {
    EXPECT_EQ(values(gen_uniform_grid(4)), (std::vector<double>{0.0, 0.25, 0.5, 0.75}));
    const auto g = gen_uniform_grid(3, 2);
    EXPECT_EQ(g.dim(), 2u);
    EXPECT_EQ(g.size(), 9u);
}

TEST(Generate, DispatchesOnFamily) {
    GeneratorSpec spec;
    spec.family = Family::cantor_midpoints;
    spec.level = 3;
    EXPECT_EQ(generate(spec), gen_cantor_midpoints(3));
    spec.family = Family::example_gubr;
    spec.n_max = 4;
    EXPECT_EQ(generate(spec), gen_example_E(4));
    EXPECT_EQ(family_from_string(to_string(Family::poly_sequence)), Family::poly_sequence);
}

TEST(Affine, IdentityAndInverse) {
    const auto p = gen_cantor_midpoints(4);
    EXPECT_EQ(affine_image(p, 1.0), p);
    EXPECT_EQ(affine_image(affine_image(p, 2.0), 0.5), p);
    const double one[] = {1.0};
    EXPECT_EQ(values(affine_image(PointSet(1, {0.0, 1.0}), 2.0, one)), (std::vector<double>{1.0, 3.0}));
}

TEST(Affine, RejectsZeroScaleAndBadOffset) {
    const PointSet p(1, {0.0});
    EXPECT_EQ(kind_of([&] { affine_image(p, 0.0); }), ErrorKind::parameter_domain);
    const double off[] = {1.0, 2.0};
    EXPECT_EQ(kind_of([&] { affine_image(p, 1.0, off); }), ErrorKind::dimension_mismatch);
}

TEST(SetAlgebra, UnionDropsDuplicates) {
    const PointSet a(1, {0.0});
    EXPECT_EQ(set_union(a, a).size(), 1u);
    EXPECT_EQ(set_union(PointSet(1, {0.0, 1.0}), PointSet(1, {1.0, 2.0})).size(), 3u);
}

TEST(SetAlgebra, ProductOfCorners) {
    const PointSet a(1, {0.0, 1.0});
    const auto sq = set_product(a, a);
    EXPECT_EQ(sq.dim(), 2u);
    EXPECT_EQ(sq.size(), 4u);
}

TEST(SetAlgebra, UnionDimensionMismatch) {
    EXPECT_EQ(kind_of([] { set_union(PointSet(1, {0.0}), PointSet(2, {0.0, 0.0})); }),
              ErrorKind::dimension_mismatch);
}

TEST(SetAlgebra, RestrictToBall) {
    const double c[] = {0.0};
    EXPECT_EQ(restrict_to_ball(gen_example_E(5), c, 1.5).size(), 0u);
    EXPECT_EQ(restrict_to_ball(gen_example_E(5), c, 3.0).size(), 4u);
}
