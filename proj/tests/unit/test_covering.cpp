#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fracdim/covering.hpp"
#include "fracdim/error.hpp"
#include "fracdim/setgen.hpp"

using namespace fracdim;

namespace {

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

TEST(GridIndex, SinglePointAtOrigin) {
    const PointSet p(3, {0.0, 0.0, 0.0});
    const auto idx = build_index(p, 1.0);
    ASSERT_EQ(idx.cell_count(), 1u);
    EXPECT_EQ(idx.cells().begin()->first, (CellKey{0, 0, 0}));
}

TEST(GridIndex, FloorCells) {
    const auto idx = build_index(PointSet(1, {0.0, 0.5, 1.0}), 0.5);
    EXPECT_EQ(idx.cell_count(), 3u);
    for (std::int64_t j : {0, 1, 2}) EXPECT_TRUE(idx.cells().count(CellKey{j}));
    EXPECT_EQ(build_index(PointSet(1, {0.49, 0.51}), 0.5).cell_count(), 2u);
}

TEST(GridIndex, NegativeCoordinatesFloorDown) {
    EXPECT_EQ(cell_coordinate(-0.1, 1.0), -1);
    EXPECT_EQ(cell_coordinate(-1.0, 1.0), -1);
    EXPECT_EQ(cell_coordinate(0.999, 1.0), 0);
}

TEST(GridIndex, RejectsBadMeshAndHugeCells) {
    const PointSet p(1, {1.0});
    EXPECT_EQ(kind_of([&] { build_index(p, 0.0); }), ErrorKind::parameter_domain);
    EXPECT_EQ(kind_of([&] { build_index(p, -1.0); }), ErrorKind::parameter_domain);
    EXPECT_EQ(kind_of([&] { build_index(p, std::nan("")); }), ErrorKind::parameter_domain);
    EXPECT_EQ(kind_of([] { cell_coordinate(1e300, 1e-10); }), ErrorKind::numeric_range);
}

TEST(GridIndex, BallQuery) {
    const PointSet p(1, {0.0, 0.1, 0.2, 0.5, 0.9});
    const auto idx = build_index(p, 0.25);
    const double x[] = {0.15};
    EXPECT_EQ(idx.ball(x, 0.06), (std::vector<std::size_t>{1, 2}));
    const double y[] = {0.0};
    EXPECT_EQ(idx.ball(y, 0.5).size(), 4u);
}

TEST(GridCount, CantorAtOwnLevel) {
    for (int k = 1; k <= 10; ++k) {
        EXPECT_EQ(grid_count(gen_cantor_midpoints(k), std::pow(3.0, -k)).count, std::size_t{1} << k);
    }
}

TEST(GridCount, SmallSets) {
    EXPECT_EQ(grid_count(PointSet(1, {0.0, 0.5, 1.0}), 0.5).count, 3u);
    EXPECT_EQ(grid_count(gen_cantor_midpoints(6), 1.0).count, 1u);
    EXPECT_EQ(grid_count(gen_uniform_grid(7, 2), 1.5).count, 1u);
    EXPECT_EQ(grid_count(PointSet(2), 0.1).count, 0u);
}

TEST(GridCount, CoarseMeshGivesAtMostTwoToTheD) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int d = 1; d <= 3; ++d) {
        std::vector<double> xs(static_cast<std::size_t>(d) * 30);
        for (double& x : xs) x = u(rng);
        const PointSet p(static_cast<std::size_t>(d), xs);
        const double big = extent(p) + max_abs_coordinate(p) + 1e-9;
        EXPECT_LE(grid_count(p, big).count, std::size_t{1} << d);
    }
}

TEST(GridCount, SubsetCounts) {
    const PointSet p(1, {0.0, 0.3, 0.6, 0.9});
    const std::size_t sub[] = {0, 2};
    EXPECT_EQ(grid_count_subset(p, sub, 0.25), 2u);
}

TEST(GridCount, BestAnchorNeverExceedsAnchored) {
    const auto p = gen_cantor_midpoints(7);
    for (double delta : {0.1, 0.05, 0.013}) {
        EXPECT_LE(grid_count_best_anchor(p, delta, 4).count, grid_count(p, delta).count);
    }
}

TEST(LocalCount, ExampleEBallAtTen) {
    const auto e = gen_example_E(12);
    const auto idx = build_index(e, example_delta(10));
    const double x[] = {10.0};
    const double d = example_delta(10);
    const auto c = local_count(idx, x, 10 * d, d);
    // Block 9 reaches into the ball, so more than the block's own 11 cells.
    EXPECT_GE(static_cast<double>(c.count), 10.0 / 3.0);
    EXPECT_EQ(c.count, LineIndex(e).local_count(10.0, 10 * d, d));
}

TEST(LocalCount, IsolatedCenterCountsOne) {
    const PointSet p(1, {0.0, 1.0, 3.0});
    const auto idx = build_index(p, 0.5);
    const double x[] = {1.0};
    EXPECT_EQ(local_count(idx, x, 0.9, 0.1).count, 1u);
}

TEST(LocalCount, MeshEqualRadiusAtMostThreeToTheD) {
    const PointSet p(1, {0.05, 0.5, 0.95});
    const auto idx = build_index(p, 0.45);
    const double x[] = {0.5};
    EXPECT_EQ(local_count(idx, x, 0.45, 0.45).count, 3u);
    const PointSet one(2, {0.3, 0.7});
    const auto idx1 = build_index(one, 0.2);
    const double y[] = {0.3, 0.7};
    EXPECT_EQ(local_count(idx1, y, 0.2, 0.2).count, 1u);
}

TEST(LocalCount, Errors) {
    const PointSet p(1, {0.0, 1.0});
    const auto idx = build_index(p, 0.5);
    const double x[] = {0.0};
    const double off[] = {0.4};
    EXPECT_EQ(kind_of([&] { local_count(idx, x, 0.1, 0.2); }), ErrorKind::scale_order);
    EXPECT_EQ(kind_of([&] { local_count(idx, off, 0.5, 0.1); }), ErrorKind::center_domain);
    EXPECT_EQ(local_count(idx, off, 0.7, 0.1, CenterCheck::allow_off_set).count, 2u);
}

TEST(LineIndex, MatchesGridIndex) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(300);
    for (double& x : xs) x = u(rng);
    const PointSet p(1, xs);
    const LineIndex line(p);
    const auto grid = build_index(p, 0.05);
    for (std::size_t i = 0; i < p.size(); i += 7) {
        for (double R : {0.01, 0.1, 0.5}) {
            for (double r : {R / 16, R / 2}) {
                EXPECT_EQ(line.local_count(xs[i], R, r), local_count(grid, p.point(i), R, r).count);
            }
        }
    }
    EXPECT_EQ(line.grid_count(0.01), grid_count(p, 0.01).count);
}

TEST(LineIndex, ManyRangesAgreeWithSingleScans) {
    const auto p = gen_poly_sequence(1.0, 3000);
    const LineIndex line(p);
    std::vector<double> centers(line.sorted().begin(), line.sorted().end());
    std::vector<std::size_t> order(centers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (double R : {1e-4, 1e-2, 0.3}) {
        const auto ranges = line.ball_ranges(centers, order, R);
        for (std::size_t i = 0; i < centers.size(); i += 97) EXPECT_EQ(ranges[i], line.ball_range(centers[i], R));
        for (double r : {R / 8, R / 64}) {
            const auto many = line.count_cells_many(ranges, r);
            for (std::size_t i = 0; i < centers.size(); i += 13) {
                EXPECT_EQ(many[i], line.count_cells(ranges[i].first, ranges[i].second, r));
            }
        }
    }
}

TEST(LineIndex, RequiresOneDimension) {
    EXPECT_EQ(kind_of([] { LineIndex(PointSet(2, {0.0, 0.0})); }), ErrorKind::dimension_mismatch);
}

TEST(CoverCurve, CantorDoublingCounts) {
    const auto curve = cover_curve(gen_cantor_midpoints(10), 1.0 / 3, std::pow(3.0, -8), 1.0 / 3);
    ASSERT_EQ(curve.entries.size(), 8u);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(curve.entries[j].count, std::size_t{2} << j);
    EXPECT_TRUE(curve.monotone);
    EXPECT_TRUE(curve.schedule.nested());
}

TEST(CoverCurve, EmptySetCountsZero) {
    const auto curve = cover_curve(PointSet(1), 0.5, 0.01, 0.5);
    for (const auto& e : curve.entries) EXPECT_EQ(e.count, 0u);
}

TEST(CoverCurve, UniformGridPigeonhole) {
    const auto g = gen_uniform_grid(1024);
    for (int m : {2, 16, 256, 1024}) EXPECT_EQ(grid_count(g, 1.0 / m).count, static_cast<std::size_t>(m));
    EXPECT_EQ(grid_count(gen_uniform_grid(1000), 1.0 / 7).count, 7u);
}

TEST(CoverCurve, ScheduleErrorsAndCsv) {
    EXPECT_EQ(kind_of([] { cover_curve(PointSet(1, {0.0}), 0.1, 0.5, 0.5); }), ErrorKind::scale_order);
    EXPECT_EQ(kind_of([] { cover_curve(PointSet(1, {0.0}), 0.5, 0.1, 1.5); }), ErrorKind::parameter_domain);
    const auto csv = cover_curve_csv(cover_curve(PointSet(1, {0.0, 0.5}), 1.0, 0.25, 0.5));
    EXPECT_EQ(csv.rfind("delta,count,log_inv_delta,log_count\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(CoverCurve, ScalesStrictlyDecrease) {
    const ScaleSchedule s{0.9, 0.001, 0.37};
    const auto scales = s.scales();
    for (std::size_t i = 1; i < scales.size(); ++i) EXPECT_LT(scales[i], scales[i - 1]);
    EXPECT_GE(scales.back(), 0.001);
    EXPECT_FALSE(s.nested());
    EXPECT_TRUE((ScaleSchedule{1.0, 0.01, 0.5}).nested());
}
