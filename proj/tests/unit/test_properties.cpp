// Invariants checked on seeded random inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fracdim/covering.hpp"
#include "fracdim/setgen.hpp"
#include "fracdim/spectra.hpp"
#include "fracdim/verify.hpp"

using namespace fracdim;

namespace {

// Random point clouds: uniform lattice points, or clusters of geometrically
// shrinking spread so that several scales are populated.
class CloudGen {
public:
    explicit CloudGen(std::uint64_t seed) : rng_(seed) {}

    std::size_t dim() { return 1 + rng_() % 2; }
    std::size_t size(std::size_t lo, std::size_t hi) { return lo + rng_() % (hi - lo + 1); }

    PointSet lattice(std::size_t d, std::size_t n, int bits = 16) {
        std::vector<double> xs(d * n);
        for (double& x : xs) x = std::ldexp(static_cast<double>(rng_() % (1u << bits)), -bits);
        return PointSet(d, xs);
    }

    PointSet clustered(std::size_t d, std::size_t n) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> xs;
        Point center(d);
        for (double& c : center) c = u(rng_);
        double spread = 0.5;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 8 == 0) spread *= 0.3;
            for (std::size_t j = 0; j < d; ++j) xs.push_back(center[j] + spread * (u(rng_) - 0.5));
        }
        return PointSet(d, xs);
    }

    PointSet any(std::size_t d, std::size_t n) { return rng_() % 2 ? lattice(d, n) : clustered(d, n); }

    double log_uniform(double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng_));
    }

    std::size_t index(std::size_t n) { return rng_() % n; }

private:
    std::mt19937_64 rng_;
};

}  // namespace

TEST(Properties, GridCountBoundedBySizeAndMonotoneUnderUnion) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        CloudGen g(seed);
        const std::size_t d = g.dim();
        const auto e = g.any(d, g.size(1, 80));
        const auto f = g.any(d, g.size(1, 80));
        const auto u = set_union(e, f);
        for (int j = 0; j < 6; ++j) {
            const double delta = g.log_uniform(1e-5, 2.0);
            const auto ne = grid_count(e, delta).count;
            const auto nu = grid_count(u, delta).count;
            ASSERT_LE(ne, e.size());
            ASSERT_GE(ne, 1u);
            ASSERT_LE(ne, nu);
            ASSERT_LE(nu, ne + grid_count(f, delta).count);
        }
    }
}

TEST(Properties, NestedSchedulesGiveMonotoneCurves) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CloudGen g(100 + seed);
        const auto p = g.any(g.dim(), g.size(2, 200));
        const double ratio = seed % 2 ? 0.5 : 1.0 / 3;
        const auto curve = cover_curve(p, 1.0, 1e-6, ratio);
        ASSERT_TRUE(curve.monotone);
        for (std::size_t i = 1; i < curve.entries.size(); ++i) {
            ASSERT_GE(curve.entries[i].count, curve.entries[i - 1].count);
        }
    }
}

TEST(Properties, LatticeTranslationPreservesCounts) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CloudGen g(200 + seed);
        const std::size_t d = g.dim();
        const auto p = g.lattice(d, g.size(1, 60));
        for (int j = 1; j <= 10; ++j) {
            const double delta = std::ldexp(1.0, -j);
            const std::vector<double> shift(d, delta * static_cast<double>(g.index(7)));
            ASSERT_EQ(grid_count(affine_image(p, 1.0, shift), delta).count, grid_count(p, delta).count);
        }
    }
}

TEST(Properties, LocalCountBetweenOneAndBallSize) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CloudGen g(300 + seed);
        const std::size_t d = g.dim();
        const auto p = g.any(d, g.size(1, 120));
        const auto idx = build_index(p, 0.05);
        for (int j = 0; j < 10; ++j) {
            const auto x = p.point(g.index(p.size()));
            const double R = g.log_uniform(1e-4, 1.0);
            const double r = R / g.log_uniform(1.0, 1e3);
            const auto c = local_count(idx, x, R, r).count;
            ASSERT_GE(c, 1u);
            ASSERT_LE(c, idx.ball(x, R).size());
            ASSERT_LE(c, local_count(idx, x, R, r / 2).count);
        }
    }
}

TEST(Properties, LineAndGridIndexAgree) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        CloudGen g(400 + seed);
        const auto p = g.any(1, g.size(1, 150));
        const LineIndex line(p);
        const auto idx = build_index(p, 0.01);
        for (int j = 0; j < 10; ++j) {
            const std::size_t i = g.index(p.size());
            const double R = g.log_uniform(1e-4, 1.0);
            const double r = R / g.log_uniform(1.0, 500.0);
            ASSERT_EQ(line.local_count(p.point(i)[0], R, r), local_count(idx, p.point(i), R, r).count);
        }
    }
}

TEST(Properties, SpectrumValuesClampedAndEnvelopeMonotone) {
    SpectrumConfig cfg;
    cfg.theta_grid = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        CloudGen g(500 + seed);
        const std::size_t d = g.dim();
        const auto p = g.clustered(d, g.size(20, 200));
        const auto curve = compute_spectrum(p, cfg);
        double prev = 0.0;
        for (const auto& sp : curve.points) {
            ASSERT_GE(sp.estimate.value, 0.0);
            ASSERT_LE(sp.estimate.value, static_cast<double>(d));
            ASSERT_GE(sp.envelope, prev);
            ASSERT_GE(sp.envelope, sp.estimate.value);
            prev = sp.envelope;
        }
        if (!curve.empty()) {
            const auto b = generalized_upper_box(curve);
            ASSERT_LE(b.lower, b.upper + 1e-12);
            ASSERT_EQ(b.point, curve.points.front().estimate.value);
        }
    }
}

TEST(Properties, WitnessesReproduceTheirExponent) {
    SpectrumConfig cfg;
    cfg.theta_grid = {0.1, 0.4, 0.8};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CloudGen g(600 + seed);
        const auto p = g.clustered(1, g.size(30, 300));
        const LineIndex line(p);
        for (const auto& sp : compute_spectrum(p, cfg).points) {
            const auto* w = std::get_if<BallWitness>(&sp.estimate.witness);
            ASSERT_NE(w, nullptr);
            ASSERT_EQ(line.local_count(w->center[0], w->R, w->r), w->count);
            ASSERT_DOUBLE_EQ(ball_exponent(*w), sp.estimate.raw);
        }
    }
}

TEST(Properties, EstimatesAreDeterministic) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CloudGen g(700 + seed), h(700 + seed);
        const auto p = g.clustered(1, 150);
        const auto q = h.clustered(1, 150);
        ASSERT_EQ(p, q);
        const auto a = estimate_all(p);
        const auto b = estimate_all(q);
        ASSERT_EQ(dump_json(to_json(a.spectrum)), dump_json(to_json(b.spectrum)));
        ASSERT_EQ(a.assouad.raw, b.assouad.raw);
    }
}

TEST(Properties, CountLawsOnRandomPairs) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EXPECT_TRUE(check_count_laws_random(seed, 20).passed) << seed;
    }
}

TEST(Properties, ChainOnRandomClusters) {
    SpectrumConfig cfg;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        CloudGen g(800 + seed);
        const auto p = g.lattice(1, g.size(50, 400), 20);
        const auto b = estimate_all(p, cfg);
        const auto rep = check_chain(b, 0.05);
        EXPECT_EQ(rep.observed[0]["monotone_failures"], 0) << seed;
        EXPECT_EQ(rep.observed[0]["clamp_failures"], 0) << seed;
        EXPECT_EQ(rep.observed[0]["assouad_failures"], 0) << seed;
    }
}
