// Brute-force sweeps over centers and scale pairs compared with the library.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "fracdim/setgen.hpp"
#include "fracdim/spectra.hpp"
#include "sweep_oracle.hpp"

namespace {

std::vector<double> coords_of(const fracdim::PointSet& p) { return {p.coords().begin(), p.coords().end()}; }

// Oracle max over exactly the library's admitted pairs, every point a center.
oracle::SweepMax oracle_on_pairs(const std::vector<double>& ys, const std::vector<fracdim::ScalePair>& pairs) {
    const oracle::Sweep sweep(ys);
    std::vector<double> radii, meshes;
    std::set<std::pair<double, double>> admitted;
    for (const auto& pr : pairs) {
        radii.push_back(pr.R);
        meshes.push_back(pr.r);
        admitted.insert({pr.R, pr.r});
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::sort(meshes.begin(), meshes.end());
    meshes.erase(std::unique(meshes.begin(), meshes.end()), meshes.end());
    return sweep.max_exponent(radii, meshes, [&](double R, double r) { return admitted.count({R, r}) > 0; });
}

}  // namespace

TEST(SweepOracle, PrefixCountsMatchNaiveScan) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> ys(1 + trial % 40);
        for (double& y : ys) y = u(rng);
        const oracle::Sweep sweep(ys);
        for (double r : {0.5, 0.13, 0.01}) {
            const auto b = sweep.boundaries(r);
            for (double x : sweep.points()) {
                for (double R : {0.05, 0.3, 1.5}) {
                    const auto [lo, hi] = sweep.range(x, R);
                    ASSERT_EQ(oracle::Sweep::cells(b, lo, hi), oracle::naive_local_count(ys, x, R, r));
                }
            }
        }
    }
}

TEST(SweepOracle, LibraryLocalCountsMatchNaiveScan) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> lattice(-1000, 1000);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> ys(2 + trial % 30);
        for (double& y : ys) y = lattice(rng) / 1024.0;
        const fracdim::PointSet p(1, ys);
        const fracdim::LineIndex index(p);
        for (double x : ys) {
            for (double R : {0.01, 0.2, 0.7}) {
                for (double r : {R / 8, R / 3, R}) {
                    ASSERT_EQ(index.local_count(x, R, r), oracle::naive_local_count(ys, x, R, r));
                }
            }
        }
    }
}

TEST(SweepOracle, SpectrumPointEqualsSweepOnSamePairs) {
    const fracdim::SpectrumConfig cfg;
    const std::vector<fracdim::PointSet> sets{fracdim::gen_poly_sequence(1.0, 2000),
                                              fracdim::gen_cantor_midpoints(8), fracdim::gen_Ek(2, 60)};
    for (const auto& p : sets) {
        const double floor = fracdim::resolution_floor(p, cfg);
        const auto centers = fracdim::select_centers(p, cfg);
        ASSERT_EQ(centers.size(), p.size());
        for (double theta : {0.1, 0.25, 0.5, 0.75}) {
            const auto radii = fracdim::radius_schedule(theta, floor, fracdim::extent(p), cfg, false);
            if (radii.empty()) continue;
            const auto pairs = fracdim::admitted_pairs(theta, radii, floor, cfg);
            const auto lib = fracdim::assouad_spectrum_point(p, theta, radii, centers, cfg);
            const auto ref = oracle_on_pairs(coords_of(p), pairs);
            EXPECT_DOUBLE_EQ(lib.raw, ref.raw) << p.label() << " theta=" << theta;
            const auto& w = std::get<fracdim::BallWitness>(lib.witness);
            EXPECT_EQ(w.count, oracle::naive_local_count(coords_of(p), w.center[0], w.R, w.r));
        }
    }
}

TEST(SweepOracle, PolySequenceUpperSpectrumReference) {
    const fracdim::PointSet truncation = fracdim::gen_poly_sequence(1.0, 10000);
    const double theta = 0.75;
    const auto ref = oracle::upper_spectrum_reference(coords_of(truncation), theta,
                                                      std::max(0.005, 0.02 * theta));
    const double clamped = std::min(ref.raw, 1.0);
    EXPECT_NEAR(clamped, 1.0, 0.1) << "raw " << ref.raw << " x=" << ref.x << " R=" << ref.R << " r=" << ref.r;

    const auto curve = fracdim::compute_spectrum(truncation);
    const auto lib = fracdim::upper_spectrum(curve, theta);
    EXPECT_NEAR(lib.value, clamped, 0.1);
}

TEST(SweepOracle, SingletonAndPairing) {
    const oracle::Sweep one({0.0});
    const auto b = one.boundaries(0.1);
    const auto [lo, hi] = one.range(0.0, 0.5);
    EXPECT_EQ(oracle::Sweep::cells(b, lo, hi), 1u);
}
