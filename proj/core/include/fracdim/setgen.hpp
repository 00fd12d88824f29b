#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "fracdim/point_set.hpp"

namespace fracdim {

enum class Family {
    example_gubr,      // E = U_{n>=2} {n + i*delta_n}, delta_n = n^{-(1 + 1/(n-1))}
    ek_family,         // E_k = U_{n>=1} {i*delta_n}, delta_n = n^{-k/(k-1)}
    egb_union,         // U_{i>=2} (E_i + i)
    cantor_midpoints,  // midpoints of the middle-third construction intervals
    poly_sequence,     // {n^{-p}} U {0}
    uniform_grid,      // {i/N}^d
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

struct GeneratorSpec {
    Family family = Family::cantor_midpoints;
    int n_max = 2;
    int k = 2;
    int i_max = 2;
    int level = 1;
    double p = 1.0;
    std::int64_t count = 1;  // N for poly_sequence / uniform_grid
    int dim = 1;             // uniform_grid only
    std::uint64_t seed = 0;  // reserved; every family is deterministic

    std::string describe() const;
};

PointSet generate(const GeneratorSpec& spec);

// delta_n for the two example families, computed as exp(-a * ln n).
double example_delta(int n);
double ek_delta(int k, int n);

PointSet gen_example_E(int n_max);
PointSet gen_Ek(int k, int n_max);
PointSet gen_egb_union(int i_max, int n_max);
PointSet gen_cantor_midpoints(int level);
PointSet gen_poly_sequence(double p, std::int64_t n);
PointSet gen_uniform_grid(std::int64_t n, int dim = 1);

// x -> scale * x + offset (offset has one entry per axis, or is empty for 0).
PointSet affine_image(const PointSet& p, double scale, std::span<const double> offset = {});

// Exact union; later duplicates (bit-equal) are dropped, first occurrences keep order.
PointSet set_union(const PointSet& p, const PointSet& q);

// Cartesian product, coordinates concatenated (dimension m + n), duplicates removed.
PointSet set_product(const PointSet& p, const PointSet& q);

// Points with ||x - center|| <= radius (no roundoff slack; used for truncation).
PointSet restrict_to_ball(const PointSet& p, std::span<const double> center, double radius);

// Removes bit-equal duplicates, keeping first occurrences in order.
PointSet dedupe(const PointSet& p);

}  // namespace fracdim
