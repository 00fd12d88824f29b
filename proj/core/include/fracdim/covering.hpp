#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fracdim/point_set.hpp"

namespace fracdim {

// Covering proxy: N_delta is the number of occupied anchored half-open cells
// [j*delta, (j+1)*delta)^d with j = floor(x / delta) per axis. A radius-delta
// ball meets at most (2*ceil(sqrt d) + 2)^d such cells and every cell sits in
// a ball of radius delta*sqrt(d), so cell counts and ball-cover counts differ
// by factors independent of delta.

using CellKey = std::vector<std::int64_t>;

struct CellKeyHash {
    std::size_t operator()(const CellKey& key) const noexcept;
};

// floor(x / mesh) as an integer; throws numeric_range if it does not fit.
std::int64_t cell_coordinate(double x, double mesh);

// Rejects non-positive, non-finite, or numerically meaningless meshes
// (mesh < 1e-300 * max |coordinate|).
void check_mesh(double mesh, double max_abs_coord, const char* what);

// Closed balls are tested as ||y - x|| <= R + 4 eps (R + |x|_inf): coordinates
// carry roundoff of a few ulps, and without the slack a point lying exactly on
// the sphere (e.g. x + R with R itself computed) drops in or out at random.
double ball_radius_with_slack(double radius, double center_magnitude);

class GridIndex {
public:
    using CellMap = std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash>;

    // `source` must outlive the index.
    GridIndex(const PointSet& source, double base_mesh);

    double base_mesh() const noexcept { return base_mesh_; }
    const PointSet& source() const noexcept { return *source_; }
    const CellMap& cells() const noexcept { return cells_; }
    std::size_t cell_count() const noexcept { return cells_.size(); }

    CellKey cell_of(std::span<const double> x) const;
    bool contains(std::span<const double> x) const;

    // Indices of source points in the closed ball B(x, R), ascending.
    std::vector<std::size_t> ball(std::span<const double> x, double radius) const;

private:
    const PointSet* source_;
    double base_mesh_;
    CellMap cells_;
};

GridIndex build_index(const PointSet& p, double base_mesh);

struct CoverCount {
    double scale = 0.0;
    std::size_t count = 0;
};

CoverCount grid_count(const PointSet& p, double delta);

// Cell count of an explicit subset of p.
std::size_t grid_count_subset(const PointSet& p, std::span<const std::size_t> subset, double delta);

// Diagnostic only: minimum count over m grid anchors shifted by k*delta/m per axis.
CoverCount grid_count_best_anchor(const PointSet& p, double delta, int anchors);

enum class CenterCheck { require_on_set, allow_off_set };

// N_r(B(x, R) ∩ P) on the anchored mesh-r grid.
CoverCount local_count(const GridIndex& index, std::span<const double> x, double radius,
                       double mesh, CenterCheck check = CenterCheck::require_on_set);

// Sorted view of a one-dimensional set. Balls are contiguous ranges, so local
// counts cost a binary search plus one pass over the range.
class LineIndex {
public:
    explicit LineIndex(const PointSet& p);

    std::size_t size() const noexcept { return xs_.size(); }
    std::span<const double> sorted() const noexcept { return xs_; }
    bool contains(double x) const;

    // [lo, hi) range of sorted positions inside the closed ball.
    std::pair<std::size_t, std::size_t> ball_range(double x, double radius) const;

    // ball_range for every center; identical results, amortized linear when
    // the centers are visited in ascending order (`order` sorts `centers`).
    std::vector<std::pair<std::size_t, std::size_t>> ball_ranges(
        std::span<const double> centers, std::span<const std::size_t> order, double radius) const;

    // Distinct floor(y / mesh) over sorted positions [lo, hi).
    std::size_t count_cells(std::size_t lo, std::size_t hi, double mesh) const;

    std::size_t local_count(double x, double radius, double mesh) const;
    std::size_t grid_count(double mesh) const;

    // Cell counts for several ranges at one mesh. Picks between per-range scans
    // and a prefix table of cell boundaries; both give identical integers.
    std::vector<std::size_t> count_cells_many(
        std::span<const std::pair<std::size_t, std::size_t>> ranges, double mesh) const;

private:
    std::vector<double> xs_;
    double max_abs_ = 0.0;
};

struct ScaleSchedule {
    double delta_max = 1.0;
    double delta_min = 1.0;
    double ratio = 0.5;

    // delta_max * ratio^j for j = 0, 1, ... while >= delta_min. For ratio 1/m
    // with integer m the scales are delta_max / m^j, so successive grids nest.
    std::vector<double> scales() const;
    bool nested() const;
};

// Sequence of (delta, N_delta), scales strictly decreasing.
struct CoverCurve {
    std::vector<CoverCount> entries;
    ScaleSchedule schedule;
    // Counts nondecreasing as delta shrinks. Guaranteed for nested schedules.
    bool monotone = true;
};

CoverCurve cover_curve(const PointSet& p, double delta_max, double delta_min, double ratio);
CoverCurve cover_curve(const PointSet& p, const ScaleSchedule& schedule);

// Columns delta,count,log_inv_delta,log_count (natural logs, 17 digits).
std::string cover_curve_csv(const CoverCurve& curve);

}  // namespace fracdim
