#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fracdim {

using Point = std::vector<double>;

// Finite point cloud in R^d. Coordinates are stored row-major (point i occupies
// coords[i*d, (i+1)*d)). Immutable once constructed.
class PointSet {
public:
    // Empty set.
    explicit PointSet(std::size_t dim);
    PointSet(std::size_t dim, std::vector<double> coords, std::string label = {},
             std::string provenance = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> coords() const noexcept { return coords_; }

    const std::string& label() const noexcept { return label_; }
    const std::string& provenance() const noexcept { return provenance_; }

    PointSet with_label(std::string label, std::string provenance) const;

    friend bool operator==(const PointSet& a, const PointSet& b);

private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::string label_;
    std::string provenance_;
};

// Bit-exact equality of coordinates (labels ignored).
bool operator==(const PointSet& a, const PointSet& b);

double max_abs_coordinate(const PointSet& p);

// Length of the bounding-box diagonal. Equals the diameter for d = 1 and lies
// within a factor sqrt(d) of it otherwise.
double extent(const PointSet& p);

// Lower corner of the bounding box; empty for an empty set.
Point lower_corner(const PointSet& p);

// Smallest positive Euclidean distance between two points; 0 when the set has
// fewer than two distinct points.
double min_positive_gap(const PointSet& p);
// q-quantile (lower order statistic) of the distance from each distinct point
// to its nearest distinct neighbour; 0 without two distinct points.
double nearest_gap_quantile(const PointSet& p, double q);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Index of a point bit-equal to x, or size() if there is none.
std::size_t find_point(const PointSet& p, std::span<const double> x);

}  // namespace fracdim
