#include "fracdim/covering.hpp"

#include "fracdim/error.hpp"
#include "fracdim/json_format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace fracdim {

namespace {

constexpr double kMaxCell = 4.0e18;  // comfortably inside int64
constexpr double kBallSlackUlps = 4.0;

std::size_t count_distinct_keys(std::vector<std::int64_t>& keys, std::size_t dim) {
    const std::size_t n = dim == 0 ? 0 : keys.size() / dim;
    if (n == 0) return 0;
    if (dim == 1) {
        std::sort(keys.begin(), keys.end());
        return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto row = [&](std::size_t i) {
        return std::span<const std::int64_t>(keys.data() + i * dim, dim);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = row(a);
        const auto rb = row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i) {
        const auto ra = row(order[i - 1]);
        const auto rb = row(order[i]);
        if (!std::equal(ra.begin(), ra.end(), rb.begin())) ++distinct;
    }
    return distinct;
}

void check_scale(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw Error(ErrorKind::parameter_domain, std::string(what) + " must be positive and finite");
    }
}

}  // namespace

std::size_t CellKeyHash::operator()(const CellKey& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int64_t v : key) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 0x100000001b3ull;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::int64_t cell_coordinate(double x, double mesh) {
    const double q = std::floor(x / mesh);
    if (!(std::abs(q) < kMaxCell)) {
        throw Error(ErrorKind::numeric_range, "cell coordinate out of integer range");
    }
    return static_cast<std::int64_t>(q);
}

void check_mesh(double mesh, double max_abs_coord, const char* what) {
    check_scale(mesh, what);
    if (mesh < 1e-300 * max_abs_coord) {
        throw Error(ErrorKind::numeric_range,
                    std::string(what) + " is numerically meaningless relative to coordinates");
    }
}

double ball_radius_with_slack(double radius, double center_magnitude) {
    const double eps = std::numeric_limits<double>::epsilon();
    return radius + kBallSlackUlps * eps * (radius + center_magnitude);
}

// ---------------------------------------------------------------------------
// GridIndex
// ---------------------------------------------------------------------------

GridIndex::GridIndex(const PointSet& source, double base_mesh)
    : source_(&source), base_mesh_(base_mesh) {
    check_mesh(base_mesh, max_abs_coordinate(source), "base mesh");
    cells_.reserve(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
        cells_[cell_of(source.point(i))].push_back(i);
    }
}

CellKey GridIndex::cell_of(std::span<const double> x) const {
    CellKey key(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) key[j] = cell_coordinate(x[j], base_mesh_);
    return key;
}

bool GridIndex::contains(std::span<const double> x) const {
    if (x.size() != source_->dim()) return false;
    const auto it = cells_.find(cell_of(x));
    if (it == cells_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](std::size_t i) {
        const auto y = source_->point(i);
        return std::equal(y.begin(), y.end(), x.begin());
    });
}

std::vector<std::size_t> GridIndex::ball(std::span<const double> x, double radius) const {
    const std::size_t d = source_->dim();
    if (x.size() != d) throw Error(ErrorKind::dimension_mismatch, "ball: center dimension");
    double mag = 0.0;
    for (double c : x) mag = std::max(mag, std::abs(c));
    const double reach = ball_radius_with_slack(radius, mag);

    CellKey lo(d), hi(d);
    double candidates = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = cell_coordinate(x[j] - reach, base_mesh_);
        hi[j] = cell_coordinate(x[j] + reach, base_mesh_);
        candidates *= static_cast<double>(hi[j] - lo[j] + 1);
    }

    std::vector<std::size_t> out;
    auto take = [&](const std::vector<std::size_t>& members) {
        for (std::size_t i : members) {
            if (euclidean_distance(source_->point(i), x) <= reach) out.push_back(i);
        }
    };
    if (candidates > static_cast<double>(cells_.size())) {
        for (const auto& [key, members] : cells_) {
            bool inside = true;
            for (std::size_t j = 0; j < d && inside; ++j) inside = key[j] >= lo[j] && key[j] <= hi[j];
            if (inside) take(members);
        }
    } else {
        CellKey key = lo;
        while (true) {
            const auto it = cells_.find(key);
            if (it != cells_.end()) take(it->second);
            std::size_t j = 0;
            for (; j < d; ++j) {
                if (++key[j] <= hi[j]) break;
                key[j] = lo[j];
            }
            if (j == d) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridIndex build_index(const PointSet& p, double base_mesh) { return GridIndex(p, base_mesh); }

// ---------------------------------------------------------------------------
// Counts
// ---------------------------------------------------------------------------

CoverCount grid_count(const PointSet& p, double delta) {
    check_mesh(delta, max_abs_coordinate(p), "delta");
    std::vector<std::int64_t> keys;
    keys.reserve(p.coords().size());
    for (double c : p.coords()) keys.push_back(cell_coordinate(c, delta));
    return {delta, count_distinct_keys(keys, p.dim())};
}

std::size_t grid_count_subset(const PointSet& p, std::span<const std::size_t> subset, double delta) {
    check_scale(delta, "delta");
    const std::size_t d = p.dim();
    std::vector<std::int64_t> keys;
    keys.reserve(subset.size() * d);
    for (std::size_t i : subset) {
        for (double c : p.point(i)) keys.push_back(cell_coordinate(c, delta));
    }
    return count_distinct_keys(keys, d);
}

CoverCount grid_count_best_anchor(const PointSet& p, double delta, int anchors) {
    check_mesh(delta, max_abs_coordinate(p), "delta");
    if (anchors < 1) throw Error(ErrorKind::parameter_domain, "anchors must be >= 1");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (int a = 0; a < anchors; ++a) {
        const double shift = delta * static_cast<double>(a) / static_cast<double>(anchors);
        std::vector<std::int64_t> keys;
        keys.reserve(p.coords().size());
        for (double c : p.coords()) keys.push_back(cell_coordinate(c - shift, delta));
        best = std::min(best, count_distinct_keys(keys, p.dim()));
    }
    return {delta, p.empty() ? 0 : best};
}

CoverCount local_count(const GridIndex& index, std::span<const double> x, double radius,
                       double mesh, CenterCheck check) {
    check_scale(radius, "R");
    check_scale(mesh, "r");
    if (mesh > radius) throw Error(ErrorKind::scale_order, "local count requires r <= R");
    if (check == CenterCheck::require_on_set && !index.contains(x)) {
        throw Error(ErrorKind::center_domain, "local count center is not a point of the set");
    }
    const auto members = index.ball(x, radius);
    return {mesh, grid_count_subset(index.source(), members, mesh)};
}

// ---------------------------------------------------------------------------
// LineIndex
// ---------------------------------------------------------------------------

LineIndex::LineIndex(const PointSet& p) {
    if (p.dim() != 1) throw Error(ErrorKind::dimension_mismatch, "line index needs d = 1");
    xs_.assign(p.coords().begin(), p.coords().end());
    std::sort(xs_.begin(), xs_.end());
    if (!xs_.empty()) max_abs_ = std::max(std::abs(xs_.front()), std::abs(xs_.back()));
}

bool LineIndex::contains(double x) const {
    return std::binary_search(xs_.begin(), xs_.end(), x);
}

std::pair<std::size_t, std::size_t> LineIndex::ball_range(double x, double radius) const {
    const double reach = ball_radius_with_slack(radius, std::abs(x));
    const auto lo = std::partition_point(xs_.begin(), xs_.end(),
                                         [&](double y) { return y < x && x - y > reach; });
    const auto hi = std::partition_point(lo, xs_.end(),
                                         [&](double y) { return !(y > x && y - x > reach); });
    return {static_cast<std::size_t>(lo - xs_.begin()), static_cast<std::size_t>(hi - xs_.begin())};
}

std::vector<std::pair<std::size_t, std::size_t>> LineIndex::ball_ranges(
    std::span<const double> centers, std::span<const std::size_t> order, double radius) const {
    std::vector<std::pair<std::size_t, std::size_t>> out(centers.size());
    const std::size_t n = xs_.size();
    std::size_t lo = 0, hi = 0;
    for (std::size_t c : order) {
        const double x = centers[c];
        const double reach = ball_radius_with_slack(radius, std::abs(x));
        const auto left_out = [&](double y) { return y < x && x - y > reach; };
        const auto right_in = [&](double y) { return !(y > x && y - x > reach); };
        while (lo < n && left_out(xs_[lo])) ++lo;
        while (lo > 0 && !left_out(xs_[lo - 1])) --lo;
        if (hi < lo) hi = lo;
        while (hi < n && right_in(xs_[hi])) ++hi;
        while (hi > lo && !right_in(xs_[hi - 1])) --hi;
        out[c] = {lo, hi};
    }
    return out;
}

std::size_t LineIndex::count_cells(std::size_t lo, std::size_t hi, double mesh) const {
    if (hi <= lo) return 0;
    // Range checks at the extremes cover every coordinate in between.
    cell_coordinate(xs_[lo], mesh);
    cell_coordinate(xs_[hi - 1], mesh);
    std::size_t count = 1;
    double prev = std::floor(xs_[lo] / mesh);
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double cell = std::floor(xs_[i] / mesh);
        count += cell != prev;
        prev = cell;
    }
    return count;
}

std::size_t LineIndex::local_count(double x, double radius, double mesh) const {
    const auto [lo, hi] = ball_range(x, radius);
    return count_cells(lo, hi, mesh);
}

std::size_t LineIndex::grid_count(double mesh) const {
    check_mesh(mesh, max_abs_, "delta");
    return count_cells(0, xs_.size(), mesh);
}

std::vector<std::size_t> LineIndex::count_cells_many(
    std::span<const std::pair<std::size_t, std::size_t>> ranges, double mesh) const {
    std::vector<std::size_t> out(ranges.size(), 0);
    std::size_t total = 0;
    for (const auto& [lo, hi] : ranges) total += hi > lo ? hi - lo : 0;
    if (total <= xs_.size() || xs_.empty()) {
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            out[i] = count_cells(ranges[i].first, ranges[i].second, mesh);
        }
        return out;
    }
    cell_coordinate(xs_.front(), mesh);
    cell_coordinate(xs_.back(), mesh);
    // boundaries[i] = number of positions j in (0, i] starting a new cell
    std::vector<std::uint32_t> boundaries(xs_.size(), 0);
    double prev = std::floor(xs_[0] / mesh);
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        const double cell = std::floor(xs_[i] / mesh);
        boundaries[i] = boundaries[i - 1] + (cell != prev);
        prev = cell;
    }
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto [lo, hi] = ranges[i];
        if (hi > lo) out[i] = 1 + boundaries[hi - 1] - boundaries[lo];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

bool ScaleSchedule::nested() const {
    const double m = 1.0 / ratio;
    return std::abs(m - std::round(m)) <= 1e-9 * m;
}

std::vector<double> ScaleSchedule::scales() const {
    check_scale(delta_max, "delta_max");
    check_scale(delta_min, "delta_min");
    if (delta_min > delta_max) {
        throw Error(ErrorKind::scale_order, "schedule requires delta_min <= delta_max");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw Error(ErrorKind::parameter_domain, "schedule ratio must lie in (0, 1)");
    }
    constexpr std::size_t kMaxEntries = 4096;
    const double stop = delta_min * (1.0 - 1e-12);
    std::vector<double> out;
    if (nested()) {
        const double m = std::round(1.0 / ratio);
        double power = 1.0;
        for (std::size_t j = 0; j < kMaxEntries; ++j) {
            const double s = delta_max / power;
            if (s < stop) break;
            out.push_back(s);
            power *= m;
        }
    } else {
        for (std::size_t j = 0; j < kMaxEntries; ++j) {
            const double s = delta_max * std::pow(ratio, static_cast<double>(j));
            if (s < stop) break;
            out.push_back(s);
        }
    }
    return out;
}

CoverCurve cover_curve(const PointSet& p, double delta_max, double delta_min, double ratio) {
    return cover_curve(p, ScaleSchedule{delta_max, delta_min, ratio});
}

CoverCurve cover_curve(const PointSet& p, const ScaleSchedule& schedule) {
    CoverCurve curve;
    curve.schedule = schedule;
    const auto scales = schedule.scales();
    if (p.empty()) {
        for (double s : scales) curve.entries.push_back({s, 0});
        return curve;
    }
    const double max_abs = max_abs_coordinate(p);
    for (double s : scales) check_mesh(s, max_abs, "delta");
    if (p.dim() == 1) {
        const LineIndex line(p);
        for (double s : scales) curve.entries.push_back({s, line.grid_count(s)});
    } else {
        for (double s : scales) curve.entries.push_back(grid_count(p, s));
    }
    for (std::size_t i = 1; i < curve.entries.size(); ++i) {
        if (curve.entries[i].count < curve.entries[i - 1].count) curve.monotone = false;
    }
    return curve;
}

std::string cover_curve_csv(const CoverCurve& curve) {
    std::ostringstream out;
    out << "delta,count,log_inv_delta,log_count\n";
    for (const auto& e : curve.entries) {
        out << format_double(e.scale) << ',' << e.count << ',' << format_double(-std::log(e.scale))
            << ',';
        if (e.count == 0) {
            out << "-inf";
        } else {
            out << format_double(std::log(static_cast<double>(e.count)));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace fracdim
