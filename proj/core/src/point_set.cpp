#include "fracdim/point_set.hpp"

#include "fracdim/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>

namespace fracdim {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parameter_domain: return "parameter-domain";
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::scale_order: return "scale-order";
        case ErrorKind::center_domain: return "center-domain";
        case ErrorKind::infeasible_window: return "infeasible-window";
        case ErrorKind::grid_domain: return "grid-domain";
        case ErrorKind::numeric_range: return "numeric-range";
        case ErrorKind::config_conflict: return "config-conflict";
        case ErrorKind::io: return "io";
        case ErrorKind::format: return "format";
    }
    return "unknown";
}

PointSet::PointSet(std::size_t dim) : PointSet(dim, std::vector<double>{}) {}

PointSet::PointSet(std::size_t dim, std::vector<double> coords, std::string label,
                   std::string provenance)
    : dim_(dim), coords_(std::move(coords)), label_(std::move(label)),
      provenance_(std::move(provenance)) {
    if (dim_ == 0) {
        throw Error(ErrorKind::parameter_domain, "point set: ambient dimension must be >= 1");
    }
    if (coords_.size() % dim_ != 0) {
        throw Error(ErrorKind::dimension_mismatch,
                    "point set: coordinate count is not a multiple of the dimension");
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorKind::parameter_domain, "point set: non-finite coordinate");
        }
    }
}

PointSet PointSet::with_label(std::string label, std::string provenance) const {
    PointSet out = *this;
    out.label_ = std::move(label);
    out.provenance_ = std::move(provenance);
    return out;
}

bool operator==(const PointSet& a, const PointSet& b) {
    if (a.dim_ != b.dim_ || a.coords_.size() != b.coords_.size()) return false;
    // memcmp semantics: -0.0 and 0.0 differ, which is what bit-exact means here.
    return std::equal(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                      [](double x, double y) {
                          return std::bit_cast<std::uint64_t>(x) ==
                                 std::bit_cast<std::uint64_t>(y);
                      });
}

double max_abs_coordinate(const PointSet& p) {
    double m = 0.0;
    for (double c : p.coords()) m = std::max(m, std::abs(c));
    return m;
}

Point lower_corner(const PointSet& p) {
    if (p.empty()) return {};
    Point lo(p.point(0).begin(), p.point(0).end());
    for (std::size_t i = 1; i < p.size(); ++i) {
        auto x = p.point(i);
        for (std::size_t j = 0; j < p.dim(); ++j) lo[j] = std::min(lo[j], x[j]);
    }
    return lo;
}

double extent(const PointSet& p) {
    if (p.empty()) return 0.0;
    const std::size_t d = p.dim();
    Point lo(p.point(0).begin(), p.point(0).end());
    Point hi = lo;
    for (std::size_t i = 1; i < p.size(); ++i) {
        auto x = p.point(i);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], x[j]);
            hi[j] = std::max(hi[j], x[j]);
        }
    }
    if (d == 1) return hi[0] - lo[0];
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += (hi[j] - lo[j]) * (hi[j] - lo[j]);
    return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 1) return std::abs(a[0] - b[0]);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double t = a[j] - b[j];
        s += t * t;
    }
    return std::sqrt(s);
}

double min_positive_gap(const PointSet& p) {
    const std::size_t n = p.size();
    if (n < 2) return 0.0;
    if (p.dim() == 1) {
        std::vector<double> xs(p.coords().begin(), p.coords().end());
        std::sort(xs.begin(), xs.end());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < n; ++i) {
            const double g = xs[i] - xs[i - 1];
            if (g > 0.0) best = std::min(best, g);
        }
        return std::isfinite(best) ? best : 0.0;
    }
    // Sweep along the first axis; only pairs within the current best in x can improve it.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p.point(a)[0] < p.point(b)[0];
    });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
        auto x = p.point(order[a]);
        for (std::size_t b = a + 1; b < n; ++b) {
            auto y = p.point(order[b]);
            if (y[0] - x[0] > best) break;
            const double g = euclidean_distance(x, y);
            if (g > 0.0) best = std::min(best, g);
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

double nearest_gap_quantile(const PointSet& p, double q) {
    const std::size_t n = p.size();
    if (n < 2) return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> nn;
    nn.reserve(n);
    if (p.dim() == 1) {
        std::vector<double> xs(p.coords().begin(), p.coords().end());
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double g = inf;
            if (i > 0) g = xs[i] - xs[i - 1];
            if (i + 1 < xs.size()) g = std::min(g, xs[i + 1] - xs[i]);
            if (std::isfinite(g)) nn.push_back(g);
        }
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return p.point(a)[0] < p.point(b)[0];
        });
        for (std::size_t a = 0; a < n; ++a) {
            auto x = p.point(order[a]);
            double best = inf;
            for (std::size_t b = a + 1; b < n; ++b) {
                auto y = p.point(order[b]);
                if (y[0] - x[0] > best) break;
                const double g = euclidean_distance(x, y);
                if (g > 0.0) best = std::min(best, g);
            }
            for (std::size_t b = a; b-- > 0;) {
                auto y = p.point(order[b]);
                if (x[0] - y[0] > best) break;
                const double g = euclidean_distance(x, y);
                if (g > 0.0) best = std::min(best, g);
            }
            if (std::isfinite(best)) nn.push_back(best);
        }
    }
    if (nn.empty()) return 0.0;
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(nn.size() - 1);
    const auto k = static_cast<std::size_t>(pos);
    std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(k), nn.end());
    return nn[k];
}

std::size_t find_point(const PointSet& p, std::span<const double> x) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto y = p.point(i);
        if (std::equal(y.begin(), y.end(), x.begin())) return i;
    }
    return p.size();
}

}  // namespace fracdim
