#include "fracdim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "fracdim/error.hpp"
#include "fracdim/parallel.hpp"

namespace fracdim {

namespace {

double clamp_dim(double raw, std::size_t d) {
    return std::clamp(raw, 0.0, static_cast<double>(d));
}

// Local counts for a fixed list of centers, one R at a time.
class BallSweeper {
public:
    BallSweeper(const PointSet& p, std::span<const std::size_t> centers)
        : p_(p), centers_(centers.begin(), centers.end()) {
        if (p.dim() != 1) return;
        line_.emplace(p);
        for (std::size_t c : centers_) xs_.push_back(p.point(c)[0]);
        order_.resize(xs_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return xs_[a] < xs_[b]; });
    }

    // counts[k][c]: N_{meshes[k]}(B(center c, R) ∩ P)
    std::vector<std::vector<std::size_t>> counts(double R, std::span<const double> meshes) const {
        std::vector<std::vector<std::size_t>> out(meshes.size());
        if (line_) {
            const auto ranges = line_->ball_ranges(xs_, order_, R);
            for (std::size_t k = 0; k < meshes.size(); ++k) {
                out[k] = line_->count_cells_many(ranges, meshes[k]);
            }
            return out;
        }
        const GridIndex index(p_, R);
        for (auto& v : out) v.resize(centers_.size());
        for (std::size_t c = 0; c < centers_.size(); ++c) {
            const auto members = index.ball(p_.point(centers_[c]), R);
            for (std::size_t k = 0; k < meshes.size(); ++k) {
                out[k][c] = grid_count_subset(p_, members, meshes[k]);
            }
        }
        return out;
    }

    std::size_t center(std::size_t pos) const { return centers_[pos]; }

private:
    const PointSet& p_;
    std::vector<std::size_t> centers_;
    std::optional<LineIndex> line_;
    std::vector<double> xs_;
    std::vector<std::size_t> order_;
};

struct Best {
    bool found = false;
    double raw = 0.0;
    std::size_t center_pos = 0;
    std::size_t count = 0;
    double R = 0.0;
    double r = 0.0;
};

// Max over centers for one (R, r); ties keep the lowest center position.
// The exponent is increasing in the count, so the largest count wins.
Best best_over_centers(std::span<const std::size_t> counts, double R, double r) {
    std::size_t pos = 0;
    std::size_t top = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > top) {
            top = counts[c];
            pos = c;
        }
    }
    if (top == 0) return {};
    return {true, ball_exponent(top, R, r), pos, top, R, r};
}

void absorb(Best& acc, const Best& candidate) {
    if (candidate.found && (!acc.found || candidate.raw > acc.raw)) acc = candidate;
}

BallWitness make_witness(const PointSet& p, const BallSweeper& sweeper, const Best& b) {
    BallWitness w;
    w.center_index = sweeper.center(b.center_pos);
    const auto x = p.point(w.center_index);
    w.center.assign(x.begin(), x.end());
    w.R = b.R;
    w.r = b.r;
    w.count = b.count;
    w.theta_effective = std::log(b.R) / std::log(b.r);
    return w;
}

std::optional<ScalePair> admit(double theta, double R, double floor, const SpectrumConfig& cfg) {
    if (!(R > 0.0 && R < 1.0)) return std::nullopt;
    double r = std::pow(R, 1.0 / theta);
    if (r < floor) r = floor;
    if (!(r > 0.0) || r > R) return std::nullopt;
    if (std::abs(std::log(R) / std::log(r) - theta) > cfg.theta_tolerance(theta)) return std::nullopt;
    if (R / r < cfg.ratio_floor) return std::nullopt;
    return ScalePair{R, r};
}

void check_config(const SpectrumConfig& cfg) {
    if (!(cfg.radius_top > 0.0 && cfg.radius_top < 1.0)) {
        throw Error(ErrorKind::parameter_domain, "radius_top must lie in (0, 1)");
    }
    if (!(cfg.mesh_step > 1.0) || !std::isfinite(cfg.mesh_step)) {
        throw Error(ErrorKind::parameter_domain, "mesh_step must exceed 1");
    }
    if (!(cfg.assouad_radius_ratio > 0.0 && cfg.assouad_radius_ratio < 1.0)) {
        throw Error(ErrorKind::parameter_domain, "assouad_radius_ratio must lie in (0, 1)");
    }
    if (!(cfg.gap_quantile >= 0.0 && cfg.gap_quantile <= 1.0)) {
        throw Error(ErrorKind::parameter_domain, "gap_quantile must lie in [0, 1]");
    }
    if (!(cfg.gap_factor > 0.0) || !std::isfinite(cfg.gap_factor)) {
        throw Error(ErrorKind::parameter_domain, "gap_factor must be positive");
    }
    if (!(cfg.ratio_floor > 1.0) || !std::isfinite(cfg.ratio_floor)) {
        throw Error(ErrorKind::parameter_domain, "ratio_floor must exceed 1");
    }
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0)) {
        throw Error(ErrorKind::parameter_domain, "tail_fraction must lie in (0, 1]");
    }
    if (!(cfg.theta_tol_abs >= 0.0) || !(cfg.theta_tol_rel >= 0.0)) {
        throw Error(ErrorKind::parameter_domain, "theta tolerances must be non-negative");
    }
    if (cfg.representative_cells < 1) {
        throw Error(ErrorKind::parameter_domain, "representative_cells must be >= 1");
    }
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorKind::grid_domain, "theta grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
            throw Error(ErrorKind::grid_domain, "theta grid values must lie in (0, 1)");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::grid_domain, "theta grid must be strictly increasing");
        }
    }
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

DimEstimate zero_estimate(const char* flag) {
    DimEstimate e;
    e.flags.emplace_back(flag);
    return e;
}

ScaleSchedule third_schedule(double delta_max, double delta_min) {
    return ScaleSchedule{delta_max, std::min(delta_min, delta_max), 1.0 / 3.0};
}

// Largest 3^-j (j may be negative) not above x.
double power_of_three_below(double x) {
    int j = static_cast<int>(std::floor(std::log(x) / std::log(3.0)));
    auto pw = [](int e) { return e >= 0 ? std::pow(3.0, e) : 1.0 / std::pow(3.0, -e); };
    while (pw(j) > x) --j;
    while (pw(j + 1) <= x) ++j;
    return pw(j);
}

std::size_t distinct_points(const PointSet& p) { return dedupe(p).size(); }

}  // namespace

// ---------------------------------------------------------------------------
// Basic types
// ---------------------------------------------------------------------------

const char* to_string(Method m) {
    return m == Method::max_chord ? "max_chord" : "least_squares";
}

Method method_from_string(const std::string& name) {
    if (name == "max_chord" || name == "max-chord") return Method::max_chord;
    if (name == "least_squares" || name == "least-squares") return Method::least_squares;
    throw Error(ErrorKind::parameter_domain, "unknown method: " + name);
}

const char* to_string(CenterPolicy c) {
    switch (c) {
        case CenterPolicy::automatic: return "auto";
        case CenterPolicy::all_points: return "all";
        case CenterPolicy::cell_representatives: return "representatives";
    }
    return "auto";
}

CenterPolicy center_policy_from_string(const std::string& name) {
    if (name == "auto") return CenterPolicy::automatic;
    if (name == "all") return CenterPolicy::all_points;
    if (name == "representatives") return CenterPolicy::cell_representatives;
    throw Error(ErrorKind::parameter_domain, "unknown center policy: " + name);
}

double chord_slope(const ChordWitness& w) {
    return (std::log(static_cast<double>(w.fine_count)) -
            std::log(static_cast<double>(w.coarse_count))) /
           (std::log(w.coarse_scale) - std::log(w.fine_scale));
}

double ball_exponent(std::size_t count, double R, double r) {
    return std::log(static_cast<double>(count)) / std::log(R / r);
}

double ball_exponent(const BallWitness& w) { return ball_exponent(w.count, w.R, w.r); }

bool DimEstimate::has_flag(std::string_view flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

Json to_json(const Witness& w) {
    if (const auto* c = std::get_if<ChordWitness>(&w)) {
        return Json{{"kind", "chord"},
                    {"coarse_scale", c->coarse_scale},
                    {"fine_scale", c->fine_scale},
                    {"coarse_count", c->coarse_count},
                    {"fine_count", c->fine_count}};
    }
    if (const auto* b = std::get_if<BallWitness>(&w)) {
        return Json{{"kind", "ball"},
                    {"center_index", b->center_index},
                    {"center", b->center},
                    {"R", b->R},
                    {"r", b->r},
                    {"count", b->count},
                    {"theta_effective", b->theta_effective}};
    }
    return nullptr;
}

Json to_json(const DimEstimate& e) {
    return Json{{"value", e.value},
                {"raw", e.raw},
                {"method", to_string(e.method)},
                {"window", Json::array({e.window_lo, e.window_hi})},
                {"witness", to_json(e.witness)},
                {"spread", e.spread},
                {"samples", e.samples},
                {"flags", e.flags}};
}

// ---------------------------------------------------------------------------
// Box dimension
// ---------------------------------------------------------------------------

DimEstimate box_dim_estimate(const CoverCurve& curve, std::size_t ambient_dim,
                             const BoxConfig& cfg) {
    const auto& entries = curve.entries;
    if (entries.size() < 2) {
        throw Error(ErrorKind::parameter_domain, "box estimate needs at least 2 curve entries");
    }
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (!(entries[i].scale < entries[i - 1].scale)) {
            throw Error(ErrorKind::scale_order, "cover curve scales must strictly decrease");
        }
    }
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0)) {
        throw Error(ErrorKind::parameter_domain, "tail_fraction must lie in (0, 1]");
    }
    const bool all_zero = std::all_of(entries.begin(), entries.end(),
                                      [](const CoverCount& c) { return c.count == 0; });
    if (all_zero) {
        auto e = zero_estimate("empty-set");
        e.method = cfg.method;
        e.window_lo = entries.back().scale;
        e.window_hi = entries.front().scale;
        return e;
    }
    if (std::any_of(entries.begin(), entries.end(),
                    [](const CoverCount& c) { return c.count == 0; })) {
        throw Error(ErrorKind::parameter_domain, "cover curve mixes zero and positive counts");
    }

    const std::size_t n = entries.size();
    const auto want = static_cast<std::size_t>(std::ceil(cfg.tail_fraction * static_cast<double>(n)));
    const std::size_t w = std::clamp<std::size_t>(want, 2, n);
    const std::size_t first = n - w;

    DimEstimate e;
    e.method = cfg.method;
    e.window_lo = entries.back().scale;
    e.window_hi = entries[first].scale;
    e.samples = w;
    if (!curve.monotone) e.flags.emplace_back("non-monotone-curve");

    if (cfg.method == Method::max_chord) {
        double lo = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t i = first; i + 1 < n; ++i) {
            const ChordWitness c{entries[i].scale, entries[i + 1].scale, entries[i].count,
                                 entries[i + 1].count};
            const double v = chord_slope(c);
            lo = std::min(lo, v);
            if (!found || v > e.raw) {
                e.raw = v;
                e.witness = c;
                found = true;
            }
        }
        e.spread = e.raw - lo;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(w);
        for (std::size_t i = first; i < n; ++i) {
            const double x = -std::log(entries[i].scale);
            const double y = std::log(static_cast<double>(entries[i].count));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double den = m * sxx - sx * sx;
        const double slope = den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
        const double icept = (sy - slope * sx) / m;
        double ss = 0;
        for (std::size_t i = first; i < n; ++i) {
            const double x = -std::log(entries[i].scale);
            const double y = std::log(static_cast<double>(entries[i].count));
            ss += (y - icept - slope * x) * (y - icept - slope * x);
        }
        e.raw = slope;
        e.spread = std::sqrt(ss / m);
    }
    e.value = clamp_dim(e.raw, ambient_dim);
    return e;
}

CoverCurve default_cover_curve(const PointSet& p, double gap_quantile, double gap_factor) {
    if (p.empty()) return cover_curve(p, third_schedule(1.0, 1.0 / 81.0));
    const double ext = extent(p);
    if (ext == 0.0) return cover_curve(p, third_schedule(1.0, 1.0 / 81.0));
    const double top = power_of_three_below(ext);
    const double floor = resolution_floor(p, gap_quantile, gap_factor);
    CoverCurve curve = cover_curve(p, third_schedule(top, floor));
    if (curve.entries.size() < 2) curve = cover_curve(p, third_schedule(top, top / 3.0));
    return curve;
}

ScaleSchedule default_box_schedule(const PointSet& p, double gap_quantile, double gap_factor) {
    return default_cover_curve(p, gap_quantile, gap_factor).schedule;
}

DimEstimate box_dim_estimate(const PointSet& p, const BoxConfig& cfg) {
    return box_dim_estimate(default_cover_curve(p, cfg.gap_quantile, cfg.gap_factor), p.dim(), cfg);
}

// ---------------------------------------------------------------------------
// Spectrum plumbing
// ---------------------------------------------------------------------------

std::vector<double> SpectrumConfig::grid() const {
    return theta_grid.empty() ? default_theta_grid() : theta_grid;
}

double SpectrumConfig::theta_tolerance(double theta) const {
    return std::max(theta_tol_abs, theta_tol_rel * theta);
}

Json to_json(const SpectrumConfig& cfg) {
    return Json{{"theta_grid", cfg.theta_grid.empty() ? Json("default") : Json(cfg.theta_grid)},
                {"radius_top", cfg.radius_top},
                {"mesh_step", cfg.mesh_step},
                {"ratio_floor", cfg.ratio_floor},
                {"theta_tol_abs", cfg.theta_tol_abs},
                {"theta_tol_rel", cfg.theta_tol_rel},
                {"tail_fraction", cfg.tail_fraction},
                {"gap_quantile", cfg.gap_quantile},
                {"gap_factor", cfg.gap_factor},
                {"centers", to_string(cfg.centers)},
                {"center_limit", cfg.center_limit},
                {"line_center_limit", cfg.line_center_limit},
                {"representative_cells", cfg.representative_cells},
                {"assouad_radius_ratio", cfg.assouad_radius_ratio},
                {"normalize", cfg.normalize},
                {"chain_tolerance", cfg.chain_tolerance}};
}

std::vector<double> default_theta_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 49; ++k) g.push_back(static_cast<double>(k) / 50.0);
    for (int n = 2; n <= 100; ++n) g.push_back(1.0 / static_cast<double>(n));
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    for (double t : g) {
        if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
    }
    return out;
}

double gap_floor(const PointSet& p) {
    if (p.empty()) return 0.0;
    const double gap = min_positive_gap(p);
    if (gap == 0.0) return 1e-12 * std::max(1.0, max_abs_coordinate(p));
    return std::max(gap / 4.0, 1e-12 * extent(p));
}

double resolution_floor(const PointSet& p, double gap_quantile, double gap_factor) {
    const double base = gap_floor(p);
    if (gap_quantile <= 0.0) return base;
    return std::max(base, gap_factor * nearest_gap_quantile(p, gap_quantile));
}

double resolution_floor(const PointSet& p, const SpectrumConfig& cfg) {
    return resolution_floor(p, cfg.gap_quantile, cfg.gap_factor);
}

PointSet normalize_extent(const PointSet& p) {
    if (p.empty()) return p;
    const Point corner = lower_corner(p);
    const double ext = extent(p);
    const double scale = ext > 0.0 ? 0.5 / ext : 1.0;
    std::vector<double> coords(p.coords().begin(), p.coords().end());
    const std::size_t d = p.dim();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        coords[i] = (coords[i] - corner[i % d]) * scale;
    }
    std::string prov = p.provenance();
    if (!prov.empty()) prov += "; ";
    prov += "normalized to extent 1/2 (scale " + format_double(scale) + ")";
    return PointSet(d, std::move(coords), p.label(), std::move(prov));
}

std::vector<std::size_t> select_centers(const PointSet& p, const SpectrumConfig& cfg) {
    std::vector<std::size_t> all(p.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t limit = p.dim() == 1 ? cfg.line_center_limit : cfg.center_limit;
    const bool reps = cfg.centers == CenterPolicy::cell_representatives ||
                      (cfg.centers == CenterPolicy::automatic && p.size() > limit);
    if (!reps || p.empty()) return all;
    const double ext = extent(p);
    if (ext == 0.0) return {0};
    const GridIndex index(p, ext / static_cast<double>(cfg.representative_cells));
    std::vector<std::size_t> out;
    out.reserve(index.cell_count());
    for (const auto& [key, members] : index.cells()) {
        std::size_t best = members.front();
        for (std::size_t i : members) {
            if (lex_less(p.point(i), p.point(best))) best = i;
        }
        out.push_back(best);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> radius_schedule(double theta, double floor, double extent,
                                    const SpectrumConfig& cfg, bool tail_only) {
    check_config(cfg);
    if (!(theta > 0.0 && theta < 1.0)) {
        throw Error(ErrorKind::parameter_domain, "theta must lie in (0, 1)");
    }
    if (!(floor > 0.0)) return {};
    const double top = extent > 0.0 ? std::min(cfg.radius_top, extent) : cfg.radius_top;
    std::vector<double> fine_to_coarse;
    for (int j = 0; j < 100000; ++j) {
        const double r = floor * std::pow(cfg.mesh_step, static_cast<double>(j));
        const double R = std::pow(r, theta);
        if (!(R < top)) break;
        if (admit(theta, R, floor, cfg)) fine_to_coarse.push_back(R);
    }
    if (tail_only && fine_to_coarse.size() > 1 && cfg.tail_fraction < 1.0) {
        const double lo = std::log(fine_to_coarse.front());
        const double hi = std::log(fine_to_coarse.back());
        const double cut = lo + cfg.tail_fraction * (hi - lo) + 1e-12 * std::abs(lo);
        while (fine_to_coarse.size() > 1 && std::log(fine_to_coarse.back()) > cut) {
            fine_to_coarse.pop_back();
        }
    }
    return {fine_to_coarse.rbegin(), fine_to_coarse.rend()};
}

std::vector<ScalePair> admitted_pairs(double theta, std::span<const double> radii, double floor,
                                      const SpectrumConfig& cfg) {
    std::vector<ScalePair> out;
    for (double R : radii) {
        if (auto pr = admit(theta, R, floor, cfg)) out.push_back(*pr);
    }
    return out;
}

double SpectrumCurve::smallest_theta() const {
    if (points.empty()) throw Error(ErrorKind::grid_domain, "spectrum has no feasible theta");
    return points.front().theta;
}

double SpectrumCurve::largest_theta() const {
    if (points.empty()) throw Error(ErrorKind::grid_domain, "spectrum has no feasible theta");
    return points.back().theta;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

namespace {

// Best center for every pair, evaluated concurrently; slot i belongs to pairs[i].
std::vector<Best> evaluate_pairs(const BallSweeper& sweeper, std::span<const ScalePair> pairs,
                                 unsigned threads) {
    std::vector<Best> out(pairs.size());
    parallel_for(pairs.size(), resolve_threads(threads), [&](std::size_t i) {
        const double meshes[] = {pairs[i].r};
        const auto counts = sweeper.counts(pairs[i].R, meshes);
        out[i] = best_over_centers(counts[0], pairs[i].R, pairs[i].r);
    });
    return out;
}

// Folds per-pair results (already in R-descending order) into one estimate.
DimEstimate fold_pairs(const PointSet& p, const BallSweeper& sweeper,
                       std::span<const ScalePair> pairs, std::span<const Best> results) {
    Best best;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& b : results) {
        if (b.found) lo = std::min(lo, b.raw);
        absorb(best, b);
    }
    DimEstimate e;
    e.window_lo = pairs.back().R;
    e.window_hi = pairs.front().R;
    e.samples = pairs.size();
    if (!best.found) {
        e.flags.emplace_back("no-centers");
        return e;
    }
    e.raw = best.raw;
    e.value = clamp_dim(best.raw, p.dim());
    e.spread = best.raw - lo;
    e.witness = make_witness(p, sweeper, best);
    return e;
}

}  // namespace

DimEstimate assouad_spectrum_point(const PointSet& p, double theta,
                                   std::span<const double> radii_in,
                                   std::span<const std::size_t> centers,
                                   const SpectrumConfig& cfg) {
    check_config(cfg);
    if (!(theta > 0.0 && theta < 1.0)) {
        throw Error(ErrorKind::parameter_domain, "theta must lie in (0, 1)");
    }
    for (double R : radii_in) {
        if (!(R > 0.0 && R < 1.0)) {
            throw Error(ErrorKind::parameter_domain, "radius schedule must lie in (0, 1)");
        }
    }
    if (cfg.normalize) {
        SpectrumConfig raw_cfg = cfg;
        raw_cfg.normalize = false;
        return assouad_spectrum_point(normalize_extent(p), theta, radii_in, centers, raw_cfg);
    }
    if (p.empty()) return zero_estimate("empty-set");
    for (std::size_t c : centers) {
        if (c >= p.size()) throw Error(ErrorKind::center_domain, "center index out of range");
    }
    const double floor = resolution_floor(p, cfg);
    std::vector<double> radii(radii_in.begin(), radii_in.end());
    std::sort(radii.begin(), radii.end(), std::greater<>());
    const auto pairs = admitted_pairs(theta, radii, floor, cfg);
    if (pairs.empty()) {
        double largest = 0.0;
        for (double t : cfg.grid()) {
            if (t > 0.0 && t < 1.0 && !radius_schedule(t, floor, extent(p), cfg, false).empty()) {
                largest = std::max(largest, t);
            }
        }
        throw InfeasibleWindowError("no admissible (R, r) pair for theta " + format_double(theta),
                                    largest);
    }
    const BallSweeper sweeper(p, centers);
    const auto results = evaluate_pairs(sweeper, pairs, cfg.threads);
    return fold_pairs(p, sweeper, pairs, results);
}

SpectrumCurve compute_spectrum(const PointSet& input, const SpectrumConfig& cfg) {
    check_config(cfg);
    const auto grid = cfg.grid();
    check_grid(grid);
    const PointSet normalized = cfg.normalize ? normalize_extent(input) : PointSet(input.dim());
    const PointSet& p = cfg.normalize ? normalized : input;

    SpectrumCurve curve;
    curve.requested_grid = grid;
    curve.ambient_dim = p.dim();
    curve.point_count = p.size();
    curve.normalized = cfg.normalize;
    curve.provenance = p.provenance();

    if (p.empty()) {
        for (double t : grid) {
            SpectrumPoint sp;
            sp.theta = t;
            sp.estimate = zero_estimate("empty-set");
            curve.points.push_back(std::move(sp));
        }
        return curve;
    }

    curve.floor = resolution_floor(p, cfg);
    const double ext = extent(p);
    const auto centers = select_centers(p, cfg);
    curve.center_count = centers.size();

    std::vector<std::vector<ScalePair>> per_theta(grid.size());
    std::vector<ScalePair> flat;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const auto radii = radius_schedule(grid[t], curve.floor, ext, cfg, true);
        per_theta[t] = admitted_pairs(grid[t], radii, curve.floor, cfg);
        flat.insert(flat.end(), per_theta[t].begin(), per_theta[t].end());
    }
    const BallSweeper sweeper(p, centers);
    const auto results = evaluate_pairs(sweeper, flat, cfg.threads);

    std::size_t offset = 0;
    double envelope = 0.0;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const auto& pairs = per_theta[t];
        if (pairs.empty()) {
            curve.infeasible.push_back(grid[t]);
            continue;
        }
        SpectrumPoint sp;
        sp.theta = grid[t];
        sp.estimate = fold_pairs(p, sweeper, pairs,
                                 std::span<const Best>(results).subspan(offset, pairs.size()));
        offset += pairs.size();
        envelope = std::max(envelope, sp.estimate.value);
        sp.envelope = envelope;
        sp.pairs = pairs;
        curve.points.push_back(std::move(sp));
    }
    return curve;
}

std::string spectrum_csv(const SpectrumCurve& curve) {
    std::ostringstream out;
    out << "theta,assouad_estimate_raw,assouad_estimate_clamped,upper_envelope,witness_R,witness_r,"
           "witness_count\n";
    for (const auto& sp : curve.points) {
        out << format_double(sp.theta) << ',' << format_double(sp.estimate.raw) << ','
            << format_double(sp.estimate.value) << ',' << format_double(sp.envelope) << ',';
        if (const auto* w = std::get_if<BallWitness>(&sp.estimate.witness)) {
            out << format_double(w->R) << ',' << format_double(w->r) << ',' << w->count;
        } else {
            out << ",,";
        }
        out << '\n';
    }
    return out.str();
}

Json to_json(const SpectrumCurve& curve) {
    Json points = Json::array();
    for (const auto& sp : curve.points) {
        points.push_back(Json{{"theta", sp.theta},
                              {"estimate", to_json(sp.estimate)},
                              {"upper_envelope", sp.envelope},
                              {"pairs", sp.pairs.size()}});
    }
    return Json{{"ambient_dim", curve.ambient_dim},
                {"point_count", curve.point_count},
                {"center_count", curve.center_count},
                {"resolution_floor", curve.floor},
                {"normalized", curve.normalized},
                {"infeasible_thetas", curve.infeasible},
                {"points", std::move(points)}};
}

DimEstimate upper_spectrum(const SpectrumCurve& curve, double theta) {
    if (curve.points.empty()) throw Error(ErrorKind::grid_domain, "spectrum has no feasible theta");
    const double slack = 1e-12;
    if (theta < curve.points.front().theta - slack) {
        throw Error(ErrorKind::grid_domain, "theta below the smallest grid value");
    }
    const double top = curve.requested_grid.empty() ? curve.points.back().theta
                                                    : curve.requested_grid.back();
    if (theta > std::max(top, curve.points.back().theta) + slack) {
        throw Error(ErrorKind::grid_domain, "theta above the largest grid value");
    }
    std::size_t arg = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (curve.points[i].theta > theta + slack) break;
        last = i;
        if (curve.points[i].estimate.value > curve.points[arg].estimate.value) arg = i;
    }
    DimEstimate e = curve.points[arg].estimate;
    e.value = curve.points[last].envelope;
    e.flags.emplace_back("upper-spectrum");
    if (theta > curve.points.back().theta + slack) e.flags.emplace_back("beyond-feasible-grid");
    return e;
}

DimEstimate quasi_assouad_estimate(const SpectrumCurve& curve) {
    const double reach = curve.requested_grid.empty()
                             ? (curve.points.empty() ? 0.0 : curve.points.back().theta)
                             : curve.requested_grid.back();
    if (reach < 0.9) throw Error(ErrorKind::grid_domain, "theta grid must reach 0.9");
    if (curve.points.empty()) throw Error(ErrorKind::grid_domain, "spectrum has no feasible theta");
    DimEstimate e = upper_spectrum(curve, curve.points.back().theta);
    e.flags.emplace_back("lower-bound-style");
    return e;
}

// ---------------------------------------------------------------------------
// Assouad dimension
// ---------------------------------------------------------------------------

std::vector<ScalePair> default_assouad_pairs(const PointSet& input, const SpectrumConfig& cfg,
                                             const SpectrumCurve* spectrum) {
    check_config(cfg);
    const PointSet normalized = cfg.normalize ? normalize_extent(input) : PointSet(input.dim());
    const PointSet& p = cfg.normalize ? normalized : input;
    std::vector<ScalePair> out;
    if (p.empty()) return out;
    const double floor = resolution_floor(p, cfg);
    const double ext = extent(p);
    const double top = ext > 0.0 ? std::min(cfg.radius_top, ext) : cfg.radius_top;
    std::vector<double> ladder;
    for (int j = 0; j < 100000; ++j) {
        const double R = top * std::pow(cfg.assouad_radius_ratio, static_cast<double>(j));
        if (R < floor) break;
        ladder.push_back(R);
    }
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        for (std::size_t j = i + 1; j < ladder.size(); ++j) {
            if (ladder[i] / ladder[j] >= cfg.ratio_floor) out.push_back({ladder[i], ladder[j]});
        }
    }
    if (spectrum != nullptr) {
        for (const auto& sp : spectrum->points) {
            out.insert(out.end(), sp.pairs.begin(), sp.pairs.end());
        }
    }
    std::sort(out.begin(), out.end(), [](const ScalePair& a, const ScalePair& b) {
        return a.R != b.R ? a.R > b.R : a.r > b.r;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const ScalePair& a, const ScalePair& b) {
                              return a.R == b.R && a.r == b.r;
                          }),
              out.end());
    return out;
}

DimEstimate assouad_dim_estimate(const PointSet& input, std::span<const ScalePair> pairs,
                                 std::span<const std::size_t> centers, const SpectrumConfig& cfg) {
    check_config(cfg);
    if (pairs.empty()) throw Error(ErrorKind::parameter_domain, "Assouad scale window is empty");
    const PointSet normalized = cfg.normalize ? normalize_extent(input) : PointSet(input.dim());
    const PointSet& p = cfg.normalize ? normalized : input;
    std::vector<ScalePair> admitted;
    for (const auto& pr : pairs) {
        if (!(pr.r > 0.0 && pr.r < pr.R) || !std::isfinite(pr.R)) continue;
        if (pr.R / pr.r < cfg.ratio_floor) continue;
        admitted.push_back(pr);
    }
    if (admitted.empty()) throw Error(ErrorKind::parameter_domain, "no admissible Assouad pair");
    std::stable_sort(admitted.begin(), admitted.end(), [](const ScalePair& a, const ScalePair& b) {
        return a.R != b.R ? a.R > b.R : a.r > b.r;
    });
    if (p.empty()) return zero_estimate("empty-set");
    for (std::size_t c : centers) {
        if (c >= p.size()) throw Error(ErrorKind::center_domain, "center index out of range");
    }

    std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) of equal R
    for (std::size_t i = 0; i < admitted.size();) {
        std::size_t j = i;
        while (j < admitted.size() && admitted[j].R == admitted[i].R) ++j;
        groups.emplace_back(i, j);
        i = j;
    }
    const BallSweeper sweeper(p, centers);
    std::vector<Best> per(groups.size());
    std::vector<double> group_lo(groups.size(), std::numeric_limits<double>::infinity());
    parallel_for(groups.size(), resolve_threads(cfg.threads), [&](std::size_t g) {
        const auto [b, e] = groups[g];
        std::vector<double> meshes;
        for (std::size_t i = b; i < e; ++i) meshes.push_back(admitted[i].r);
        const auto counts = sweeper.counts(admitted[b].R, meshes);
        for (std::size_t k = 0; k < meshes.size(); ++k) {
            const Best cand = best_over_centers(counts[k], admitted[b].R, meshes[k]);
            if (cand.found) group_lo[g] = std::min(group_lo[g], cand.raw);
            absorb(per[g], cand);
        }
    });
    Best best;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        absorb(best, per[g]);
        lo = std::min(lo, group_lo[g]);
    }
    DimEstimate e;
    e.window_lo = admitted.back().R;
    e.window_hi = admitted.front().R;
    e.samples = admitted.size();
    if (!best.found) {
        e.flags.emplace_back("no-centers");
        return e;
    }
    e.raw = best.raw;
    e.value = clamp_dim(best.raw, p.dim());
    e.spread = best.raw - lo;
    e.witness = make_witness(p, sweeper, best);
    return e;
}

DimEstimate assouad_dim_estimate(const PointSet& p, std::span<const ScalePair> pairs,
                                 std::span<const std::size_t> centers, const SpectrumConfig& cfg,
                                 const SpectrumCurve& seed) {
    const bool ladder = std::any_of(pairs.begin(), pairs.end(), [&](const ScalePair& pr) {
        return pr.r > 0.0 && pr.r < pr.R && std::isfinite(pr.R) && pr.R / pr.r >= cfg.ratio_floor;
    });
    DimEstimate e;
    if (ladder) {
        e = assouad_dim_estimate(p, pairs, centers, cfg);
    } else {
        // Too few scales for the ladder; the seed alone bounds the sweep.
        e.window_lo = std::numeric_limits<double>::infinity();
        e.flags.emplace_back("no-ladder-pair");
    }
    for (const auto& sp : seed.points) {
        const auto* w = std::get_if<BallWitness>(&sp.estimate.witness);
        if (w == nullptr) continue;
        e.samples += sp.pairs.size();
        e.window_lo = std::min(e.window_lo, sp.estimate.window_lo);
        e.window_hi = std::max(e.window_hi, sp.estimate.window_hi);
        if (sp.estimate.raw > e.raw || std::holds_alternative<std::monostate>(e.witness)) {
            e.raw = sp.estimate.raw;
            e.value = sp.estimate.value;
            e.witness = *w;
        }
    }
    if (!std::isfinite(e.window_lo)) e.window_lo = 0.0;
    return e;
}

// ---------------------------------------------------------------------------
// Generalized upper box
// ---------------------------------------------------------------------------

GBBracket generalized_upper_box(const SpectrumCurve& curve, double tolerance) {
    if (curve.points.empty()) throw Error(ErrorKind::grid_domain, "spectrum is empty");
    GBBracket b;
    b.tolerance = tolerance;
    b.lower = -std::numeric_limits<double>::infinity();
    b.upper = std::numeric_limits<double>::infinity();
    for (const auto& sp : curve.points) {
        const double v = sp.estimate.value;
        const double low = (1.0 - sp.theta) * v;
        if (low > b.lower) {
            b.lower = low;
            b.theta_lower = sp.theta;
        }
        if (v < b.upper) {
            b.upper = v;
            b.theta_upper = sp.theta;
        }
    }
    b.theta_min = curve.points.front().theta;
    b.point = curve.points.front().estimate.value;
    b.midpoint = 0.5 * (b.lower + b.upper);
    b.consistent = b.lower <= b.upper + tolerance;
    return b;
}

Json to_json(const GBBracket& b) {
    return Json{{"lower", b.lower},
                {"upper", b.upper},
                {"point", b.point},
                {"consistent", b.consistent},
                {"theta_min", b.theta_min},
                {"midpoint", b.midpoint},
                {"theta_lower", b.theta_lower},
                {"theta_upper", b.theta_upper},
                {"tolerance", b.tolerance}};
}

std::vector<GbStarEntry> gb_star_estimate(const PointSet& p, std::span<const double> radii,
                                          const SpectrumConfig& cfg) {
    if (cfg.normalize) {
        throw Error(ErrorKind::config_conflict,
                    "normalization cannot be combined with absolute-ball estimates");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
            throw Error(ErrorKind::parameter_domain, "radii must be positive and finite");
        }
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw Error(ErrorKind::scale_order, "radii must be increasing");
        }
    }
    const Point origin(p.dim(), 0.0);
    std::vector<GbStarEntry> out;
    for (double R : radii) {
        GbStarEntry entry;
        entry.radius = R;
        const PointSet q = restrict_to_ball(p, origin, R);
        entry.points = q.size();
        if (q.empty()) {
            entry.estimate = zero_estimate("empty-restriction");
        } else if (distinct_points(q) == 1) {
            entry.estimate = zero_estimate("single-point");
        } else {
            const double top = min_positive_gap(q) / (2.0 * std::sqrt(static_cast<double>(q.dim())));
            const auto curve = cover_curve(q, third_schedule(top, top / 81.0));
            entry.estimate = box_dim_estimate(curve, q.dim());
            entry.estimate.flags.emplace_back("below-min-gap");
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<GbStarEntry> gb_star_estimate(const GeneratorSpec& spec, std::span<const double> radii,
                                          const SpectrumConfig& cfg) {
    return gb_star_estimate(generate(spec), radii, cfg);
}

DimEstimate decomposition_dim_upper(std::span<const PointSet> pieces, const SpectrumConfig& cfg) {
    if (pieces.empty()) throw Error(ErrorKind::parameter_domain, "decomposition has no pieces");
    DimEstimate e;
    e.samples = pieces.size();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        double v = 0.0;
        if (distinct_points(pieces[i]) > 1) {
            v = generalized_upper_box(compute_spectrum(pieces[i], cfg)).point;
        }
        if (i == 0 || v > e.raw) {
            e.raw = v;
            arg = i;
        }
    }
    e.value = e.raw;
    e.window_lo = static_cast<double>(arg);
    e.window_hi = static_cast<double>(arg);
    e.flags.emplace_back("upper-bound-certificate");
    return e;
}

}  // namespace fracdim
