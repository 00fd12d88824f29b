#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracdim/covering.hpp"
#include "fracdim/json_format.hpp"
#include "fracdim/point_set.hpp"
#include "fracdim/setgen.hpp"

namespace fracdim {

enum class Method { max_chord, least_squares };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

// Adjacent-scale chord of a cover curve.
struct ChordWitness {
    double coarse_scale = 0.0;
    double fine_scale = 0.0;
    std::size_t coarse_count = 0;
    std::size_t fine_count = 0;
};

// Ball configuration attaining a local-count exponent.
struct BallWitness {
    std::size_t center_index = 0;
    Point center;
    double R = 0.0;
    double r = 0.0;
    std::size_t count = 0;
    double theta_effective = 0.0;
};

using Witness = std::variant<std::monostate, ChordWitness, BallWitness>;

// (log N_fine - log N_coarse) / (log coarse - log fine)
double chord_slope(const ChordWitness& w);
// log(count) / log(R / r)
double ball_exponent(std::size_t count, double R, double r);
double ball_exponent(const BallWitness& w);

struct DimEstimate {
    double value = 0.0;  // clamped to [0, ambient dim]
    double raw = 0.0;
    Method method = Method::max_chord;
    double window_lo = 0.0;  // scales for box estimates, radii for ball sweeps
    double window_hi = 0.0;
    Witness witness;
    double spread = 0.0;  // max - min candidate (max_chord) or residual rms (least_squares)
    std::size_t samples = 0;
    std::vector<std::string> flags;

    bool has_flag(std::string_view flag) const;
};

Json to_json(const DimEstimate& e);
Json to_json(const Witness& w);

// --- box dimension -------------------------------------------------------

struct BoxConfig {
    Method method = Method::max_chord;
    double tail_fraction = 0.5;        // finest fraction of the schedule used
    double gap_quantile = 0.5;         // default schedules stop at resolution_floor
    double gap_factor = 0.75;
};

DimEstimate box_dim_estimate(const CoverCurve& curve, std::size_t ambient_dim,
                             const BoxConfig& cfg = {});

// Ratio-1/3 schedule from the largest 3^-j not above the extent down to
// resolution_floor(p, gap_quantile).
ScaleSchedule default_box_schedule(const PointSet& p, double gap_quantile = 0.5,
                                   double gap_factor = 0.75);
CoverCurve default_cover_curve(const PointSet& p, double gap_quantile = 0.5,
                               double gap_factor = 0.75);
DimEstimate box_dim_estimate(const PointSet& p, const BoxConfig& cfg = {});

// --- ball sweeps -----------------------------------------------------------

enum class CenterPolicy { automatic, all_points, cell_representatives };

const char* to_string(CenterPolicy c);
CenterPolicy center_policy_from_string(const std::string& name);

struct SpectrumConfig {
    std::vector<double> theta_grid;  // empty means default_theta_grid()
    double radius_top = 0.99;        // R < radius_top (and R <= extent)
    double mesh_step = 1.4142135623730951;  // ratio of successive r in a theta schedule
    double ratio_floor = 8.0;               // admitted pairs need R / r >= this
    double theta_tol_abs = 0.005;
    double theta_tol_rel = 0.02;
    double tail_fraction = 0.05;       // finest fraction of each theta's feasible log r band
    double gap_quantile = 0.5;         // resolution floor = gap_factor * this nearest-gap quantile
    double gap_factor = 0.75;
    CenterPolicy centers = CenterPolicy::automatic;
    std::size_t center_limit = 20000;       // d > 1: all points up to this size
    std::size_t line_center_limit = 1000000;  // d = 1: all points up to this size
    int representative_cells = 256;
    double assouad_radius_ratio = 0.5;  // ladder step for the Assouad sweep
    bool normalize = false;             // rescale to extent 1/2 before sweeping
    double chain_tolerance = 0.05;
    unsigned threads = 0;  // 0: FRACDIM_THREADS, else 1

    std::vector<double> grid() const;
    double theta_tolerance(double theta) const;
};

Json to_json(const SpectrumConfig& cfg);

// {0.02, 0.04, ..., 0.98} U {1/n : 2 <= n <= 100}, ascending, deduplicated.
std::vector<double> default_theta_grid();

// max(min positive gap / 4, 1e-12 * extent); 1e-12 * max(1, |x|) without two distinct points.
double gap_floor(const PointSet& p);

// max(gap_floor, factor * nearest_gap_quantile(p, q)); q = 0 gives gap_floor.
double resolution_floor(const PointSet& p, double gap_quantile, double gap_factor);
double resolution_floor(const PointSet& p, const SpectrumConfig& cfg = {});

// Translate to the origin corner and scale the extent to 1/2.
PointSet normalize_extent(const PointSet& p);

// Point indices used as centers, ascending.
std::vector<std::size_t> select_centers(const PointSet& p, const SpectrumConfig& cfg);

struct ScalePair {
    double R = 0.0;
    double r = 0.0;
};

// Radii R = (floor * mesh_step^j)^theta, capped by radius_top and the extent,
// that admit a pair; the finest tail_fraction of the band when `tail_only`.
std::vector<double> radius_schedule(double theta, double floor, double extent,
                                    const SpectrumConfig& cfg, bool tail_only = true);

// Pairs (R, r) with r = R^(1/theta) floored to `floor`, theta matched within
// tolerance, R/r >= ratio floor, 0 < r <= R < 1. Order follows `radii`.
std::vector<ScalePair> admitted_pairs(double theta, std::span<const double> radii, double floor,
                                      const SpectrumConfig& cfg);

// Max over centers and R of log N_r(B(x, R) ∩ P) / log(R / r) with r = R^(1/theta).
// Throws InfeasibleWindowError when no pair is admitted.
DimEstimate assouad_spectrum_point(const PointSet& p, double theta,
                                   std::span<const double> radius_schedule,
                                   std::span<const std::size_t> centers,
                                   const SpectrumConfig& cfg = {});

struct SpectrumPoint {
    double theta = 0.0;
    DimEstimate estimate;
    double envelope = 0.0;  // running max of clamped values
    std::vector<ScalePair> pairs;
};

struct SpectrumCurve {
    std::vector<SpectrumPoint> points;  // feasible grid values, ascending
    std::vector<double> requested_grid;
    std::vector<double> infeasible;
    double floor = 0.0;
    std::size_t ambient_dim = 1;
    std::size_t point_count = 0;
    std::size_t center_count = 0;
    bool normalized = false;
    std::string provenance;

    bool empty() const noexcept { return points.empty(); }
    double smallest_theta() const;
    double largest_theta() const;
};

SpectrumCurve compute_spectrum(const PointSet& p, const SpectrumConfig& cfg = {});

// theta,assouad_estimate_raw,assouad_estimate_clamped,upper_envelope,witness_R,witness_r,witness_count
std::string spectrum_csv(const SpectrumCurve& curve);
Json to_json(const SpectrumCurve& curve);

// Running max of the curve over grid values <= theta.
DimEstimate upper_spectrum(const SpectrumCurve& curve, double theta);

// Envelope at the largest feasible grid value; needs a grid reaching 0.9.
DimEstimate quasi_assouad_estimate(const SpectrumCurve& curve);

// Pairs from the ladder radius_top * assouad_radius_ratio^j with R/r >= ratio floor, plus every pair the
// spectrum admitted if one is given.
std::vector<ScalePair> default_assouad_pairs(const PointSet& p, const SpectrumConfig& cfg,
                                             const SpectrumCurve* spectrum = nullptr);

DimEstimate assouad_dim_estimate(const PointSet& p, std::span<const ScalePair> pairs,
                                 std::span<const std::size_t> centers,
                                 const SpectrumConfig& cfg = {});
// Same sweep, also admitting every spectrum maximum of `seed` as a candidate,
// which is what evaluating the seed's pairs again would find.
DimEstimate assouad_dim_estimate(const PointSet& p, std::span<const ScalePair> pairs,
                                 std::span<const std::size_t> centers, const SpectrumConfig& cfg,
                                 const SpectrumCurve& seed);

struct GBBracket {
    double lower = 0.0;
    double upper = 0.0;
    double point = 0.0;
    double midpoint = 0.0;
    bool consistent = true;
    double theta_min = 0.0;
    double theta_lower = 0.0;  // argmax of (1 - theta) v(theta)
    double theta_upper = 0.0;  // argmin of v(theta)
    double tolerance = 0.05;
};

GBBracket generalized_upper_box(const SpectrumCurve& curve, double tolerance = 0.05);
Json to_json(const GBBracket& b);

struct GbStarEntry {
    double radius = 0.0;
    std::size_t points = 0;
    DimEstimate estimate;
};

// Box estimates of B(0, R) ∩ generate(spec) on a window below the restricted
// set's minimum gap.
std::vector<GbStarEntry> gb_star_estimate(const GeneratorSpec& spec, std::span<const double> radii,
                                          const SpectrumConfig& cfg = {});
std::vector<GbStarEntry> gb_star_estimate(const PointSet& p, std::span<const double> radii,
                                          const SpectrumConfig& cfg = {});

// sup over pieces of the generalized upper box point estimate.
DimEstimate decomposition_dim_upper(std::span<const PointSet> pieces,
                                    const SpectrumConfig& cfg = {});

}  // namespace fracdim
