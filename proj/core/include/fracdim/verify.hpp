#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracdim/covering.hpp"
#include "fracdim/json_format.hpp"
#include "fracdim/point_set.hpp"
#include "fracdim/spectra.hpp"

namespace fracdim {

enum class ExampleId { gubr, egb };

const char* to_string(ExampleId id);

struct WitnessRecord {
    ExampleId example_id = ExampleId::gubr;
    int n = 0;
    std::optional<int> k;
    double x = 0.0;
    double R = 0.0;
    double r = 0.0;
    double theta_effective = 0.0;
    double theta_expected = 0.0;
    std::size_t count = 0;
    double bound = 0.0;
    bool passed = false;

    std::size_t own_block_count = 0;  // cells occupied by the n+1 points of row/block n
    bool scale_order_ok = false;      // 0 < r <= R < 1 and the example's power bounds
    double identity_error = 0.0;      // egb: |(n delta_n)^k - delta_n| / delta_n
};

Json to_json(const WitnessRecord& w);

struct CheckReport {
    std::string check_id;
    std::string inputs;
    std::string expected;
    Json observed = Json::array();
    double tolerance = 0.0;
    bool passed = true;
    Json witness = nullptr;
};

Json to_json(const CheckReport& c);
// One JSON object per line, sorted by check_id (stable).
std::string to_json_lines(std::vector<CheckReport> reports);

// Ball B(n, n delta_n) on gen_example_E(n_max) at mesh delta_n.
WitnessRecord witness_gubr(const LineIndex& example_e, int n, int n_max);
WitnessRecord witness_gubr(int n, int n_max);

// Ball B(0, n delta_n) on gen_Ek(k, n_max) at mesh delta_n.
WitnessRecord witness_egb(const LineIndex& ek, int k, int n, int n_max);
WitnessRecord witness_egb(int k, int n, int n_max);

// |(n delta_n)^k - delta_n| / delta_n <= 1e-12 for every k and 2 <= n <= n_max.
CheckReport check_egb_identity(std::span<const int> ks, int n_max);

// Exact count laws at every delta: monotonicity, union sandwich, product bound
// and grid_count(aP, a delta) = grid_count(P, delta) for a in {2, 10, 0.5}.
CheckReport check_count_laws(const PointSet& e, const PointSet& f, std::span<const double> deltas);

// Seeded random pairs with coordinates on the lattice 2^-20 Z, so that scaling
// by 2, 10 and 0.5 is exact in floating point. Pair kinds cycle through
// independent, nested (E inside F) and translated copies; dimension 1 or 2.
std::vector<std::pair<PointSet, PointSet>> random_set_pairs(std::uint64_t seed, int trials);
// 2^-1, 2^-2, ..., 2^-22.
std::vector<double> dyadic_schedule();
// check_count_laws over random_set_pairs(seed, trials) on dyadic_schedule().
CheckReport check_count_laws_random(std::uint64_t seed, int trials);

struct CalibrationSet {
    std::string name;
    PointSet points;
};

// cantor (level 12), poly p=1 and p=2 (N = 10^5), ek k=2 and k=3 (n_max 1000),
// example-e (n_max 2000), grid (N = 4096), singleton {0}, empty.
std::vector<CalibrationSet> calibration_suite();

// All estimates a chain check needs, computed once.
struct EstimateBundle {
    DimEstimate box;
    SpectrumCurve spectrum;
    GBBracket bracket;
    DimEstimate quasi;
    DimEstimate assouad;
};

EstimateBundle estimate_all(const PointSet& p, const SpectrumConfig& cfg = {},
                            const BoxConfig& box = {});

CheckReport check_chain(const EstimateBundle& b, double tolerance);
CheckReport check_chain(const PointSet& p, const SpectrumConfig& cfg, double tolerance);

// Both directions of the zero-dimension equivalence at finite scale:
// qA <= eps implies gb <= eps (exact for the running max), gb <= eps implies
// qA <= eps / (1 - theta_max), and envelope <= eps implies v <= eps per theta.
CheckReport check_zero_equivalences(const EstimateBundle& b, double epsilon);
CheckReport check_zero_equivalences(const PointSet& p, const SpectrumConfig& cfg, double epsilon);

}  // namespace fracdim
