#include "fracdim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fracdim/error.hpp"
#include "fracdim/setgen.hpp"

namespace fracdim {

namespace {

std::size_t row_cells(double offset, double delta, int n) {
    std::set<std::int64_t> cells;
    for (int i = 0; i <= n; ++i) cells.insert(cell_coordinate(offset + i * delta, delta));
    return cells.size();
}

Json law_violation(const char* law, double delta, std::size_t lhs, std::size_t rhs) {
    return Json{{"law", law}, {"delta", delta}, {"lhs", lhs}, {"rhs", rhs}};
}

}  // namespace

const char* to_string(ExampleId id) { return id == ExampleId::gubr ? "gubr" : "egb"; }

Json to_json(const WitnessRecord& w) {
    return Json{{"example_id", to_string(w.example_id)},
                {"n", w.n},
                {"k", w.k ? Json(*w.k) : Json(nullptr)},
                {"x", w.x},
                {"R", w.R},
                {"r", w.r},
                {"theta_effective", w.theta_effective},
                {"theta_expected", w.theta_expected},
                {"count", w.count},
                {"own_block_count", w.own_block_count},
                {"bound", w.bound},
                {"scale_order_ok", w.scale_order_ok},
                {"identity_error", w.identity_error},
                {"passed", w.passed}};
}

Json to_json(const CheckReport& c) {
    return Json{{"check_id", c.check_id}, {"passed", c.passed},     {"tolerance", c.tolerance},
                {"observed", c.observed}, {"expected", c.expected}, {"witness", c.witness},
                {"inputs", c.inputs}};
}

std::string to_json_lines(std::vector<CheckReport> reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
    std::string out;
    for (const auto& r : reports) {
        out += dump_json(to_json(r));
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness predicates
// ---------------------------------------------------------------------------

WitnessRecord witness_gubr(const LineIndex& e, int n, int n_max) {
    if (n < 2) throw Error(ErrorKind::parameter_domain, "witness_gubr needs n >= 2");
    if (n > n_max) throw Error(ErrorKind::parameter_domain, "witness_gubr needs n <= n_max");
    WitnessRecord w;
    w.example_id = ExampleId::gubr;
    w.n = n;
    const double delta = example_delta(n);
    w.x = static_cast<double>(n);
    w.R = n * delta;
    w.r = delta;
    w.theta_effective = std::log(w.R) / std::log(w.r);
    w.theta_expected = 1.0 / n;
    if (!e.contains(w.x)) throw Error(ErrorKind::center_domain, "x_n is not a point of the set");
    w.count = e.local_count(w.x, w.R, w.r);
    w.own_block_count = row_cells(w.x, delta, n);
    w.bound = n / 3.0;
    // r <= R^k in logs; k = n is an exact equality, so allow relative 1e-10.
    bool powers = w.r > 0.0 && w.r <= w.R && w.R < 1.0;
    const double log_r = std::log(w.r);
    const double log_R = std::log(w.R);
    for (int k = 2; k <= n && powers; ++k) {
        powers = log_r <= k * log_R + 1e-10 * std::abs(log_r);
    }
    w.scale_order_ok = powers;
    w.passed = powers && static_cast<double>(w.count) >= w.bound;
    return w;
}

WitnessRecord witness_gubr(int n, int n_max) {
    const PointSet e = gen_example_E(n_max);
    return witness_gubr(LineIndex(e), n, n_max);
}

WitnessRecord witness_egb(const LineIndex& ek, int k, int n, int n_max) {
    if (k < 2) throw Error(ErrorKind::parameter_domain, "witness_egb needs k >= 2");
    if (n < 2 || n > n_max) throw Error(ErrorKind::parameter_domain, "witness_egb needs 2 <= n <= n_max");
    WitnessRecord w;
    w.example_id = ExampleId::egb;
    w.n = n;
    w.k = k;
    const double delta = ek_delta(k, n);
    w.x = 0.0;
    w.R = n * delta;
    w.r = delta;
    w.theta_effective = std::log(w.R) / std::log(w.r);
    w.theta_expected = 1.0 / k;
    w.identity_error = std::abs(std::pow(w.R, k) - delta) / delta;
    if (!ek.contains(w.x)) throw Error(ErrorKind::center_domain, "x_n is not a point of the set");
    w.count = ek.local_count(w.x, w.R, w.r);
    w.own_block_count = row_cells(0.0, delta, n);
    w.bound = n / 3.0;
    w.scale_order_ok = w.r > 0.0 && w.r <= w.R && w.R < 1.0 && w.identity_error <= 1e-12;
    w.passed = w.scale_order_ok && static_cast<double>(w.count) >= w.bound;
    return w;
}

WitnessRecord witness_egb(int k, int n, int n_max) {
    const PointSet ek = gen_Ek(k, n_max);
    return witness_egb(LineIndex(ek), k, n, n_max);
}

CheckReport check_egb_identity(std::span<const int> ks, int n_max) {
    CheckReport rep;
    rep.check_id = "egb-identity";
    rep.expected = "|(n delta_n)^k - delta_n| / delta_n <= 1e-12";
    rep.tolerance = 1e-12;
    rep.inputs = "n in [2, " + std::to_string(n_max) + "]";
    Json failures = Json::array();
    for (int k : ks) {
        if (k < 2) throw Error(ErrorKind::parameter_domain, "egb identity needs k >= 2");
        double worst = 0.0;
        int worst_n = 2;
        for (int n = 2; n <= n_max; ++n) {
            const double delta = ek_delta(k, n);
            const double err = std::abs(std::pow(n * delta, k) - delta) / delta;
            if (err > worst) {
                worst = err;
                worst_n = n;
            }
            if (!(err <= rep.tolerance) && failures.size() < 20) {
                failures.push_back(Json{{"k", k}, {"n", n}, {"relative_error", err}});
            }
        }
        rep.observed.push_back(Json{{"k", k}, {"max_relative_error", worst}, {"at_n", worst_n}});
        rep.passed = rep.passed && worst <= rep.tolerance;
    }
    if (!failures.empty()) rep.witness = failures;
    return rep;
}

// ---------------------------------------------------------------------------
// Count laws
// ---------------------------------------------------------------------------

CheckReport check_count_laws(const PointSet& e, const PointSet& f, std::span<const double> deltas) {
    CheckReport rep;
    rep.check_id = "count-laws";
    rep.inputs = e.label() + " | " + f.label();
    rep.expected =
        "N(E), N(F) <= N(E u F) <= N(E) + N(F); N(E x F) <= N(E) N(F); N(aP, a delta) = N(P, delta)";
    if (e.dim() != f.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "count laws need equal ambient dimensions");
    }
    const PointSet u = set_union(e, f);
    const PointSet prod = set_product(e, f);
    const double scales[] = {2.0, 10.0, 0.5};
    std::vector<PointSet> scaled_e, scaled_f;
    for (double a : scales) {
        scaled_e.push_back(affine_image(e, a));
        scaled_f.push_back(affine_image(f, a));
    }
    std::size_t checked = 0;
    Json violations = Json::array();
    for (double delta : deltas) {
        const std::size_t ne = grid_count(e, delta).count;
        const std::size_t nf = grid_count(f, delta).count;
        const std::size_t nu = grid_count(u, delta).count;
        const std::size_t np = grid_count(prod, delta).count;
        if (ne > nu) violations.push_back(law_violation("monotone-E", delta, ne, nu));
        if (nf > nu) violations.push_back(law_violation("monotone-F", delta, nf, nu));
        if (nu > ne + nf) violations.push_back(law_violation("union-sum", delta, nu, ne + nf));
        if (np > ne * nf) violations.push_back(law_violation("product", delta, np, ne * nf));
        for (std::size_t s = 0; s < std::size(scales); ++s) {
            const double ad = scales[s] * delta;
            const std::size_t se = grid_count(scaled_e[s], ad).count;
            const std::size_t sf = grid_count(scaled_f[s], ad).count;
            if (se != ne) violations.push_back(law_violation("scale-E", delta, se, ne));
            if (sf != nf) violations.push_back(law_violation("scale-F", delta, sf, nf));
        }
        checked += 4 + 2 * std::size(scales);
    }
    rep.passed = violations.empty();
    rep.observed.push_back(Json{{"relations_checked", checked}, {"violations", violations.size()}});
    if (!violations.empty()) rep.witness = violations;
    return rep;
}

std::vector<std::pair<PointSet, PointSet>> random_set_pairs(std::uint64_t seed, int trials) {
    if (trials < 0) throw Error(ErrorKind::parameter_domain, "trials must be nonnegative");
    constexpr double unit = 0x1p-20;
    std::vector<std::pair<PointSet, PointSet>> out;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(t));
        const std::size_t dim = 1 + rng() % 2;
        auto draw = [&](std::size_t n) {
            std::vector<double> xs(n * dim);
            for (double& x : xs) {
                x = static_cast<double>(static_cast<std::int64_t>(rng() % (1u << 21)) - (1 << 20)) * unit;
            }
            return xs;
        };
        const std::size_t ne = 1 + rng() % 64;
        const std::size_t nf = 1 + rng() % 64;
        std::vector<double> e = draw(ne);
        std::vector<double> f;
        switch (t % 3) {
            case 0:
                f = draw(nf);
                break;
            case 1:
                f = e;
                for (double x : draw(nf)) f.push_back(x);
                break;
            default: {
                const double shift = static_cast<double>(rng() % (1u << 20)) * unit;
                f = e;
                for (std::size_t i = 0; i < f.size(); i += dim) f[i] += shift;
            }
        }
        const std::string tag = "trial " + std::to_string(t);
        out.emplace_back(PointSet(dim, std::move(e), tag + " E"), PointSet(dim, std::move(f), tag + " F"));
    }
    return out;
}

std::vector<double> dyadic_schedule() {
    std::vector<double> out;
    for (int j = 1; j <= 22; ++j) out.push_back(std::ldexp(1.0, -j));
    return out;
}

CheckReport check_count_laws_random(std::uint64_t seed, int trials) {
    CheckReport rep;
    rep.check_id = "count-laws";
    rep.inputs = "random_set_pairs(seed=" + std::to_string(seed) + ", trials=" + std::to_string(trials) + ")";
    const auto deltas = dyadic_schedule();
    std::size_t checked = 0;
    std::size_t violations = 0;
    Json failures = Json::array();
    for (const auto& [e, f] : random_set_pairs(seed, trials)) {
        const CheckReport one = check_count_laws(e, f, deltas);
        rep.expected = one.expected;
        checked += one.observed[0]["relations_checked"].get<std::size_t>();
        violations += one.observed[0]["violations"].get<std::size_t>();
        if (!one.passed) failures.push_back(Json{{"pair", one.inputs}, {"violations", one.witness}});
    }
    rep.passed = violations == 0;
    rep.observed.push_back(
        Json{{"pairs", trials}, {"relations_checked", checked}, {"violations", violations}});
    if (!failures.empty()) rep.witness = failures;
    return rep;
}

// ---------------------------------------------------------------------------
// Chain and zero-dimension checks
// ---------------------------------------------------------------------------

std::vector<CalibrationSet> calibration_suite() {
    std::vector<CalibrationSet> out;
    out.push_back({"cantor", gen_cantor_midpoints(12)});
    out.push_back({"poly-p1", gen_poly_sequence(1.0, 100000)});
    out.push_back({"poly-p2", gen_poly_sequence(2.0, 100000)});
    out.push_back({"ek-k2", gen_Ek(2, 1000)});
    out.push_back({"ek-k3", gen_Ek(3, 1000)});
    out.push_back({"example-e", gen_example_E(2000)});
    out.push_back({"grid", gen_uniform_grid(4096, 1)});
    out.push_back({"singleton", PointSet(1, {0.0}, "singleton")});
    out.push_back({"empty", PointSet(1, {}, "empty")});
    return out;
}

EstimateBundle estimate_all(const PointSet& p, const SpectrumConfig& cfg, const BoxConfig& box) {
    EstimateBundle b;
    b.box = box_dim_estimate(p, box);
    b.spectrum = compute_spectrum(p, cfg);
    if (!b.spectrum.empty()) {
        b.bracket = generalized_upper_box(b.spectrum, cfg.chain_tolerance);
        b.quasi = quasi_assouad_estimate(b.spectrum);
    }
    if (p.empty()) {
        b.assouad.flags.emplace_back("empty-set");
    } else {
        const auto pairs = default_assouad_pairs(p, cfg);
        const PointSet normalized = cfg.normalize ? normalize_extent(p) : PointSet(p.dim());
        const auto centers = select_centers(cfg.normalize ? normalized : p, cfg);
        b.assouad = assouad_dim_estimate(p, pairs, centers, cfg, b.spectrum);
    }
    return b;
}

CheckReport check_chain(const EstimateBundle& b, double tol) {
    CheckReport rep;
    rep.check_id = "chain";
    rep.inputs = b.spectrum.provenance;
    rep.tolerance = tol;
    rep.expected =
        "box <= v(t) + tol; envelope nondecreasing; lower <= upper + tol; "
        "((1-t2)/(1-t1)) v(t2) <= v(t1) + tol; envelope <= assouad + tol; values in [0, d]";
    const auto& pts = b.spectrum.points;
    const double d = static_cast<double>(b.spectrum.ambient_dim);
    Json failures = Json::array();
    std::size_t box_fail = 0, monotone_fail = 0, interp_fail = 0, assouad_fail = 0, clamp_fail = 0;
    double worst_interp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = pts[i].estimate.value;
        if (b.box.value > v + tol) {
            ++box_fail;
            failures.push_back(Json{{"relation", "box"}, {"theta", pts[i].theta}, {"box", b.box.value}, {"v", v}});
        }
        if (i > 0 && pts[i].envelope < pts[i - 1].envelope) ++monotone_fail;
        if (pts[i].envelope < v) ++monotone_fail;
        if (pts[i].envelope > b.assouad.value + tol) {
            ++assouad_fail;
            failures.push_back(Json{{"relation", "assouad"}, {"theta", pts[i].theta},
                                    {"envelope", pts[i].envelope}, {"assouad", b.assouad.value}});
        }
        if (!(v >= 0.0 && v <= d)) ++clamp_fail;
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double lhs = (1.0 - pts[j].theta) / (1.0 - pts[i].theta) * pts[j].estimate.value;
            const double excess = lhs - v;
            worst_interp = std::max(worst_interp, excess);
            if (excess > tol) {
                ++interp_fail;
                if (interp_fail <= 10) {
                    failures.push_back(Json{{"relation", "interpolation"}, {"theta1", pts[i].theta},
                                            {"theta2", pts[j].theta}, {"lhs", lhs}, {"v1", v}});
                }
            }
        }
    }
    const bool bracket_ok = pts.empty() || b.bracket.lower <= b.bracket.upper + tol;
    rep.passed = box_fail == 0 && monotone_fail == 0 && interp_fail == 0 && assouad_fail == 0 &&
                 clamp_fail == 0 && bracket_ok;
    rep.observed.push_back(Json{{"box", b.box.value},
                                {"thetas", pts.size()},
                                {"bracket_lower", b.bracket.lower},
                                {"bracket_upper", b.bracket.upper},
                                {"assouad", b.assouad.value},
                                {"worst_interpolation_excess", pts.size() > 1 ? worst_interp : 0.0},
                                {"box_failures", box_fail},
                                {"monotone_failures", monotone_fail},
                                {"interpolation_failures", interp_fail},
                                {"assouad_failures", assouad_fail},
                                {"clamp_failures", clamp_fail},
                                {"bracket_consistent", bracket_ok}});
    if (!failures.empty()) rep.witness = failures;
    return rep;
}

CheckReport check_chain(const PointSet& p, const SpectrumConfig& cfg, double tolerance) {
    return check_chain(estimate_all(p, cfg), tolerance);
}

CheckReport check_zero_equivalences(const EstimateBundle& b, double eps) {
    CheckReport rep;
    rep.check_id = "zero-equivalences";
    rep.inputs = b.spectrum.provenance;
    rep.tolerance = eps;
    rep.expected =
        "qA <= eps => gb <= eps; gb <= eps => qA <= eps/(1-theta_max); envelope(t) <= eps => v(t) <= eps";
    if (b.spectrum.empty()) {
        rep.passed = true;
        rep.observed.push_back(Json{{"note", "no feasible theta"}});
        return rep;
    }
    const double theta_max = b.spectrum.largest_theta();
    const double eps_q = eps / (1.0 - theta_max);
    const bool gb_zero = b.bracket.point <= eps;
    const bool qa_zero = b.quasi.value <= eps;
    const bool qa_bounded = b.quasi.value <= eps_q;
    std::size_t forward_fail = 0, reverse_only = 0;
    for (const auto& sp : b.spectrum.points) {
        const bool env_zero = sp.envelope <= eps;
        const bool v_zero = sp.estimate.value <= eps;
        if (env_zero && !v_zero) ++forward_fail;
        if (v_zero && !env_zero) ++reverse_only;
    }
    const bool down = !qa_zero || gb_zero;
    const bool up = !gb_zero || qa_bounded;
    rep.passed = down && up && forward_fail == 0;
    rep.observed.push_back(Json{{"gb_point", b.bracket.point},
                                {"gb_zero", gb_zero},
                                {"quasi_assouad", b.quasi.value},
                                {"quasi_zero", qa_zero},
                                {"quasi_threshold", eps_q},
                                {"quasi_within_threshold", qa_bounded},
                                {"envelope_implication_failures", forward_fail},
                                {"spectrum_zero_envelope_positive", reverse_only}});
    return rep;
}

CheckReport check_zero_equivalences(const PointSet& p, const SpectrumConfig& cfg, double epsilon) {
    return check_zero_equivalences(estimate_all(p, cfg), epsilon);
}

}  // namespace fracdim
