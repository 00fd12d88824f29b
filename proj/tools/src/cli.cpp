#include "fracdim_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fracdim/covering.hpp"
#include "fracdim/error.hpp"
#include "fracdim/json_format.hpp"
#include "fracdim/point_io.hpp"
#include "fracdim/setgen.hpp"
#include "fracdim/spectra.hpp"
#include "fracdim/verify.hpp"

namespace fracdim::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
    std::string format;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    double tolerance = 0.05;
    bool timing = false;
};

struct InputOptions {
    std::string path;
    std::string family;
    GeneratorSpec spec;
};

struct SpectrumOptions {
    SpectrumConfig cfg;
    std::string theta_grid = "default";
    std::string centers = "auto";
};

struct BoxOptions {
    BoxConfig cfg;
    std::string method = "max_chord";
    std::optional<double> delta_max;
    std::optional<double> delta_min;
    double ratio = 1.0 / 3.0;
};

// Output of one command before formatting.
struct Outcome {
    Json doc = Json::object();
    std::string csv;
    std::vector<CheckReport> checks;
    bool has_checks = false;
    std::vector<std::string> warnings;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) parts.push_back(cur);
    }
    return parts;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw Error(ErrorKind::parameter_domain, "not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw Error(ErrorKind::parameter_domain, "not an integer: '" + s + "'");
    return v;
}

// "default", "a,b,c" or "start:stop:step".
std::vector<double> parse_theta_grid(const std::string& text) {
    if (text == "default") return {};
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw Error(ErrorKind::parameter_domain, "theta grid range is start:stop:step");
        const double a = parse_double(parts[0]);
        const double b = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (!(step > 0.0)) throw Error(ErrorKind::parameter_domain, "theta grid step must be positive");
        std::vector<double> out;
        for (int i = 0;; ++i) {
            const double t = a + i * step;
            if (t > b + 1e-12) break;
            out.push_back(t);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_int(part));
    return out;
}

// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int n = parse_int(text);
        return {n, n};
    }
    const int lo = parse_int(text.substr(0, dots));
    const int hi = parse_int(text.substr(dots + 2));
    if (lo > hi) throw Error(ErrorKind::parameter_domain, "empty range '" + text + "'");
    return {lo, hi};
}

void add_generator_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--n-max", in.spec.n_max, "largest block index (example-e, ek, egb-union)");
    cmd->add_option("--k", in.spec.k, "exponent parameter of ek");
    cmd->add_option("--i-max", in.spec.i_max, "number of pieces of egb-union");
    cmd->add_option("--level", in.spec.level, "cantor construction level");
    cmd->add_option("--p", in.spec.p, "poly exponent");
    cmd->add_option("--count", in.spec.count, "N for poly and grid");
    cmd->add_option("--dim", in.spec.dim, "grid dimension");
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("input", in.path, "point file (.csv or .json)");
    cmd->add_option("--family", in.family,
                    "generate the input instead: example-e, ek, egb-union, cantor, poly, grid");
    add_generator_options(cmd, in);
}

void add_spectrum_options(CLI::App* cmd, SpectrumOptions& s) {
    cmd->add_option("--theta-grid", s.theta_grid, "default, a,b,c or start:stop:step");
    cmd->add_option("--centers", s.centers, "auto, all or representatives");
    cmd->add_flag("--normalize", s.cfg.normalize, "rescale to extent 1/2 before sweeping");
    cmd->add_option("--radius-top", s.cfg.radius_top, "radii stay below this");
    cmd->add_option("--mesh-step", s.cfg.mesh_step, "ratio of successive r");
    cmd->add_option("--ratio-floor", s.cfg.ratio_floor, "admitted pairs need R/r >= this");
    cmd->add_option("--tail-fraction", s.cfg.tail_fraction, "finest share of each theta's band");
    cmd->add_option("--gap-quantile", s.cfg.gap_quantile, "nearest-gap quantile of the floor");
    cmd->add_option("--gap-factor", s.cfg.gap_factor, "floor = factor * gap quantile");
    cmd->add_option("--center-limit", s.cfg.center_limit, "all points as centers up to this size (d > 1)");
    cmd->add_option("--line-center-limit", s.cfg.line_center_limit,
                    "all points as centers up to this size (d = 1)");
}

SpectrumConfig spectrum_config(const SpectrumOptions& s, const Globals& g) {
    SpectrumConfig cfg = s.cfg;
    cfg.theta_grid = parse_theta_grid(s.theta_grid);
    cfg.centers = center_policy_from_string(s.centers);
    cfg.threads = g.threads;
    cfg.chain_tolerance = g.tolerance;
    return cfg;
}

PointSet load_input(const InputOptions& in) {
    if (!in.path.empty() && !in.family.empty()) {
        throw Error(ErrorKind::config_conflict, "give an input file or --family, not both");
    }
    if (!in.path.empty()) return load_point_set(in.path);
    if (!in.family.empty()) {
        GeneratorSpec spec = in.spec;
        spec.family = family_from_string(in.family);
        return generate(spec);
    }
    throw Error(ErrorKind::parameter_domain, "no input: give a point file or --family");
}

Json input_echo(const InputOptions& in) {
    if (!in.path.empty()) return Json{{"path", in.path}};
    GeneratorSpec spec = in.spec;
    spec.family = family_from_string(in.family);
    return Json{{"generator", spec.describe()}};
}

Json cover_curve_json(const CoverCurve& curve) {
    Json entries = Json::array();
    for (const auto& e : curve.entries) entries.push_back(Json{{"delta", e.scale}, {"count", e.count}});
    return Json{{"delta_max", curve.schedule.delta_max},
                {"delta_min", curve.schedule.delta_min},
                {"ratio", curve.schedule.ratio},
                {"monotone", curve.monotone},
                {"entries", std::move(entries)}};
}

Json optional_estimate(const std::function<DimEstimate()>& fn) {
    try {
        return to_json(fn());
    } catch (const Error& e) {
        return Json{{"unavailable", e.what()}};
    }
}

// Small truncations of the calibration suite, same names.
PointSet quick_set(const std::string& name) {
    if (name == "cantor") return gen_cantor_midpoints(8);
    if (name == "poly-p1") return gen_poly_sequence(1.0, 1000);
    if (name == "poly-p2") return gen_poly_sequence(2.0, 1000);
    if (name == "ek-k2") return gen_Ek(2, 60);
    if (name == "ek-k3") return gen_Ek(3, 60);
    if (name == "example-e") return gen_example_E(200);
    if (name == "grid") return gen_uniform_grid(256, 1);
    if (name == "singleton") return PointSet(1, {0.0}, "singleton");
    return PointSet(1, {}, "empty");
}

std::vector<CalibrationSet> suite(bool quick) {
    if (!quick) return calibration_suite();
    std::vector<CalibrationSet> out;
    for (const char* name : {"cantor", "poly-p1", "poly-p2", "ek-k2", "ek-k3", "example-e", "grid",
                             "singleton", "empty"}) {
        out.push_back({name, quick_set(name)});
    }
    return out;
}

// --- witness suites ---------------------------------------------------------

CheckReport gubr_check(int lo, int hi, int n_max, bool records) {
    if (lo < 2) throw Error(ErrorKind::parameter_domain, "gubr witnesses need n >= 2");
    const PointSet e = gen_example_E(n_max);
    const LineIndex index(e);
    CheckReport rep;
    rep.check_id = "witness-gubr";
    rep.inputs = "example-e(n_max=" + std::to_string(n_max) + "), n in [" + std::to_string(lo) + ", " +
                 std::to_string(hi) + "]";
    rep.expected = "count >= n/3, r <= R^k for 2 <= k <= n, theta_effective = 1/n (rel 1e-10)";
    rep.tolerance = 1e-10;
    std::size_t failures = 0;
    std::size_t exact = 0;
    double worst_theta = 0.0;
    Json failing = Json::array();
    Json all = Json::array();
    for (int n = lo; n <= hi; ++n) {
        const WitnessRecord w = witness_gubr(index, n, n_max);
        const double theta_err = std::abs(w.theta_effective - w.theta_expected) / w.theta_expected;
        worst_theta = std::max(worst_theta, theta_err);
        const bool ok = w.passed && theta_err <= rep.tolerance;
        exact += w.count == static_cast<std::size_t>(n) + 1;
        if (!ok) {
            ++failures;
            if (failing.size() < 20) failing.push_back(to_json(w));
        }
        if (records) all.push_back(to_json(w));
    }
    rep.passed = failures == 0;
    rep.observed.push_back(Json{{"witnesses", hi - lo + 1},
                                {"failures", failures},
                                {"count_equals_n_plus_1", exact},
                                {"max_theta_relative_error", worst_theta}});
    if (records) rep.observed.push_back(Json{{"records", std::move(all)}});
    if (!failing.empty()) rep.witness = failing;
    return rep;
}

CheckReport egb_check(int k, int lo, int hi, int n_max, bool records) {
    if (lo < 2) throw Error(ErrorKind::parameter_domain, "egb witnesses need n >= 2");
    const PointSet ek = gen_Ek(k, n_max);
    const LineIndex index(ek);
    CheckReport rep;
    rep.check_id = "witness-egb-k" + std::to_string(k);
    rep.inputs = "ek(k=" + std::to_string(k) + ",n_max=" + std::to_string(n_max) + "), n in [" +
                 std::to_string(lo) + ", " + std::to_string(hi) + "]";
    rep.expected = "count >= n/3, |(n delta_n)^k - delta_n| <= 1e-12 delta_n";
    rep.tolerance = 1e-12;
    std::size_t failures = 0;
    double worst = 0.0;
    Json failing = Json::array();
    Json all = Json::array();
    for (int n = lo; n <= hi; ++n) {
        const WitnessRecord w = witness_egb(index, k, n, n_max);
        worst = std::max(worst, w.identity_error);
        if (!w.passed) {
            ++failures;
            if (failing.size() < 20) failing.push_back(to_json(w));
        }
        if (records) all.push_back(to_json(w));
    }
    rep.passed = failures == 0;
    rep.observed.push_back(
        Json{{"witnesses", hi - lo + 1}, {"failures", failures}, {"max_identity_error", worst}});
    if (records) rep.observed.push_back(Json{{"records", std::move(all)}});
    if (!failing.empty()) rep.witness = failing;
    return rep;
}

CheckReport gbstar_check(const std::vector<GbStarEntry>& entries, double tol, const std::string& inputs) {
    CheckReport rep;
    rep.check_id = "gbstar";
    rep.inputs = inputs;
    rep.expected = "every restricted box estimate <= tolerance";
    rep.tolerance = tol;
    for (const auto& e : entries) {
        rep.observed.push_back(Json{{"radius", e.radius}, {"value", e.estimate.value}});
        rep.passed = rep.passed && e.estimate.value <= tol;
    }
    return rep;
}

CheckReport gb_lower_check(const GBBracket& b, double threshold, const std::string& inputs) {
    CheckReport rep;
    rep.check_id = "gb-lower";
    rep.inputs = inputs;
    rep.expected = "bracket lower >= " + format_double(threshold);
    rep.observed.push_back(Json{{"lower", b.lower}, {"upper", b.upper}});
    rep.passed = b.lower >= threshold;
    return rep;
}

Json bundle_json(const std::string& name, const PointSet& p, const EstimateBundle& b) {
    Json j{{"name", name}, {"points", p.size()}, {"dim", p.dim()}, {"box", to_json(b.box)}};
    if (b.spectrum.empty()) {
        j["bracket"] = nullptr;
        j["quasi_assouad"] = nullptr;
        j["upper_spectrum_0.75"] = nullptr;
    } else {
        j["bracket"] = to_json(b.bracket);
        j["quasi_assouad"] = to_json(b.quasi);
        j["upper_spectrum_0.75"] = optional_estimate([&] { return upper_spectrum(b.spectrum, 0.75); });
    }
    j["assouad"] = to_json(b.assouad);
    j["spectrum"] = to_json(b.spectrum);
    return j;
}

std::string checks_csv(const std::vector<CheckReport>& checks) {
    std::string out = "check_id,passed,tolerance\n";
    for (const auto& c : checks) {
        out += c.check_id + "," + (c.passed ? "true" : "false") + "," + format_double(c.tolerance) + "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot write " + path);
    f << text;
    if (!f) throw Error(ErrorKind::io, "write failed: " + path);
}

bool takes_value(const std::string& flag) { return flag == "--threads" || flag == "--out" || flag == "-o"; }

Result replay(const std::vector<std::string>& args) {
    std::ifstream f(args[1], std::ios::binary);
    if (!f) return {exit_usage, "", "cannot open " + args[1] + "\n"};
    Json doc;
    try {
        doc = Json::parse(f);
    } catch (const std::exception& e) {
        return {exit_usage, "", std::string("not a report: ") + e.what() + "\n"};
    }
    if (!doc.contains("config") || !doc["config"].contains("argv")) {
        return {exit_usage, "", "report has no config echo\n"};
    }
    auto argv = doc["config"]["argv"].get<std::vector<std::string>>();
    argv.insert(argv.end(), args.begin() + 2, args.end());
    return run(argv);
}

}  // namespace

std::vector<std::string> echo_args(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--timing") continue;
        if (takes_value(a)) {
            ++i;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0 || a.rfind("--out=", 0) == 0) continue;
        out.push_back(a);
    }
    return out;
}

Result run(const std::vector<std::string>& args) {
    if (args.size() >= 2 && args[0] == "--replay") return replay(args);

    CLI::App app{"Finite-scale box, Assouad-spectrum and generalized upper box dimension estimates", "fracdim"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--format", g.format, "json, csv or jsonl (verify only)")
        ->check(CLI::IsMember({"json", "csv", "jsonl"}));
    app.add_option("-o,--out", g.out, "output file (gen: the generated point file)");
    app.add_option("--seed", g.seed, "seed for randomized suites");
    app.add_option("--threads", g.threads, "worker threads (0: FRACDIM_THREADS, else 1)");
    app.add_option("--tolerance", g.tolerance, "tolerance for tolerance-based checks");
    app.add_flag("--timing", g.timing, "add wall-clock timing to the report");

    InputOptions gen_in;
    auto* gen = app.add_subcommand("gen", "generate a point set");
    gen->add_option("family", gen_in.family, "example-e, ek, egb-union, cantor, poly, grid")->required();
    add_generator_options(gen, gen_in);

    InputOptions box_in;
    BoxOptions box;
    auto* boxdim = app.add_subcommand("boxdim", "cover curve and box dimension estimate");
    add_input_options(boxdim, box_in);
    boxdim->add_option("--delta-max", box.delta_max, "coarsest mesh");
    boxdim->add_option("--delta-min", box.delta_min, "finest mesh");
    boxdim->add_option("--ratio", box.ratio, "ratio of successive meshes");
    boxdim->add_option("--method", box.method, "max_chord or least_squares");
    boxdim->add_option("--tail", box.cfg.tail_fraction, "finest share of the schedule used");
    boxdim->add_option("--gap-quantile", box.cfg.gap_quantile, "default schedule floor quantile");
    boxdim->add_option("--gap-factor", box.cfg.gap_factor, "default schedule floor factor");

    InputOptions spec_in;
    SpectrumOptions spec_opts;
    auto* spectrum = app.add_subcommand("spectrum", "Assouad spectrum on a theta grid");
    add_input_options(spectrum, spec_in);
    add_spectrum_options(spectrum, spec_opts);

    InputOptions gb_in;
    SpectrumOptions gb_opts;
    auto* gbdim = app.add_subcommand("gbdim", "generalized upper box dimension bracket");
    add_input_options(gbdim, gb_in);
    add_spectrum_options(gbdim, gb_opts);

    InputOptions star_in;
    SpectrumOptions star_opts;
    std::string radii_text = "5,10,20";
    auto* gbstar = app.add_subcommand("gbstar", "box estimates of growing ball restrictions");
    star_in.family = "";
    gbstar->add_option("--family", star_in.family, "generator family")->required();
    add_generator_options(gbstar, star_in);
    gbstar->add_option("--radii", radii_text, "increasing radii, comma separated");
    gbstar->add_flag("--normalize", star_opts.cfg.normalize, "rejected: conflicts with absolute radii");

    std::string suite_name;
    InputOptions ver_in;
    SpectrumOptions ver_opts;
    std::string n_range;
    std::optional<int> n_max_opt;
    std::string k_list = "2,3,5";
    int trials = 100;
    double epsilon = 0.1;
    int identity_n_max = 10000;
    bool records = false;
    bool quick = false;
    auto* verify = app.add_subcommand("verify", "run witness, count-law and consistency checks");
    verify->add_option("suite", suite_name, "gubr, egb, count-laws, chain, zero or calibration")
        ->required()
        ->check(CLI::IsMember({"gubr", "egb", "count-laws", "chain", "zero", "calibration"}));
    add_input_options(verify, ver_in);
    add_spectrum_options(verify, ver_opts);
    verify->add_option("--n", n_range, "witness range a..b");
    verify->add_option("--witness-n-max", n_max_opt, "truncation of the witness set (default: top of --n)");
    verify->add_option("--ks", k_list, "ek exponents, comma separated");
    verify->add_option("--trials", trials, "random pairs for count-laws");
    verify->add_option("--epsilon", epsilon, "zero-equivalence threshold");
    verify->add_option("--identity-n-max", identity_n_max, "n range of the egb identity sweep");
    verify->add_flag("--records", records, "include every witness record");
    verify->add_flag("--quick", quick, "small truncations of the calibration suite");

    bool report_quick = false;
    auto* report = app.add_subcommand("report", "full calibration suite with every check");
    report->add_flag("--quick", report_quick, "small truncations for smoke tests");

    std::ostringstream help_out, help_err;
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, help_out, help_err);
        return {code == 0 ? exit_ok : exit_usage, help_out.str(), help_err.str()};
    }
    if (gen->parsed() && g.out.empty()) return {exit_usage, "", "gen needs -o/--out\n"};

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    std::string command;
    try {
        Json config{{"argv", echo_args(args)}};
        if (gen->parsed()) {
            command = "gen";
            const PointSet p = load_input(gen_in);
            if (g.format.empty()) {
                save_point_set(g.out, p);
            } else if (g.format == "jsonl") {
                throw Error(ErrorKind::parameter_domain, "gen writes csv or json");
            } else {
                save_point_set(g.out, p, g.format == "csv" ? FileFormat::csv : FileFormat::json);
            }
            config["input"] = input_echo(gen_in);
            o.doc["result"] = Json{{"path", g.out}, {"points", p.size()}, {"dim", p.dim()}, {"label", p.label()}};
            o.csv = "path,points,dim\n" + g.out + "," + std::to_string(p.size()) + "," +
                    std::to_string(p.dim()) + "\n";
            g.out.clear();
        } else if (boxdim->parsed()) {
            command = "boxdim";
            const PointSet p = load_input(box_in);
            box.cfg.method = method_from_string(box.method);
            CoverCurve curve;
            if (box.delta_max || box.delta_min) {
                if (!box.delta_max || !box.delta_min) {
                    throw Error(ErrorKind::parameter_domain, "give both --delta-max and --delta-min");
                }
                curve = cover_curve(p, *box.delta_max, *box.delta_min, box.ratio);
            } else {
                curve = default_cover_curve(p, box.cfg.gap_quantile, box.cfg.gap_factor);
            }
            const DimEstimate e = box_dim_estimate(curve, p.dim(), box.cfg);
            if (p.empty()) o.warnings.push_back("empty input: the empty set is taken to have dimension 0");
            config["input"] = input_echo(box_in);
            config["box"] = Json{{"method", to_string(box.cfg.method)},
                                 {"tail_fraction", box.cfg.tail_fraction},
                                 {"schedule", box.delta_max ? "explicit" : "default"},
                                 {"gap_quantile", box.cfg.gap_quantile},
                                 {"gap_factor", box.cfg.gap_factor}};
            o.doc["result"] = Json{{"points", p.size()}, {"cover_curve", cover_curve_json(curve)},
                                   {"estimate", to_json(e)}};
            o.csv = cover_curve_csv(curve);
        } else if (spectrum->parsed()) {
            command = "spectrum";
            const PointSet p = load_input(spec_in);
            const SpectrumConfig cfg = spectrum_config(spec_opts, g);
            const SpectrumCurve curve = compute_spectrum(p, cfg);
            config["input"] = input_echo(spec_in);
            config["spectrum"] = to_json(cfg);
            o.doc["result"] = Json{{"spectrum", to_json(curve)}};
            o.csv = spectrum_csv(curve);
        } else if (gbdim->parsed()) {
            command = "gbdim";
            const PointSet p = load_input(gb_in);
            const SpectrumConfig cfg = spectrum_config(gb_opts, g);
            const SpectrumCurve curve = compute_spectrum(p, cfg);
            config["input"] = input_echo(gb_in);
            config["spectrum"] = to_json(cfg);
            if (curve.empty()) {
                o.warnings.push_back("no feasible theta: bracket unavailable");
                o.doc["result"] = Json{{"bracket", nullptr}, {"spectrum", to_json(curve)}};
                o.csv = "lower,upper,point,midpoint,consistent,theta_min\n";
            } else {
                const GBBracket b = generalized_upper_box(curve, g.tolerance);
                o.doc["result"] = Json{{"bracket", to_json(b)},
                                       {"quasi_assouad", optional_estimate([&] {
                                            return quasi_assouad_estimate(curve);
                                        })},
                                       {"spectrum", to_json(curve)}};
                o.csv = "lower,upper,point,midpoint,consistent,theta_min\n" + format_double(b.lower) + "," +
                        format_double(b.upper) + "," + format_double(b.point) + "," +
                        format_double(b.midpoint) + "," + (b.consistent ? "true" : "false") + "," +
                        format_double(b.theta_min) + "\n";
            }
        } else if (gbstar->parsed()) {
            command = "gbstar";
            GeneratorSpec spec = star_in.spec;
            spec.family = family_from_string(star_in.family);
            SpectrumConfig cfg = star_opts.cfg;
            cfg.threads = g.threads;
            const auto radii = parse_doubles(radii_text);
            const auto entries = gb_star_estimate(spec, radii, cfg);
            config["input"] = Json{{"generator", spec.describe()}};
            config["radii"] = radii;
            Json rows = Json::array();
            o.csv = "radius,points,estimate\n";
            for (const auto& e : entries) {
                rows.push_back(Json{{"radius", e.radius}, {"points", e.points}, {"estimate", to_json(e.estimate)}});
                o.csv += format_double(e.radius) + "," + std::to_string(e.points) + "," +
                         format_double(e.estimate.value) + "\n";
            }
            o.doc["result"] = Json{{"entries", std::move(rows)}};
        } else if (verify->parsed()) {
            command = "verify";
            o.has_checks = true;
            config["suite"] = suite_name;
            if (suite_name == "gubr") {
                const auto [lo, hi] = parse_range(n_range.empty() ? "2..2000" : n_range);
                const int n_max = n_max_opt.value_or(hi);
                o.checks.push_back(gubr_check(lo, hi, n_max, records));
            } else if (suite_name == "egb") {
                const auto [lo, hi] = parse_range(n_range.empty() ? "2..1000" : n_range);
                const int n_max = n_max_opt.value_or(hi);
                const auto ks = parse_ints(k_list);
                for (int k : ks) o.checks.push_back(egb_check(k, lo, hi, n_max, records));
                o.checks.push_back(check_egb_identity(ks, identity_n_max));
            } else if (suite_name == "count-laws") {
                config["seed"] = g.seed;
                o.checks.push_back(check_count_laws_random(g.seed, trials));
            } else {
                const SpectrumConfig cfg = spectrum_config(ver_opts, g);
                config["spectrum"] = to_json(cfg);
                std::vector<CalibrationSet> sets;
                if (!ver_in.path.empty() || !ver_in.family.empty()) {
                    config["input"] = input_echo(ver_in);
                    sets.push_back({"input", load_input(ver_in)});
                } else {
                    config["input"] = quick ? "calibration-quick" : "calibration";
                    sets = suite(quick);
                }
                for (const auto& s : sets) {
                    const EstimateBundle b = estimate_all(s.points, cfg);
                    if (suite_name == "chain" || suite_name == "calibration") {
                        CheckReport c = check_chain(b, g.tolerance);
                        c.check_id = "chain:" + s.name;
                        o.checks.push_back(std::move(c));
                    }
                    if (suite_name == "zero" || suite_name == "calibration") {
                        CheckReport z = check_zero_equivalences(b, epsilon);
                        z.check_id = "zero:" + s.name;
                        o.checks.push_back(std::move(z));
                    }
                }
            }
        } else if (report->parsed()) {
            command = "report";
            o.has_checks = true;
            SpectrumConfig cfg;
            cfg.threads = g.threads;
            cfg.chain_tolerance = g.tolerance;
            config["suite"] = report_quick ? "calibration-quick" : "calibration";
            config["spectrum"] = to_json(cfg);
            config["seed"] = g.seed;
            Json sets = Json::array();
            for (const auto& s : suite(report_quick)) {
                const EstimateBundle b = estimate_all(s.points, cfg);
                sets.push_back(bundle_json(s.name, s.points, b));
                CheckReport c = check_chain(b, g.tolerance);
                c.check_id = "chain:" + s.name;
                o.checks.push_back(std::move(c));
                CheckReport z = check_zero_equivalences(b, 0.1);
                z.check_id = "zero:" + s.name;
                o.checks.push_back(std::move(z));
                if (s.name == "example-e" && !b.spectrum.empty()) {
                    o.checks.push_back(gb_lower_check(b.bracket, 0.9, "example-e"));
                }
            }
            const int gubr_max = report_quick ? 200 : 2000;
            o.checks.push_back(gubr_check(2, gubr_max, gubr_max, false));
            const int egb_max = report_quick ? 60 : 1000;
            for (int k : {2, 3, 5}) o.checks.push_back(egb_check(k, 2, egb_max, egb_max, false));
            const int ks[] = {2, 3, 5, 10};
            o.checks.push_back(check_egb_identity(ks, report_quick ? 1000 : 10000));
            o.checks.push_back(check_count_laws_random(g.seed, report_quick ? 10 : 100));
            GeneratorSpec e_spec;
            e_spec.family = Family::example_gubr;
            e_spec.n_max = report_quick ? 200 : 2000;
            const double radii[] = {5.0, 10.0, 20.0};
            o.checks.push_back(gbstar_check(gb_star_estimate(e_spec, radii, cfg), g.tolerance,
                                            e_spec.describe()));
            o.doc["result"] = Json{{"sets", std::move(sets)}};
        }
        Json doc{{"tool", "fracdim"}, {"version", kVersion}, {"command", command}, {"config", config}};
        for (auto& [key, value] : o.doc.items()) doc[key] = value;
        o.doc = std::move(doc);
    } catch (const Error& e) {
        return {exit_runtime, "", std::string("error [") + to_string(e.kind()) + "]: " + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {exit_runtime, "", std::string("error: ") + e.what() + "\n"};
    }

    bool passed = true;
    if (o.has_checks) {
        std::stable_sort(o.checks.begin(), o.checks.end(),
                         [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
        Json checks = Json::array();
        for (const auto& c : o.checks) {
            checks.push_back(to_json(c));
            passed = passed && c.passed;
        }
        o.doc["checks"] = std::move(checks);
        o.doc["passed"] = passed;
        o.csv = checks_csv(o.checks);
    }
    if (!o.warnings.empty()) o.doc["warnings"] = o.warnings;
    if (g.timing) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.doc["timing"] = Json{{"wall_seconds", secs}};
    }

    Result res;
    for (const auto& w : o.warnings) res.err += "warning: " + w + "\n";
    std::string text;
    if (g.format == "csv") {
        text = o.csv;
    } else if (g.format == "jsonl") {
        if (!o.has_checks) {
            return {exit_usage, "", "--format jsonl applies to verify and report\n"};
        }
        text = to_json_lines(o.checks);
    } else {
        text = dump_json(o.doc, 2) + "\n";
    }
    if (g.out.empty()) {
        res.out = std::move(text);
    } else {
        try {
            write_text(g.out, text);
        } catch (const Error& e) {
            return {exit_runtime, "", std::string("error [io]: ") + e.what() + "\n"};
        }
    }
    res.exit_code = passed ? exit_ok : exit_checks_failed;
    return res;
}

}  // namespace fracdim::cli
