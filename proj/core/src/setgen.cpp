#include "fracdim/setgen.hpp"

#include "fracdim/error.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace fracdim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::parameter_domain, what);
}

struct RowHash {
    const std::vector<double>* coords;
    std::size_t dim;
    std::size_t operator()(std::size_t i) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::size_t j = 0; j < dim; ++j) {
            h ^= std::bit_cast<std::uint64_t>((*coords)[i * dim + j]) + 0x9e3779b97f4a7c15ull +
                 (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct RowEq {
    const std::vector<double>* coords;
    std::size_t dim;
    bool operator()(std::size_t a, std::size_t b) const noexcept {
        for (std::size_t j = 0; j < dim; ++j) {
            if (std::bit_cast<std::uint64_t>((*coords)[a * dim + j]) !=
                std::bit_cast<std::uint64_t>((*coords)[b * dim + j])) {
                return false;
            }
        }
        return true;
    }
};

std::vector<double> dedupe_rows(const std::vector<double>& coords, std::size_t dim) {
    const std::size_t n = coords.size() / dim;
    std::unordered_set<std::size_t, RowHash, RowEq> seen(n, RowHash{&coords, dim},
                                                         RowEq{&coords, dim});
    std::vector<double> out;
    out.reserve(coords.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (seen.insert(i).second) {
            out.insert(out.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                       coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
        }
    }
    return out;
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::example_gubr: return "example-e";
        case Family::ek_family: return "ek";
        case Family::egb_union: return "egb-union";
        case Family::cantor_midpoints: return "cantor";
        case Family::poly_sequence: return "poly";
        case Family::uniform_grid: return "grid";
    }
    return "unknown";
}

Family family_from_string(const std::string& name) {
    for (Family f : {Family::example_gubr, Family::ek_family, Family::egb_union,
                     Family::cantor_midpoints, Family::poly_sequence, Family::uniform_grid}) {
        if (name == to_string(f)) return f;
    }
    throw Error(ErrorKind::parameter_domain, "unknown generator family '" + name + "'");
}

std::string GeneratorSpec::describe() const {
    std::ostringstream s;
    s << to_string(family);
    switch (family) {
        case Family::example_gubr: s << "(n_max=" << n_max << ")"; break;
        case Family::ek_family: s << "(k=" << k << ",n_max=" << n_max << ")"; break;
        case Family::egb_union: s << "(i_max=" << i_max << ",n_max=" << n_max << ")"; break;
        case Family::cantor_midpoints: s << "(level=" << level << ")"; break;
        case Family::poly_sequence: s << "(p=" << p << ",N=" << count << ")"; break;
        case Family::uniform_grid: s << "(N=" << count << ",dim=" << dim << ")"; break;
    }
    return s.str();
}

PointSet generate(const GeneratorSpec& spec) {
    PointSet out = [&] {
        switch (spec.family) {
            case Family::example_gubr: return gen_example_E(spec.n_max);
            case Family::ek_family: return gen_Ek(spec.k, spec.n_max);
            case Family::egb_union: return gen_egb_union(spec.i_max, spec.n_max);
            case Family::cantor_midpoints: return gen_cantor_midpoints(spec.level);
            case Family::poly_sequence: return gen_poly_sequence(spec.p, spec.count);
            case Family::uniform_grid: return gen_uniform_grid(spec.count, spec.dim);
        }
        throw Error(ErrorKind::parameter_domain, "unknown generator family");
    }();
    return out.with_label(spec.describe(), "generator:" + spec.describe());
}

double example_delta(int n) {
    const double nd = n;
    return std::exp(-(1.0 + 1.0 / (nd - 1.0)) * std::log(nd));
}

double ek_delta(int k, int n) {
    const double kd = k;
    return std::exp(-(kd / (kd - 1.0)) * std::log(static_cast<double>(n)));
}

PointSet gen_example_E(int n_max) {
    require(n_max >= 2, "example-e: n_max must be >= 2");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n_max - 1) * static_cast<std::size_t>(n_max + 4) / 2);
    for (int n = 2; n <= n_max; ++n) {
        const double delta = example_delta(n);
        for (int i = 0; i <= n; ++i) xs.push_back(n + i * delta);
    }
    const std::string name = "example-e(n_max=" + std::to_string(n_max) + ")";
    return PointSet(1, std::move(xs), name, "generator:" + name);
}

PointSet gen_Ek(int k, int n_max) {
    require(k >= 2, "ek: k must be >= 2");
    require(n_max >= 1, "ek: n_max must be >= 1");
    std::vector<double> xs;
    for (int n = 1; n <= n_max; ++n) {
        const double delta = ek_delta(k, n);
        for (int i = 0; i <= n; ++i) xs.push_back(i * delta);
    }
    const std::string name =
        "ek(k=" + std::to_string(k) + ",n_max=" + std::to_string(n_max) + ")";
    return PointSet(1, dedupe_rows(xs, 1), name, "generator:" + name);
}

PointSet gen_egb_union(int i_max, int n_max) {
    require(i_max >= 2, "egb-union: i_max must be >= 2");
    require(n_max >= 1, "egb-union: n_max must be >= 1");
    std::vector<double> xs;
    for (int i = 2; i <= i_max; ++i) {
        const PointSet block = gen_Ek(i, n_max);
        for (double x : block.coords()) xs.push_back(x + i);
    }
    const std::string name =
        "egb-union(i_max=" + std::to_string(i_max) + ",n_max=" + std::to_string(n_max) + ")";
    return PointSet(1, dedupe_rows(xs, 1), name, "generator:" + name);
}

PointSet gen_cantor_midpoints(int level) {
    require(level >= 1, "cantor: level must be >= 1");
    // 2 * 3^level must stay an exact integer in double precision.
    require(level <= 32, "cantor: level must be <= 32");
    const std::uint64_t count = std::uint64_t{1} << level;
    const double denom = 2.0 * std::pow(3.0, level);
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(level));
    std::uint64_t w = 1;
    for (int j = level - 1; j >= 0; --j) {
        weight[static_cast<std::size_t>(j)] = 2 * w;  // digit 2 at ternary position j
        w *= 3;
    }
    std::vector<double> xs;
    xs.reserve(count);
    for (std::uint64_t b = 0; b < count; ++b) {
        std::uint64_t left = 0;  // left endpoint in units of 3^-level
        for (int j = 0; j < level; ++j) {
            if ((b >> (level - 1 - j)) & 1u) left += weight[static_cast<std::size_t>(j)];
        }
        xs.push_back(static_cast<double>(2 * left + 1) / denom);
    }
    const std::string name = "cantor(level=" + std::to_string(level) + ")";
    return PointSet(1, std::move(xs), name, "generator:" + name);
}

PointSet gen_poly_sequence(double p, std::int64_t n) {
    require(std::isfinite(p) && p > 0.0, "poly: p must be > 0");
    require(n >= 1, "poly: N must be >= 1");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    xs.push_back(0.0);
    for (std::int64_t i = 1; i <= n; ++i) {
        xs.push_back(p == 1.0 ? 1.0 / static_cast<double>(i)
                              : std::pow(static_cast<double>(i), -p));
    }
    std::ostringstream name;
    name << "poly(p=" << p << ",N=" << n << ")";
    return PointSet(1, dedupe_rows(xs, 1), name.str(), "generator:" + name.str());
}

PointSet gen_uniform_grid(std::int64_t n, int dim) {
    require(n >= 1, "grid: N must be >= 1");
    require(dim >= 1 && dim <= 8, "grid: dim must be in [1, 8]");
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(n);
    require(total <= (std::size_t{1} << 26), "grid: too many points");
    std::vector<double> coords;
    coords.reserve(total * static_cast<std::size_t>(dim));
    std::vector<std::int64_t> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t t = 0; t < total; ++t) {
        for (int j = 0; j < dim; ++j) {
            coords.push_back(static_cast<double>(idx[static_cast<std::size_t>(j)]) /
                             static_cast<double>(n));
        }
        for (int j = dim - 1; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < n) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
    }
    const std::string name = "grid(N=" + std::to_string(n) + ",dim=" + std::to_string(dim) + ")";
    return PointSet(static_cast<std::size_t>(dim), std::move(coords), name, "generator:" + name);
}

PointSet affine_image(const PointSet& p, double scale, std::span<const double> offset) {
    if (!std::isfinite(scale) || scale == 0.0) {
        throw Error(ErrorKind::parameter_domain, "affine: scale must be finite and nonzero");
    }
    if (!offset.empty() && offset.size() != p.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "affine: offset dimension mismatch");
    }
    std::vector<double> coords(p.coords().begin(), p.coords().end());
    const std::size_t d = p.dim();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        coords[i] = scale * coords[i] + (offset.empty() ? 0.0 : offset[i % d]);
    }
    std::ostringstream name;
    name << "affine(" << p.label() << ",scale=" << scale << ")";
    return PointSet(d, std::move(coords), name.str(), p.provenance() + "|affine");
}

PointSet set_union(const PointSet& p, const PointSet& q) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "union: ambient dimensions differ");
    }
    std::vector<double> coords(p.coords().begin(), p.coords().end());
    coords.insert(coords.end(), q.coords().begin(), q.coords().end());
    return PointSet(p.dim(), dedupe_rows(coords, p.dim()), p.label() + "|" + q.label(),
                    "union(" + p.provenance() + "," + q.provenance() + ")");
}

PointSet set_product(const PointSet& p, const PointSet& q) {
    const std::size_t d = p.dim() + q.dim();
    std::vector<double> coords;
    coords.reserve(p.size() * q.size() * d);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            auto a = p.point(i);
            auto b = q.point(j);
            coords.insert(coords.end(), a.begin(), a.end());
            coords.insert(coords.end(), b.begin(), b.end());
        }
    }
    return PointSet(d, dedupe_rows(coords, d), p.label() + "x" + q.label(),
                    "product(" + p.provenance() + "," + q.provenance() + ")");
}

PointSet restrict_to_ball(const PointSet& p, std::span<const double> center, double radius) {
    if (center.size() != p.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "restrict: center dimension mismatch");
    }
    std::vector<double> coords;
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto x = p.point(i);
        if (euclidean_distance(x, center) <= radius) coords.insert(coords.end(), x.begin(), x.end());
    }
    std::ostringstream name;
    name << p.label() << "|ball(R=" << radius << ")";
    return PointSet(p.dim(), std::move(coords), name.str(), p.provenance() + "|ball");
}

PointSet dedupe(const PointSet& p) {
    std::vector<double> coords(p.coords().begin(), p.coords().end());
    return PointSet(p.dim(), dedupe_rows(coords, p.dim()), p.label(), p.provenance());
}

}  // namespace fracdim
