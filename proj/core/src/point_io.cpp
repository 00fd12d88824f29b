#include "fracdim/point_io.hpp"

#include "fracdim/error.hpp"
#include "fracdim/json_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fracdim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line_no) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw Error(ErrorKind::format, "csv line " + std::to_string(line_no) +
                                           ": not a number: '" + std::string(field) + "'");
    }
    return v;
}

// Header lines may carry "dim=<d>" so that empty sets keep their dimension.
std::size_t header_dim(std::string_view line) {
    const auto pos = line.find("dim=");
    if (pos == std::string_view::npos) return 0;
    std::size_t d = 0;
    const auto rest = line.substr(pos + 4);
    std::from_chars(rest.data(), rest.data() + rest.size(), d);
    return d;
}

}  // namespace

void write_csv(std::ostream& out, const PointSet& p) {
    out << "# fracdim point set dim=" << p.dim();
    if (!p.label().empty()) out << " label=" << p.label();
    out << '\n';
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto x = p.point(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j) out << ',';
            out << format_double(x[j]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const PointSet& p) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto x = p.point(i);
        pts.push_back(Json(std::vector<double>(x.begin(), x.end())));
    }
    Json doc = {{"dim", p.dim()}, {"label", p.label()}, {"points", std::move(pts)}};
    out << dump_json(doc) << '\n';
}

std::string to_csv(const PointSet& p) {
    std::ostringstream s;
    write_csv(s, p);
    return s.str();
}

std::string to_json(const PointSet& p) {
    std::ostringstream s;
    write_json(s, p);
    return s.str();
}

PointSet parse_csv(std::string_view text, std::string label, std::string provenance) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::size_t declared = 0;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '#') {
            if (declared == 0) declared = header_dim(line);
            continue;
        }
        std::size_t fields = 0;
        std::size_t fstart = 0;
        while (true) {
            auto comma = line.find(',', fstart);
            const auto field =
                line.substr(fstart, comma == std::string_view::npos ? line.size() - fstart
                                                                   : comma - fstart);
            coords.push_back(parse_number(field, line_no));
            ++fields;
            if (comma == std::string_view::npos) break;
            fstart = comma + 1;
        }
        if (dim == 0) {
            dim = fields;
        } else if (fields != dim) {
            throw Error(ErrorKind::format, "csv line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(dim) + " columns");
        }
        if (end == text.size()) break;
    }
    if (dim == 0) dim = declared == 0 ? 1 : declared;
    if (declared != 0 && declared != dim) {
        throw Error(ErrorKind::format, "csv: header dim does not match column count");
    }
    return PointSet(dim, std::move(coords), std::move(label), std::move(provenance));
}

PointSet parse_json(std::string_view text, std::string provenance) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, std::string("json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("points")) {
        throw Error(ErrorKind::format, "json: expected object with 'dim' and 'points'");
    }
    const auto dim = doc.at("dim").get<std::size_t>();
    std::vector<double> coords;
    for (const auto& row : doc.at("points")) {
        if (!row.is_array() || row.size() != dim) {
            throw Error(ErrorKind::format, "json: point with wrong number of coordinates");
        }
        for (const auto& c : row) {
            if (!c.is_number()) throw Error(ErrorKind::format, "json: non-numeric coordinate");
            coords.push_back(c.get<double>());
        }
    }
    std::string label = doc.value("label", std::string{});
    return PointSet(dim, std::move(coords), std::move(label), std::move(provenance));
}

PointSet read_csv(std::istream& in, std::string label, std::string provenance) {
    std::ostringstream s;
    s << in.rdbuf();
    return parse_csv(s.str(), std::move(label), std::move(provenance));
}

PointSet read_json(std::istream& in, std::string provenance) {
    std::ostringstream s;
    s << in.rdbuf();
    return parse_json(s.str(), std::move(provenance));
}

FileFormat format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") return FileFormat::csv;
    if (ext == ".json") return FileFormat::json;
    throw Error(ErrorKind::format, "unrecognized point-set extension: '" + ext + "'");
}

PointSet load_point_set(const std::filesystem::path& path) {
    const auto format = format_from_path(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    const std::string text = s.str();
    if (format == FileFormat::csv) {
        return parse_csv(text, path.stem().string(), "file:" + path.string());
    }
    return parse_json(text, "file:" + path.string());
}

void save_point_set(const std::filesystem::path& path, const PointSet& p) {
    save_point_set(path, p, format_from_path(path));
}

void save_point_set(const std::filesystem::path& path, const PointSet& p, FileFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    if (format == FileFormat::csv) {
        write_csv(out, p);
    } else {
        write_json(out, p);
    }
    if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace fracdim
