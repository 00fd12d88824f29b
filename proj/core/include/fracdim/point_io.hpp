#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "fracdim/point_set.hpp"

namespace fracdim {

enum class FileFormat { csv, json };

// CSV: one point per row, comma separated, optional header lines starting
// with '#'. JSON: {"dim": d, "label": s, "points": [[...], ...]}.
// Coordinates are written with 17 significant digits, so a write/read cycle
// is bit-exact.
void write_csv(std::ostream& out, const PointSet& p);
void write_json(std::ostream& out, const PointSet& p);
std::string to_csv(const PointSet& p);
std::string to_json(const PointSet& p);

PointSet read_csv(std::istream& in, std::string label = {}, std::string provenance = {});
PointSet read_json(std::istream& in, std::string provenance = {});
PointSet parse_csv(std::string_view text, std::string label = {}, std::string provenance = {});
PointSet parse_json(std::string_view text, std::string provenance = {});

FileFormat format_from_path(const std::filesystem::path& path);

PointSet load_point_set(const std::filesystem::path& path);
void save_point_set(const std::filesystem::path& path, const PointSet& p);
void save_point_set(const std::filesystem::path& path, const PointSet& p, FileFormat format);

}  // namespace fracdim
