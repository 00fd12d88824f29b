#include "fracdim/json_format.hpp"

#include <cmath>
#include <cstdio>

namespace fracdim {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    // "-0" would parse back as the integer 0 and lose the sign bit.
    if (v == 0.0 && std::signbit(v)) return "-0.0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void newline(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void emit(const Json& j, std::string& out, int indent, int depth) {
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(out, indent, depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                emit(it.value(), out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                newline(out, indent, depth + 1);
                emit(v, out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    emit(j, out, indent, 0);
    return out;
}

}  // namespace fracdim
