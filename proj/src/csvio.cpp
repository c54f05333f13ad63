#include "gatewave/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gatewave/errors.hpp"

namespace gatewave {

std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw SimError("cannot open for write: " + tmp);
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::pair<double, double>> read_cv_table(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open table file: " + path.string());
    std::string line;
    int lineno = 0;
    std::vector<std::pair<double, double>> rows;
    while (std::getline(is, line)) {
        ++lineno;
        // Strip whitespace and skip blanks/comments.
        std::string s;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        if (s.empty() || s[0] == '#') continue;
        if (lineno == 1 || (rows.empty() && s == "v,cap_f")) {
            if (s == "v,cap_f") continue;
            throw ParseError(path.string() + ":1: expected header \"v,cap_f\"");
        }
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected two comma-separated values");
        try {
            rows.emplace_back(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": malformed number");
        }
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");
    return rows;
}

}  // namespace gatewave
