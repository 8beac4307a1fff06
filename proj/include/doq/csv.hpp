#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "doq/errors.hpp"
#include "doq/grid.hpp"

namespace doq {

/// Shortest decimal representation that round-trips a double (17 significant
/// digits), used for every numeric CSV column so re-runs are byte-identical.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline double parse_double_field(const std::string& s, const std::string& what, long line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
        if (pos != s.size())
            throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw domain_error(what + ": malformed numeric field '" + s + "' at line " +
                           std::to_string(line_no));
    }
}

inline void write_path_csv(std::ostream& os, const SamplePath& path) {
    os << "t,value\n";
    for (int i = 0; i < path.grid.n_points(); ++i)
        os << fmt17(path.grid.time_at(i)) << ',' << fmt17(path.values[i]) << '\n';
}

inline void write_path_csv(const std::string& file, const SamplePath& path) {
    std::ofstream os(file);
    if (!os)
        throw domain_error("cannot open for writing: " + file);
    write_path_csv(os, path);
}

} // namespace doq
