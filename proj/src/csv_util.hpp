#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "swingkit/types.hpp"

namespace swingkit::detail {

/// Round-trip exact double formatting.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

struct CsvTable {
    std::map<std::string, std::string> meta;  // from leading "# key=value ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ValidationError("csv: missing column " + name);
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream iss(line.substr(1));
            std::string token;
            while (iss >> token) {
                const auto eq = token.find('=');
                if (eq != std::string::npos) t.meta[token.substr(0, eq)] = token.substr(eq + 1);
            }
            continue;
        }
        if (!have_header) {
            t.header = split_csv(line);
            have_header = true;
        } else {
            t.rows.push_back(split_csv(line));
        }
    }
    return t;
}

constexpr double kDegPerRad = 57.295779513082320877;

}  // namespace swingkit::detail
