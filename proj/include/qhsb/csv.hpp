// csv.hpp — deterministic CSV emission.  Byte layout of record: 17 significant
// digits via %.17g, LF endings (binary stream), '#' comment header carrying the
// resolved scenario, empty cells for NaN — a missing value is missing, never 0.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhsb {

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
    std::ofstream out_;

public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }

    void comment(const std::string& line) { out_ << "# " << line << "\n"; }

    void comments(const std::vector<std::string>& lines) {
        for (const auto& l : lines) comment(l);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ",";
            out_ << cols[i];
        }
        out_ << "\n";
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ << ",";
            out_ << csv_number(vals[i]);
        }
        out_ << "\n";
    }
};

} // namespace qhsb
