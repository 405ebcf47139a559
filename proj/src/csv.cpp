#include "mlyap/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlyap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvTable& CsvTable::begin_row() {
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::cell(double v) {
    rows_.back().push_back(format_double(v));
    return *this;
}

CsvTable& CsvTable::cell(long v) {
    rows_.back().push_back(std::to_string(v));
    return *this;
}

CsvTable& CsvTable::cell(const std::string& v) {
    rows_.back().push_back(v);
    return *this;
}

std::string CsvTable::str() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << str();
}

}  // namespace mlyap
