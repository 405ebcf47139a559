#pragma once

#include <string>
#include <vector>

namespace mlyap {

/// CSV writer with deterministic formatting: numbers are rendered with %.17g
/// so identical runs produce byte-identical files.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& begin_row();
    CsvTable& cell(double v);
    CsvTable& cell(long v);
    CsvTable& cell(int v) { return cell(static_cast<long>(v)); }
    CsvTable& cell(const std::string& v);

    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

}  // namespace mlyap
