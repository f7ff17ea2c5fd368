#include "csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace matdyn::cli {

std::string format_full(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path), columns_(header.size())
{
    if (!out_) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw std::logic_error("csv row width mismatch");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            out_ << ',';
        }
        out_ << cells[i];
    }
    out_ << '\n';
}

} // namespace matdyn::cli
