#ifndef MATDYN_CLI_CSV_HPP
#define MATDYN_CLI_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace matdyn::cli {

/// Full-precision decimal rendering (17 significant digits) so written
/// tables reproduce the computed doubles exactly.
std::string format_full(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    bool good() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace matdyn::cli

#endif
