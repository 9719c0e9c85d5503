#ifndef WHICHPATH_CLI_OUTPUT_H
#define WHICHPATH_CLI_OUTPUT_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace whichpath::cli {

/// Shortest-roundtrip-independent fixed format: 17 significant digits.
std::string format_number(double v);

/// Comma-separated table with a header row; '.' decimal separator.
class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string> &cells);
    void add_row(const std::vector<double> &values);
    std::string str() const;

   private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

struct SvgSeries {
    std::string name;
    std::vector<double> y;
};

/// Static line chart of one or more series sharing the x samples.
std::string svg_line_chart(
    const std::string &title, const std::string &x_label, const std::vector<double> &x, const std::vector<SvgSeries> &series);

struct FileEntry {
    std::string path;
    uintmax_t bytes = 0;
};

/// Writes the file (overwriting) and returns its manifest entry, with the
/// path relative to `dir`.
FileEntry write_file(const std::filesystem::path &dir, const std::string &name, const std::string &content);

}  // namespace whichpath::cli

#endif
