#include "whichpath/cli/output.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "whichpath/errors.h"

namespace whichpath::cli {

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";  // folds -0 so sign noise never changes a file
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
}

void CsvTable::add_row(const std::vector<std::string> &cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(header_.size()));
    }
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            row += ',';
        }
        row += cells[i];
    }
    rows_.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<double> &values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        cells.push_back(format_number(v));
    }
    add_row(cells);
}

std::string CsvTable::str() const {
    std::string out;
    for (size_t i = 0; i < header_.size(); ++i) {
        out += (i ? "," : "") + header_[i];
    }
    out += '\n';
    for (const auto &r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

std::string svg_line_chart(
    const std::string &title, const std::string &x_label, const std::vector<double> &x, const std::vector<SvgSeries> &series) {
    constexpr double W = 720, H = 420, L = 60, R = 20, T = 40, B = 50;
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    double x_lo = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
    double x_hi = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
    double y_lo = 0.0, y_hi = 0.0;
    bool first = true;
    for (const auto &s : series) {
        for (double v : s.y) {
            if (!std::isfinite(v)) {
                continue;
            }
            y_lo = first ? v : std::min(y_lo, v);
            y_hi = first ? v : std::max(y_hi, v);
            first = false;
        }
    }
    if (x_hi <= x_lo) {
        x_hi = x_lo + 1.0;
    }
    if (y_hi <= y_lo) {
        y_hi = y_lo + 1.0;
    }
    auto sx = [&](double v) {
        return L + (v - x_lo) / (x_hi - x_lo) * (W - L - R);
    };
    auto sy = [&](double v) {
        return H - B - (v - y_lo) / (y_hi - y_lo) * (H - T - B);
    };

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
        << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << y_hi << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"11\">" << y_lo << "</text>\n";
    out << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << x_lo
        << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << x_hi
        << "</text>\n";
    for (size_t k = 0; k < series.size(); ++k) {
        const char *color = colors[k % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        size_t n = std::min(x.size(), series[k].y.size());
        for (size_t i = 0; i < n; ++i) {
            if (std::isfinite(series[k].y[i])) {
                out << sx(x[i]) << ',' << sy(series[k].y[i]) << ' ';
            }
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
            << color << "\">" << series[k].name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

FileEntry write_file(const std::filesystem::path &dir, const std::string &name, const std::string &content) {
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
        throw Error("could not write " + path.string());
    }
    return {name, static_cast<uintmax_t>(content.size())};
}

}  // namespace whichpath::cli
