#pragma once

#include <string>
#include <utility>
#include <vector>

namespace scrap::cli {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// Comma-separated text with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& values);
    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_; }
    const std::string& text() const { return text_; }

private:
    std::vector<std::string> header_;
    std::string text_;
    std::size_t rows_ = 0;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotAxes {
    std::string title;
    std::string x_label;  // include units, e.g. "t (ns)"
    std::string y_label;
    bool log_x = false;
};

/// Self-contained SVG line chart (no fonts or scripts loaded from outside).
std::string svg_line_plot(const std::vector<Series>& series, const PlotAxes& axes);

/// Heatmap of values[row][col] in [0, 1]: rows along y, columns along x.
/// Large grids are downsampled to at most max_cols cells per row.
std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values, const PlotAxes& axes, bool log_y,
                        std::size_t max_cols = 400);

}  // namespace scrap::cli
