#include "output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace scrap::cli {

std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (r.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), r.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) { add_row(header_); }

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    if (&cells != &header_) ++rows_;
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    add_row(cells);
}

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 80;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const std::array<const char*, 6> kPalette = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b"};

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Scale {
    double lo = 0, hi = 1, p0 = 0, p1 = 1;
    bool log = false;
    double operator()(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return p0 + (x - a) / (b - a) * (p1 - p0);
    }
};

std::pair<double, double> padded_range(double lo, double hi, bool log) {
    if (!(lo < hi)) {
        if (log) return {lo / 10, lo * 10};
        const double d = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - d, hi + d};
    }
    return {lo, hi};
}

std::vector<double> ticks(double lo, double hi, bool log) {
    std::vector<double> t;
    if (log) {
        for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= static_cast<int>(std::ceil(std::log10(hi)));
             ++e) {
            const double v = std::pow(10.0, e);
            if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
        }
        return t;
    }
    const double span = hi - lo;
    const double raw = span / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

std::string frame(const PlotAxes& axes, const Scale& sx, const Scale& sy, bool log_y) {
    std::string s;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" + num(y0 - y1) +
         "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (double v : ticks(sx.lo, sx.hi, sx.log)) {
        const double px = sx(v);
        s += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" + num(y0 + 5) +
             "\" stroke=\"#000\"/>\n";
        s += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + tick_label(v) +
             "</text>\n";
    }
    for (double v : ticks(sy.lo, sy.hi, log_y)) {
        const double py = sy(v);
        s += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(py) +
             "\" stroke=\"#000\"/>\n";
        s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick_label(v) +
             "</text>\n";
    }
    s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 15) + "\" text-anchor=\"middle\">" +
         esc(axes.x_label) + "</text>\n";
    s += "<text transform=\"translate(20," + num((y0 + y1) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         esc(axes.y_label) + "</text>\n";
    s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-weight=\"bold\">" +
         esc(axes.title) + "</text>\n";
    return s;
}

std::string open_svg() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

/// Viridis-like ramp through five anchor colours.
std::string colour(double v) {
    static const std::array<std::array<double, 3>, 5> anchors = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                                  {94, 201, 98}, {253, 231, 37}}};
    v = std::clamp(v, 0.0, 1.0) * 4.0;
    const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(v));
    const double f = v - static_cast<double>(i);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0]))),
                  static_cast<int>(std::lround(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1]))),
                  static_cast<int>(std::lround(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2]))));
    return buf;
}

}  // namespace

std::string svg_line_plot(const std::vector<Series>& series, const PlotAxes& axes) {
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (axes.log_x && !(s.x[i] > 0)) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (!std::isfinite(xlo)) xlo = axes.log_x ? 1 : 0, xhi = xlo;
    if (!std::isfinite(ylo)) ylo = 0, yhi = 1;
    std::tie(xlo, xhi) = padded_range(xlo, xhi, axes.log_x);
    std::tie(ylo, yhi) = padded_range(ylo, yhi, false);
    const Scale sx{xlo, xhi, kLeft, kWidth - kRight, axes.log_x};
    const Scale sy{ylo, yhi, kHeight - kBottom, kTop, false};

    std::string s = open_svg();
    s += frame(axes, sx, sy, false);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& ser = series[k];
        const char* c = kPalette[k % kPalette.size()];
        std::string pts;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (axes.log_x && !(ser.x[i] > 0)) continue;
            pts += num(sx(ser.x[i])) + "," + num(sy(ser.y[i])) + " ";
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
        s += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(kWidth - kRight + 30) +
             "\" y2=\"" + num(ly) + "\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(kWidth - kRight + 35) + "\" y=\"" + num(ly + 4) + "\">" + esc(ser.label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values, const PlotAxes& axes, bool log_y,
                        std::size_t max_cols) {
    if (x.empty() || y.empty() || values.size() != y.size()) throw std::invalid_argument("svg_heatmap: bad grid");
    const std::size_t stride = std::max<std::size_t>(1, (x.size() + max_cols - 1) / max_cols);
    const auto [xlo, xhi] = padded_range(x.front(), x.back(), false);
    const auto [ylo, yhi] = padded_range(y.front(), y.back(), log_y);
    const Scale sx{xlo, xhi, kLeft, kWidth - kRight, false};
    const Scale sy{ylo, yhi, kHeight - kBottom, kTop, log_y};

    // Cell edges halfway between neighbouring samples.
    auto edges = [](const std::vector<double>& v, const Scale& s) {
        std::vector<double> e(v.size() + 1);
        if (v.size() == 1) {
            e[0] = s.p0;
            e[1] = s.p1;
            return e;
        }
        e.front() = s(v.front());
        e.back() = s(v.back());
        for (std::size_t i = 1; i < v.size(); ++i) e[i] = 0.5 * (s(v[i - 1]) + s(v[i]));
        return e;
    };
    std::vector<double> xs;
    for (std::size_t i = 0; i < x.size(); i += stride) xs.push_back(x[i]);
    const auto ex = edges(xs, sx);
    const auto ey = edges(y, sy);

    std::string s = open_svg();
    s += "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double top = std::min(ey[r], ey[r + 1]);
        const double h = std::abs(ey[r + 1] - ey[r]);
        for (std::size_t c = 0, i = 0; i < x.size(); i += stride, ++c) {
            s += "<rect x=\"" + num(ex[c]) + "\" y=\"" + num(top) + "\" width=\"" + num(ex[c + 1] - ex[c] + 0.05) +
                 "\" height=\"" + num(h + 0.05) + "\" fill=\"" + colour(values[r][i]) + "\"/>\n";
        }
    }
    s += "</g>\n";
    s += frame(axes, sx, sy, log_y);
    // Colour bar.
    const double bx = kWidth - kRight + 20;
    for (int k = 0; k < 50; ++k) {
        const double v = k / 49.0;
        const double py = kHeight - kBottom - (kHeight - kBottom - kTop) * (k + 1) / 50.0;
        s += "<rect x=\"" + num(bx) + "\" y=\"" + num(py) + "\" width=\"16\" height=\"" +
             num((kHeight - kBottom - kTop) / 50.0 + 0.5) + "\" fill=\"" + colour(v) + "\"/>\n";
    }
    s += "<text x=\"" + num(bx + 22) + "\" y=\"" + num(kTop + 8) + "\">1</text>\n";
    s += "<text x=\"" + num(bx + 22) + "\" y=\"" + num(kHeight - kBottom) + "\">0</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace scrap::cli
