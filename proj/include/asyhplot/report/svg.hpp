#pragma once

// Minimal SVG document builder plus a data-to-pixel frame with axes.

#include "asyhplot/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace asyhplot::svg {

inline std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                // XML 1.0 forbids most control characters
                if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r') break;
                out.push_back(c);
        }
    }
    return out;
}

/// Fixed two-decimal coordinates keep files small and byte-stable.
inline std::string num(double v) {
    if (!std::isfinite(v)) throw NumericalError("svg: non-finite coordinate");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

struct Style {
    std::string fill = "none";
    std::string stroke = "none";
    double stroke_width = 1.0;
    double opacity = 1.0;

    std::string attrs() const {
        std::string s = " fill=\"" + escape(fill) + "\" stroke=\"" + escape(stroke) + "\"";
        if (stroke != "none") s += " stroke-width=\"" + num(stroke_width) + "\"";
        if (opacity < 1.0) s += " opacity=\"" + num(opacity) + "\"";
        return s;
    }
};

enum class Anchor { Start, Middle, End };

struct TextStyle {
    double size = 11.0;
    bool bold = false;
    Anchor anchor = Anchor::Start;
    std::string fill = "#222222";
    double rotate = 0.0;
};

class Document {
public:
    Document(double width, double height) : width_(width), height_(height) {}

    double width() const { return width_; }
    double height() const { return height_; }

    void comment(std::string_view text) {
        std::string safe(text);
        // "--" may not appear inside an XML comment
        for (std::size_t pos; (pos = safe.find("--")) != std::string::npos;) safe.replace(pos, 2, "- -");
        body_ << "<!-- " << escape(safe) << " -->\n";
    }

    void rect(double x, double y, double w, double h, const Style& style) {
        body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h) << "\""
              << style.attrs() << "/>\n";
    }

    void circle(double cx, double cy, double r, const Style& style) {
        body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\"" << style.attrs() << "/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const Style& style, std::string_view marker_end = {}) {
        body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2) << "\""
              << style.attrs();
        if (!marker_end.empty()) body_ << " marker-end=\"url(#" << escape(marker_end) << ")\"";
        body_ << "/>\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts, const Style& style) { poly("polygon", pts, style); }
    void polyline(const std::vector<std::pair<double, double>>& pts, const Style& style) { poly("polyline", pts, style); }

    void text(double x, double y, std::string_view content, const TextStyle& style = {}) {
        body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(style.size) << "\" fill=\""
              << escape(style.fill) << "\"";
        if (style.bold) body_ << " font-weight=\"bold\"";
        if (style.anchor == Anchor::Middle) body_ << " text-anchor=\"middle\"";
        if (style.anchor == Anchor::End) body_ << " text-anchor=\"end\"";
        if (style.rotate != 0.0) body_ << " transform=\"rotate(" << num(style.rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
        body_ << '>' << escape(content) << "</text>\n";
    }

    /// Arrowhead marker usable as marker_end in line().
    void arrow_marker(std::string_view id, std::string_view color) {
        defs_ << "<marker id=\"" << escape(id) << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
              << "markerHeight=\"6\" orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"" << escape(color) << "\"/></marker>\n";
    }

    void begin_group(std::string_view id) { body_ << "<g id=\"" << escape(id) << "\">\n"; }
    void end_group() { body_ << "</g>\n"; }

    std::string str() const {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
            << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
        const auto defs = defs_.str();
        if (!defs.empty()) out << "<defs>\n" << defs << "</defs>\n";
        out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n" << body_.str() << "</svg>\n";
        return out.str();
    }

private:
    void poly(const char* tag, const std::vector<std::pair<double, double>>& pts, const Style& style) {
        body_ << '<' << tag << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
        body_ << "\"" << style.attrs() << "/>\n";
    }

    double width_;
    double height_;
    std::ostringstream defs_;
    std::ostringstream body_;
};

/// Round tick positions covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5, double min_step = 0.0) {
    if (!(hi > lo)) return {lo};
    const double raw = std::max((hi - lo) / std::max(1, target), min_step);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    if (min_step >= 1.0) step = std::ceil(step);
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return ticks;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Maps a data box onto a pixel box (y up), optionally with equal unit lengths.
class Frame {
public:
    Frame(double left, double top, double width, double height, double x_lo, double x_hi, double y_lo, double y_hi,
          bool equal_aspect = false)
        : left_(left), top_(top), width_(width), height_(height) {
        if (!(x_hi > x_lo)) {
            x_lo -= 1.0;
            x_hi += 1.0;
        }
        if (!(y_hi > y_lo)) {
            y_lo -= 1.0;
            y_hi += 1.0;
        }
        if (equal_aspect) {
            const double scale = std::max((x_hi - x_lo) / width, (y_hi - y_lo) / height);
            const double cx = 0.5 * (x_lo + x_hi), cy = 0.5 * (y_lo + y_hi);
            x_lo = cx - 0.5 * scale * width;
            x_hi = cx + 0.5 * scale * width;
            y_lo = cy - 0.5 * scale * height;
            y_hi = cy + 0.5 * scale * height;
        }
        x_lo_ = x_lo;
        x_hi_ = x_hi;
        y_lo_ = y_lo;
        y_hi_ = y_hi;
    }

    /// Frame around points with a relative margin.
    static Frame around(double left, double top, double width, double height, const std::vector<double>& xs, const std::vector<double>& ys,
                        bool equal_aspect = false, double margin = 0.08) {
        auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
        auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
        const double x_lo = xs.empty() ? 0.0 : *xmin, x_hi = xs.empty() ? 1.0 : *xmax;
        const double y_lo = ys.empty() ? 0.0 : *ymin, y_hi = ys.empty() ? 1.0 : *ymax;
        const double dx = std::max(x_hi - x_lo, 1e-12) * margin, dy = std::max(y_hi - y_lo, 1e-12) * margin;
        return Frame(left, top, width, height, x_lo - dx, x_hi + dx, y_lo - dy, y_hi + dy, equal_aspect);
    }

    double px(double x) const { return left_ + (x - x_lo_) / (x_hi_ - x_lo_) * width_; }
    double py(double y) const { return top_ + height_ - (y - y_lo_) / (y_hi_ - y_lo_) * height_; }

    void draw_axes(Document& doc, std::string_view x_title, std::string_view y_title, bool integer_x = false) const {
        const Style axis{"none", "#444444", 1.0};
        const Style grid{"none", "#e4e4e4", 0.8};
        doc.rect(left_, top_, width_, height_, axis);
        TextStyle ticks;
        ticks.size = 9;
        ticks.fill = "#555555";
        ticks.anchor = Anchor::Middle;
        for (double t : nice_ticks(x_lo_, x_hi_, 5, integer_x ? 1.0 : 0.0)) {
            doc.line(px(t), top_, px(t), top_ + height_, grid);
            doc.text(px(t), top_ + height_ + 13, tick_label(t), ticks);
        }
        ticks.anchor = Anchor::End;
        for (double t : nice_ticks(y_lo_, y_hi_)) {
            doc.line(left_, py(t), left_ + width_, py(t), grid);
            doc.text(left_ - 4, py(t) + 3, tick_label(t), ticks);
        }
        TextStyle title;
        title.anchor = Anchor::Middle;
        if (!x_title.empty()) doc.text(left_ + width_ / 2, top_ + height_ + 30, x_title, title);
        if (!y_title.empty()) {
            title.rotate = -90;
            doc.text(left_ - 34, top_ + height_ / 2, y_title, title);
        }
    }

private:
    double left_, top_, width_, height_;
    double x_lo_ = 0, x_hi_ = 1, y_lo_ = 0, y_hi_ = 1;
};

}  // namespace asyhplot::svg
