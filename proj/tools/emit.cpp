#include "emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace margulis::emit {

Csv::Csv(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
}

void Csv::row(std::vector<std::string> fields) {
    rows_.push_back(std::move(fields));
}

namespace {

std::string csv_escape(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string Csv::str() const {
    std::ostringstream os;
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(r[i]);
        os << "\r\n";
    }
    return os.str();
}

void Csv::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << str();
}

std::string fmt_ival_lo(const Ival& v, int digits) { return v.lo_str(digits); }
std::string fmt_ival_hi(const Ival& v, int digits) { return v.hi_str(digits); }

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Box {
    double x0, y0, x1, y1;      // svg coords of the plot area
    double vx0, vx1, vy0, vy1;  // value ranges
    double px(double v) const { return x0 + (v - vx0) / (vx1 - vx0) * (x1 - x0); }
    double py(double v) const { return y1 - (v - vy0) / (vy1 - vy0) * (y1 - y0); }
};

void polyline(std::ostringstream& os, const Box& b,
              const std::vector<std::pair<double, double>>& pts, const std::string& color,
              double width) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
       << "\" points=\"";
    for (const auto& [x, y] : pts) os << num(b.px(x)) << "," << num(b.py(y)) << " ";
    os << "\"/>\n";
}

void frame(std::ostringstream& os, const Box& b, const std::string& xlab,
           const std::string& ylab) {
    os << "<rect x=\"" << num(b.x0) << "\" y=\"" << num(b.y0) << "\" width=\""
       << num(b.x1 - b.x0) << "\" height=\"" << num(b.y1 - b.y0)
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << num((b.x0 + b.x1) / 2) << "\" y=\"" << num(b.y1 + 28)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << xlab << "</text>\n";
    os << "<text x=\"" << num(b.x0 - 40) << "\" y=\"" << num((b.y0 + b.y1) / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(b.x0 - 40)
       << " " << num((b.y0 + b.y1) / 2) << ")\">" << ylab << "</text>\n";
    os << "<text x=\"" << num(b.x0) << "\" y=\"" << num(b.y1 + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << num(b.vx0) << "</text>\n";
    os << "<text x=\"" << num(b.x1) << "\" y=\"" << num(b.y1 + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << num(b.vx1) << "</text>\n";
    os << "<text x=\"" << num(b.x0 - 6) << "\" y=\"" << num(b.y1)
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(b.vy0) << "</text>\n";
    os << "<text x=\"" << num(b.x0 - 6) << "\" y=\"" << num(b.y0 + 8)
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(b.vy1) << "</text>\n";
}

}  // namespace

std::string render_figure(const FigureData& fig) {
    std::ostringstream os;
    os << "<!-- margulis figure v1 -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"900\" "
          "height=\"720\" viewBox=\"0 0 900 720\">\n";
    os << "<text x=\"450\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << fig.title
       << "</text>\n";

    // top panel: log10-log10
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    std::vector<FigureData::Curve> logc = fig.envelope_curves;
    for (auto& c : logc) {
        std::vector<std::pair<double, double>> pts;
        for (auto& [r, v] : c.pts) {
            if (r <= 0 || v <= 0) continue;
            double lr = std::log10(r), lv = std::log10(v);
            pts.push_back({lr, lv});
            lx0 = std::min(lx0, lr);
            lx1 = std::max(lx1, lr);
            ly0 = std::min(ly0, lv);
            ly1 = std::max(ly1, lv);
        }
        c.pts = std::move(pts);
    }
    if (lx0 >= lx1) {
        lx0 = 0;
        lx1 = 1;
    }
    if (ly0 >= ly1) {
        ly0 = 0;
        ly1 = 1;
    }
    Box top{80, 40, 860, 420, lx0, lx1, ly0, ly1};
    frame(os, top, "log10 r", "log10 value");
    const char* palette[] = {"#888888", "#b30000", "#006ab3", "#00803c",
                             "#8a2fb3", "#b36f00", "#3c3cb3", "#b3008a"};
    int ci = 0;
    for (const auto& c : logc) {
        if (c.pts.empty()) continue;
        std::string color = c.emphasized ? "#000000" : palette[ci++ % 8];
        polyline(os, top, c.pts, color, c.emphasized ? 2.2 : 1.0);
    }

    // bottom panel: slope vs log10 r
    double sx0 = 1e300, sx1 = -1e300;
    for (const auto& [x, s] : fig.slope) {
        sx0 = std::min(sx0, x);
        sx1 = std::max(sx1, x);
    }
    if (sx0 >= sx1) {
        sx0 = 0;
        sx1 = 1;
    }
    Box bot{80, 480, 860, 680, sx0, sx1, 0.0, 1.0};
    frame(os, bot, "log10 r", "log B / log r");
    std::vector<std::pair<double, double>> half{{sx0, 0.5}, {sx1, 0.5}};
    polyline(os, bot, half, "#bbbbbb", 0.8);
    if (!fig.slope.empty()) polyline(os, bot, fig.slope, "#000000", 1.8);

    os << "</svg>\n";
    return os.str();
}

}  // namespace margulis::emit
