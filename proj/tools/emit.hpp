#pragma once

#include <string>
#include <vector>

#include "margulis/asymptotics.hpp"
#include "margulis/envelope.hpp"

namespace margulis::emit {

/// RFC-4180-style CSV: header row mandatory, fields quoted only when needed,
/// interval endpoints printed outward at fixed precision (never a midpoint).
class Csv {
  public:
    explicit Csv(std::vector<std::string> header);
    void row(std::vector<std::string> fields);
    void write(const std::string& path) const;
    std::string str() const;

  private:
    std::vector<std::vector<std::string>> rows_;
};

std::string fmt_ival_lo(const Ival& v, int digits = 17);
std::string fmt_ival_hi(const Ival& v, int digits = 17);

/// Two-panel SVG mirroring the paper's figure layout: log-log envelope with
/// its constituent curves on top, the log-slope curve below. Self-contained
/// SVG 1.1; the first line is a version comment.
struct FigureData {
    struct Curve {
        std::string label;
        std::vector<std::pair<double, double>> pts;  // (r, value)
        bool emphasized = false;
    };
    std::vector<Curve> envelope_curves;              // top panel, log-log
    std::vector<std::pair<double, double>> slope;    // bottom panel, (log r, slope)
    std::string title;
};

std::string render_figure(const FigureData& fig);

}  // namespace margulis::emit
