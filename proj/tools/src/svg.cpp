#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace matdyn::cli {

namespace {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

// 1-2-5 tick spacing covering roughly `target` intervals.
std::vector<double> ticks(const Range& r, int target = 6)
{
    const double span = r.hi - r.lo;
    if (!(span > 0.0)) {
        return {r.lo};
    }
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    const double start = std::ceil(r.lo / step) * step;
    for (double t = start; t <= r.hi + 0.5 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

std::string tick_label(double v)
{
    std::ostringstream os;
    if (std::abs(v) >= 1e5 || (v != 0.0 && std::abs(v) < 1e-3)) {
        os.precision(2);
        os << std::scientific << v;
    } else {
        os.precision(6);
        os << v;
    }
    return os.str();
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel,
                 int width, int height)
    : title_(std::move(title)), xlabel_(std::move(xlabel)),
      ylabel_(std::move(ylabel)), width_(width), height_(height)
{
}

void SvgPlot::line(Points pts, std::string color, bool dashed,
                   std::string legend)
{
    Series s;
    s.pts = std::move(pts);
    s.color = std::move(color);
    s.dashed = dashed;
    s.legend = std::move(legend);
    series_.push_back(std::move(s));
}

void SvgPlot::scatter(Points pts, std::string color, double radius,
                      std::string legend)
{
    Series s;
    s.pts = std::move(pts);
    s.color = std::move(color);
    s.markers = true;
    s.radius = radius;
    s.legend = std::move(legend);
    series_.push_back(std::move(s));
}

void SvgPlot::write(const std::string& path) const
{
    Range xr{std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
    Range yr = xr;
    for (const Series& s : series_) {
        for (const auto& [x, y] : s.pts) {
            xr.lo = std::min(xr.lo, x);
            xr.hi = std::max(xr.hi, x);
            yr.lo = std::min(yr.lo, y);
            yr.hi = std::max(yr.hi, y);
        }
    }
    if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    auto pad = [](Range& r) {
        const double span = r.hi - r.lo;
        const double margin = span > 0.0 ? 0.05 * span : std::max(1.0, std::abs(r.lo));
        r.lo -= margin;
        r.hi += margin;
    };
    pad(xr);
    pad(yr);

    const double ml = 78.0, mr = 24.0, mt = 42.0, mb = 58.0;
    const double pw = width_ - ml - mr;
    const double ph = height_ - mt - mb;
    auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto sy = [&](double y) {
        return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
    };

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
        << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' '
        << height_ << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width_ / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title_ << "</text>\n";

    // frame
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (double t : ticks(xr)) {
        const double x = sx(t);
        out << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x
            << "\" y2=\"" << mt + ph
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double y = sy(t);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml
            << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw
            << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height_ - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel_
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 "
           "20 "
        << mt + ph / 2 << ")\">" << ylabel_ << "</text>\n";
    out << "</g>\n";

    out << "<g clip-path=\"none\">\n";
    for (const Series& s : series_) {
        if (s.markers) {
            for (const auto& [x, y] : s.pts) {
                out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y)
                    << "\" r=\"" << s.radius << "\" fill=\"" << s.color
                    << "\"/>\n";
            }
        } else if (s.pts.size() >= 2) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"";
            if (s.dashed) {
                out << " stroke-dasharray=\"5 4\"";
            }
            out << " points=\"";
            for (const auto& [x, y] : s.pts) {
                out << sx(x) << ',' << sy(y) << ' ';
            }
            out << "\"/>\n";
        }
    }
    out << "</g>\n";

    // legend, top-right inside the frame
    double ly = mt + 14.0;
    for (const Series& s : series_) {
        if (s.legend.empty()) {
            continue;
        }
        const double lx = ml + pw - 150.0;
        if (s.markers) {
            out << "<circle cx=\"" << lx + 12 << "\" cy=\"" << ly - 4
                << "\" r=\"3.2\" fill=\"" << s.color << "\"/>\n";
        } else {
            out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\""
                << lx + 24 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"";
            if (s.dashed) {
                out << " stroke-dasharray=\"5 4\"";
            }
            out << "/>\n";
        }
        out << "<text x=\"" << lx + 30 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.legend
            << "</text>\n";
        ly += 16.0;
    }

    out << "</svg>\n";
}

} // namespace matdyn::cli
