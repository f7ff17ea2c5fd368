#ifndef MATDYN_CLI_SVG_HPP
#define MATDYN_CLI_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace matdyn::cli {

/// Minimal line/scatter plotter emitting standalone SVG: axes with ticks,
/// legend, solid or dashed polylines, filled markers. Enough for the
/// trajectory, threshold, bifurcation, and basin figures; no external
/// plotting dependency.
class SvgPlot {
public:
    using Points = std::vector<std::pair<double, double>>;

    SvgPlot(std::string title, std::string xlabel, std::string ylabel,
            int width = 760, int height = 520);

    void line(Points pts, std::string color, bool dashed = false,
              std::string legend = {});
    void scatter(Points pts, std::string color, double radius = 3.0,
                 std::string legend = {});

    void write(const std::string& path) const;

private:
    struct Series {
        Points pts;
        std::string color;
        bool dashed = false;
        bool markers = false;
        double radius = 3.0;
        std::string legend;
    };

    std::string title_;
    std::string xlabel_;
    std::string ylabel_;
    int width_;
    int height_;
    std::vector<Series> series_;
};

} // namespace matdyn::cli

#endif
