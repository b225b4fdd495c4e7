#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chl/chl_process.hpp"

namespace chl {

namespace {

// Golden-ratio hue walk; keeps neighboring tree ids visually distinct.
std::string tree_color(int color) {
    const double hue = std::fmod(0.618033988749895 * static_cast<double>(color), 1.0);
    const double s = 0.65, v = 0.85;
    const double h6 = hue * 6.0;
    const int i = static_cast<int>(h6) % 6;
    const double f = h6 - std::floor(h6);
    const double q1 = v * (1.0 - s);
    const double q2 = v * (1.0 - s * f);
    const double q3 = v * (1.0 - s * (1.0 - f));
    double r = 0, g = 0, b = 0;
    switch (i) {
        case 0: r = v; g = q3; b = q1; break;
        case 1: r = q2; g = v; b = q1; break;
        case 2: r = q1; g = v; b = q3; break;
        case 3: r = q1; g = q2; b = v; break;
        case 4: r = q3; g = q1; b = v; break;
        default: r = v; g = q1; b = q2; break;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(r * 255), static_cast<int>(g * 255),
                  static_cast<int>(b * 255));
    return buf;
}

void write_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("render_svg: cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("render_svg: write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("render_svg: rename to " + path + " failed: " + ec.message());
}

}  // namespace

void render_svg(const RunRecord& record, const std::string& out_path) {
    constexpr double kScale = 120.0;  // px per radian
    constexpr double kMargin = 20.0;

    double max_height = 0.0;
    for (const auto& spine : record.spines) {
        for (const auto& z : spine.samples) max_height = std::max(max_height, z.imag());
    }
    const double width = kTwoPi * kScale + 2.0 * kMargin;
    const double height = std::max(max_height * kScale, 40.0) + 2.0 * kMargin;
    const double base_y = height - kMargin;
    const auto px = [&](double angle) { return kMargin + angle * kScale; };
    const auto py = [&](double im) { return base_y - im * kScale; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <line x1=\"" << px(0.0) << "\" y1=\"" << base_y << "\" x2=\"" << px(kTwoPi)
        << "\" y2=\"" << base_y << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    for (const auto& spine : record.spines) {
        const std::string stroke = tree_color(spine.color);
        // Split the polyline whenever it crosses the periodic seam.
        std::ostringstream points;
        double prev_re = spine.base;
        bool open = false;
        const auto flush = [&]() {
            if (open) {
                svg << "  <polyline fill=\"none\" stroke=\"" << stroke
                    << "\" stroke-width=\"1\" points=\"" << points.str() << "\"/>\n";
            }
            points.str("");
            open = false;
        };
        const auto add = [&](double re, double im) {
            if (open && std::abs(re - prev_re) > kPi) flush();
            points << px(re) << "," << py(im) << " ";
            prev_re = re;
            open = true;
        };
        for (const auto& z : spine.samples) add(z.real(), z.imag());
        flush();
    }
    svg << "</svg>\n";
    write_atomically(out_path, svg.str());
}

}  // namespace chl
