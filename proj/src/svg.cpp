#include "filippov/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "filippov/format.hpp"

namespace filippov {

namespace {

constexpr double kW = 640, kH = 480, kPad = 40;

struct Frame {
    double x0, x1, y0, y1;

    void grow(Vec2 p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    void finish() {
        if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
        if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
        double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
        x0 -= mx; x1 += mx; y0 -= my; y1 += my;
    }
    double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
    double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
};

Frame empty_frame() {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, -inf, inf, -inf};
}

// 4 decimals keeps files small and byte-stable
std::string coord(double v) { return fmt(std::round(v * 1e4) / 1e4); }

void polyline(std::ostringstream& os, const Frame& f, const std::vector<Vec2>& pts, const std::string& style) {
    if (pts.size() < 2) return;
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ' ';
        os << coord(f.px(pts[i].x)) << ',' << coord(f.py(pts[i].y));
    }
    os << "\"/>\n";
}

void header(std::ostringstream& os, const Frame& f, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
       << kW << ' ' << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"monospace\" font-size=\"13\">" << title << "</text>\n";
    os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\"" << kH - 2 * kPad
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << kPad << "\" y=\"" << kH - 12 << "\" font-family=\"monospace\" font-size=\"10\">x: ["
       << fmt(f.x0) << ", " << fmt(f.x1) << "]  y: [" << fmt(f.y0) << ", " << fmt(f.y1) << "]</text>\n";
}

}  // namespace

std::string phase_portrait_svg(const CycleSystem& sys, const Orbit& orbit) {
    Frame f = empty_frame();
    for (const auto& seg : orbit.segments)
        for (const auto& s : seg.samples)
            if (finite(s.p)) f.grow(s.p);
    if (!std::isfinite(f.x0)) f = {-1, 1, -1, 1};
    f.finish();

    std::vector<Vec2> sigma;
    for (int i = 0; i <= 200; ++i) {
        double x = f.x0 + (f.x1 - f.x0) * i / 200;
        try {
            Vec2 p = sys.chart.param(sys.chart.component({x, 0}));
            if (p.y >= f.y0 && p.y <= f.y1) sigma.push_back(p);
        } catch (const std::exception&) {
        }
    }

    std::ostringstream os;
    header(os, f, sys.name + " phase portrait");
    polyline(os, f, sigma, "stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"");
    for (const auto& seg : orbit.segments) {
        std::vector<Vec2> pts;
        for (const auto& s : seg.samples) pts.push_back(s.p);
        const char* style = seg.kind == SegmentKind::sliding     ? "stroke=\"#1a9641\" stroke-width=\"3\""
                            : seg.kind == SegmentKind::smooth_plus ? "stroke=\"#2c7bb6\" stroke-width=\"1.2\""
                                                                   : "stroke=\"#d7191c\" stroke-width=\"1.2\"";
        polyline(os, f, pts, style);
    }
    if (!orbit.segments.empty()) {
        Vec2 p0 = orbit.segments.front().samples.front().p;
        os << "<circle cx=\"" << coord(f.px(p0.x)) << "\" cy=\"" << coord(f.py(p0.y)) << "\" r=\"3\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string return_map_svg(const ReturnMap& map) {
    Frame f = empty_frame();
    std::vector<Vec2> pts;
    for (const auto& s : map.samples)
        if (std::isfinite(s.pi)) {
            pts.push_back({s.x, s.pi});
            f.grow({s.x, s.pi});
        }
    if (!std::isfinite(f.x0)) f = {map.base, map.base + 1, map.base, map.base + 1};
    double lo = std::min(f.x0, f.y0), hi = std::max(f.x1, f.y1);
    f = {lo, hi, lo, hi};
    f.finish();

    std::ostringstream os;
    header(os, f, "first return map");
    polyline(os, f, {{f.x0, f.x0}, {f.x1, f.x1}}, "stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4,4\"");
    polyline(os, f, pts, "stroke=\"#2c7bb6\" stroke-width=\"1.5\"");
    for (const auto& s : map.samples)
        if (s.outcome == ReturnOutcome::sliding && std::isfinite(s.pi))
            os << "<circle cx=\"" << coord(f.px(s.x)) << "\" cy=\"" << coord(f.py(s.pi))
               << "\" r=\"1.5\" fill=\"#1a9641\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace filippov
