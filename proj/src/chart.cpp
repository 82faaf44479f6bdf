#include "filippov/chart.hpp"

#include <cmath>
#include <sstream>

namespace filippov {

Vec2 SigmaChart::param(double c) const {
    const double x = orientation_ * c;
    double y = y_hint_;
    for (int it = 0; it < 60; ++it) {
        Vec2 p{x, y};
        double hv = sw_(p);
        double hy = sw_.gradient(p).y;
        if (std::fabs(hy) < 1e-14) break;
        double step = hv / hy;
        y -= step;
        if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(y))) {
            // one extra step settles the last ulp for nonlinear h
            Vec2 q{x, y};
            double hq = sw_(q);
            if (hq != 0.0) y -= hq / sw_.gradient(q).y;
            return {x, y};
        }
    }
    Vec2 p{x, y};
    if (std::fabs(sw_(p)) > 1e-12) {
        std::ostringstream os;
        os << "chart value " << c << " has no point on the switching set";
        throw DomainError(os.str());
    }
    return p;
}

Vec2 SigmaChart::tangent(double c) const {
    Vec2 g = sw_.gradient(param(c));
    Vec2 t{g.y, -g.x};
    if (orientation_ * t.x < 0) t = -t;
    return t / norm(t);
}

Vec2 SigmaChart::project(Vec2 p) const {
    Vec2 g = sw_.gradient(p);
    double g2 = dot(g, g);
    if (g2 == 0.0) return p;
    return p - (sw_(p) / g2) * g;
}

}  // namespace filippov
