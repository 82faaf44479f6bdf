#include "filippov/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "filippov/errors.hpp"
#include "filippov/expr.hpp"
#include "filippov/flow.hpp"

namespace filippov {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------- polynomial model

PiecewiseSystem polynomial_model(const PolyModelParams& p) {
    const double r = p.r, k = p.k, d = p.d, m = p.m;
    SmoothField X([=](Vec2 q) { return Vec2{q.x, -r * q.y - q.x * q.x * q.x - k * q.x}; },
                  [=](Vec2 q) { return Mat2{1.0, 0.0, -3 * q.x * q.x - k, -r}; });
    SmoothField Y([=](Vec2 q) { return Vec2{-1.0, -q.x + d}; }, [](Vec2) { return Mat2{0.0, 0.0, -1.0, 0.0}; });
    SwitchingFunction h([=](Vec2 q) { return q.y + q.x / 4 - m; }, [](Vec2) { return Vec2{0.25, 1.0}; },
                        [](Vec2) { return Mat2{}; });
    return {X, Y, h};
}

CycleSystem poly_system(const PolyModelParams& p) {
    if (!(p.r > 0)) throw ConfigError("poly: r must be positive");
    CycleSystem s;
    s.name = "poly";
    s.Z = polynomial_model(p);
    s.chart = SigmaChart(s.Z.sw, 1);
    s.saddle_guess = {0.0, 0.0};
    s.window = {-6.0, 6.0, -12.0, 12.0};
    s.t_budget = 60.0;
    s.fold_radius = 1.0;
    s.pe_halfwidth = 1.5;
    s.section_halfwidth = 1.5;
    s.initial_domain = 0.005;
    s.max_domain = 0.5;
    s.param_names = {"r", "k", "d", "m"};
    s.params = {p.r, p.k, p.d, p.m};
    return s;
}

double poly_Y_return(const PolyModelParams& p, double x0) { return 2 * p.d - 0.5 - x0; }

PolyManifoldX poly_unstable_manifold_x(const PolyModelParams& p) {
    PolyManifoldX out;
    if (p.m == 0.0) {
        double disc = (p.r + 1 - 4 * p.k) * (p.r + 3) / (4 * (p.r + 1));
        if (!(disc > 0)) throw FewerIntersections("x3 radicand is not positive");
        out.x1 = 0.0;
        out.x3 = std::sqrt(disc);
        out.x4 = -out.x3;
        return out;
    }
    CycleSystem s = poly_system(p);
    SaddleData sd = find_saddle(s.Z.plus, s.saddle_guess);
    ManifoldIntersections mi = manifold_intersections(s.Z, s.chart, sd, s.window);
    if (!mi.has_P1 || !mi.has_P3) throw FewerIntersections("unstable manifold meets Σ fewer than three times");
    bool have4 = false;
    for (const auto& h : mi.hits) {
        if (h.branch > 1 || h.direction <= 0) continue;
        if (std::fabs(h.chart - mi.P1) < 1e-9) continue;
        if (!have4 || h.chart < out.x4) out.x4 = h.chart;
        have4 = true;
    }
    if (!have4) throw FewerIntersections("no third unstable-manifold crossing");
    out.x1 = mi.P1;
    out.x3 = mi.P3;
    return out;
}

double poly_sliding_quotient(const PolyModelParams& p, double x) {
    const double r = p.r, k = p.k, d = p.d, m = p.m;
    double num = 4 * x * x * x + 4 * x * x + (4 * k - 4 * d - r) * x + 4 * m * r;
    double den = 4 * x * x * x - (5 - 4 * k + r) * x + 4 * m * r + 4 * d - 1;
    return -num / den;
}

// ---------------------------------------------------------------- pendulum

PiecewiseSystem pendulum_model(const PendulumParams& p) {
    const double a1 = p.a1, a2 = p.a2, a3 = p.a3, a4 = p.a4;
    SmoothField X([=](Vec2 q) { return Vec2{q.y, a1 * q.y - std::sin(q.x)}; },
                  [=](Vec2 q) { return Mat2{0.0, 1.0, -std::cos(q.x), a1}; });
    SmoothField Y([=](Vec2 q) { return Vec2{q.y, a1 * q.y - std::sin(q.x) + a2 * (q.x + kPi / 2)}; },
                  [=](Vec2 q) { return Mat2{0.0, 1.0, -std::cos(q.x) + a2, a1}; });
    SwitchingFunction h([=](Vec2 q) { return q.y + a4 * (q.x + kPi) - a3; }, [=](Vec2) { return Vec2{a4, 1.0}; },
                        [](Vec2) { return Mat2{}; });
    return {X, Y, h};
}

CycleSystem pendulum_system(const PendulumParams& p) {
    if (!(p.a1 < 0)) throw ConfigError("pendulum: a1 must be negative");
    CycleSystem s;
    s.name = "pendulum";
    s.Z = pendulum_model(p);
    s.chart = SigmaChart(s.Z.sw, 1);
    s.saddle_guess = {-kPi, 0.0};
    s.window = {-12.0, 6.0, -6.0, 6.0};
    s.t_budget = 80.0;
    s.fold_radius = 0.5;
    s.pe_halfwidth = 2.5;
    s.section_halfwidth = 2.0;
    s.initial_domain = 0.01;
    s.max_domain = 1.0;
    s.param_names = {"a1", "a2", "a3", "a4"};
    s.params = {p.a1, p.a2, p.a3, p.a4};
    return s;
}

double pendulum_ratio(double a1) {
    double s = std::sqrt(a1 * a1 + 4);
    return -(a1 - s) / (a1 + s);
}

const std::vector<std::string>& pendulum_fixture_labels() {
    static const std::vector<std::string> labels = {"R1", "R2", "alpha_plus", "R3",
                                                    "R4", "R5_6", "R7", "alpha_minus"};
    return labels;
}

PendulumFixture pendulum_region_fixture(const std::string& label) {
    PendulumFixture f;
    f.label = label;
    auto on_sigma = [](double a3, double x) { return Vec2{x, a3 - 0.1 * (kPi + x)}; };
    if (label == "R1") {
        f.params = {-0.1, -0.77, 0.1, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.8;
        f.p_a = -3.14159; f.q_a = -2.14159;
        f.pi_x01 = -4.51446; f.pi_x02 = -4.37873;
    } else if (label == "R2") {
        f.params = {-0.2, -0.77, 0.1, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.5;
        f.p_a = -3.13169; f.q_a = -2.14159;
        f.pi_x01 = -3.06627; f.pi_x02 = -2.90533;
    } else if (label == "alpha_plus") {
        f.params = {-0.2, -0.77, 0.0, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.8;
        f.p_a = -3.14159; f.q_a = -3.14159;
        f.pi_x01 = -3.02473; f.pi_x02 = -2.93979;
    } else if (label == "R3") {
        f.params = {-0.2, -0.77, -0.1, 0.1};
        f.x01 = {-kPi, 0.6};
        f.x02 = -2.9;
        f.p_a = -3.15149; f.q_a = -4.14159;
        f.pi_x01 = -2.99339; f.pi_x02 = -2.89616;
    } else if (label == "R4") {
        f.params = {-0.185, -0.77, -0.2, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.8;
        f.p_a = -3.15845; f.q_a = -5.14159;
        f.pi_x01 = -3.33481; f.pi_x02 = -2.9545;
    } else if (label == "R5_6") {
        f.params = {-0.15, -0.77, -0.1, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.7;
        f.p_a = -3.14657; f.q_a = -4.14159;
        f.pi_x01 = -3.57493; f.pi_x02 = -3.41217;
    } else if (label == "R7") {
        f.params = {-0.1, -0.77, -0.1, 0.1};
        f.x01 = on_sigma(-0.1, -2.9);
        f.x02 = -2.9;
        f.p_a = -3.14159; f.q_a = -4.14159;
        f.pi_x01 = -4.46432; f.pi_x02 = -4.30114;
    } else if (label == "alpha_minus") {
        f.params = {-0.1, -0.77, 0.0, 0.1};
        f.x01 = {-kPi, 0.5};
        f.x02 = -2.8;
        f.p_a = -3.14159; f.q_a = -3.14159;
        f.pi_x01 = -4.54177; f.pi_x02 = -4.33775;
    } else {
        throw UnknownRegion(label);
    }
    return f;
}

// ---------------------------------------------------------------- model specs

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double number(const std::string& text, const std::map<std::string, double>& consts = {}) {
    return parse_expression(text, consts).eval(0.0, 0.0);
}

std::vector<double> numbers(const std::string& text, size_t expected, const std::string& what) {
    auto parts = split(text, ',');
    if (parts.size() != expected)
        throw ConfigError(what + ": expected " + std::to_string(expected) + " comma-separated values");
    std::vector<double> v;
    for (auto& p : parts) v.push_back(number(p));
    return v;
}

}  // namespace

bool is_builtin_spec(const std::string& spec) {
    std::string s = trim(spec);
    return (s.rfind("poly(", 0) == 0 || s.rfind("pendulum(", 0) == 0) && !s.empty() && s.back() == ')';
}

CycleSystem make_builtin(const std::string& spec, const std::map<std::string, double>& overrides) {
    std::string s = trim(spec);
    size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')') throw ConfigError("bad model spec '" + spec + "'");
    std::string name = trim(s.substr(0, open));
    std::string args = s.substr(open + 1, s.size() - open - 2);
    std::vector<double> v = numbers(args, 4, "model " + name);
    auto apply = [&](const std::vector<std::string>& names) {
        for (const auto& [key, val] : overrides) {
            bool hit = false;
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == key) { v[i] = val; hit = true; }
            if (!hit) throw ConfigError("model " + name + " has no parameter '" + key + "'");
        }
    };
    if (name == "poly") {
        apply({"r", "k", "d", "m"});
        return poly_system({v[0], v[1], v[2], v[3]});
    }
    if (name == "pendulum") {
        apply({"a1", "a2", "a3", "a4"});
        return pendulum_system({v[0], v[1], v[2], v[3]});
    }
    throw ConfigError("unknown model '" + name + "'");
}

CycleSystem parse_model_document(const std::string& text, const std::string& origin,
                                 const std::map<std::string, double>& overrides) {
    std::map<std::string, std::string> kv;
    std::map<std::string, double> consts;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = val;
    }
    static const std::vector<std::string> known = {"model", "name", "X.x", "X.y", "Y.x", "Y.y", "h",
                                                   "saddle", "window", "orientation", "t_budget",
                                                   "fold_radius", "pe_halfwidth", "section_halfwidth",
                                                   "initial_domain", "max_domain"};
    for (const auto& [key, val] : kv) {
        if (key.rfind("const.", 0) == 0) {
            consts[key.substr(6)] = number(val, consts);
            continue;
        }
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw ConfigError(origin + ": unknown key '" + key + "'");
    }
    if (!kv.count("model"))
        for (const auto& [key, val] : overrides) {
            if (!consts.count(key)) throw ConfigError(origin + ": no constant named '" + key + "' to override");
            consts[key] = val;
        }

    CycleSystem s;
    const bool expr_model = kv.count("X.x") || kv.count("X.y") || kv.count("Y.x") || kv.count("Y.y") || kv.count("h");
    if (kv.count("model")) {
        if (expr_model) throw ConfigError(origin + ": 'model' cannot be combined with field expressions");
        s = make_builtin(kv["model"], overrides);
    } else {
        for (const char* k : {"X.x", "X.y", "Y.x", "Y.y", "h"})
            if (!kv.count(k)) throw ConfigError(origin + ": missing key '" + std::string(k) + "'");
        auto field = [&](const std::string& a, const std::string& b) {
            Expr fx = parse_expression(kv[a], consts), fy = parse_expression(kv[b], consts);
            Expr fxx = fx.diff('x'), fxy = fx.diff('y'), fyx = fy.diff('x'), fyy = fy.diff('y');
            return SmoothField([=](Vec2 q) { return Vec2{fx.eval(q.x, q.y), fy.eval(q.x, q.y)}; },
                               [=](Vec2 q) {
                                   return Mat2{fxx.eval(q.x, q.y), fxy.eval(q.x, q.y), fyx.eval(q.x, q.y),
                                               fyy.eval(q.x, q.y)};
                               });
        };
        Expr h = parse_expression(kv["h"], consts);
        Expr hx = h.diff('x'), hy = h.diff('y');
        Expr hxx = hx.diff('x'), hxy = hx.diff('y'), hyy = hy.diff('y');
        s.Z.plus = field("X.x", "X.y");
        s.Z.minus = field("Y.x", "Y.y");
        s.Z.sw = SwitchingFunction([=](Vec2 q) { return h.eval(q.x, q.y); },
                                   [=](Vec2 q) { return Vec2{hx.eval(q.x, q.y), hy.eval(q.x, q.y)}; },
                                   [=](Vec2 q) {
                                       double c = hxy.eval(q.x, q.y);
                                       return Mat2{hxx.eval(q.x, q.y), c, c, hyy.eval(q.x, q.y)};
                                   });
        s.name = "expression";
        for (const auto& [key, val] : consts) {
            s.param_names.push_back(key);
            s.params.push_back(val);
        }
        s.window = {-10, 10, -10, 10};
    }
    if (kv.count("name")) s.name = kv["name"];
    if (kv.count("saddle")) {
        auto v = numbers(kv["saddle"], 2, "saddle");
        s.saddle_guess = {v[0], v[1]};
    }
    if (kv.count("window")) {
        auto v = numbers(kv["window"], 4, "window");
        if (!(v[0] < v[1] && v[2] < v[3])) throw ConfigError(origin + ": window bounds are not increasing");
        s.window = {v[0], v[1], v[2], v[3]};
    }
    int orientation = s.chart.orientation();
    if (kv.count("orientation")) {
        double o = number(kv["orientation"]);
        if (o != 1.0 && o != -1.0) throw ConfigError(origin + ": orientation must be 1 or -1");
        orientation = static_cast<int>(o);
    }
    s.chart = SigmaChart(s.Z.sw, orientation, s.saddle_guess.y);
    auto positive = [&](const char* key, double& target) {
        if (!kv.count(key)) return;
        double v = number(kv[key]);
        if (!(v > 0)) throw ConfigError(origin + ": " + key + " must be positive");
        target = v;
    };
    positive("t_budget", s.t_budget);
    positive("fold_radius", s.fold_radius);
    positive("pe_halfwidth", s.pe_halfwidth);
    positive("section_halfwidth", s.section_halfwidth);
    positive("initial_domain", s.initial_domain);
    positive("max_domain", s.max_domain);
    return s;
}

CycleSystem load_model(const std::string& spec, const std::map<std::string, double>& overrides) {
    if (is_builtin_spec(spec)) return make_builtin(spec, overrides);
    std::ifstream in(spec);
    if (!in) throw ConfigError("cannot open model file '" + spec + "' (and it is not a built-in model spec)");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_document(ss.str(), spec, overrides);
}

}  // namespace filippov
