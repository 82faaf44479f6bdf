#include "filippov/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "filippov/bifurc.hpp"
#include "filippov/expr.hpp"
#include "filippov/format.hpp"
#include "filippov/models.hpp"
#include "filippov/oracles.hpp"
#include "filippov/svg.hpp"

namespace filippov {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchema = "filippov-lab/v1";

enum Exit { kOk = 0, kFixtureFail = 1, kConfig = 2, kNumerical = 3, kPartial = 4 };

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

double parse_number(const std::string& text) {
    double v = parse_expression(text).eval(0.0, 0.0);
    if (!std::isfinite(v)) throw ConfigError("'" + text + "' is not a finite number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

GridAxis parse_axis(const std::string& tok) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("grid axis '" + tok + "' must read name=lo:hi:n");
    auto parts = split(tok.substr(eq + 1), ':');
    if (parts.size() != 3) throw ConfigError("grid axis '" + tok + "' must read name=lo:hi:n");
    GridAxis a;
    a.name = trim(tok.substr(0, eq));
    a.lo = parse_number(parts[0]);
    a.hi = parse_number(parts[1]);
    double n = parse_number(parts[2]);
    if (n != std::floor(n) || n < 1) throw ConfigError("grid axis '" + a.name + "' needs a positive integer count");
    a.n = static_cast<int>(n);
    if (a.name.empty()) throw ConfigError("grid axis without a name");
    return a;
}

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }
ordered_json num(const std::optional<double>& v) { return v ? num(*v) : ordered_json(nullptr); }

ordered_json params_json(const std::vector<std::string>& names, const std::vector<double>& vals) {
    ordered_json j = ordered_json::object();
    for (size_t i = 0; i < names.size() && i < vals.size(); ++i) j[names[i]] = num(vals[i]);
    return j;
}

ordered_json point_json(const std::string& model, const BifurcationPoint& p) {
    ordered_json j;
    j["schema"] = kSchema;
    j["kind"] = "bifurcation_point";
    j["model"] = model;
    j["params"] = params_json(p.param_names, p.params);
    j["alpha"] = num(p.alpha);
    j["beta"] = num(p.beta);
    j["ratio"] = num(p.ratio);
    j["bs_case"] = to_string(p.bs);
    j["dsc_case"] = to_string(p.dsc);
    if (p.landing) {
        const LandingOrder& l = *p.landing;
        ordered_json lj;
        lj["a"] = num(l.a);
        lj["landing"] = num(l.landing);
        lj["outcome"] = to_string(l.outcome);
        lj["PE"] = num(l.pe);
        lj["PE_kind"] = l.pe_kind ? ordered_json(to_string(*l.pe_kind)) : ordered_json(nullptr);
        lj["F"] = num(l.fold);
        lj["P1"] = num(l.p1);
        lj["pi_minus_PE"] = num(l.minus_pe());
        lj["pi_minus_F"] = num(l.minus_fold());
        lj["pi_minus_P1"] = num(l.minus_p1());
        j["landing_order"] = lj;
    } else {
        j["landing_order"] = nullptr;
    }
    if (p.quadratic)
        j["quadratic"] = {{"alpha", num(p.quadratic->alpha)}, {"k1", num(p.quadratic->k1)}, {"k2", num(p.quadratic->k2)}};
    else
        j["quadratic"] = nullptr;
    ordered_json det = ordered_json::array();
    for (const auto& t : p.detected) {
        ordered_json d;
        d["kind"] = to_string(t.kind);
        d["x0"] = num(t.x0);
        d["stability"] = t.stability ? ordered_json(to_string(*t.stability)) : ordered_json(nullptr);
        det.push_back(d);
    }
    j["detected"] = det;
    j["errors"] = p.errors;
    return j;
}

struct Options {
    std::string model;
    std::string x0;
    bool on_sigma = false;
    bool no_stop = false;
    double tmax = 40.0;
    std::string out, svg;
    int samples = 256;
    bool geometric = false;
    double domain = 0.0;
    std::string grid;
    std::string curves;
    double tolerance = 0.0;
    std::string only;
};

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) out << text;
    else write_file(o.out, text);
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.x0.empty()) throw ConfigError("simulate needs --x0");
    if (!(o.tmax > 0)) throw ConfigError("--tmax must be positive");
    CycleSystem sys = load_model(o.model);
    IntegrateOptions io;
    Vec2 p0;
    if (o.on_sigma) {
        p0 = sys.chart.param(parse_number(o.x0));
        io.start = StartMode::plus;
        if (!o.no_stop) io.on_arrival = [](const SigmaArrival& a) { return a.index >= 2; };
    } else {
        auto parts = split(o.x0, ',');
        if (parts.size() != 2) throw ConfigError("--x0 takes x,y (or a chart value with --on-sigma)");
        p0 = {parse_number(parts[0]), parse_number(parts[1])};
    }
    Orbit orbit = integrate(sys.Z, p0, o.tmax, sys.window, io);
    emit(o, out, orbit_csv(orbit));
    if (!o.svg.empty()) write_file(o.svg, phase_portrait_svg(sys, orbit));
    err << "# termination: " << to_string(orbit.termination) << "\n";
    err << "# end: " << fmt(orbit.end().x) << ',' << fmt(orbit.end().y) << "  chart " << fmt(sys.chart.inverse(orbit.end()))
        << "\n";
    return kOk;
}

int cmd_return_map(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.samples < 2) throw ConfigError("--samples must be at least 2");
    if (o.domain < 0) throw ConfigError("--domain must be positive");
    CycleSystem sys = load_model(o.model);
    BasePoint bp = base_point(sys);
    ReturnMapOptions mo;
    mo.samples = o.samples;
    mo.geometric = o.geometric;
    mo.domain_len = o.domain;
    ReturnMap map = sample_return_map(sys, bp, mo);
    emit(o, out, return_map_csv(map));
    if (!o.svg.empty()) write_file(o.svg, return_map_svg(map));

    std::ostream& s = o.out.empty() ? err : out;
    s << "# base: " << fmt(map.base) << "\n";
    s << "# beta: " << fmt(bp.beta) << "\n";
    s << "# domain: [" << fmt(map.base) << ", " << fmt(map.base + map.domain_len) << ")\n";
    if (!map.samples.empty()) s << "# alpha: " << fmt(map.samples.front().pi - map.base) << "\n";
    s << "# monotone: " << (map.strictly_increasing(1e-11) ? "yes" : "no") << "\n";
    if (std::fabs(bp.saddle.ratio - 1.0) < 1e-6) {
        try {
            QuadraticFit q = quadratic_expansion_fit(map);
            s << "# quadratic: alpha=" << fmt(q.alpha) << " k1=" << fmt(q.k1) << " k2=" << fmt(q.k2) << "\n";
        } catch (const Error& e) {
            s << "# quadratic: " << e.what() << "\n";
        }
    }
    auto fps = find_fixed_points(map);
    if (fps.empty()) s << "# fixed_point: none\n";
    for (const auto& fp : fps) {
        double lo = map.base, hi = map.base + map.domain_len;
        for (const auto& sm : map.samples) {
            if (sm.x <= fp.x0) lo = sm.x;
            if (sm.x > fp.x0) { hi = sm.x; break; }
        }
        s << "# fixed_point: " << fmt(fp.x0) << " " << to_string(fp.stability) << (fp.boundary ? " boundary" : "")
          << " bracket (" << fmt(lo) << ", " << fmt(hi) << ")\n";
    }
    return kOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream&) {
    CycleSystem sys = load_model(o.model);
    ClassifyOptions co;
    co.samples = std::min(o.samples, 128);
    BifurcationPoint p = classify_point(sys, co);
    emit(o, out, point_json(o.model, p).dump(2) + "\n");
    return p.errors.empty() ? kOk : kNumerical;
}

int cmd_bifurcate(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.grid.empty()) throw ConfigError("bifurcate needs --grid name=lo:hi:n,name=lo:hi:n");
    auto toks = split(o.grid, ',');
    if (toks.size() != 2) throw ConfigError("--grid takes exactly two axes");
    GridAxis ax = parse_axis(toks[0]), ay = parse_axis(toks[1]);
    if (ax.name == ay.name) throw ConfigError("grid axes must differ");
    Family fam = family_of(o.model);
    fam({{ax.name, ax.lo}, {ay.name, ay.lo}});  // rejects unknown parameter names before the sweep

    RegionGrid grid = region_grid(fam, ax, ay);
    ConsistencyReport rep = consistency_scan(grid);

    ordered_json j;
    j["schema"] = kSchema;
    j["kind"] = "bifurcation_diagram";
    j["model"] = o.model;
    j["grid"] = {{"x", {{"name", ax.name}, {"lo", ax.lo}, {"hi", ax.hi}, {"n", ax.n}}},
                 {"y", {{"name", ay.name}, {"lo", ay.lo}, {"hi", ay.hi}, {"n", ay.n}}}};

    ordered_json curves = ordered_json::array();
    if (!o.curves.empty()) {
        std::vector<double> sweep;
        for (int i = 0; i < ax.n; ++i) sweep.push_back(ax.value(i));
        for (const auto& name : split(o.curves, ',')) {
            CurveLabel label = parse_curve_label(trim(name));
            CurveTrace tr = trace_curve(fam, label, ax.name, sweep, ay.name, ay.lo, ay.hi);
            ordered_json c;
            c["label"] = to_string(tr.label);
            c["sweep"] = tr.sweep_name;
            c["solve"] = tr.solve_name;
            ordered_json pts = ordered_json::array(), res = ordered_json::array(), st = ordered_json::array();
            for (const auto& p : tr.points) {
                pts.push_back({num(p.sweep), num(p.solve)});
                res.push_back(num(p.residual));
                st.push_back(to_string(p.status));
            }
            c["points"] = pts;
            c["residuals"] = res;
            c["status"] = st;
            curves.push_back(c);
        }
    }
    j["curves"] = curves;

    ordered_json cells = ordered_json::array();
    for (int jj = 0; jj < ay.n; ++jj)
        for (int ii = 0; ii < ax.n; ++ii) {
            const RegionSignature& s = grid.at(ii, jj);
            ordered_json c;
            c["i"] = ii;
            c["j"] = jj;
            c[ax.name] = num(ax.value(ii));
            c[ay.name] = num(ay.value(jj));
            if (s.ok) {
                c["signature"] = s.code;
                c["alpha"] = num(s.alpha);
                c["beta"] = num(s.beta);
            } else {
                c["signature"] = nullptr;
                c["error"] = s.error;
            }
            cells.push_back(c);
        }
    j["cells"] = cells;
    j["consistency"] = {{"cells", rep.cells},           {"failed", rep.failed},   {"changes", rep.changes},
                        {"unexplained", rep.unexplained}, {"islands", rep.islands}, {"pass", rep.pass()}};
    emit(o, out, j.dump(2) + "\n");

    err << "# cells: " << rep.cells << " failed: " << rep.failed << " islands: " << rep.islands
        << " unexplained changes: " << rep.unexplained << "\n";
    return rep.failed * 10 <= rep.cells ? kOk : kPartial;
}

int cmd_fixtures(const Options& o, std::ostream& out, std::ostream&) {
    if (o.tolerance < 0) throw ConfigError("--tolerance must be positive");
    std::vector<OracleCheck> checks;
    bool matched = false;
    for (const auto& label : pendulum_fixture_labels()) {
        if (!o.only.empty() && o.only != label) continue;
        matched = true;
        auto c = evaluate_fixture(label, o.tolerance);
        checks.insert(checks.end(), c.begin(), c.end());
    }
    if (o.only.empty() || o.only == "oracles") {
        matched = true;
        auto c = closed_form_oracles();
        checks.insert(checks.end(), c.begin(), c.end());
    }
    if (!matched) throw UnknownRegion("unknown fixture '" + o.only + "'");

    int failed = 0;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %18s %18s %10s  %s\n", "check", "expected", "computed", "tol", "result");
    out << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-34s %18.10g %18.10g %10.2g  %s", c.name.c_str(), c.expected, c.computed,
                      c.tol, c.pass() ? "PASS" : "FAIL");
        out << line;
        if (!c.error.empty()) out << " (" << c.error << ")";
        out << "\n";
        if (!c.pass()) ++failed;
    }
    out << checks.size() - failed << "/" << checks.size() << " passed\n";
    return failed ? kFixtureFail : kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Planar Filippov systems: orbits, first return maps, saddle-regular bifurcations"};
    app.name("filippov-lab");
    app.require_subcommand(1);
    Options o;

    auto* sim = app.add_subcommand("simulate", "integrate one Filippov orbit, CSV t,x,y,segment_kind,event");
    sim->add_option("--model", o.model, "poly(r,k,d,m), pendulum(a1,a2,a3,a4) or a model file")->required();
    sim->add_option("--x0", o.x0, "x,y, or a chart value on the switching curve with --on-sigma");
    sim->add_flag("--on-sigma", o.on_sigma, "start on Σ and stop at the first return");
    sim->add_flag("--no-stop", o.no_stop, "with --on-sigma, keep integrating past the first return");
    sim->add_option("--tmax", o.tmax, "time horizon")->capture_default_str();
    sim->add_option("--out", o.out, "CSV path (default standard output)");
    sim->add_option("--svg", o.svg, "phase portrait SVG path");

    auto* rm = app.add_subcommand("return-map", "sample the first return map on [a_Z, a_Z + δ)");
    rm->add_option("--model", o.model, "model spec")->required();
    rm->add_option("--samples", o.samples, "number of samples")->capture_default_str();
    rm->add_flag("--geometric", o.geometric, "offsets δ·2^-n instead of a uniform grid");
    rm->add_option("--domain", o.domain, "fixed domain length δ (default: adaptive)");
    rm->add_option("--out", o.out, "CSV path (summary then goes to standard output)");
    rm->add_option("--svg", o.svg, "return map SVG path");

    auto* cl = app.add_subcommand("classify", "alpha, beta, BS/DSC case, landing order and detected cycles as JSON");
    cl->add_option("--model", o.model, "model spec")->required();
    cl->add_option("--samples", o.samples, "return map samples used for cycle detection");
    cl->add_option("--out", o.out, "JSON path");

    auto* bf = app.add_subcommand("bifurcate", "trace curves and classify a parameter grid");
    bf->add_option("--model", o.model, "model family spec; grid names override its parameters")->required();
    bf->add_option("--grid", o.grid, "name=lo:hi:n,name=lo:hi:n");
    bf->add_option("--curves", o.curves, "comma list of F, P1, PE, PE_tilde");
    bf->add_option("--out", o.out, "JSON path");

    auto* fx = app.add_subcommand("fixtures", "pendulum region fixtures and closed-form oracles");
    fx->add_option("--tolerance", o.tolerance, "override the tolerance on π values");
    fx->add_option("--only", o.only, "one fixture label, or 'oracles'");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kConfig;
    }

    try {
        if (*sim) return cmd_simulate(o, out, err);
        if (*rm) return cmd_return_map(o, out, err);
        if (*cl) return cmd_classify(o, out, err);
        if (*bf) return cmd_bifurcate(o, out, err);
        if (*fx) return cmd_fixtures(o, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        if (*sim && o.x0.empty()) err << sim->help();
        return kConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kConfig;
}

}  // namespace filippov
