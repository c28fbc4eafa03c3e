#include "idlab/config.hpp"

#include "idlab/error.hpp"

#include <cmath>

namespace idlab {

using nlohmann::json;

ConfigNode::ConfigNode(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {}

void ConfigNode::fail(const std::string& what) const { throw ConfigError(path_, what); }

bool ConfigNode::has(const std::string& key) const { return j_.is_object() && j_.contains(key) && !j_[key].is_null(); }

ConfigNode ConfigNode::at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!has(key)) throw ConfigError(path_ + "." + key, "missing required field");
    return {j_[key], path_ + "." + key};
}

ConfigNode ConfigNode::at(std::size_t i) const {
    if (!j_.is_array()) fail("expected an array");
    if (i >= j_.size()) fail("expected at least " + std::to_string(i + 1) + " elements");
    return {j_[i], path_ + "[" + std::to_string(i) + "]"};
}

std::size_t ConfigNode::size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
}

double ConfigNode::number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
}

int ConfigNode::integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
}

bool ConfigNode::boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
}

std::string ConfigNode::string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
}

std::vector<double> ConfigNode::numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
    return out;
}

double ConfigNode::number(const std::string& key, std::optional<double> fallback) const {
    if (!has(key) && fallback) return *fallback;
    return at(key).number();
}

int ConfigNode::integer(const std::string& key, std::optional<int> fallback) const {
    if (!has(key) && fallback) return *fallback;
    return at(key).integer();
}

bool ConfigNode::boolean(const std::string& key, std::optional<bool> fallback) const {
    if (!has(key) && fallback) return *fallback;
    return at(key).boolean();
}

std::string ConfigNode::string(const std::string& key, std::optional<std::string> fallback) const {
    if (!has(key) && fallback) return *fallback;
    return at(key).string();
}

std::vector<double> ConfigNode::numbers(const std::string& key, std::optional<std::vector<double>> fallback) const {
    if (!has(key) && fallback) return *fallback;
    return at(key).numbers();
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", origin + ": invalid JSON (" + e.what() + ")");
    }
}

namespace {

ValueRange parse_range(const ConfigNode& parent, ValueRange fallback) {
    if (!parent.has("range")) return fallback;
    const ConfigNode r = parent.at("range");
    if (r.size() != 2) r.fail("expected [lo, hi]");
    const ValueRange out{r.at(0).number(), r.at(1).number()};
    if (!(out.lo < out.hi)) r.fail("expected lo < hi");
    return out;
}

template <class F>
auto guarded(const ConfigNode& node, F&& f) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw ConfigError(node.path(), e.what());
    }
}

} // namespace

DomainConfig parse_domain(const ConfigNode& node) {
    DomainConfig c;
    Domain& d = c.domain;
    d.dim = node.at("dim").integer();
    if (d.dim != 2 && d.dim != 3) node.at("dim").fail("expected 2 or 3");
    const ConfigNode xb = node.at("xbar");
    if (xb.size() != static_cast<std::size_t>(d.dim)) xb.fail("expected " + std::to_string(d.dim) + " coordinates");
    d.xbar = {xb.at(0).number(), xb.at(1).number(), d.dim == 3 ? xb.at(2).number() : 0.0};
    d.eps0 = node.at("eps0").number();
    if (!(d.eps0 > 0.0)) node.at("eps0").fail("expected eps0 > 0");
    d.T = node.at("T").number();
    if (!(d.T > 0.0)) node.at("T").fail("expected T > 0");
    c.n_cells = node.integer("n_cells", 32);
    if (c.n_cells < 8) node.at("n_cells").fail("expected n_cells >= 8");
    if (node.has("bc_labels")) {
        const ConfigNode bc = node.at("bc_labels");
        if (bc.size() != 4) bc.fail("expected four labels (bottom, right, top, left)");
        for (std::size_t e = 0; e < 4; ++e) {
            const std::string s = bc.at(e).string();
            if (s == "dirichlet") {
                d.bc[e] = BoundaryKind::Dirichlet;
            } else if (s == "neumann") {
                d.bc[e] = BoundaryKind::Neumann;
            } else {
                bc.at(e).fail("expected \"dirichlet\" or \"neumann\"");
            }
        }
    }
    guarded(node, [&] {
        d.validate();
        return 0;
    });
    return c;
}

CoefficientSet parse_coefficients(const ConfigNode& node) {
    if (node.json().is_string()) {
        return guarded(node, [&] { return preset_by_name(node.string()); });
    }
    const std::string preset = node.at("preset").string();
    CoefficientSet c = guarded(node, [&] {
        if (preset == "constant") return constant_preset(node.number("value", 1.0), parse_range(node, {}));
        if (preset == "affine") {
            return affine_preset(node.number("alpha", 1.0), node.number("beta", 1.0), parse_range(node, {}));
        }
        if (preset == "bioheat") {
            BioheatParams p;
            p.kappa = node.number("kappa", p.kappa);
            p.c_b = node.number("c_b", p.c_b);
            p.u_b = node.number("u_b", p.u_b);
            return bioheat_preset(p);
        }
        if (preset == "chemotaxis") {
            ChemotaxisParams p;
            p.diffusion = node.number("diffusion", p.diffusion);
            p.chi = node.number("chi", p.chi);
            p.h_scale = node.number("h_scale", p.h_scale);
            return chemotaxis_preset(p);
        }
        if (preset == "table") {
            return table_preset(node.numbers("u_knots"), node.numbers("values"),
                                node.numbers("t_knots", std::vector<double>{}));
        }
        node.at("preset").fail("unknown preset '" + preset +
                               "' (expected constant, affine, bioheat, chemotaxis or table)");
    });
    if (node.has("lower_order")) {
        const ConfigNode lo = node.at("lower_order");
        LowerOrderTerms t;
        if (lo.has("b")) {
            const ConfigNode b = lo.at("b");
            if (b.size() != 2) b.fail("expected [bx, by]");
            t.b = {b.at(0).number(), b.at(1).number(), 0.0};
        }
        t.c0 = lo.number("c0", 0.0);
        t.c1 = lo.number("c1", 0.0);
        t.d_scale = lo.number("d_scale", 1.0);
        if (!(t.d_scale > 0.0)) lo.at("d_scale").fail("expected d_scale > 0");
        c = with_lower_order(std::move(c), t);
    }
    return c;
}

NonlinearControls parse_controls(const ConfigNode& node) {
    NonlinearControls c;
    c.tol = node.number("tol", c.tol);
    c.max_iter = node.integer("max_iter", c.max_iter);
    c.abs_floor = node.number("abs_floor", c.abs_floor);
    c.linear_tol = node.number("linear_tol", c.linear_tol);
    if (!(c.tol > 0.0)) node.at("tol").fail("expected tol > 0");
    if (c.max_iter < 1) node.at("max_iter").fail("expected max_iter >= 1");
    return c;
}

ParamA parse_param(const ConfigNode& node) {
    ParamA a;
    a.lo = node.number("lo", 0.0);
    a.hi = node.number("hi", 1.0);
    a.values = node.numbers("values");
    a.t_knots = node.numbers("t_knots", std::vector<double>{});
    a.a_lo = node.number("a_lo", a.a_lo);
    guarded(node, [&] {
        a.validate();
        return 0;
    });
    return a;
}

json to_json(const ParamA& a) {
    json j{{"lo", a.lo}, {"hi", a.hi}, {"values", a.values}, {"a_lo", a.a_lo}};
    if (!a.t_knots.empty()) j["t_knots"] = a.t_knots;
    return j;
}

std::function<double(Point)> parse_initial_value(const ConfigNode& parent, const std::string& key) {
    if (!parent.has(key)) return nullptr;
    const ConfigNode n = parent.at(key);
    if (n.json().is_number()) {
        const double v = n.number();
        return [v](Point) { return v; };
    }
    const double base = n.number("base", 0.0), amp = n.number("amplitude");
    return [base, amp](Point x) {
        constexpr double pi = 3.14159265358979323846;
        return base + amp * std::sin(pi * x.x) * std::sin(pi * x.y);
    };
}

json to_json(const MeasurementSet& ms) {
    json data = json::array();
    for (const DatumSpec& d : ms.data) data.push_back({{"eps", d.eps}, {"g1", d.g1}, {"g2", d.g2}});
    const Domain& d = ms.domain;
    return {{"domain",
             {{"dim", d.dim}, {"xbar", {d.xbar.x, d.xbar.y}}, {"eps0", d.eps0}, {"T", d.T}, {"n_cells", ms.inversion_cells}}},
            {"window", {ms.window.t1, ms.window.t2}},
            {"range", {ms.range.lo, ms.range.hi}},
            {"data", data},
            {"phi_battery_size", ms.phi_battery_size},
            {"pairings", ms.pairings},
            {"noise", ms.noise},
            {"seed", ms.seed},
            {"synthesis", {{"cells", ms.synthesis_cells}, {"tau", ms.synthesis_tau}}},
            {"inversion", {{"cells", ms.inversion_cells}, {"tau", ms.inversion_tau}}},
            {"inverse_crime", ms.inverse_crime},
            {"truth", ms.truth},
            {"warnings", ms.warnings}};
}

MeasurementSet parse_measurements(const ConfigNode& node) {
    MeasurementSet ms;
    ms.domain = parse_domain(node.at("domain")).domain;
    const ConfigNode w = node.at("window");
    ms.window = {w.at(0).number(), w.at(1).number()};
    const ConfigNode r = node.at("range");
    ms.range = {r.at(0).number(), r.at(1).number()};
    const ConfigNode data = node.at("data");
    for (std::size_t i = 0; i < data.size(); ++i) {
        const ConfigNode e = data.at(i);
        ms.data.push_back({e.number("eps"), e.number("g1"), e.number("g2")});
    }
    ms.phi_battery_size = static_cast<std::size_t>(node.integer("phi_battery_size", 8));
    const ConfigNode p = node.at("pairings");
    if (p.size() != ms.data.size()) p.fail("expected one row per datum");
    for (std::size_t i = 0; i < p.size(); ++i) {
        ms.pairings.push_back(p.at(i).numbers());
        if (ms.pairings.back().size() != ms.phi_battery_size) p.at(i).fail("expected phi_battery_size entries");
    }
    ms.noise = node.number("noise", 0.0);
    ms.seed = static_cast<std::uint64_t>(node.integer("seed", 0));
    const ConfigNode syn = node.at("synthesis"), inv = node.at("inversion");
    ms.synthesis_cells = syn.integer("cells");
    ms.synthesis_tau = syn.number("tau");
    ms.inversion_cells = inv.integer("cells");
    ms.inversion_tau = inv.number("tau");
    ms.inverse_crime = node.boolean("inverse_crime", false);
    ms.truth = node.string("truth", "");
    if (node.has("warnings")) {
        const ConfigNode wn = node.at("warnings");
        for (std::size_t i = 0; i < wn.size(); ++i) ms.warnings.push_back(wn.at(i).string());
    }
    return ms;
}

} // namespace idlab
