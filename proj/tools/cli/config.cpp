#include "cli/config.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "cg/errors.hpp"

namespace cgcli {

using cg::ConfigError;

namespace {

// Reads keys from one object and rejects whatever is left over.
class Section {
public:
    Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(fmt::format("{}: expected an object", where_));
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(fmt::format("{}.{}: wrong type", where_, key));
        }
    }

    const json* raw(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(fmt::format("{}: unknown key '{}'", where_, it.key()));
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

std::vector<double> numbers(const json& v, const char* what, std::size_t count) {
    if (!v.is_array() || v.size() != count)
        throw ConfigError(fmt::format("law '{}' expects an array of {} numbers", what, count));
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(fmt::format("law '{}' expects numbers", what));
        out.push_back(x.get<double>());
    }
    return out;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

cg::ParamLaw law_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1) throw ConfigError("a law is an object with exactly one key");
    const auto& [key, v] = *j.items().begin();
    if (key == "point") {
        if (!v.is_number()) throw ConfigError("law 'point' expects a number");
        return cg::ParamLaw::point(v.get<double>());
    }
    if (key == "uniform") {
        auto x = numbers(v, "uniform", 2);
        return cg::ParamLaw::uniform(x[0], x[1]);
    }
    if (key == "power" || key == "power_origin") {
        auto x = numbers(v, key.c_str(), 3);
        return cg::ParamLaw::power(x[0], x[1], x[2], key == "power_origin");
    }
    if (key == "reciprocal") {
        auto x = numbers(v, "reciprocal", 2);
        return cg::ParamLaw::reciprocal(x[0], x[1]);
    }
    if (key == "atoms") {
        if (!v.is_array() || v.empty()) throw ConfigError("law 'atoms' expects a nonempty array of [value, weight]");
        std::vector<std::pair<double, double>> a;
        for (const auto& e : v) {
            auto x = numbers(e, "atoms", 2);
            a.emplace_back(x[0], x[1]);
        }
        return cg::ParamLaw::atoms(std::move(a));
    }
    throw ConfigError(fmt::format("unknown law '{}'", key));
}

json law_to_json(const cg::ParamLaw& law) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, cg::PointMass>) return {{"point", d.v}};
            else if constexpr (std::is_same_v<T, cg::Uniform>) return {{"uniform", {d.lo, d.hi}}};
            else if constexpr (std::is_same_v<T, cg::PowerDensity>)
                return {{d.origin ? "power_origin" : "power", {d.p, d.lo, d.hi}}};
            else if constexpr (std::is_same_v<T, cg::Reciprocal>) return {{"reciprocal", {d.lo, d.hi}}};
            else {
                json a = json::array();
                for (auto [v, w] : d.atoms) a.push_back({v, w});
                return {{"atoms", a}};
            }
        },
        law.variant());
}

cg::ModelSpec model_from_json(const json& j) {
    Section s(j, "model");
    cg::ModelSpec m;
    std::string kind = "geometric";
    s.get("kind", kind);
    if (kind == "geometric") m.kind = cg::ModelKind::Geometric;
    else if (kind == "exponential") m.kind = cg::ModelKind::Exponential;
    else throw ConfigError(fmt::format("model.kind: unknown kind '{}'", kind));
    if (auto* a = s.raw("alpha")) m.alpha = law_from_json(*a);
    if (auto* b = s.raw("beta")) m.beta = law_from_json(*b);
    s.get("seed", m.seed);
    if (auto* z = s.raw("z"); z && !z->is_null()) {
        if (!z->is_number()) throw ConfigError("model.z: expected a number or null");
        m.boundary_z = z->get<double>();
    }
    s.get("allow_degenerate", m.allow_degenerate);
    s.finish();
    m.validate();
    return m;
}

json model_to_json(const cg::ModelSpec& m) {
    return {{"kind", cg::to_string(m.kind)},
            {"alpha", law_to_json(m.alpha)},
            {"beta", law_to_json(m.beta)},
            {"seed", m.seed},
            {"z", m.boundary_z ? json(*m.boundary_z) : json(nullptr)},
            {"allow_degenerate", m.allow_degenerate}};
}

bool OutputCfg::wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

namespace {

void read(const json& j, OutputCfg& c) {
    Section s(j, "output");
    s.get("dir", c.dir);
    s.get("formats", c.formats);
    s.finish();
    for (const auto& f : c.formats)
        require(f == "csv" || f == "svg" || f == "json", fmt::format("output.formats: unknown format '{}'", f));
}

void read(const json& j, SimulateCfg& c) {
    Section s(j, "simulate");
    s.get("m", c.m);
    s.get("n", c.n);
    s.get("times", c.times);
    s.get("level_points", c.level_points);
    s.get("rays", c.rays);
    s.get("write_field", c.write_field);
    s.get("write_weights", c.write_weights);
    s.finish();
    require(!(c.write_field || c.write_weights) || static_cast<double>(c.m) * static_cast<double>(c.n) > 0,
            "simulate.write_field and write_weights need explicit m and n");
    require(!c.times.empty(), "simulate.times must be nonempty");
    for (double t : c.times) require(t > 0, "simulate.times must be positive");
    require(c.level_points >= 8, "simulate.level_points must be >= 8");
    require(c.rays >= 1, "simulate.rays must be >= 1");
}

void read(const json& j, ShapeCfg& c) {
    Section s(j, "shape");
    s.get("directions", c.directions);
    s.get("level_points", c.level_points);
    s.finish();
    require(c.directions >= 1, "shape.directions must be >= 1");
    require(c.level_points >= 8, "shape.level_points must be >= 8");
}

void read(const json& j, DistCfg& c) {
    Section s(j, "dist");
    s.get("m", c.m);
    s.get("n", c.n);
    s.get("a", c.a);
    s.get("b", c.b);
    s.get("kmin", c.kmin);
    s.get("kmax", c.kmax);
    s.get("method", c.method);
    s.get("replicas", c.replicas);
    s.get("rho", c.rho);
    s.get("quad_nodes", c.quad_nodes);
    s.get("tail_eps", c.tail_eps);
    s.finish();
    require(c.m >= 1 && c.n >= 1, "dist.m and dist.n must be >= 1");
    require(0 <= c.kmin && c.kmin <= c.kmax, "dist needs 0 <= kmin <= kmax");
    require(c.method == "series" || c.method == "det" || c.method == "mc" || c.method == "all",
            "dist.method must be series, det, mc or all");
    require(c.a.empty() == c.b.empty(), "dist.a and dist.b go together");
}

void read(const json& j, FluctCfg& c) {
    Section s(j, "fluct");
    s.get("ns", c.ns);
    s.get("r", c.r);
    s.get("smin", c.smin);
    s.get("smax", c.smax);
    s.get("ds", c.ds);
    s.get("replicas", c.replicas);
    s.get("tail_n", c.tail_n);
    s.get("tail_s", c.tail_s);
    s.get("quad_nodes", c.quad_nodes);
    s.get("tail_eps", c.tail_eps);
    s.finish();
    require(!c.ns.empty(), "fluct.ns must be nonempty");
    require(c.r > 0, "fluct.r must be positive");
    require(c.smin <= c.smax && c.ds > 0, "fluct needs smin <= smax and ds > 0");
}

void read(const json& j, TwCfg& c) {
    Section s(j, "tw");
    s.get("smin", c.smin);
    s.get("smax", c.smax);
    s.get("ds", c.ds);
    s.get("method", c.method);
    s.get("t0", c.t0);
    s.finish();
    require(c.smin <= c.smax && c.ds > 0, "tw needs smin <= smax and ds > 0");
    require(c.method == "fredholm" || c.method == "painleve" || c.method == "both",
            "tw.method must be fredholm, painleve or both");
}

void read(const json& j, TraceCfg& c) {
    Section s(j, "trace");
    s.get("m", c.m);
    s.get("n", c.n);
    s.get("a", c.a);
    s.get("b", c.b);
    s.get("delta", c.delta);
    s.get("dv_tol", c.dv_tol);
    s.get("ascent", c.ascent);
    s.finish();
    require(c.m >= 1 && c.n >= 1, "trace.m and trace.n must be >= 1");
    require(c.a.empty() == c.b.empty(), "trace.a and trace.b go together");
    require(c.dv_tol > 0, "trace.dv_tol must be positive");
}

json section(const RunConfig& c) {
    if (c.command == "simulate")
        return {{"m", c.simulate.m}, {"n", c.simulate.n}, {"times", c.simulate.times},
                {"level_points", c.simulate.level_points}, {"rays", c.simulate.rays},
                {"write_field", c.simulate.write_field}, {"write_weights", c.simulate.write_weights}};
    if (c.command == "shape") return {{"directions", c.shape.directions}, {"level_points", c.shape.level_points}};
    if (c.command == "dist")
        return {{"m", c.dist.m},           {"n", c.dist.n},         {"a", c.dist.a},
                {"b", c.dist.b},           {"kmin", c.dist.kmin},   {"kmax", c.dist.kmax},
                {"method", c.dist.method}, {"replicas", c.dist.replicas}, {"rho", c.dist.rho},
                {"quad_nodes", c.dist.quad_nodes}, {"tail_eps", c.dist.tail_eps}};
    if (c.command == "fluct")
        return {{"ns", c.fluct.ns},       {"r", c.fluct.r},         {"smin", c.fluct.smin},
                {"smax", c.fluct.smax},   {"ds", c.fluct.ds},       {"replicas", c.fluct.replicas},
                {"tail_n", c.fluct.tail_n}, {"tail_s", c.fluct.tail_s}, {"quad_nodes", c.fluct.quad_nodes},
                {"tail_eps", c.fluct.tail_eps}};
    if (c.command == "tw")
        return {{"smin", c.tw.smin}, {"smax", c.tw.smax}, {"ds", c.tw.ds}, {"method", c.tw.method}, {"t0", c.tw.t0}};
    return {{"m", c.trace.m},         {"n", c.trace.n},           {"a", c.trace.a},          {"b", c.trace.b},
            {"delta", c.trace.delta}, {"dv_tol", c.trace.dv_tol}, {"ascent", c.trace.ascent}};
}

} // namespace

RunConfig parse_config(const json& doc, const std::string& command) {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw ConfigError(fmt::format("unknown command '{}'", command));
    RunConfig c;
    c.command = command;
    Section s(doc, "config");
    if (auto* m = s.raw("model")) c.model = model_from_json(*m);
    else c.model.validate();
    if (auto* o = s.raw("output")) read(*o, c.output);
    if (auto* j = s.raw("simulate")) read(*j, c.simulate);
    if (auto* j = s.raw("shape")) read(*j, c.shape);
    if (auto* j = s.raw("dist")) read(*j, c.dist);
    if (auto* j = s.raw("fluct")) read(*j, c.fluct);
    if (auto* j = s.raw("tw")) read(*j, c.tw);
    if (auto* j = s.raw("trace")) read(*j, c.trace);
    s.finish();
    return c;
}

json resolved(const RunConfig& c) {
    return {{"model", model_to_json(c.model)},
            {"output", {{"dir", c.output.dir}, {"formats", c.output.formats}}},
            {c.command, section(c)}};
}

} // namespace cgcli
