#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "cg/airy.hpp"
#include "cg/descent.hpp"
#include "cg/errors.hpp"
#include "cg/exactdist.hpp"
#include "cg/lpp.hpp"
#include "cg/shape.hpp"
#include "cg/stats.hpp"
#include "cli/output.hpp"

namespace cgcli {

namespace fs = std::filesystem;
using cg::ConfigError;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> v;
    auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) v.push_back(lo + static_cast<double>(i) * step);
    return v;
}

fs::path out(const RunConfig& c, const char* name) { return fs::path(c.output.dir) / name; }

void need_geometric(const RunConfig& c) {
    if (c.model.kind != cg::ModelKind::Geometric) throw ConfigError(fmt::format("{} needs the geometric model", c.command));
}

std::pair<std::vector<double>, std::vector<double>> parameters(const RunConfig& c, std::size_t m, std::size_t n,
                                                               const std::vector<double>& a,
                                                               const std::vector<double>& b) {
    if (!a.empty()) return {a, b};
    auto s = cg::sample_sequences(c.model, m, n);
    return {s.a, s.b};
}

// JSON cannot hold NaN; map it to null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

int threads_from_env() {
    if (const char* e = std::getenv("CG_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(e, &end, 10);
        if (end != e && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
        throw ConfigError("CG_THREADS must be an integer in [1, 1024]");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

json run_simulate(const RunConfig& c, int) {
    const auto& cfg = c.simulate;
    const auto& M = c.model;
    auto level = cg::level_curve(M.kind, M.alpha, M.beta, cfg.level_points);
    double tmax = *std::max_element(cfg.times.begin(), cfg.times.end());
    std::size_t m = cfg.m, n = cfg.n;
    if (m == 0 || n == 0) {
        double xm = 0, ym = 0;
        for (auto& p : level) {
            xm = std::max(xm, p.x);
            ym = std::max(ym, p.y);
        }
        if (m == 0) m = static_cast<std::size_t>(std::ceil(1.15 * tmax * xm)) + 2;
        if (n == 0) n = static_cast<std::size_t>(std::ceil(1.15 * tmax * ym)) + 2;
    }
    if (static_cast<double>(m) * static_cast<double>(n) > 4e8)
        throw ConfigError(fmt::format("simulate grid {}x{} too large; lower the times or set m, n", m, n));
    auto seq = cg::sample_sequences(M, m, n);
    auto heights = cg::growth_heights_streaming(M, seq.a, seq.b, cfg.times);

    bool csv = c.output.wants("csv");
    if (csv && (cfg.write_field || cfg.write_weights)) {
        // the full matrices are only materialized on request
        auto W = cg::sample_weights(M, seq.a, seq.b);
        if (cfg.write_weights) {
            Csv w(out(c, "weights.csv"), {"i", "j", "w"});
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) w.row(i + 1, j + 1, W.w(i, j));
        }
        if (cfg.write_field) {
            auto f = cg::lpp_dp(W);
            Csv g(out(c, "field.csv"), {"i", "j", "G"});
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) g.row(i + 1, j + 1, f.G(i, j));
        }
    }

    json rays = json::array();
    std::vector<double> worst(cfg.times.size(), 0.0);
    if (csv) {
        Csv b(out(c, "boundary.csv"), {"t", "vertex_index", "x", "y"});
        for (std::size_t k = 0; k < cfg.times.size(); ++k) {
            auto st = cg::staircase(heights[k]);
            for (std::size_t v = 0; v < st.size(); ++v) b.row(cfg.times[k], v, st[v].x, st[v].y);
        }
        Csv l(out(c, "level.csv"), {"time", "theta", "x", "y"});
        for (double t : cfg.times)
            for (auto& p : level) l.row(t, p.theta, t * p.x, t * p.y);
    }
    {
        std::unique_ptr<Csv> r;
        if (csv) r = std::make_unique<Csv>(out(c, "rays.csv"), std::vector<std::string>{"time", "theta", "radius", "level_radius", "rel_error"});
        for (std::size_t k = 0; k < cfg.times.size(); ++k)
            for (int q = 0; q < cfg.rays; ++q) {
                double th = (q + 0.5) / cfg.rays * std::numbers::pi / 2;
                double g = cg::shape_eval(M.kind, M.alpha, M.beta, std::cos(th), std::sin(th)).g;
                double rl = cfg.times[k] / g, rs = cg::boundary_radius(heights[k], th);
                double e = std::abs(rs - rl) / rl;
                worst[k] = std::max(worst[k], e);
                if (r) r->row(cfg.times[k], th, rs, rl, e);
            }
    }
    if (c.output.wants("svg")) {
        double ext = 1.05 * static_cast<double>(std::max(m, n));
        Svg svg(0, ext, 0, ext, 600, 600);
        svg.axes("i", "j");
        for (std::size_t k = 0; k < cfg.times.size(); ++k) {
            std::vector<std::pair<double, double>> pts, lv;
            for (auto v : cg::staircase(heights[k])) pts.emplace_back(v.x, v.y);
            for (auto& p : level) lv.emplace_back(cfg.times[k] * p.x, cfg.times[k] * p.y);
            svg.polyline(pts, "#1f77b4", 1);
            svg.polyline(lv, "#d62728", 1.5, true);
        }
        svg.save(out(c, "simulate.svg"));
    }
    json per = json::array();
    for (std::size_t k = 0; k < cfg.times.size(); ++k) per.push_back({{"time", cfg.times[k]}, {"max_rel_error", worst[k]}});
    return {{"m", m}, {"n", n}, {"times", per}};
}

json run_shape(const RunConfig& c, int) {
    const auto& M = c.model;
    auto [c1, c2] = cg::critical_values(M.kind, M.alpha, M.beta);
    if (c.output.wants("csv")) {
        Csv s(out(c, "shape.csv"), {"theta", "s", "t", "g", "zeta", "c1", "c2", "sigma", "regime"});
        for (int k = 0; k < c.shape.directions; ++k) {
            double th = (k + 0.5) / c.shape.directions * std::numbers::pi / 2;
            auto e = cg::shape_eval(M.kind, M.alpha, M.beta, std::cos(th), std::sin(th));
            s.row(th, std::cos(th), std::sin(th), e.g, e.zeta, e.c1, e.c2, e.sigma, cg::to_string(e.regime));
        }
    }
    auto level = cg::level_curve(M.kind, M.alpha, M.beta, c.shape.level_points);
    if (c.output.wants("csv")) {
        Csv l(out(c, "level.csv"), {"theta", "x", "y"});
        for (auto& p : level) l.row(p.theta, p.x, p.y);
    }
    if (c.output.wants("svg")) {
        double ext = 0;
        std::vector<std::pair<double, double>> pts;
        for (auto& p : level) {
            pts.emplace_back(p.x, p.y);
            ext = std::max({ext, p.x, p.y});
        }
        Svg svg(0, 1.05 * ext, 0, 1.05 * ext, 600, 600);
        svg.axes("x", "y");
        svg.polyline(pts, "#d62728", 2);
        svg.save(out(c, "shape.svg"));
    }
    auto g11 = cg::shape_eval(M.kind, M.alpha, M.beta, 1, 1);
    return {{"c1", num(c1)}, {"c2", num(c2)}, {"g_1_1", num(g11.g)}, {"zeta_1_1", num(g11.zeta)}, {"sigma_1_1", num(g11.sigma)}};
}

json run_dist(const RunConfig& c, int threads) {
    need_geometric(c);
    const auto& d = c.dist;
    auto [a, b] = parameters(c, d.m, d.n, d.a, d.b);
    cg::KernelOptions opt;
    opt.rho = d.rho;
    opt.quad_nodes = d.quad_nodes;
    opt.tail_eps = d.tail_eps;
    std::vector<cg::DistEval> rows;
    bool all = d.method == "all";
    if (all || d.method == "series") {
        auto ctx = cg::make_kernel_context(a, b, opt);
        auto r = cg::cdf_fredholm_range(ctx, d.kmin, d.kmax);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (all || d.method == "det") {
        if (a.size() != b.size()) throw ConfigError("dist.method det needs m == n");
        for (long long k = d.kmin; k <= d.kmax; ++k) rows.push_back(cg::cdf_det_form(a, b, k));
    }
    if (all || d.method == "mc") {
        std::vector<long long> ks;
        for (long long k = d.kmin; k <= d.kmax; ++k) ks.push_back(k);
        auto mc = cg::cdf_monte_carlo(a, b, ks, d.replicas, c.model.seed, threads);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            cg::DistEval e;
            e.k = ks[i];
            e.cdf = mc.cdf[i];
            e.est_error = mc.stderr_[i];
            e.method = "mc";
            rows.push_back(e);
        }
    }
    if (c.output.wants("csv")) {
        Csv f(out(c, "dist.csv"), {"k", "cdf", "method", "est_error", "warning"});
        for (auto& r : rows) f.row(r.k, r.cdf, r.method, r.est_error, r.warning);
    }
    if (c.output.wants("svg")) {
        Svg svg(static_cast<double>(d.kmin), static_cast<double>(d.kmax), 0, 1);
        svg.axes("k", "P(G <= k)");
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
        std::vector<std::string> methods;
        for (auto& r : rows)
            if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        for (std::size_t q = 0; q < methods.size(); ++q) {
            std::vector<std::pair<double, double>> pts;
            for (auto& r : rows)
                if (r.method == methods[q]) pts.emplace_back(static_cast<double>(r.k), r.cdf);
            svg.polyline(pts, colors[q % 4], 1.5, q > 0);
            svg.label(static_cast<double>(d.kmin) + 0.05 * static_cast<double>(d.kmax - d.kmin), 0.95 - 0.06 * q, methods[q]);
        }
        svg.save(out(c, "dist.svg"));
    }
    json methods = json::object();
    for (auto& r : rows) methods[r.method] = true;
    return {{"m", a.size()}, {"n", b.size()}, {"rows", rows.size()}, {"methods", methods}};
}

FluctReport fluct_report(const cg::ModelSpec& model, const FluctCfg& cfg, int threads) {
    if (model.kind != cg::ModelKind::Geometric) throw ConfigError("fluct needs the geometric model");
    auto [c1, c2] = cg::critical_values(model.kind, model.alpha, model.beta);
    if (!(c1 < cfg.r && cfg.r < c2))
        throw ConfigError(fmt::format("direction r = {} outside the strictly concave cone (c1 = {}, c2 = {})", cfg.r, c1, c2));
    FluctReport rep;
    auto ss = grid(cfg.smin, cfg.smax, cfg.ds);
    std::vector<double> sp;
    for (double s : ss)
        if (s <= 10) sp.push_back(s);
    auto pv = cg::tw_gue_painleve(sp);
    std::vector<double> F(ss.size());
    for (std::size_t i = 0; i < ss.size(); ++i) F[i] = i < pv.size() ? pv[i].F : cg::tw_gue_fredholm(ss[i]).F;

    cg::KernelOptions opt;
    opt.quad_nodes = cfg.quad_nodes;
    opt.tail_eps = cfg.tail_eps;
    for (std::size_t n : cfg.ns) {
        auto m = static_cast<std::size_t>(std::max(1.0, std::round(cfg.r * static_cast<double>(n))));
        auto seq = cg::sample_sequences(model, m, n);
        auto ctx = cg::make_kernel_context(seq.a, seq.b, opt);
        cg::EmpiricalShape e{ctx.gamma, ctx.zeta, ctx.sigma, m, n};
        std::vector<long long> ks;
        for (double s : ss) ks.push_back(cg::scaling_index(e, s));
        long long lo = std::max(0LL, *std::min_element(ks.begin(), ks.end()));
        long long hi = *std::max_element(ks.begin(), ks.end());
        std::vector<double> cdf(ks.size(), 0.0);
        if (hi >= 0) {
            auto r = cg::cdf_fredholm_range(ctx, lo, hi);
            for (std::size_t i = 0; i < ks.size(); ++i)
                if (ks[i] >= 0) cdf[i] = r[static_cast<std::size_t>(ks[i] - lo)].cdf;
        }
        double sup = 0;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            rep.rows.push_back({n, ctx.gamma, ctx.sigma, ss[i], ks[i], cdf[i], F[i]});
            sup = std::max(sup, std::abs(cdf[i] - F[i]));
        }
        rep.ns.push_back(n);
        rep.sup_distance.push_back(sup);
    }
    for (std::size_t i = 1; i < rep.sup_distance.size(); ++i)
        if (rep.sup_distance[i] > rep.sup_distance[i - 1]) rep.monotone = false;

    if (cfg.replicas > 0) {
        std::size_t n = cfg.tail_n;
        auto m = static_cast<std::size_t>(std::max(1.0, std::round(cfg.r * static_cast<double>(n))));
        auto seq = cg::sample_sequences(model, m, n);
        auto e = cg::empirical_shape(seq.a, seq.b);
        double nn = static_cast<double>(n);
        std::vector<long long> ks;
        for (double s : cfg.tail_s) ks.push_back(static_cast<long long>(std::ceil(nn * e.gamma + nn * s)) - 1);
        auto mc = cg::cdf_monte_carlo(seq.a, seq.b, ks, cfg.replicas, model.seed, threads);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            TailRow t;
            t.s = cfg.tail_s[i];
            t.k = ks[i] + 1;
            t.prob = 1 - mc.cdf[i];
            t.exceedances = static_cast<std::size_t>(std::llround(t.prob * static_cast<double>(cfg.replicas)));
            t.x = nn * std::min(std::pow(t.s, 1.5), t.s);
            // fewer than 10 events gives no usable log estimate
            t.used = t.exceedances >= 10;
            if (t.used) {
                xs.push_back(t.x);
                ys.push_back(std::log(t.prob));
            }
            rep.tail.push_back(t);
        }
        rep.tail_points = xs.size();
        if (xs.size() >= 2) {
            auto f = cg::linear_fit(xs, ys);
            rep.tail_slope = f.slope;
            rep.tail_intercept = f.intercept;
            rep.tail_r2 = f.r2;
        } else {
            rep.tail_slope = rep.tail_intercept = rep.tail_r2 = kNaN;
        }
    }
    return rep;
}

json run_fluct(const RunConfig& c, int threads) {
    auto rep = fluct_report(c.model, c.fluct, threads);
    if (c.output.wants("csv")) {
        Csv f(out(c, "fluct.csv"), {"n", "gamma", "sigma", "s", "k", "cdf", "tw", "abs_diff"});
        for (auto& r : rep.rows) f.row(r.n, r.gamma, r.sigma, r.s, r.k, r.cdf, r.tw, std::abs(r.cdf - r.tw));
        Csv s(out(c, "fluct_summary.csv"), {"n", "sup_distance"});
        for (std::size_t i = 0; i < rep.ns.size(); ++i) s.row(rep.ns[i], rep.sup_distance[i]);
        if (!rep.tail.empty()) {
            Csv t(out(c, "tail.csv"), {"s", "k", "exceed_prob", "exceedances", "x", "log_prob", "used"});
            for (auto& r : rep.tail)
                t.row(r.s, r.k, r.prob, r.exceedances, r.x, r.prob > 0 ? std::log(r.prob) : -std::numeric_limits<double>::infinity(),
                      r.used ? 1 : 0);
        }
    }
    if (c.output.wants("svg")) {
        Svg svg(c.fluct.smin, c.fluct.smax, 0, 1);
        svg.axes("s", "CDF");
        std::vector<std::pair<double, double>> tw;
        const char* colors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};
        for (std::size_t q = 0; q < rep.ns.size(); ++q) {
            std::vector<std::pair<double, double>> pts;
            for (auto& r : rep.rows)
                if (r.n == rep.ns[q]) {
                    pts.emplace_back(r.s, r.cdf);
                    if (q == 0) tw.emplace_back(r.s, r.tw);
                }
            svg.polyline(pts, colors[q % 4], 1.2);
            svg.label(c.fluct.smin + 0.05 * (c.fluct.smax - c.fluct.smin), 0.95 - 0.06 * q, fmt::format("n = {}", rep.ns[q]));
        }
        svg.polyline(tw, "#d62728", 2, true);
        svg.save(out(c, "fluct.svg"));
    }
    json sup = json::array();
    for (std::size_t i = 0; i < rep.ns.size(); ++i) sup.push_back({{"n", rep.ns[i]}, {"sup_distance", rep.sup_distance[i]}});
    json j{{"sup_distance", sup}, {"monotone", rep.monotone}};
    if (!rep.tail.empty())
        j["tail_fit"] = {{"slope", num(rep.tail_slope)}, {"intercept", num(rep.tail_intercept)}, {"r2", num(rep.tail_r2)},
                         {"points", rep.tail_points}};
    return j;
}

json run_tw(const RunConfig& c, int) {
    const auto& t = c.tw;
    auto ss = grid(t.smin, t.smax, t.ds);
    std::vector<double> fr(ss.size(), kNaN), pl(ss.size(), kNaN), fre(ss.size(), kNaN), ple(ss.size(), kNaN);
    bool dof = t.method != "painleve", dop = t.method != "fredholm";
    if (dof)
        for (std::size_t i = 0; i < ss.size(); ++i) {
            auto e = cg::tw_gue_fredholm(ss[i]);
            fr[i] = e.F;
            fre[i] = e.est_error;
        }
    if (dop) {
        std::vector<double> sp;
        for (double s : ss)
            if (s <= t.t0) sp.push_back(s);
        auto pv = cg::tw_gue_painleve(sp, t.t0);
        for (std::size_t i = 0; i < pv.size(); ++i) {
            pl[i] = pv[i].F;
            ple[i] = pv[i].est_error;
        }
        // beyond t0 the tail is below rounding
        for (std::size_t i = pv.size(); i < ss.size(); ++i) pl[i] = 1.0, ple[i] = 0.0;
    }
    double worst = 0;
    for (std::size_t i = 0; i < ss.size(); ++i)
        if (dof && dop) worst = std::max(worst, std::abs(fr[i] - pl[i]));
    if (c.output.wants("csv")) {
        Csv f(out(c, "tw.csv"), {"s", "F", "method", "est_error"});
        for (std::size_t i = 0; i < ss.size(); ++i) {
            if (dof) f.row(ss[i], fr[i], "fredholm", fre[i]);
            if (dop) f.row(ss[i], pl[i], "painleve", ple[i]);
        }
    }
    if (c.output.wants("svg")) {
        Svg svg(t.smin, t.smax, 0, 1);
        svg.axes("s", "F(s)");
        std::vector<std::pair<double, double>> a, b;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            if (dof) a.emplace_back(ss[i], fr[i]);
            if (dop) b.emplace_back(ss[i], pl[i]);
        }
        svg.polyline(a, "#1f77b4", 2);
        svg.polyline(b, "#d62728", 1.5, true);
        svg.save(out(c, "tw.svg"));
    }
    return {{"points", ss.size()}, {"max_abs_diff", (dof && dop) ? json(worst) : json(nullptr)}};
}

json run_trace(const RunConfig& c, int) {
    need_geometric(c);
    const auto& t = c.trace;
    auto [a, b] = parameters(c, t.m, t.n, t.a, t.b);
    auto af = cg::make_action(a, b);
    cg::TraceOptions opt;
    opt.delta = t.delta;
    opt.dv_tol = t.dv_tol;
    auto phi = cg::trace_phi(af, cg::TraceDirection::Descent, opt);
    cg::TracedContour psi;
    if (t.ascent) psi = cg::trace_phi(af, cg::TraceDirection::Ascent, opt);
    auto zeros = cg::locate_zeros(af);
    double vmax = 0;
    for (auto z : phi.z) vmax = std::max(vmax, std::abs(af.v(z)));

    if (c.output.wants("csv")) {
        Csv f(out(c, "trace.csv"), {"curve", "t", "re", "im", "u", "v"});
        auto dump = [&](const char* name, const cg::TracedContour& tc) {
            for (std::size_t i = 0; i < tc.z.size(); ++i) f.row(name, tc.t[i], tc.z[i].real(), tc.z[i].imag(), af.u(tc.z[i]), af.v(tc.z[i]));
        };
        dump("phi", phi);
        if (t.ascent) dump("psi", psi);
        Csv p(out(c, "points.csv"), {"kind", "re", "im"});
        for (double x : af.a_distinct) p.row("pole_a", x, 0.0);
        for (double x : af.b_distinct) p.row("pole_inv_b", 1 / x, 0.0);
        for (double z : zeros) p.row("zero", z, 0.0);
    }
    if (c.output.wants("svg")) {
        double ext = 1.2 * af.zeta;
        for (double x : af.b_distinct) ext = std::max(ext, std::min(1.1 / x, 3 * af.zeta));
        Svg svg(-0.3 * ext, ext, -0.65 * ext, 0.65 * ext, 640, 480);
        svg.axes("Re z", "Im z");
        std::vector<std::pair<double, double>> up, lo, as, arc;
        for (auto z : phi.z) {
            up.emplace_back(z.real(), z.imag());
            lo.emplace_back(z.real(), -z.imag());
        }
        for (auto z : psi.z)
            if (std::abs(z) <= 1.5 * ext) as.emplace_back(z.real(), z.imag());
        for (int k = 0; k <= 180; ++k) {
            double th = std::arg(phi.z.back()) + (2 * std::numbers::pi - 2 * std::arg(phi.z.back())) * k / 180;
            arc.emplace_back(phi.delta * std::cos(th), phi.delta * std::sin(th));
        }
        svg.polyline(up, "#1f77b4", 2);
        svg.polyline(lo, "#1f77b4", 2);
        svg.polyline(arc, "#1f77b4", 1.5, true);
        if (!as.empty()) svg.polyline(as, "#ff7f0e", 1.5, true);
        for (double x : af.a_distinct) svg.cross(x, 0, "#d62728");
        for (double x : af.b_distinct)
            if (1 / x <= ext) svg.cross(1 / x, 0, "#9467bd");
        for (double z : zeros) svg.dot(z, 0, "#2ca02c");
        svg.save(out(c, "trace.svg"));
    }
    return {{"zeta", af.zeta},
            {"gamma", af.gamma},
            {"sigma", af.sigma},
            {"phi_points", phi.z.size()},
            {"phi_status", cg::to_string(phi.status)},
            {"max_abs_v", vmax},
            {"zeros", zeros.size()}};
}

json run(const RunConfig& cfg, int threads) {
    std::error_code ec;
    fs::create_directories(cfg.output.dir, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory {}: {}", cfg.output.dir, ec.message()));
    {
        std::ofstream r(fs::path(cfg.output.dir) / "resolved_config.json");
        r << resolved(cfg).dump(2) << '\n';
    }
    json summary;
    if (cfg.command == "simulate") summary = run_simulate(cfg, threads);
    else if (cfg.command == "shape") summary = run_shape(cfg, threads);
    else if (cfg.command == "dist") summary = run_dist(cfg, threads);
    else if (cfg.command == "fluct") summary = run_fluct(cfg, threads);
    else if (cfg.command == "tw") summary = run_tw(cfg, threads);
    else summary = run_trace(cfg, threads);
    if (cfg.output.wants("json")) {
        std::ofstream s(fs::path(cfg.output.dir) / "summary.json");
        s << json{{"command", cfg.command}, {"result", summary}}.dump(2) << '\n';
    }
    return summary;
}

} // namespace cgcli
