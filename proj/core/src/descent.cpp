#include "cg/descent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "cg/errors.hpp"
#include "cg/shape.hpp"

namespace cg {

namespace {

constexpr double kPi = std::numbers::pi;

std::string where(const char* what, double x, double y) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (" << x << ", " << y << ")";
    return os.str();
}

void distinct(const std::vector<double>& v, std::vector<double>& vals, std::vector<int>& mult, bool drop_zero,
              int* zeros) {
    std::map<double, int> c;
    for (double x : v) {
        if (drop_zero && x == 0) {
            ++*zeros;
            continue;
        }
        ++c[x];
    }
    for (auto [x, k] : c) {
        vals.push_back(x);
        mult.push_back(k);
    }
}

// z f'(z) restricted to the real axis, written over distinct values.
double zfp_real(const ActionFunction& af, double x) {
    double n = static_cast<double>(af.n());
    double s = af.gamma + 1 - af.b_zeros / n;
    for (std::size_t i = 0; i < af.a_distinct.size(); ++i) s -= af.a_mult[i] * af.a_distinct[i] / (n * (x - af.a_distinct[i]));
    for (std::size_t j = 0; j < af.b_distinct.size(); ++j) s -= af.b_mult[j] / (n * (1 - af.b_distinct[j] * x));
    return s;
}

std::vector<double> poly_mul(const std::vector<double>& p, double c0, double c1) {
    std::vector<double> r(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        r[k] += c0 * p[k];
        r[k + 1] += c1 * p[k];
    }
    return r;
}

void poly_axpy(std::vector<double>& acc, double c, const std::vector<double>& p) {
    if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) acc[k] += c * p[k];
}

double upper_gap(const ActionFunction& af) {
    return af.b_distinct.empty() ? std::numeric_limits<double>::infinity() : 1 / af.b_distinct.back();
}

void project(const ActionFunction& af, cplx& z) {
    for (int it = 0; it < 3; ++it) {
        cplx d = af.fp(z);
        double g2 = std::norm(d);
        if (!(g2 > 0)) return;
        double dv = af.v(z);
        if (std::abs(dv) < 1e-15) return;
        z -= dv * cplx(0, 1) * std::conj(d) / g2;
    }
}

// Initial step length from the local cubic model's validity radius.
double default_eps(const ActionFunction& af) {
    double lo = af.a_distinct.back(), hi = upper_gap(af);
    double r = std::min(af.zeta - lo, hi - af.zeta);
    double f0 = af.u(af.zeta);
    double sup = 0;
    for (int k = 0; k < 720; ++k) {
        cplx z = af.zeta + 0.5 * r * std::polar(1.0, 2 * kPi * k / 720);
        sup = std::max(sup, std::abs(af.f(z) - f0) + r * std::abs(af.fp(z)));
    }
    double K0 = 16 / std::pow(r, 4) * 6 / std::abs(af.f3_zeta()) * sup;
    double eps0 = std::min({r, 1 / K0, 1.0}) / 16;
    return std::min(eps0 / 1024, r / 8);
}

// Slide z along |z| = const onto v = 0.
void project_on_circle(const ActionFunction& af, cplx& z) {
    double r = std::abs(z), th = std::arg(z);
    for (int it = 0; it < 8; ++it) {
        cplx w = std::polar(r, th);
        double dv = af.v(w);
        double slope = (af.fp(w) * cplx(0, 1) * w).imag();
        if (std::abs(dv) < 1e-15 || slope == 0) break;
        th -= dv / slope;
    }
    z = std::polar(r, th);
}

// log(1 + d) keeping precision for small |d|.
cplx log1p_c(cplx d) {
    if (std::abs(d) > 1e-3) return std::log(1.0 + d);
    cplx s = 0, p = d;
    for (int k = 1; k <= 8; ++k, p *= -d) s += p / static_cast<double>(k);
    return s;
}

double crossing(cplx p, cplx q, double radius) {
    // smallest s in [0,1] with |p + s (q - p)| = radius
    cplx d = q - p;
    double A = std::norm(d), B = 2 * (p.real() * d.real() + p.imag() * d.imag()), C = std::norm(p) - radius * radius;
    double disc = std::max(0.0, B * B - 4 * A * C);
    double s1 = (-B - std::sqrt(disc)) / (2 * A), s2 = (-B + std::sqrt(disc)) / (2 * A);
    if (s1 >= 0 && s1 <= 1) return s1;
    return std::clamp(s2, 0.0, 1.0);
}

} // namespace

cplx ActionFunction::f(cplx z) const {
    double nn = static_cast<double>(n());
    cplx s = 0;
    for (double ai : a) s -= std::log(z - ai);
    for (double bj : b) s += std::log(1.0 - z * bj);
    return s / nn + (gamma + static_cast<double>(m()) / nn) * std::log(z);
}

cplx ActionFunction::df(cplx z, cplx w) const {
    double nn = static_cast<double>(n());
    cplx h = w - z, s = 0;
    for (double ai : a) s -= log1p_c(h / (z - ai));
    for (double bj : b) s += log1p_c(-h * bj / (1.0 - z * bj));
    return s / nn + (gamma + static_cast<double>(m()) / nn) * log1p_c(h / z);
}

cplx ActionFunction::fp(cplx z) const {
    double nn = static_cast<double>(n());
    cplx s = 0;
    for (double ai : a) s -= 1.0 / (z - ai);
    for (double bj : b) s -= bj / (1.0 - z * bj);
    return s / nn + (gamma + static_cast<double>(m()) / nn) / z;
}

ActionFunction make_action(std::vector<double> a, std::vector<double> b) {
    for (double x : a)
        if (!(x > 0 && x < 1)) throw ConfigError("action function needs a_i in (0, 1)");
    for (double x : b)
        if (!(x >= 0 && x < 1)) throw ConfigError("action function needs b_j in [0, 1)");
    auto e = empirical_shape(a, b);
    ActionFunction af;
    af.gamma = e.gamma;
    af.zeta = e.zeta;
    af.sigma = e.sigma;
    af.a = std::move(a);
    af.b = std::move(b);
    distinct(af.a, af.a_distinct, af.a_mult, false, nullptr);
    distinct(af.b, af.b_distinct, af.b_mult, true, &af.b_zeros);
    return af;
}

std::vector<double> numerator_poly(const ActionFunction& af) {
    double n = static_cast<double>(af.n());
    const auto& A = af.a_distinct;
    const auto& B = af.b_distinct;
    // Products with one factor left out.
    auto product = [&](int skip_a, int skip_b) {
        std::vector<double> p{1.0};
        for (int i = 0; i < static_cast<int>(A.size()); ++i)
            if (i != skip_a) p = poly_mul(p, -A[i], 1.0);
        for (int j = 0; j < static_cast<int>(B.size()); ++j)
            if (j != skip_b) p = poly_mul(p, 1.0, -B[j]);
        return p;
    };
    std::vector<double> P;
    poly_axpy(P, af.gamma + 1 - af.b_zeros / n, product(-1, -1));
    for (int i = 0; i < static_cast<int>(A.size()); ++i) poly_axpy(P, -af.a_mult[i] * A[i] / n, product(i, -1));
    for (int j = 0; j < static_cast<int>(B.size()); ++j) poly_axpy(P, -af.b_mult[j] / n, product(-1, j));
    return P;
}

std::vector<double> locate_zeros(const ActionFunction& af) {
    std::vector<std::pair<double, double>> gaps;
    for (std::size_t i = 0; i + 1 < af.a_distinct.size(); ++i) gaps.emplace_back(af.a_distinct[i], af.a_distinct[i + 1]);
    std::vector<double> inv;
    for (double x : af.b_distinct) inv.push_back(1 / x);
    std::sort(inv.begin(), inv.end());
    for (std::size_t j = 0; j + 1 < inv.size(); ++j) gaps.emplace_back(inv[j], inv[j + 1]);

    std::vector<double> zeros{af.zeta, af.zeta};
    for (auto [lo, hi] : gaps) {
        double w = hi - lo, d = 1e-3 * w, l = 0, h = 0;
        for (;; d *= 0.1) {
            if (d < 1e-13 * w) throw NumericError(where("no sign change of f' in", lo, hi));
            l = lo + d;
            h = hi - d;
            if (zfp_real(af, l) * zfp_real(af, h) < 0) break;
        }
        auto r = boost::math::tools::bisect([&](double x) { return zfp_real(af, x); }, l, h,
                                            boost::math::tools::eps_tolerance<double>(52));
        zeros.push_back(0.5 * (r.first + r.second));
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

std::string to_string(TraceStatus s) {
    switch (s) {
    case TraceStatus::ReachedOrigin: return "reached_origin";
    case TraceStatus::ExitedDiskRadius: return "exited_disk_radius";
    case TraceStatus::StepLimit: return "step_limit";
    }
    return "?";
}

TracedContour trace_phi(const ActionFunction& af, TraceDirection dir, const TraceOptions& opt) {
    TracedContour tc;
    tc.direction = dir;
    tc.zeta = af.zeta;
    tc.eps = opt.eps > 0 ? opt.eps : default_eps(af);
    tc.delta = opt.delta > 0 ? opt.delta : 0.1 * af.zeta;
    double top = upper_gap(af);
    tc.R = opt.R > 0 ? opt.R : 3 * top;
    bool descent = dir == TraceDirection::Descent;
    double sgn = descent ? -1 : 1;

    // Singular points the step must not jump over.
    std::vector<cplx> sing{0.0};
    for (double x : af.a_distinct) sing.push_back(x);
    for (double x : af.b_distinct) sing.push_back(1 / x);
    auto clearance = [&](cplx z) {
        double d = std::numeric_limits<double>::infinity();
        for (cplx p : sing) d = std::min(d, std::abs(z - p));
        return d;
    };

    cplx z = af.zeta + tc.eps * std::polar(1.0, descent ? 2 * kPi / 3 : kPi / 3);
    project(af, z);
    tc.z = {cplx(af.zeta, 0), z};
    tc.t = {0.0, std::abs(z - af.zeta)};

    auto rhs = [&](cplx w) {
        cplx d = af.fp(w);
        double g = std::abs(d);
        if (g < 1e-13) throw NumericError(where("trace stalled at a zero of f' near", w.real(), w.imag()));
        return sgn * std::conj(d) / g;
    };
    double hmax = 0.02 * (descent ? af.zeta : tc.R);
    double h = tc.eps;
    double t = tc.t.back();
    for (int step = 0; step < opt.max_steps; ++step) {
        h = std::min({h, hmax, 0.25 * clearance(z)});
        cplx k1 = rhs(z), k2 = rhs(z + 0.5 * h * k1), k3 = rhs(z + 0.5 * h * k2), k4 = rhs(z + h * k3);
        cplx zn = z + h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        double dv = std::abs(af.v(zn) - af.v(z));
        if (dv > opt.dv_tol) {
            h *= 0.5;
            if (h < 1e-14 * af.zeta) throw NumericError("trace step underflow");
            continue;
        }
        project(af, zn);
        bool stop = descent ? std::abs(zn) <= tc.delta : std::abs(zn) >= tc.R;
        if (stop) {
            double s = crossing(z, zn, descent ? tc.delta : tc.R);
            zn = z + s * (zn - z);
            project_on_circle(af, zn);
            tc.z.push_back(zn);
            tc.t.push_back(t + s * h);
            tc.status = descent ? TraceStatus::ReachedOrigin : TraceStatus::ExitedDiskRadius;
            return tc;
        }
        t += h;
        z = zn;
        tc.z.push_back(z);
        tc.t.push_back(t);
        if (dv < opt.dv_tol / 16) h *= 1.5;
    }
    tc.status = TraceStatus::StepLimit;
    return tc;
}

double tau_eps(const TracedContour& tc, double e) {
    for (std::size_t i = 1; i < tc.z.size(); ++i) {
        double r0 = std::abs(tc.z[i - 1] - tc.zeta), r1 = std::abs(tc.z[i] - tc.zeta);
        if (r1 >= e) return tc.t[i - 1] + (tc.t[i] - tc.t[i - 1]) * (e - r0) / (r1 - r0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double tau_delta(const TracedContour& tc, double d) {
    for (std::size_t i = 1; i < tc.z.size(); ++i) {
        double r0 = std::abs(tc.z[i - 1]), r1 = std::abs(tc.z[i]);
        if (r1 <= d) return tc.t[i - 1] + (tc.t[i] - tc.t[i - 1]) * (r0 - d) / (r0 - r1);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

cplx ContourPiece::at(double s) const {
    if (arc) return std::polar(r, th0 + s * (th1 - th0));
    return p0 + s * (p1 - p0);
}

cplx ContourPiece::dz(double s) const {
    if (arc) return cplx(0, th1 - th0) * std::polar(r, th0 + s * (th1 - th0));
    return p1 - p0;
}

std::vector<cplx> Contour::sample(int per_piece) const {
    std::vector<cplx> out;
    for (const auto& p : pieces)
        for (int k = 0; k < per_piece; ++k) out.push_back(p.at(static_cast<double>(k) / per_piece));
    out.push_back(end());
    return out;
}

namespace {

void check_confined(const TracedContour& phi, std::size_t upto) {
    if (phi.direction != TraceDirection::Descent) throw ConfigError("contour needs a descent trace");
    for (std::size_t i = 1; i < upto; ++i)
        if (std::abs(phi.z[i]) > phi.zeta * (1 + 1e-9) || phi.z[i].imag() <= 0)
            throw NumericError("descent trace left the upper half of Disc(0, zeta)");
}

ContourPiece line(cplx p, cplx q) {
    ContourPiece c;
    c.p0 = p;
    c.p1 = q;
    return c;
}

Contour close_with(const std::vector<cplx>& upper, std::vector<ContourPiece> middle) {
    Contour c;
    for (std::size_t i = 0; i + 1 < upper.size(); ++i) c.pieces.push_back(line(upper[i], upper[i + 1]));
    for (auto& p : middle) c.pieces.push_back(p);
    for (std::size_t i = upper.size() - 1; i > 0; --i)
        c.pieces.push_back(line(std::conj(upper[i]), std::conj(upper[i - 1])));
    return c;
}

} // namespace

Contour build_gamma(const TracedContour& phi) {
    if (phi.status != TraceStatus::ReachedOrigin) throw ConfigError("build_gamma needs a trace that reached the origin");
    check_confined(phi, phi.z.size());
    cplx last = phi.z.back();
    return close_with(phi.z, {line(last, 0.0), line(0.0, std::conj(last))});
}

Contour build_gamma_prime(const TracedContour& phi, double delta) {
    if (phi.status != TraceStatus::ReachedOrigin) throw ConfigError("build_gamma_prime needs a trace that reached the origin");
    std::size_t k = 1;
    while (k < phi.z.size() && std::abs(phi.z[k]) > delta) ++k;
    if (k == phi.z.size()) throw ConfigError("trace never enters |z| <= delta");
    check_confined(phi, k);
    cplx c = phi.z[k - 1] + crossing(phi.z[k - 1], phi.z[k], delta) * (phi.z[k] - phi.z[k - 1]);
    std::vector<cplx> upper(phi.z.begin(), phi.z.begin() + static_cast<std::ptrdiff_t>(k));
    upper.push_back(c);
    ContourPiece arc;
    arc.arc = true;
    arc.r = delta;
    arc.th0 = std::arg(c);
    arc.th1 = 2 * kPi - arc.th0;
    return close_with(upper, {arc});
}

Estimate contour_I_descent(const KernelContext& ctx, long long x, const Contour& gamma) {
    using G = boost::math::quadrature::gauss<double, 20>;
    static const auto nodes = [] {
        std::array<std::pair<double, double>, 20> r{};
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < 10; ++i) {
            r[i] = {0.5 - 0.5 * a[i], 0.5 * w[i]};
            r[19 - i] = {0.5 + 0.5 * a[i], 0.5 * w[i]};
        }
        return r;
    }();
    double L0 = log_integrand_F(ctx.a, ctx.b, x, cplx(ctx.zeta, 0)).real();
    auto level = [&](int split, double& scale) {
        cplx acc = 0;
        scale = 0;
        for (const auto& p : gamma.pieces) {
            for (int q = 0; q < split; ++q)
                for (auto [s, w] : nodes) {
                    double u = (q + s) / split;
                    cplx v = std::exp(log_integrand_F(ctx.a, ctx.b, x, p.at(u)) - L0) * p.dz(u) * (w / split);
                    acc += v;
                    scale += std::abs(v);
                }
        }
        return acc;
    };
    double scale = 0;
    cplx prev = level(1, scale);
    for (int split = 2; split <= 4096; split *= 2) {
        cplx cur = level(split, scale);
        double diff = std::abs(cur - prev);
        if (diff <= std::max(1e-12 * std::abs(cur), 1e-15 * scale)) {
            Estimate e;
            double f = std::exp(L0) / (2 * kPi);
            e.value = cur.imag() * f; // (1/2 pi i) * acc, real part
            e.est_error = diff * f;
            e.nodes = static_cast<int>(gamma.pieces.size()) * 20 * split;
            return e;
        }
        prev = cur;
    }
    throw NumericError("contour refinement not converged");
}

} // namespace cg
