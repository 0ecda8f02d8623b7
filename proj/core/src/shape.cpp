#include "cg/shape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "cg/errors.hpp"

namespace cg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cap(double x) { return std::abs(x) > kDivergence ? std::copysign(kInf, x) : x; }

// One convex term of the variational problem, with derivatives 0..2.
using Term = std::function<double(double z, int d)>;

struct Problem {
    Term P, Q; // h(z) = s P(z) + t Q(z), P decreasing, Q increasing
    double zl, zr;
    bool multiplicative; // sigma carries a zeta^2 factor
};

double ratio(double num, double den) {
    num = cap(num);
    den = cap(den);
    if (std::isinf(den)) return std::isinf(num) ? kNaN : 0.0;
    if (std::isinf(num)) return kInf;
    return num / den;
}

ShapeEval solve(const Problem& pb, double s, double t) {
    if (s < 0 || t < 0 || (s == 0 && t == 0)) throw ConfigError("shape needs s, t >= 0, not both zero");
    ShapeEval e;
    e.sigma = kNaN;
    auto h = [&](double z) {
        double a = s > 0 ? s * pb.P(z, 0) : 0.0;
        double b = t > 0 ? t * pb.Q(z, 0) : 0.0;
        return cap(a + b);
    };
    if (!(pb.zl < pb.zr)) {
        e.zeta = pb.zl;
        e.c1 = e.c2 = kNaN;
        e.g = h(pb.zl);
        e.regime = Regime::Degenerate;
        return e;
    }
    e.c1 = ratio(pb.Q(pb.zl, 1), -pb.P(pb.zl, 1));
    e.c2 = ratio(pb.Q(pb.zr, 1), -pb.P(pb.zr, 1));
    if (s == 0 || (t > 0 && s / t <= e.c1)) {
        e.zeta = pb.zl;
        e.g = h(pb.zl);
        e.regime = Regime::LinearLow;
        return e;
    }
    if (t == 0 || s / t >= e.c2) {
        e.zeta = pb.zr;
        e.g = h(pb.zr);
        e.regime = Regime::LinearHigh;
        return e;
    }
    auto hp = [&](double z) { return s * pb.P(z, 1) + t * pb.Q(z, 1); };
    auto hpp = [&](double z) { return s * pb.P(z, 2) + t * pb.Q(z, 2); };
    double lo = pb.zl, hi = pb.zr, width = hi - lo;
    for (int it = 0; it < 300 && hi - lo > 1e-13 * width; ++it) {
        double mid = 0.5 * (lo + hi);
        (hp(mid) < 0 ? lo : hi) = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = hp(z), dd = hpp(z);
        if (!(dd > 0) || d == 0) break;
        double zn = z - d / dd;
        if (!(zn > lo && zn < hi)) break;
        if (d < 0) lo = z; else hi = z;
        z = zn;
    }
    e.zeta = z;
    e.g = h(z);
    // Both endpoint moments diverging leaves the regime undetermined.
    e.regime = std::isnan(e.c1) || std::isnan(e.c2) ? Regime::Degenerate : Regime::StrictlyConcave;
    double curv = 0.5 * hpp(z) * (pb.multiplicative ? z * z : 1.0);
    e.sigma = std::cbrt(curv);
    return e;
}

Problem exponential_problem(const ParamLaw& alpha, const ParamLaw& beta) {
    Problem pb;
    pb.P = [&alpha](double z, int d) {
        if (d == 0) return alpha.inv_moment(z, 1, 1);
        if (d == 1) return -alpha.inv_moment(z, 1, 2);
        return 2 * alpha.inv_moment(z, 1, 3);
    };
    pb.Q = [&beta](double z, int d) {
        if (d == 0) return beta.inv_moment(-z, 1, 1);
        if (d == 1) return beta.inv_moment(-z, 1, 2);
        return 2 * beta.inv_moment(-z, 1, 3);
    };
    pb.zl = -alpha.lower();
    pb.zr = beta.lower();
    pb.multiplicative = false;
    return pb;
}

Problem geometric_problem(const ParamLaw& alpha, const ParamLaw& beta) {
    Problem pb;
    pb.P = [&alpha](double z, int d) { return transform_Ga(alpha, z, d); };
    pb.Q = [&beta](double z, int d) { return transform_Gb(beta, z, d); };
    pb.zl = alpha.upper();
    pb.zr = 1 / beta.upper();
    pb.multiplicative = true;
    return pb;
}

} // namespace

std::string to_string(Regime r) {
    switch (r) {
    case Regime::LinearLow: return "linear_low";
    case Regime::StrictlyConcave: return "strictly_concave";
    case Regime::LinearHigh: return "linear_high";
    case Regime::Degenerate: return "degenerate";
    }
    return "?";
}

ShapeEval shape_exponential(const ParamLaw& alpha, const ParamLaw& beta, double s, double t) {
    return solve(exponential_problem(alpha, beta), s, t);
}

ShapeEval shape_geometric(const ParamLaw& alpha, const ParamLaw& beta, double s, double t) {
    if (alpha.upper() * beta.upper() > 1) throw ConfigError("geometric shape needs sup(alpha) * sup(beta) <= 1");
    return solve(geometric_problem(alpha, beta), s, t);
}

ShapeEval shape_eval(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta, double s, double t) {
    return kind == ModelKind::Exponential ? shape_exponential(alpha, beta, s, t) : shape_geometric(alpha, beta, s, t);
}

std::pair<double, double> critical_values(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta) {
    auto e = shape_eval(kind, alpha, beta, 1, 1);
    return {e.c1, e.c2};
}

double shape_exponential_closed_uniform(double lambda, double l, double m, double s, double t) {
    if (!(lambda > 0) || l < 0 || m < 0) throw ConfigError("closed uniform form needs lambda > 0, l, m >= 0");
    if (l == 0 && m == 0) return std::pow(std::sqrt(s) + std::sqrt(t), 2) / lambda;
    if (m == 0) return shape_exponential_closed_uniform(lambda, m, l, t, s);
    if (l == 0) {
        double root = std::sqrt(m * s * m * s + 4 * s * t * lambda * (lambda + m));
        double first = (2 * s * lambda + m * s + root) / (2 * lambda * (lambda + m));
        double second = t / m * std::log1p(m / lambda + m / lambda * (m * s + root) / (2 * t * lambda));
        return first + second;
    }
    double d = l * t - m * s;
    double root = std::sqrt(d * d + 4 * s * t * (lambda + l) * (lambda + m));
    double x1 = l / lambda + l / lambda * (d + root) / (2 * s * (lambda + m));
    double x2 = m / lambda + m / lambda * (-d + root) / (2 * t * (lambda + l));
    return s / l * std::log1p(x1) + t / m * std::log1p(x2);
}

double shape_geometric_closed_reciprocal(double q, double l, double m, double s, double t) {
    double rq = std::sqrt(q);
    if (!(q > 0 && q < 1) || !(l > 0 && l < rq) || !(m > 0 && m < rq))
        throw ConfigError("closed reciprocal form needs 0 < l, m < sqrt(q) < 1");
    double L = std::log(rq / (rq - l)), M = std::log(rq / (rq - m));
    double x = s * l * M, y = t * m * L;
    double ka = 1 + m * rq - q, kb = 1 + l * rq - q;
    double d = l * y - m * x;
    double root = std::sqrt(d * d + 4 * x * y * ka * kb);
    double x1 = l * rq / (1 - q) + l / (1 - q) * (d + root) / (2 * x * ka);
    double x2 = m * rq / (1 - q) + m / (1 - q) * (-d + root) / (2 * y * kb);
    return s / L * std::log1p(x1) + t / M * std::log1p(x2);
}

double homogeneous_gamma(double q, double r) { return (q * (1 + r) + 2 * std::sqrt(q * r)) / (1 - q); }

double homogeneous_sigma(double q, double r) {
    return std::pow(q / r, 1.0 / 6) * std::pow(std::sqrt(q) + std::sqrt(r), 2.0 / 3) *
           std::pow(1 + std::sqrt(q * r), 2.0 / 3) / (1 - q);
}

double empirical_g(const std::vector<double>& a, const std::vector<double>& b, double z, int d) {
    double n = static_cast<double>(b.size());
    double sa = 0, sb = 0;
    for (double x : a) {
        double r = 1 / (z - x);
        sa += d == 0 ? x * r : d == 1 ? -x * r * r : 2 * x * r * r * r;
    }
    for (double y : b) {
        double r = 1 / (1 - y * z);
        sb += d == 0 ? y * z * r : d == 1 ? y * r * r : 2 * y * y * r * r * r;
    }
    return (sa + sb) / n;
}

EmpiricalShape empirical_shape(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ConfigError("empirical shape needs nonempty prefixes");
    double amax = *std::max_element(a.begin(), a.end());
    double bmax = *std::max_element(b.begin(), b.end());
    if (!(amax > 0) || !(bmax > 0)) throw NumericError("empirical shape: empty bracket");
    if (!(amax * bmax < 1)) throw ConfigError("empirical shape needs all a_i b_j < 1");
    double lo = amax, hi = 1 / bmax;
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (empirical_g(a, b, mid, 1) < 0 ? lo : hi) = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = empirical_g(a, b, z, 1), dd = empirical_g(a, b, z, 2);
        if (d == 0 || !(dd > 0)) break;
        double zn = z - d / dd;
        if (!(zn > amax && zn < 1 / bmax)) break;
        z = zn;
    }
    EmpiricalShape e;
    e.m = a.size();
    e.n = b.size();
    e.zeta = z;
    e.gamma = empirical_g(a, b, z, 0);
    e.sigma = std::cbrt(0.5 * z * z * empirical_g(a, b, z, 2));
    return e;
}

long long scaling_index(const EmpiricalShape& e, double s) {
    double n = static_cast<double>(e.n);
    return static_cast<long long>(std::floor(n * e.gamma + std::cbrt(n) * e.sigma * s));
}

std::vector<LevelPoint> level_curve(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta, int npts) {
    std::vector<LevelPoint> pts;
    for (int k = 0; k < npts; ++k) {
        double th = (k + 0.5) / npts * std::numbers::pi / 2;
        double c = std::cos(th), s = std::sin(th);
        double g = shape_eval(kind, alpha, beta, c, s).g;
        pts.push_back({th, c / g, s / g});
    }
    return pts;
}

} // namespace cg
