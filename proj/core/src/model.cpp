#include "cg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cg/errors.hpp"
#include "cg/rng.hpp"

namespace cg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gk(const std::function<double(double)>& f, double lo, double hi) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-14);
}

double ts(const std::function<double(double)>& f, double lo, double hi) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(18);
    auto g = [&f](double x) { return f(x); };
    return integrator.integrate(g, lo, hi, 1e-14);
}

// (L^{1-k} - H^{1-k}) / (k-1), i.e. the integral of y^-k from L to H.
double power_antideriv(double L, double H, int k) {
    if (k == 1) return std::log(H / L);
    return (std::pow(L, 1 - k) - std::pow(H, 1 - k)) / (k - 1);
}

} // namespace

std::string to_string(ModelKind k) { return k == ModelKind::Exponential ? "exponential" : "geometric"; }

ParamLaw::ParamLaw(Variant v) : v_(std::move(v)) {
    auto finite = [](double x) { return std::isfinite(x); };
    std::visit(overloaded{
                   [&](const PointMass& d) {
                       if (!finite(d.v)) throw ConfigError("point mass value must be finite");
                   },
                   [&](const Uniform& d) {
                       if (!finite(d.lo) || !finite(d.hi) || !(d.lo < d.hi))
                           throw ConfigError("uniform law needs lo < hi");
                   },
                   [&](const PowerDensity& d) {
                       if (!finite(d.lo) || !finite(d.hi) || !(d.lo < d.hi))
                           throw ConfigError("power law needs lo < hi");
                       if (!finite(d.p)) throw ConfigError("power exponent must be finite");
                       if (!d.origin && d.p <= -1) throw ConfigError("power law needs p > -1");
                       if (d.origin) {
                           if (d.lo < 0) throw ConfigError("power law x^p needs lo >= 0");
                           if (d.p == -1) throw ConfigError("x^-1 density: use the reciprocal law");
                           if (d.lo == 0 && d.p <= -1) throw ConfigError("x^p on [0, hi] needs p > -1");
                       }
                   },
                   [&](const Reciprocal& d) {
                       if (!finite(d.lo) || !finite(d.hi) || !(0 < d.lo && d.lo < d.hi))
                           throw ConfigError("reciprocal law needs 0 < lo < hi");
                   },
                   [&](const Atoms& d) {
                       if (d.atoms.empty()) throw ConfigError("atoms law needs at least one atom");
                       double s = 0;
                       for (auto [x, w] : d.atoms) {
                           if (!finite(x) || !(w > 0)) throw ConfigError("atom weights must be positive");
                           s += w;
                       }
                       if (std::abs(s - 1) > 1e-12) throw ConfigError("atom weights must sum to 1");
                   },
               },
               v_);
}

double ParamLaw::lower() const {
    return std::visit(overloaded{
                          [](const PointMass& d) { return d.v; },
                          [](const Uniform& d) { return d.lo; },
                          [](const PowerDensity& d) { return d.lo; },
                          [](const Reciprocal& d) { return d.lo; },
                          [](const Atoms& d) {
                              double x = kInf;
                              for (auto& a : d.atoms) x = std::min(x, a.first);
                              return x;
                          },
                      },
                      v_);
}

double ParamLaw::upper() const {
    return std::visit(overloaded{
                          [](const PointMass& d) { return d.v; },
                          [](const Uniform& d) { return d.hi; },
                          [](const PowerDensity& d) { return d.hi; },
                          [](const Reciprocal& d) { return d.hi; },
                          [](const Atoms& d) {
                              double x = -kInf;
                              for (auto& a : d.atoms) x = std::max(x, a.first);
                              return x;
                          },
                      },
                      v_);
}

bool ParamLaw::discrete() const {
    return std::holds_alternative<PointMass>(v_) || std::holds_alternative<Atoms>(v_);
}

bool ParamLaw::operator==(const ParamLaw& o) const {
    if (v_.index() != o.v_.index()) return false;
    return std::visit(
        overloaded{
            [&](const PointMass& d) { return d.v == std::get<PointMass>(o.v_).v; },
            [&](const Uniform& d) {
                auto& e = std::get<Uniform>(o.v_);
                return d.lo == e.lo && d.hi == e.hi;
            },
            [&](const PowerDensity& d) {
                auto& e = std::get<PowerDensity>(o.v_);
                return d.p == e.p && d.lo == e.lo && d.hi == e.hi && d.origin == e.origin;
            },
            [&](const Reciprocal& d) {
                auto& e = std::get<Reciprocal>(o.v_);
                return d.lo == e.lo && d.hi == e.hi;
            },
            [&](const Atoms& d) { return d.atoms == std::get<Atoms>(o.v_).atoms; },
        },
        v_);
}

double ParamLaw::quantile(double u) const {
    return std::visit(overloaded{
                          [](const PointMass& d) { return d.v; },
                          [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * u; },
                          [&](const PowerDensity& d) {
                              double e = d.p + 1;
                              if (!d.origin) return d.lo + (d.hi - d.lo) * std::pow(u, 1 / e);
                              double l = std::pow(d.lo, e), h = std::pow(d.hi, e);
                              return std::clamp(std::pow(l + u * (h - l), 1 / e), d.lo, d.hi);
                          },
                          [&](const Reciprocal& d) { return d.lo * std::exp(u * std::log(d.hi / d.lo)); },
                          [&](const Atoms& d) {
                              double c = 0;
                              for (auto [x, w] : d.atoms) {
                                  c += w;
                                  if (u <= c) return x;
                              }
                              return d.atoms.back().first;
                          },
                      },
                      v_);
}

double ParamLaw::expect(const std::function<double(double)>& h) const {
    return std::visit(overloaded{
                          [&](const PointMass& d) { return h(d.v); },
                          [&](const Uniform& d) { return gk(h, d.lo, d.hi) / (d.hi - d.lo); },
                          [&](const PowerDensity& d) {
                              double e = d.p + 1;
                              if (!d.origin) {
                                  double w = d.hi - d.lo;
                                  auto f = [&](double x) {
                                      double y = (x - d.lo) / w;
                                      return y > 0 ? e * std::pow(y, d.p) / w * h(x) : 0.0;
                                  };
                                  return ts(f, d.lo, d.hi);
                              }
                              double norm = (std::pow(d.hi, e) - std::pow(d.lo, e)) / e;
                              auto f = [&](double x) { return x > 0 ? std::pow(x, d.p) / norm * h(x) : 0.0; };
                              return ts(f, d.lo, d.hi);
                          },
                          [&](const Reciprocal& d) {
                              // x = e^t turns dx/x into dt.
                              auto f = [&](double t) { return h(std::exp(t)); };
                              double a = std::log(d.lo), b = std::log(d.hi);
                              return gk(f, a, b) / (b - a);
                          },
                          [&](const Atoms& d) {
                              double s = 0;
                              for (auto [x, w] : d.atoms) s += w * h(x);
                              return s;
                          },
                      },
                      v_);
}

double ParamLaw::power_inv_moment(const PowerDensity& d, double c0, double c1, int k) const {
    double L = c0 + c1 * d.lo, H = c0 + c1 * d.hi;
    bool anchored_at_zero = !d.origin || d.lo == 0;
    if (L == 0) {
        // Density behaves like (x-lo)^p only when anchored at lo.
        if (!anchored_at_zero || d.p - k <= -1) return kInf;
        double w = d.hi - d.lo;
        return std::pow(c1 * w, -k) * (d.p + 1) / (d.p + 1 - k);
    }
    if (H == 0) return kInf;
    return expect([&](double x) { return std::pow(c0 + c1 * x, -k); });
}

double ParamLaw::inv_moment(double c0, double c1, int k) const {
    if (k < 1) throw ConfigError("inv_moment needs k >= 1");
    double L = c0 + c1 * lower(), H = c0 + c1 * upper();
    if (std::min(L, H) < 0) return kInf;
    return std::visit(
        overloaded{
            [&](const PointMass& d) {
                double y = c0 + c1 * d.v;
                return y > 0 ? std::pow(y, -k) : kInf;
            },
            [&](const Atoms& d) {
                double s = 0;
                for (auto [x, w] : d.atoms) {
                    double y = c0 + c1 * x;
                    if (!(y > 0)) return kInf;
                    s += w * std::pow(y, -k);
                }
                return s;
            },
            [&](const Uniform& d) {
                if (L == 0 || H == 0) return kInf;
                double w = d.hi - d.lo;
                double span = c1 * w; // H - L
                if (c1 == 0) return std::pow(c0, -k);
                if (k == 1) return std::log1p(span / L) / span;
                if (std::abs(span) < 1e-3 * std::min(L, H)) {
                    // Nearly constant integrand: closed form cancels, a fixed
                    // 20-point rule is exact to rounding here.
                    auto f = [&](double x) { return std::pow(c0 + c1 * x, -k); };
                    return boost::math::quadrature::gauss<double, 20>::integrate(f, d.lo, d.hi) / w;
                }
                return power_antideriv(L, H, k) / span;
            },
            [&](const Reciprocal& d) {
                if (L == 0 || H == 0) return kInf;
                double J = std::log(d.hi / d.lo);
                double norm = J;
                if (c1 == 0) return std::pow(c0, -k);
                if (std::abs(c0) < 1e-2 * std::abs(c1) * d.lo) {
                    auto f = [&](double t) { return std::pow(c0 + c1 * std::exp(t), -k); };
                    return gk(f, std::log(d.lo), std::log(d.hi)) / norm;
                }
                // 1/(x y^k) = (1/c0) [1/(x y^{k-1}) - c1 / y^k] with y = c0 + c1 x.
                for (int j = 1; j <= k; ++j) {
                    double U = (j == 1 ? std::log1p((H - L) / L) : power_antideriv(L, H, j)) / c1;
                    J = (J - c1 * U) / c0;
                }
                return J / norm;
            },
            [&](const PowerDensity& d) { return power_inv_moment(d, c0, c1, k); },
        },
        v_);
}

void ParamLaw::check_support(ModelKind kind) const {
    double lo = lower(), hi = upper();
    bool has_atom_at = false;
    auto atom_at = [&](double x) {
        if (auto* p = std::get_if<PointMass>(&v_)) return p->v == x;
        if (auto* a = std::get_if<Atoms>(&v_))
            return std::any_of(a->atoms.begin(), a->atoms.end(), [&](auto& t) { return t.first == x; });
        return false;
    };
    if (lo < 0) throw ConfigError("parameter law support must lie in (0, inf)");
    has_atom_at = atom_at(0.0);
    if (has_atom_at) throw ConfigError("parameter law must not charge 0");
    if (kind == ModelKind::Geometric) {
        if (hi > 1) throw ConfigError("geometric parameter law support must lie in (0, 1)");
        if (atom_at(1.0)) throw ConfigError("geometric parameter law must not charge 1");
    }
}

void ModelSpec::validate() const {
    alpha.check_support(kind);
    beta.check_support(kind);
    if (kind == ModelKind::Exponential) {
        double la = alpha.lower(), lb = beta.lower();
        if (!(la + lb > 0) && !allow_degenerate)
            throw ConfigError("exponential model needs inf(alpha) + inf(beta) > 0");
        if (boundary_z && !(-la < *boundary_z && *boundary_z < lb))
            throw ConfigError("boundary z must lie in (-inf alpha, inf beta)");
    } else {
        double ua = alpha.upper(), ub = beta.upper();
        if (!(ua * ub < 1) && !allow_degenerate)
            throw ConfigError("geometric model needs sup(alpha) * sup(beta) < 1");
        if (boundary_z && !(ua < *boundary_z && *boundary_z * ub < 1))
            throw ConfigError("boundary z must lie in (sup alpha, 1/sup beta)");
    }
}

Sequences sample_sequences(const ModelSpec& spec, std::size_t m, std::size_t n) {
    Sequences s;
    s.a.resize(m);
    s.b.resize(n);
    Stream ra(spec.seed, Tag::Alpha), rb(spec.seed, Tag::Beta);
    for (auto& x : s.a) x = spec.alpha.quantile(ra.uniform());
    for (auto& x : s.b) x = spec.beta.quantile(rb.uniform());
    return s;
}

double draw_exponential(double rate, double u) { return -std::log1p(-u) / rate; }

double draw_geometric(double q, double u) {
    if (q <= 0) return 0;
    return std::floor(std::log(u) / std::log(q));
}

namespace {

double draw(ModelKind kind, double param, double u) {
    if (kind == ModelKind::Exponential) {
        if (!(param > 0)) throw ConfigError("invalid exponential rate");
        return draw_exponential(param, u);
    }
    if (!(param < 1) || param < 0) throw ConfigError("invalid parameter product");
    return draw_geometric(param, u);
}

double interior_param(ModelKind kind, double a, double b) {
    return kind == ModelKind::Exponential ? a + b : a * b;
}

} // namespace

RowSampler::RowSampler(const ModelSpec& spec, const std::vector<double>& a, const std::vector<double>& b)
    : spec_(spec), a_(a), b_(b) {}

void RowSampler::row(std::size_t i, std::vector<double>& out) const {
    out.resize(b_.size());
    Stream rs(spec_.seed, Tag::Interior, i);
    double ai = a_[i - 1];
    for (std::size_t j = 0; j < b_.size(); ++j) out[j] = draw(spec_.kind, interior_param(spec_.kind, ai, b_[j]), rs.uniform());
}

WeightMatrix sample_weights(const ModelSpec& spec, const std::vector<double>& a, const std::vector<double>& b) {
    WeightMatrix W;
    W.kind = spec.kind;
    W.a = a;
    W.b = b;
    W.w = Grid<double>(a.size(), b.size());
    RowSampler rows(spec, W.a, W.b);
    std::vector<double> buf;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        rows.row(i, buf);
        std::copy(buf.begin(), buf.end(), &W.w(i - 1, 0));
    }
    return W;
}

WeightMatrix sample_weights(const ModelSpec& spec, std::size_t m, std::size_t n) {
    auto s = sample_sequences(spec, m, n);
    return sample_weights(spec, s.a, s.b);
}

BoundaryWeights sample_boundary_weights(const ModelSpec& spec, const std::vector<double>& a,
                                        const std::vector<double>& b) {
    if (!spec.boundary_z) throw ConfigError("stationary model needs boundary z");
    spec.validate();
    double z = *spec.boundary_z;
    std::size_t m = a.size(), n = b.size();
    BoundaryWeights B;
    B.kind = spec.kind;
    B.z = z;
    B.a = a;
    B.b = b;
    B.w = Grid<double>(m + 1, n + 1, 0.0);
    bool ex = spec.kind == ModelKind::Exponential;
    Stream rr(spec.seed, Tag::BoundaryRow), rc(spec.seed, Tag::BoundaryCol);
    for (std::size_t i = 1; i <= m; ++i) B.w(i, 0) = draw(spec.kind, ex ? a[i - 1] + z : a[i - 1] / z, rr.uniform());
    for (std::size_t j = 1; j <= n; ++j) B.w(0, j) = draw(spec.kind, ex ? b[j - 1] - z : b[j - 1] * z, rc.uniform());
    RowSampler rows(spec, B.a, B.b);
    std::vector<double> buf;
    for (std::size_t i = 1; i <= m; ++i) {
        rows.row(i, buf);
        for (std::size_t j = 1; j <= n; ++j) B.w(i, j) = buf[j - 1];
    }
    return B;
}

BoundaryWeights sample_boundary_weights(const ModelSpec& spec, std::size_t m, std::size_t n) {
    auto s = sample_sequences(spec, m, n);
    return sample_boundary_weights(spec, s.a, s.b);
}

double transform_A(const ParamLaw& law, double z) { return law.inv_moment(z, 1, 1); }
double transform_A2(const ParamLaw& law, double z) { return law.inv_moment(z, 1, 2); }
double transform_A3(const ParamLaw& law, double z) { return law.inv_moment(z, 1, 3); }

double transform_Ga(const ParamLaw& law, double z, int d) {
    if (d < 0 || d > 2) throw ConfigError("transform_Ga: derivative order must be 0, 1 or 2");
    double sign = d == 1 ? -1 : 1;
    if (!(z > 0) || z < law.upper()) return sign * kInf;
    if (law.discrete() || std::holds_alternative<PowerDensity>(law.variant())) {
        if (std::isinf(law.inv_moment(z, -1, d + 1))) return sign * kInf;
        return law.expect([&](double a) {
            double r = 1 / (z - a);
            if (d == 0) return a * r;
            if (d == 1) return -a * r * r;
            return 2 * a * r * r * r;
        });
    }
    double E1 = law.inv_moment(z, -1, 1);
    if (d == 0) return std::isinf(E1) ? kInf : z * E1 - 1;
    double E2 = law.inv_moment(z, -1, 2);
    if (d == 1) return std::isinf(E2) ? -kInf : -(z * E2 - E1);
    double E3 = law.inv_moment(z, -1, 3);
    return std::isinf(E3) ? kInf : 2 * (z * E3 - E2);
}

double transform_Gb(const ParamLaw& law, double z, int d) {
    if (d < 0 || d > 2) throw ConfigError("transform_Gb: derivative order must be 0, 1 or 2");
    if (!(z > 0) || z * law.upper() > 1) return kInf;
    if (law.discrete() || std::holds_alternative<PowerDensity>(law.variant())) {
        if (std::isinf(law.inv_moment(1, -z, d + 1))) return kInf;
        return law.expect([&](double b) {
            double r = 1 / (1 - b * z);
            if (d == 0) return b * z * r;
            if (d == 1) return b * r * r;
            return 2 * b * b * r * r * r;
        });
    }
    double F1 = law.inv_moment(1, -z, 1);
    if (d == 0) return std::isinf(F1) ? kInf : F1 - 1;
    double F2 = law.inv_moment(1, -z, 2);
    if (d == 1) return std::isinf(F2) ? kInf : (F2 - F1) / z;
    double F3 = law.inv_moment(1, -z, 3);
    return std::isinf(F3) ? kInf : 2 * (F3 - 2 * F2 + F1) / (z * z);
}

} // namespace cg
