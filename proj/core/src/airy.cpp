#include "cg/airy.hpp"

#include <algorithm>
#include <functional>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "cg/errors.hpp"

namespace cg {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// 20-point Gauss-Legendre on [-1, 1].
struct GL20 {
    std::array<double, 20> x, w;
    GL20() {
        using G = boost::math::quadrature::gauss<double, 20>;
        const auto& a = G::abscissa();
        const auto& b = G::weights();
        for (std::size_t i = 0; i < 10; ++i) {
            x[i] = -a[i];
            x[19 - i] = a[i];
            w[i] = w[19 - i] = b[i];
        }
    }
};
const GL20& gl20() {
    static const GL20 g;
    return g;
}

// Composite 20-point rule on [lo, hi] with panels of width about h.
template <class F, class T>
T panels(F&& f, double lo, double hi, double h, T acc) {
    const auto& g = gl20();
    int np = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
    double step = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
        double c = lo + (p + 0.5) * step, r = 0.5 * step;
        for (int k = 0; k < 20; ++k) acc += g.w[k] * r * f(c + r * g.x[k]);
    }
    return acc;
}

// Radius where a decay profile reaches e^{-43}, below 1e-18 of the peak.
template <class D>
double cutoff(D&& decay) {
    double r = 0.25;
    while (decay(r) < 43) r += 0.25;
    return r;
}

// Upper half of the contour; Ai = Im(X)/pi by conjugate symmetry. The pair
// carries the integrands for Ai and Ai' (extra factor -z).
AiryValue airy_unchecked(double s) {
    using Pair = Eigen::Vector2cd;
    const Pair zero = Pair::Zero();
    double h = s <= -8 ? 0.25 : 0.5;
    Pair X;
    double lead = 0; // Ai carries a factor e^{lead}
    if (s >= 0) {
        // Rays at pi/3 leave the real saddle sqrt(s); factor out e^{-(2/3) s^{3/2}}.
        double z0 = std::sqrt(s);
        lead = -2.0 / 3.0 * s * z0;
        cplx e = std::polar(1.0, kPi / 3);
        double R = cutoff([&](double r) { return 0.5 * z0 * r * r + r * r * r / 3; });
        auto ray = [&](double r) {
            cplx w = r * e;
            cplx v = std::exp(z0 * w * w + w * w * w / 3.0) * e;
            return Pair(v, -(z0 + w) * v);
        };
        X = panels(ray, 0.0, R, h, zero);
    } else {
        // Saddles at +-i t: the segment [0, i t], then a ray at pi/4 from i t.
        double t = std::sqrt(-s);
        cplx it(0, t);
        auto seg = [&](double y) {
            cplx z(0, y);
            cplx v = std::exp(z * z * z / 3.0 - s * z) * cplx(0, 1);
            return Pair(v, -z * v);
        };
        cplx e = std::polar(1.0, kPi / 4);
        cplx phi0 = it * it * it / 3.0 - s * it;
        double R = cutoff([&](double r) { return t * r * r + r * r * r * std::sqrt(2.0) / 6; });
        auto ray = [&](double r) {
            cplx w = r * e;
            cplx v = std::exp(phi0 + it * w * w + w * w * w / 3.0) * e;
            return Pair(v, -(it + w) * v);
        };
        X = panels(seg, 0.0, t, h, zero) + panels(ray, 0.0, R, h, zero);
    }
    double f = std::exp(lead) / kPi;
    return {f * X[0].imag(), f * X[1].imag()};
}

// Ai beyond 16 is below 1e-19 and only enters through squares; treat it as 0.
double ai_clipped(double x) { return x > 16 ? 0.0 : airy_unchecked(x).ai; }

// K(x_i, x_j) = sum_k v_k Ai(x_i + y_k) Ai(x_j + y_k) with a shared rule in y.
// Barycentric interpolant of Ai on Chebyshev points of [lo, 16]. Ai is entire,
// so a few hundred nodes reproduce the contour values to rounding, at a tiny
// fraction of the cost of a quadrature per point.
class AiChebyshev {
public:
    explicit AiChebyshev(double lo) : lo_(lo) {
        int n = 24 + 8 * static_cast<int>(std::ceil(kHi - lo));
        for (int j = 0; j <= n; ++j) {
            double t = std::cos(std::numbers::pi * j / n);
            x_.push_back(0.5 * (lo + kHi) + 0.5 * (kHi - lo) * t);
            f_.push_back(ai_clipped(x_.back()));
            w_.push_back((j % 2 ? -1.0 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0));
        }
    }
    double operator()(double x) const {
        if (x >= kHi) return 0.0;
        double num = 0, den = 0;
        for (std::size_t j = 0; j < x_.size(); ++j) {
            double d = x - x_[j];
            if (d == 0) return f_[j];
            double c = w_[j] / d;
            num += c * f_[j];
            den += c;
        }
        return num / den;
    }

private:
    static constexpr double kHi = 16;
    double lo_;
    std::vector<double> x_, f_, w_;
};

Eigen::MatrixXd kernel_matrix(const std::vector<double>& x) {
    double lo = *std::min_element(x.begin(), x.end());
    AiChebyshev ai(lo);
    double Y = std::max(16 - lo, 1.0);
    const auto& g = gl20();
    int np = std::max(1, static_cast<int>(std::ceil(Y)));
    double step = Y / np;
    std::vector<double> y, v;
    for (int p = 0; p < np; ++p)
        for (int k = 0; k < 20; ++k) {
            y.push_back((p + 0.5) * step + 0.5 * step * g.x[k]);
            v.push_back(0.5 * step * g.w[k]);
        }
    auto N = static_cast<Eigen::Index>(x.size()), M = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd H(N, M);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < M; ++k) H(i, k) = x[i] + y[k] > 16 ? 0.0 : ai(x[i] + y[k]) * std::sqrt(v[k]);
    return H * H.transpose();
}

struct Nodes {
    std::vector<double> x, w;
};

// N-point Gauss-Legendre in u on (0,1), mapped by x = s + u/(1-u).
Nodes mapped_nodes(double s, int N) {
    Nodes n;
    Eigen::VectorXd xs, ws;
    // Golub-Welsch for arbitrary N.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    for (int k = 1; k < N; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int k = 0; k < N; ++k) {
        double t = es.eigenvalues()(k), wt = 2 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
        double u = 0.5 * (t + 1), wu = 0.5 * wt;
        n.x.push_back(s + u / (1 - u));
        n.w.push_back(wu / ((1 - u) * (1 - u)));
    }
    return n;
}

double nystrom(double s, int N) {
    auto nd = mapped_nodes(s, N);
    // Nodes past the cutoff contribute zero rows; drop them.
    std::vector<double> x, sw;
    for (std::size_t i = 0; i < nd.x.size(); ++i)
        if (nd.x[i] <= 16) {
            x.push_back(nd.x[i]);
            sw.push_back(std::sqrt(nd.w[i]));
        }
    if (x.empty()) return 1.0;
    Eigen::MatrixXd K = kernel_matrix(x);
    auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) -= sw[i] * K(i, j) * sw[j];
    return A.partialPivLu().determinant();
}

} // namespace

AiryValue airy(double s) {
    if (!(std::abs(s) <= 30)) throw ConfigError("airy argument outside [-30, 30]");
    return airy_unchecked(s);
}

AiryTable airy_table(const std::vector<double>& grid) {
    AiryTable t;
    t.grid = grid;
    for (double s : grid) {
        auto v = airy(s);
        t.ai.push_back(v.ai);
        t.ai_prime.push_back(v.aip);
    }
    return t;
}

double airy_ode_residual(double s, double h) {
    double d2 = (-airy_ai(s + 2 * h) + 16 * airy_ai(s + h) - 30 * airy_ai(s) + 16 * airy_ai(s - h) - airy_ai(s - 2 * h)) /
                (12 * h * h);
    return d2 - s * airy_ai(s);
}

double airy_kernel(double s, double t) {
    if (s < -12 || t < -12) throw ConfigError("airy kernel arguments must be >= -12");
    double Y = std::max(16 - std::min(s, t), 1.0);
    return panels([&](double x) { return ai_clipped(s + x) * ai_clipped(t + x); }, 0.0, Y, 0.5, 0.0);
}

std::string to_string(TWMethod m) {
    switch (m) {
    case TWMethod::Fredholm: return "fredholm";
    case TWMethod::Painleve: return "painleve";
    case TWMethod::Series: return "series";
    }
    return "?";
}

TWEval tw_gue_fredholm(double s) {
    if (s < -10) throw ConfigError("tw_gue_fredholm needs s >= -10");
    TWEval e;
    e.s = s;
    e.method = TWMethod::Fredholm;
    double prev = nystrom(s, 16);
    for (int N = 32; N <= 256; N *= 2) {
        double cur = nystrom(s, N);
        if (std::abs(cur - prev) < 1e-13) {
            e.F = std::clamp(cur, 0.0, 1.0);
            e.est_error = std::abs(cur - prev);
            e.nodes = N;
            return e;
        }
        prev = cur;
    }
    throw NumericError("Fredholm determinant not converged at N = 256");
}

namespace {

using State = std::array<double, 4>; // q, q', int_t^inf q^2, int_t^inf x q^2

std::vector<State> painleve_states(const std::vector<double>& ts, double t0, double tol) {
    namespace ode = boost::numeric::odeint;
    auto a = airy(t0);
    double i1 = airy_kernel(t0, t0);
    double i2 = panels([&](double x) { double v = ai_clipped(t0 + x); return (t0 + x) * v * v; }, 0.0,
                       std::max(16 - t0, 1.0), 0.5, 0.0);
    State st{a.ai, a.aip, i1, i2};
    auto sys = [](const State& y, State& dy, double t) {
        if (std::abs(y[0]) > 1e6) throw NumericError("left boundary too far: Painleve solution blew up");
        dy[0] = y[1];
        dy[1] = 2 * y[0] * y[0] * y[0] + t * y[0];
        dy[2] = -y[0] * y[0];
        dy[3] = -t * y[0] * y[0];
    };
    // Distinct descending times starting at t0; integrate_times reports
    // repeated times only once.
    for (double t : ts)
        if (t > t0) throw ConfigError("Painleve evaluation points must not exceed t0");
    std::vector<double> times(ts.begin(), ts.end());
    times.push_back(t0);
    std::sort(times.begin(), times.end(), std::greater<>());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<State> seen;
    if (times.size() == 1) seen.push_back(st);
    else {
        auto stepper = ode::make_dense_output(1e-30, tol, ode::runge_kutta_dopri5<State>());
        ode::integrate_times(stepper, sys, st, times.begin(), times.end(), -0.01,
                             [&](const State& y, double) { seen.push_back(y); });
    }
    if (seen.size() != times.size()) throw NumericError("Painleve integration stopped early");
    std::vector<State> out;
    for (double t : ts) {
        auto k = std::lower_bound(times.begin(), times.end(), t, std::greater<>()) - times.begin();
        out.push_back(seen[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace

std::vector<TWEval> tw_gue_painleve(const std::vector<double>& s, double t0) {
    for (double v : s)
        if (v < -10) throw ConfigError("tw_gue_painleve needs s >= -10");
    if (s.empty()) return {};
    auto fine = painleve_states(s, t0, 1e-13);
    auto coarse = painleve_states(s, t0, 1e-11);
    std::vector<TWEval> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto F = [&](const State& y) { return std::exp(-(y[3] - s[i] * y[2])); };
        TWEval e;
        e.s = s[i];
        e.method = TWMethod::Painleve;
        e.F = std::clamp(F(fine[i]), 0.0, 1.0);
        e.est_error = std::abs(F(fine[i]) - F(coarse[i]));
        out.push_back(e);
    }
    return out;
}

TWEval tw_gue_painleve(double s, double t0) { return tw_gue_painleve(std::vector<double>{s}, t0).front(); }

std::vector<double> hastings_mcleod_q(const std::vector<double>& t, double t0) {
    auto st = painleve_states(t, t0, 1e-13);
    std::vector<double> q;
    for (auto& y : st) q.push_back(y[0]);
    return q;
}

TWEval tw_gue_series(double s, int lmax, int nodes) {
    if (s < -10) throw ConfigError("tw_gue_series needs s >= -10");
    if (lmax < 1 || lmax > 3) throw ConfigError("series path supports 1 <= lmax <= 3");
    auto nd = mapped_nodes(s, nodes);
    std::vector<double> x, w;
    for (std::size_t i = 0; i < nd.x.size(); ++i)
        if (nd.x[i] <= 16) {
            x.push_back(nd.x[i]);
            w.push_back(nd.w[i]);
        }
    Eigen::MatrixXd K = kernel_matrix(x);
    std::size_t n = x.size();
    double t1 = 0, t2 = 0, t3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        t1 += w[i] * K(i, i);
        if (lmax < 2) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = K(i, i) * K(j, j) - K(i, j) * K(j, i);
            t2 += w[i] * w[j] * d2;
            if (lmax < 3) continue;
            for (std::size_t k = 0; k < n; ++k) {
                Eigen::Matrix3d M;
                M << K(i, i), K(i, j), K(i, k), K(j, i), K(j, j), K(j, k), K(k, i), K(k, j), K(k, k);
                t3 += w[i] * w[j] * w[k] * M.determinant();
            }
        }
    }
    TWEval e;
    e.s = s;
    e.method = TWMethod::Series;
    e.F = 1 - t1 + t2 / 2 - t3 / 6;
    e.nodes = nodes;
    // First omitted term, bounded by Hadamard through the trace.
    e.est_error = std::pow(t1, lmax + 1) * std::pow(lmax + 1.0, (lmax + 1) / 2.0) / std::tgamma(lmax + 2.0);
    return e;
}

} // namespace cg
