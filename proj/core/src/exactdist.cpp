#include "cg/exactdist.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "cg/errors.hpp"
#include "cg/parallel.hpp"
#include "cg/rng.hpp"
#include "cg/shape.hpp"

namespace cg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxNodes = 1 << 22;

int pow2_at_least(long long v) {
    long long p = 1;
    while (p < v) p <<= 1;
    if (p > kMaxNodes) throw NumericError("quadrature not converged: node count beyond limit");
    return static_cast<int>(p);
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// Trapezoid values of I_x = (1/2 pi i) \oint F_x dz on one circle, for all x at
// once: I_x = r^{x+1} (1/N) sum_k F_0(z_k) e^{2 pi i (x+1) k / N}, an inverse DFT.
// Stored as mantissa * exp(log_scale(x)) so large m, n do not overflow.
struct CircleTable {
    double radius = 0;
    int N = 0;
    double logM = 0; // max log|F_0| over the nodes
    std::vector<cplx> S;
    double err = 0; // mantissa-unit error estimate from the N vs 2N comparison

    double log_scale(long long x) const { return logM + static_cast<double>(x + 1) * std::log(radius); }
    cplx mantissa(long long x) const { return S[static_cast<std::size_t>((x + 1) % N)]; }
    double value(long long x) const { return std::exp(log_scale(x)) * mantissa(x).real(); }
};

CircleTable make_table(const std::vector<double>& a, const std::vector<double>& b, double radius, int N) {
    CircleTable t;
    t.radius = radius;
    t.N = N;
    std::vector<cplx> lf(N);
    t.logM = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < N; ++k) {
        double th = 2 * std::numbers::pi * k / N;
        lf[k] = log_integrand_F(a, b, 0, std::polar(radius, th));
        t.logM = std::max(t.logM, lf[k].real());
    }
    std::vector<cplx> f(N);
    for (int k = 0; k < N; ++k) f[k] = std::exp(lf[k] - t.logM);
    Eigen::FFT<double> fft;
    fft.inv(t.S, f);
    return t;
}

// Doubles the node count until the tables at N and 2N agree on [xlo, xhi].
CircleTable converged_table(const std::vector<double>& a, const std::vector<double>& b, double radius, long long xlo,
                            long long xhi, int nodes) {
    // The polynomial part of F_0 has degree n, so N > x + n + 1 removes aliasing from it.
    int N = pow2_at_least(std::max<long long>(nodes, 2 * (xhi + static_cast<long long>(b.size()) + 2)));
    auto coarse = make_table(a, b, radius, N);
    for (;;) {
        if (2LL * N > kMaxNodes) throw NumericError("quadrature not converged");
        auto fine = make_table(a, b, radius, 2 * N);
        double shift = std::exp(coarse.logM - fine.logM);
        double worst = 0;
        bool ok = true;
        for (long long x = xlo; x <= xhi; ++x) {
            cplx mf = fine.mantissa(x), mc = coarse.mantissa(x) * shift;
            double d = std::abs(mf.real() - mc.real());
            worst = std::max(worst, d);
            if (d > std::max(1e-12 * std::abs(mf.real()), 1e3 * kEps)) ok = false;
            if (std::abs(mf.imag()) > std::max(1e-10 * std::abs(mf.real()), 1e4 * kEps))
                throw NumericError("quadrature not converged: imaginary residue");
        }
        if (ok) {
            fine.err = std::max(worst, 64 * kEps);
            return fine;
        }
        N *= 2;
        coarse = std::move(fine);
    }
}

void check_params(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ConfigError("kernel needs nonempty parameter lists");
    for (double x : a)
        if (!(x >= 0 && x < 1)) throw ConfigError("geometric parameters must lie in [0, 1)");
    for (double x : b)
        if (!(x >= 0 && x < 1)) throw ConfigError("geometric parameters must lie in [0, 1)");
}

void check_injective(const std::vector<double>& v, const char* what) {
    auto s = v;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] < 1e-8)
            throw ConfigError(std::string("near-repeated parameters in ") + what + ": use contour form");
}

double log_bound(const std::vector<double>& a, const std::vector<double>& b, double radius) {
    // Max of log|F_0| on the circle, sampled on 720 points.
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 720; ++k)
        m = std::max(m, log_integrand_F(a, b, 0, std::polar(radius, 2 * std::numbers::pi * k / 720)).real());
    return m;
}

double det_lu(const Eigen::MatrixXd& M) { return M.rows() == 0 ? 1.0 : M.partialPivLu().determinant(); }

// Sum over all l-subsets of principal minors, l <= lmax, with alternating signs.
double minor_series(const Eigen::MatrixXd& K, int lmax) {
    int s = static_cast<int>(K.rows());
    double total = 1;
    std::vector<int> idx;
    std::function<void(int, int)> rec = [&](int start, int l) {
        if (static_cast<int>(idx.size()) == l) {
            Eigen::MatrixXd sub(l, l);
            for (int r = 0; r < l; ++r)
                for (int c = 0; c < l; ++c) sub(r, c) = K(idx[r], idx[c]);
            total += (l % 2 ? -1.0 : 1.0) * det_lu(sub);
            return;
        }
        for (int i = start; i < s; ++i) {
            idx.push_back(i);
            rec(i + 1, l);
            idx.pop_back();
        }
    };
    for (int l = 1; l <= lmax; ++l) rec(0, l);
    return total;
}

} // namespace

KernelContext make_kernel_context(std::vector<double> a, std::vector<double> b, const KernelOptions& opt) {
    check_params(a, b);
    KernelContext c;
    double top = std::max(max_of(a), max_of(b));
    c.rho = opt.rho > 0 ? opt.rho : std::min(0.5 * (top + 1), std::sqrt(0.97));
    if (!(c.rho > top && c.rho * c.rho < 1)) throw ConfigError("rho must separate the parameters from 1/b and satisfy rho^2 < 1");
    if (opt.quad_nodes < 8) throw ConfigError("quad_nodes too small");
    if (!(opt.tail_eps > 0)) throw ConfigError("tail_eps must be positive");
    c.quad_nodes = opt.quad_nodes;
    c.tail_eps = opt.tail_eps;
    c.a = std::move(a);
    c.b = std::move(b);
    if (max_of(c.a) > 0 && max_of(c.b) > 0) {
        auto e = empirical_shape(c.a, c.b);
        c.gamma = e.gamma;
        c.zeta = e.zeta;
        c.sigma = e.sigma;
    }
    return c;
}

cplx log_integrand_F(const std::vector<double>& a, const std::vector<double>& b, long long x, cplx z) {
    cplx acc = 0;
    for (double ai : a) {
        cplx d = z - ai;
        if (std::abs(d) < 1e-14) throw NumericError("integrand evaluated at a pole");
        acc -= std::log(d);
    }
    for (double bj : b) acc += std::log(1.0 - z * bj);
    acc += static_cast<double>(static_cast<long long>(a.size()) + x) * std::log(z);
    return acc;
}

cplx integrand_F(const std::vector<double>& a, const std::vector<double>& b, long long x, cplx z) {
    return std::exp(log_integrand_F(a, b, x, z));
}

Estimate contour_I(const std::vector<double>& a, const std::vector<double>& b, long long x, double radius, int nodes) {
    if (x < 0) throw ConfigError("contour_I needs x >= 0");
    if (!(radius > max_of(a))) throw ConfigError("contour radius must enclose all a_i");
    auto t = converged_table(a, b, radius, x, x, nodes);
    double sc = std::exp(t.log_scale(x));
    return {sc * t.mantissa(x).real(), sc * t.err, t.N};
}

std::string to_string(KernelRoute r) {
    switch (r) {
    case KernelRoute::Series: return "series";
    case KernelRoute::DoubleContour: return "double_contour";
    case KernelRoute::FiniteSum: return "finite_sum";
    }
    return "?";
}

Estimate kernel_series(const KernelContext& c, long long x, long long y) {
    if (x < 0 || y < 0) throw ConfigError("kernel needs x, y >= 0");
    double lr = std::log(c.rho);
    double lca = log_bound(c.a, c.b, c.rho), lcb = log_bound(c.b, c.a, c.rho);
    // |I_x| <= C rho^{x+1}, so the tail after L terms is below C_a C_b rho^{x+y+2L+2} / (1 - rho^2).
    double need = std::log(c.tail_eps * (1 - c.rho * c.rho)) - lca - lcb - static_cast<double>(x + y + 2) * lr;
    long long L = std::max(0LL, static_cast<long long>(std::ceil(need / (2 * lr))));
    if (L > 1000000) throw NumericError("kernel series terms do not decay");
    auto ta = converged_table(c.a, c.b, c.rho, x, x + L, c.quad_nodes);
    auto tb = converged_table(c.b, c.a, c.rho, y, y + L, c.quad_nodes);
    double sum = 0, err = 0;
    for (long long l = 0; l <= L; ++l) {
        double s = std::exp(ta.log_scale(x + l) + tb.log_scale(y + l));
        double ma = ta.mantissa(x + l).real(), mb = tb.mantissa(y + l).real();
        sum += s * ma * mb;
        err += s * (ta.err * std::abs(mb) + tb.err * std::abs(ma));
    }
    err += std::exp(lca + lcb + static_cast<double>(x + y + 2 * L + 4) * lr) / (1 - c.rho * c.rho);
    return {sum, err, std::max(ta.N, tb.N)};
}

Estimate kernel_double_contour(const KernelContext& c, long long x, long long y) {
    if (x < 0 || y < 0) throw ConfigError("kernel needs x, y >= 0");
    double r = c.rho;
    auto eval = [&](int N) {
        std::vector<cplx> p(N), q(N), z(N);
        double ma = -std::numeric_limits<double>::infinity(), mb = ma;
        std::vector<cplx> lp(N), lq(N);
        for (int k = 0; k < N; ++k) {
            z[k] = std::polar(r, 2 * std::numbers::pi * k / N);
            lp[k] = log_integrand_F(c.a, c.b, x, z[k]) + std::log(z[k]);
            lq[k] = log_integrand_F(c.b, c.a, y, z[k]) + std::log(z[k]);
            ma = std::max(ma, lp[k].real());
            mb = std::max(mb, lq[k].real());
        }
        for (int k = 0; k < N; ++k) {
            p[k] = std::exp(lp[k] - ma);
            q[k] = std::exp(lq[k] - mb);
        }
        cplx acc = 0;
        for (int k = 0; k < N; ++k) {
            cplx row = 0;
            for (int l = 0; l < N; ++l) row += q[l] / (1.0 - z[k] * z[l]);
            acc += p[k] * row;
        }
        double scale = std::exp(ma + mb);
        return std::pair{scale * acc.real() / (double(N) * N), scale};
    };
    int N = pow2_at_least(std::max<long long>(c.quad_nodes, 2 * (std::max(x + (long long)c.n(), y + (long long)c.m()) + 2)));
    auto prev = eval(N);
    for (;;) {
        if (2LL * N > (1 << 13)) throw NumericError("double contour quadrature not converged");
        auto cur = eval(2 * N);
        double d = std::abs(cur.first - prev.first);
        if (d <= std::max(1e-12 * std::abs(cur.first), 1e3 * kEps * cur.second))
            return {cur.first, std::max(d, 64 * kEps * cur.second), 2 * N};
        N *= 2;
        prev = cur;
    }
}

double kernel_finite_sum(const std::vector<double>& a, const std::vector<double>& b, long long x, long long y) {
    if (a.size() != b.size()) throw ConfigError("finite-sum kernel needs equally many a and b parameters");
    check_params(a, b);
    check_injective(a, "a");
    check_injective(b, "b");
    std::size_t n = a.size();
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double num = 1, den = 1;
        for (std::size_t k = 0; k < n; ++k) {
            num *= 1 - a[i] * b[k];
            if (k != i) den *= a[k] - a[i];
        }
        u[i] = std::pow(a[i], static_cast<double>(x)) * num / den;
        num = 1;
        den = 1;
        for (std::size_t k = 0; k < n; ++k) {
            num *= 1 - a[k] * b[i];
            if (k != i) den *= b[k] - b[i];
        }
        v[i] = std::pow(b[i], static_cast<double>(y)) * num / den;
    }
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += u[i] * v[j] / (1 - a[i] * b[j]);
    return s;
}

KernelMatrix kernel_matrix(const KernelContext& c, const std::vector<long long>& xs, KernelRoute route) {
    KernelMatrix km;
    km.index = xs;
    km.route = route;
    auto s = static_cast<Eigen::Index>(xs.size());
    km.K.resize(s, s);
    long long off = static_cast<long long>(c.n());
    if (route == KernelRoute::FiniteSum && c.m() != c.n())
        throw ConfigError("finite-sum kernel is square only; use a contour route");
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j) {
            long long x = xs[i], y = xs[j];
            switch (route) {
            case KernelRoute::Series: km.K(i, j) = kernel_series(c, x, y).value; break;
            case KernelRoute::DoubleContour: km.K(i, j) = kernel_double_contour(c, x, y).value; break;
            case KernelRoute::FiniteSum: km.K(i, j) = kernel_finite_sum(c.a, c.b, x + off, y + off); break;
            }
        }
    return km;
}

Eigen::MatrixXd cauchy_inverse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("Cauchy matrix must be square");
    check_injective(a, "a");
    check_injective(b, "b");
    auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd inv(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double num = 1, den = 1;
            for (Eigen::Index k = 0; k < n; ++k) {
                num *= (1 - a[j] * b[k]) * (1 - a[k] * b[i]);
                if (k != i) den *= b[k] - b[i];
                if (k != j) den *= a[k] - a[j];
            }
            inv(i, j) = num / den / (1 - a[j] * b[i]);
        }
    return inv;
}

DistEval cdf_det_form(const std::vector<double>& a, const std::vector<double>& b, long long k) {
    if (k < 0) throw ConfigError("k must be nonnegative");
    check_params(a, b);
    auto n = static_cast<Eigen::Index>(a.size());
    auto Ci = cauchy_inverse(a, b);
    Eigen::MatrixXd C(n, n), T(n, n);
    double e = static_cast<double>(k + n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index j = 0; j < n; ++j) {
            C(p, j) = 1 / (1 - a[p] * b[j]);
            T(p, j) = std::pow(a[p] * b[j], e) / (1 - a[p] * b[j]);
        }
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - Ci * T;
    DistEval d;
    d.k = k;
    d.method = "det";
    d.cdf = det_lu(M);
    double resid = (C * Ci - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    d.est_error = std::max(resid, kEps) * static_cast<double>(n);
    if (cond > 1e12) d.warning = "ill-conditioned Cauchy matrix (cond " + std::to_string(cond) + ", residual " + std::to_string(resid) + ")";
    return d;
}

std::vector<DistEval> cdf_fredholm_range(const KernelContext& c, long long kmin, long long kmax, FredholmRoute route) {
    if (kmin < 0 || kmax < kmin) throw ConfigError("need 0 <= kmin <= kmax");
    if (!(c.zeta > 0)) throw ConfigError("Fredholm evaluation needs positive parameters on both sides");
    double lr = std::log(c.rho);
    double lca = log_bound(c.a, c.b, c.rho), lcb = log_bound(c.b, c.a, c.rho);
    double one = 1 - c.rho * c.rho;
    // Certified tail of the trace: sum_{x > X} |K(x,x)| <= C_a C_b rho^{2X+4} / (1 - rho^2)^2.
    double need = std::log(c.tail_eps) + 2 * std::log(one) - lca - lcb;
    long long X = static_cast<long long>(std::ceil(need / (2 * lr))) - 2;
    X = std::max(X, kmax) + 1;
    if (X - kmin > 20000) throw NumericError("truncation insufficient: index set too large");
    long long X2 = 2 * X - kmin + 1;

    // Both integrals on their own saddle circles; the diagonal similarity
    // zeta^{y-x} keeps entries of moderate size and leaves determinants alone.
    double z = c.zeta, lz = std::log(z);
    double lF = log_integrand_F(c.a, c.b, 0, cplx(z, 0)).real();
    auto ta = converged_table(c.a, c.b, z, kmin, X2, c.quad_nodes);
    auto tb = converged_table(c.b, c.a, 1 / z, kmin, X2, c.quad_nodes);
    std::size_t len = static_cast<std::size_t>(X2 - kmin + 1);
    std::vector<double> A(len), B(len), dA(len), dB(len);
    for (std::size_t j = 0; j < len; ++j) {
        long long x = kmin + static_cast<long long>(j);
        double sa = std::exp(ta.log_scale(x) - static_cast<double>(x) * lz - lF);
        double sb = std::exp(tb.log_scale(x) + static_cast<double>(x) * lz + lF);
        A[j] = sa * ta.mantissa(x).real();
        B[j] = sb * tb.mantissa(x).real();
        dA[j] = sa * ta.err;
        dB[j] = sb * tb.err;
    }
    auto S = static_cast<Eigen::Index>(X - kmin + 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(S, S), E = Eigen::MatrixXd::Zero(S, S);
    // K(x,y) = sum_l A_{x+l} B_{y+l}, summed from the far end along each diagonal.
    for (Eigen::Index i = 0; i < S; ++i)
        for (Eigen::Index j = 0; j < S; ++j) {
            if (i > 0 && j > 0) continue; // each diagonal starts on the first row or column
            double acc = 0, eacc = 0;
            std::size_t steps = len - static_cast<std::size_t>(std::max(i, j));
            std::vector<double> partial(steps), perr(steps);
            for (std::size_t l = steps; l-- > 0;) {
                std::size_t xi = static_cast<std::size_t>(i) + l, yj = static_cast<std::size_t>(j) + l;
                acc += A[xi] * B[yj];
                eacc += dA[xi] * std::abs(B[yj]) + std::abs(A[xi]) * dB[yj];
                partial[l] = acc;
                perr[l] = eacc;
            }
            for (std::size_t l = 0; l < steps; ++l) {
                Eigen::Index r = i + static_cast<Eigen::Index>(l), q = j + static_cast<Eigen::Index>(l);
                if (r >= S || q >= S) break;
                K(r, q) = partial[l];
                E(r, q) = perr[l];
            }
        }
    double tail = std::exp(lca + lcb + static_cast<double>(2 * X + 4) * lr) / (one * one);

    std::size_t rank = std::max(c.m(), c.n());
    bool minors = route == FredholmRoute::MinorSum || (route == FredholmRoute::Auto && rank <= 2 && S <= 200);
    if (minors && rank > 3) throw ConfigError("minor-sum route is limited to max(m, n) <= 3; use the determinant route");
    std::vector<DistEval> out;
    for (long long k = kmin; k <= kmax; ++k) {
        auto off = static_cast<Eigen::Index>(k - kmin);
        Eigen::MatrixXd sub = K.bottomRightCorner(S - off, S - off);
        DistEval d;
        d.k = k;
        if (minors) {
            d.cdf = minor_series(sub, static_cast<int>(rank));
            d.method = "series";
        } else {
            d.cdf = det_lu(Eigen::MatrixXd::Identity(S - off, S - off) - sub);
            d.method = "fredholm";
        }
        d.est_error = E.bottomRightCorner(S - off, S - off).sum() + tail;
        if (d.cdf < -1e-8 || d.cdf > 1 + 1e-8) throw NumericError("truncation insufficient");
        d.cdf = std::clamp(d.cdf, 0.0, 1.0);
        out.push_back(d);
    }
    return out;
}

DistEval cdf_fredholm_series(const KernelContext& c, long long k, FredholmRoute route) {
    return cdf_fredholm_range(c, k, k, route).front();
}

McCdf cdf_monte_carlo(const std::vector<double>& a, const std::vector<double>& b, const std::vector<long long>& ks,
                      std::size_t replicas, std::uint64_t seed, int threads) {
    check_params(a, b);
    if (replicas == 0) throw ConfigError("need at least one replica");
    std::vector<double> G(replicas);
    parallel_for(replicas, threads, [&](std::size_t lo, std::size_t hi) {
        ModelSpec spec;
        spec.kind = ModelKind::Geometric;
        for (std::size_t r = lo; r < hi; ++r) {
            spec.seed = replica_seed(seed, r);
            G[r] = lpp_value(sample_weights(spec, a, b).w);
        }
    });
    std::sort(G.begin(), G.end());
    McCdf out;
    out.k = ks;
    out.replicas = replicas;
    double R = static_cast<double>(replicas);
    for (long long k : ks) {
        auto cnt = std::upper_bound(G.begin(), G.end(), static_cast<double>(k)) - G.begin();
        double p = static_cast<double>(cnt) / R;
        out.cdf.push_back(p);
        out.stderr_.push_back(std::sqrt(p * (1 - p) / R));
    }
    return out;
}

// --- Schur polynomials ---

namespace {

void check_partition(const Partition& lam, std::size_t n) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] < 0) throw ConfigError("partition parts must be nonnegative");
        if (i && lam[i] > lam[i - 1]) throw ConfigError("partition parts must be nonincreasing");
    }
    std::size_t len = 0;
    for (int p : lam) len += p > 0;
    if (len > n) throw ConfigError("partition longer than the number of variables");
}

double alternant(const Partition& lam, const std::vector<double>& x) {
    auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            int part = j < static_cast<Eigen::Index>(lam.size()) ? lam[j] : 0;
            M(i, j) = std::pow(x[i], static_cast<double>(part + n - 1 - j));
        }
    return det_lu(M);
}

} // namespace

double schur_bialternant(const Partition& lambda, const std::vector<double>& x) {
    check_partition(lambda, x.size());
    auto s = x;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] <= 1e-12 * std::max(1.0, std::abs(s[i]))) throw ConfigError("bialternant needs distinct variables");
    return alternant(lambda, x) / alternant({}, x);
}

std::vector<Tableau> ssyt_enumerate(const Partition& lambda, int n) {
    check_partition(lambda, static_cast<std::size_t>(std::max(n, 0)));
    Tableau t;
    for (int p : lambda)
        if (p > 0) t.rows.emplace_back(p, 0);
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < static_cast<int>(t.rows.size()); ++r)
        for (int c = 0; c < static_cast<int>(t.rows[r].size()); ++c) cells.emplace_back(r, c);
    std::vector<Tableau> out;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == cells.size()) {
            out.push_back(t);
            return;
        }
        auto [r, c] = cells[k];
        int lo = 1;
        if (c > 0) lo = std::max(lo, t.rows[r][c - 1]);
        if (r > 0) lo = std::max(lo, t.rows[r - 1][c] + 1);
        for (int v = lo; v <= n; ++v) {
            t.rows[r][c] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

double schur_by_enumeration(const Partition& lambda, const std::vector<double>& x) {
    double s = 0;
    for (const auto& T : ssyt_enumerate(lambda, static_cast<int>(x.size()))) {
        double mono = 1;
        for (const auto& row : T.rows)
            for (int v : row) mono *= x[v - 1];
        s += mono;
    }
    return s;
}

double schur_normalization(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("Schur measure needs equally many a and b parameters");
    double z = 1;
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) z *= (a[i] - a[j]) * (b[i] - b[j]);
            z /= 1 - a[i] * b[j];
        }
    return z;
}

double schur_measure(const Partition& lambda, const std::vector<double>& a, const std::vector<double>& b) {
    check_partition(lambda, a.size());
    return alternant(lambda, a) * alternant(lambda, b) / schur_normalization(a, b);
}

std::vector<Partition> partitions_in_box(int len, int width) {
    std::vector<Partition> out;
    Partition p;
    std::function<void(int)> rec = [&](int cap) {
        out.push_back(p);
        if (static_cast<int>(p.size()) == len) return;
        for (int v = 1; v <= cap; ++v) {
            p.push_back(v);
            rec(v);
            p.pop_back();
        }
    };
    rec(width);
    return out;
}

Rational rational_det(std::vector<std::vector<Rational>> M) {
    std::size_t n = M.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && M[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(M[piv], M[c]);
            det = -det;
        }
        det *= M[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (M[r][c] == 0) continue;
            Rational f = M[r][c] / M[c][c];
            for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
        }
    }
    return det;
}

bool cauchy_binet_check(const RationalTable& f, const RationalTable& g) {
    std::size_t n = f.size();
    if (n == 0 || g.size() != n) throw ConfigError("Cauchy-Binet tables need matching row counts");
    std::size_t X = f[0].size();
    for (std::size_t i = 0; i < n; ++i)
        if (f[i].size() != X || g[i].size() != X) throw ConfigError("Cauchy-Binet tables need a common domain");
    std::vector<std::vector<Rational>> lhs(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t x = 0; x < X; ++x) lhs[i][j] += f[i][x] * g[j][x];
    Rational rhs = 0;
    std::vector<std::size_t> tuple(n, 0);
    for (;;) {
        std::vector<std::vector<Rational>> F(n, std::vector<Rational>(n)), Gm(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                F[i][j] = f[i][tuple[j]];
                Gm[i][j] = g[i][tuple[j]];
            }
        rhs += rational_det(F) * rational_det(Gm);
        std::size_t p = 0;
        while (p < n && ++tuple[p] == X) tuple[p++] = 0;
        if (p == n) break;
    }
    Rational fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<long long>(i);
    return rational_det(lhs) == rhs / fact;
}

} // namespace cg
