#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "cg/lpp.hpp"

namespace cg {

using cplx = std::complex<double>;

struct KernelOptions {
    double rho = 0;       // 0 picks the default radius
    int quad_nodes = 512; // starting node count, doubled until converged
    double tail_eps = 1e-14;
};

// Parameters of the geometric model W(i,j) ~ Geom(a_i b_j), plus the saddle
// quantities of the empirical shape.
struct KernelContext {
    std::vector<double> a, b;
    double rho = 0;
    int quad_nodes = 512;
    double tail_eps = 1e-14;
    double gamma = 0, zeta = 0, sigma = 0;

    std::size_t m() const { return a.size(); }
    std::size_t n() const { return b.size(); }
};

// Default rho: midpoint of (max a v max b, 1), capped so rho^2 <= 0.97.
KernelContext make_kernel_context(std::vector<double> a, std::vector<double> b, const KernelOptions& opt = {});

// prod_j (1 - z b_j) / prod_i (z - a_i) * z^(m + x), accumulated in log space.
cplx log_integrand_F(const std::vector<double>& a, const std::vector<double>& b, long long x, cplx z);
cplx integrand_F(const std::vector<double>& a, const std::vector<double>& b, long long x, cplx z);

struct Estimate {
    double value = 0;
    double est_error = 0;
    int nodes = 0;
};

// (1/2 pi i) \oint_{|z| = radius} F^{a,b}_{m,n,x}(z) dz by the trapezoid rule.
Estimate contour_I(const std::vector<double>& a, const std::vector<double>& b, long long x, double radius,
                   int nodes = 512);
inline Estimate contour_I(const KernelContext& c, long long x) { return contour_I(c.a, c.b, x, c.rho, c.quad_nodes); }

enum class KernelRoute { Series, DoubleContour, FiniteSum };
std::string to_string(KernelRoute r);

// sum_l I^{a,b}_{m,n,x+l} I^{b,a}_{n,m,y+l}, truncated by the rho-decay bound.
Estimate kernel_series(const KernelContext& c, long long x, long long y);
// Tensor trapezoid rule for F F / (1 - z w) on |z| = |w| = rho.
Estimate kernel_double_contour(const KernelContext& c, long long x, long long y);
// Explicit double sum over parameters; square case, injective parameters only.
// Note the offset: the kernel above equals kernel_finite_sum(a, b, x + n, y + n).
double kernel_finite_sum(const std::vector<double>& a, const std::vector<double>& b, long long x, long long y);

struct KernelMatrix {
    Eigen::MatrixXd K;
    std::vector<long long> index;
    KernelRoute route = KernelRoute::Series;
};
KernelMatrix kernel_matrix(const KernelContext& c, const std::vector<long long>& xs,
                           KernelRoute route = KernelRoute::Series);

// C^{-1} for C = [1/(1 - a_i b_j)] by the Cramer product formula.
Eigen::MatrixXd cauchy_inverse(const std::vector<double>& a, const std::vector<double>& b);

struct DistEval {
    long long k = 0;
    double cdf = 0;
    double est_error = 0;
    std::string method;
    std::string warning; // empty unless something deserves a look
};

enum class FredholmRoute { Auto, MinorSum, Determinant };

// P(G(m,n) <= k) as the Fredholm series of the kernel over {k, k+1, ...}.
// MinorSum evaluates the l <= n sum of principal minors literally (n <= 3);
// Determinant evaluates det(I - K) on the truncated index set.
DistEval cdf_fredholm_series(const KernelContext& c, long long k, FredholmRoute route = FredholmRoute::Auto);
std::vector<DistEval> cdf_fredholm_range(const KernelContext& c, long long kmin, long long kmax,
                                         FredholmRoute route = FredholmRoute::Auto);

// Square case with injective parameters: a finite n x n determinant.
DistEval cdf_det_form(const std::vector<double>& a, const std::vector<double>& b, long long k);

// Empirical CDF of G(m,n) for fixed parameters over independent replicas.
struct McCdf {
    std::vector<long long> k;
    std::vector<double> cdf, stderr_;
    std::size_t replicas = 0;
};
McCdf cdf_monte_carlo(const std::vector<double>& a, const std::vector<double>& b, const std::vector<long long>& ks,
                      std::size_t replicas, std::uint64_t seed, int threads = 1);

// Schur polynomials and the Schur measure.
using Partition = std::vector<int>;
double schur_bialternant(const Partition& lambda, const std::vector<double>& x);
std::vector<Tableau> ssyt_enumerate(const Partition& lambda, int n);
double schur_by_enumeration(const Partition& lambda, const std::vector<double>& x);
// Product formula for the normalization; equals det[1/(1 - a_i b_j)].
double schur_normalization(const std::vector<double>& a, const std::vector<double>& b);
double schur_measure(const Partition& lambda, const std::vector<double>& a, const std::vector<double>& b);
// All partitions with at most len parts, each part <= width.
std::vector<Partition> partitions_in_box(int len, int width);

// det[sum_x f_i(x) g_j(x)] == (1/n!) sum_{x_1..x_n} det[f_i(x_j)] det[g_i(x_j)],
// checked in exact rational arithmetic. f and g are n rows over a common finite set.
using Rational = boost::multiprecision::cpp_rational;
using RationalTable = std::vector<std::vector<Rational>>;
bool cauchy_binet_check(const RationalTable& f, const RationalTable& g);
Rational rational_det(std::vector<std::vector<Rational>> M);

} // namespace cg
