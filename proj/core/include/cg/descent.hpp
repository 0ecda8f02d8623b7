#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cg/exactdist.hpp"

namespace cg {

// f(z) = -(1/n) sum log(z - a_i) + (1/n) sum log(1 - z b_j) + (gamma + m/n) log z,
// principal branches, so that F_{m,n,x}(z) = exp(n f(z)) z^{x - n gamma}.
struct ActionFunction {
    std::vector<double> a, b;
    double gamma = 0, zeta = 0, sigma = 0;

    // Distinct values with multiplicities; zero b's are dropped (they only
    // shift z f' by a constant).
    std::vector<double> a_distinct, b_distinct;
    std::vector<int> a_mult, b_mult;
    int b_zeros = 0;

    std::size_t m() const { return a.size(); }
    std::size_t n() const { return b.size(); }

    cplx f(cplx z) const;
    double u(cplx z) const { return f(z).real(); }
    double v(cplx z) const { return f(z).imag(); }
    cplx fp(cplx z) const;
    // f(w) - f(z) without cancellation for nearby points on one branch.
    cplx df(cplx z, cplx w) const;
    // f'''(zeta) = -2 sigma^3 / zeta^3.
    double f3_zeta() const { return -2 * sigma * sigma * sigma / (zeta * zeta * zeta); }
};

// a_i in (0, 1), b_j in [0, 1), at least one positive b.
ActionFunction make_action(std::vector<double> a, std::vector<double> b);

// Coefficients (constant term first) of P = z f'(z) prod (z - a) prod (1 - b z)
// over distinct parameters.
std::vector<double> numerator_poly(const ActionFunction& af);

// Real zeros of f': one per gap between consecutive distinct a's and between
// consecutive distinct 1/b's, plus zeta twice. Sorted.
std::vector<double> locate_zeros(const ActionFunction& af);

enum class TraceDirection { Descent, Ascent };
// Descent stops on |z| <= delta (ReachedOrigin); ascent on |z| >= R.
enum class TraceStatus { ReachedOrigin, ExitedDiskRadius, StepLimit };
std::string to_string(TraceStatus s);

struct TraceOptions {
    double eps = 0;    // initial analytic step; 0 picks min(eps0/1024, gap/8)
    double delta = 0;  // 0 means 0.1 zeta
    double R = 0;      // 0 means 3 max 1/b
    double dv_tol = 1e-10;
    int max_steps = 200000;
};

struct TracedContour {
    TraceDirection direction = TraceDirection::Descent;
    std::vector<cplx> z;   // z[0] = zeta
    std::vector<double> t; // arclength
    TraceStatus status = TraceStatus::StepLimit;
    double eps = 0, delta = 0, R = 0;
    double zeta = 0;
};

TracedContour trace_phi(const ActionFunction& af, TraceDirection dir, const TraceOptions& opt = {});

// First arclength where |z - zeta| = e, resp. |z| = d; NaN if never reached.
double tau_eps(const TracedContour& tc, double e);
double tau_delta(const TracedContour& tc, double d);

// Closed contour made of straight pieces and arcs of circles about 0.
struct ContourPiece {
    bool arc = false;
    cplx p0, p1;           // line endpoints
    double r = 0, th0 = 0, th1 = 0; // arc r e^{i th}, th from th0 to th1
    cplx at(double s) const;        // s in [0, 1]
    cplx dz(double s) const;        // d/ds
};
struct Contour {
    std::vector<ContourPiece> pieces;
    cplx start() const { return pieces.front().at(0); }
    cplx end() const { return pieces.back().at(1); }
    std::vector<cplx> sample(int per_piece) const;
};

// Phi, closed through 0, then its conjugate reversed.
Contour build_gamma(const TracedContour& phi);
// Phi up to |z| = delta, the arc of |z| = delta through -delta, then the conjugate.
Contour build_gamma_prime(const TracedContour& phi, double delta);

// (1/2 pi i) \oint F_{m,n,x} dz along the contour, refining panels until two
// successive levels agree.
Estimate contour_I_descent(const KernelContext& ctx, long long x, const Contour& gamma);

} // namespace cg
