#pragma once

#include <string>
#include <vector>

namespace cg {

struct AiryValue {
    double ai = 0, aip = 0;
};

// Ai and Ai' by contour quadrature; |s| <= 30.
AiryValue airy(double s);
inline double airy_ai(double s) { return airy(s).ai; }

struct AiryTable {
    std::vector<double> grid, ai, ai_prime;
};
AiryTable airy_table(const std::vector<double>& grid);

// Ai''(s) - s Ai(s) with Ai'' from a five-point centered stencil.
double airy_ode_residual(double s, double h = 1e-2);

// int_0^inf Ai(s+x) Ai(t+x) dx; s, t >= -12.
double airy_kernel(double s, double t);

enum class TWMethod { Fredholm, Painleve, Series };
std::string to_string(TWMethod m);

struct TWEval {
    double s = 0;
    double F = 0;
    TWMethod method = TWMethod::Fredholm;
    double est_error = 0;
    int nodes = 0;
};

// det(I - K_Ai) on L^2(s, inf), Nystrom with x = s + u/(1-u); s >= -10.
TWEval tw_gue_fredholm(double s);

// exp(-int_s^inf (t-s) q(t)^2 dt) with q integrated backward from t0 with
// Airy initial data. The vector form integrates once for all points.
std::vector<TWEval> tw_gue_painleve(const std::vector<double>& s, double t0 = 10);
TWEval tw_gue_painleve(double s, double t0 = 10);

// The Hastings-McLeod solution itself at the given points (all <= t0).
std::vector<double> hastings_mcleod_q(const std::vector<double>& t, double t0 = 10);

// Literal series 1 + sum_{l <= lmax} (-1)^l/l! int det[K(x_i, x_j)], by product
// cubature. Slow; only for tying the fast paths to the series.
TWEval tw_gue_series(double s, int lmax = 3, int nodes = 40);

} // namespace cg
