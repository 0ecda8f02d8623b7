#pragma once

#include <string>
#include <vector>

#include "cg/model.hpp"

namespace cg {

enum class Regime { LinearLow, StrictlyConcave, LinearHigh, Degenerate };

std::string to_string(Regime r);

struct ShapeEval {
    double g = 0;
    double zeta = 0;  // minimizer in the closed admissible interval
    double c1 = 0;    // may be 0
    double c2 = 0;    // may be +inf
    double sigma = 0; // curvature constant; NaN outside the strictly concave regime
    Regime regime = Regime::Degenerate;
};

// Moments beyond this are reported as +inf.
inline constexpr double kDivergence = 1e14;

ShapeEval shape_exponential(const ParamLaw& alpha, const ParamLaw& beta, double s, double t);
ShapeEval shape_geometric(const ParamLaw& alpha, const ParamLaw& beta, double s, double t);
ShapeEval shape_eval(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta, double s, double t);

// Critical ratios only.
std::pair<double, double> critical_values(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta);

// Closed form for alpha ~ U[lambda/2, lambda/2 + l], beta ~ U[lambda/2, lambda/2 + m].
double shape_exponential_closed_uniform(double lambda, double l, double m, double s, double t);

// Closed form for densities prop. to 1/x on [sqrt q - l, sqrt q] and [sqrt q - m, sqrt q].
double shape_geometric_closed_reciprocal(double q, double l, double m, double s, double t);

// Homogeneous geometric model with a = b = sqrt(q): gamma(r) = g(r, 1) and sigma(r).
double homogeneous_gamma(double q, double r);
double homogeneous_sigma(double q, double r);

struct EmpiricalShape {
    double gamma = 0, zeta = 0, sigma = 0;
    std::size_t m = 0, n = 0;
};

// g_{m,n}(z) = (1/n) sum_i a_i/(z - a_i) + (1/n) sum_j b_j z/(1 - b_j z), and its derivatives.
double empirical_g(const std::vector<double>& a, const std::vector<double>& b, double z, int d = 0);
EmpiricalShape empirical_shape(const std::vector<double>& a, const std::vector<double>& b);

// p(s) = floor(n gamma + n^{1/3} sigma s).
long long scaling_index(const EmpiricalShape& e, double s);

// Points on the level curve g = 1, parametrized by angle in (0, pi/2), for plotting.
struct LevelPoint {
    double theta, x, y;
};
std::vector<LevelPoint> level_curve(ModelKind kind, const ParamLaw& alpha, const ParamLaw& beta, int npts);

} // namespace cg
