#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cg/matrix.hpp"

namespace cg {

enum class ModelKind { Exponential, Geometric };

std::string to_string(ModelKind k);

struct PointMass {
    double v;
};
struct Uniform {
    double lo, hi;
};
// Density proportional to (x - lo)^p on [lo, hi], or to x^p when origin is set.
struct PowerDensity {
    double p, lo, hi;
    bool origin = false;
};
// Density proportional to 1/x on [lo, hi].
struct Reciprocal {
    double lo, hi;
};
struct Atoms {
    std::vector<std::pair<double, double>> atoms; // (value, weight)
};

class ParamLaw {
public:
    using Variant = std::variant<PointMass, Uniform, PowerDensity, Reciprocal, Atoms>;

    // Checks the structural invariants (ordering, weights); support against a
    // model kind is checked separately by check_support().
    explicit ParamLaw(Variant v);

    static ParamLaw point(double v) { return ParamLaw(PointMass{v}); }
    static ParamLaw uniform(double lo, double hi) { return ParamLaw(Uniform{lo, hi}); }
    static ParamLaw power(double p, double lo, double hi, bool origin = false) {
        return ParamLaw(PowerDensity{p, lo, hi, origin});
    }
    static ParamLaw reciprocal(double lo, double hi) { return ParamLaw(Reciprocal{lo, hi}); }
    static ParamLaw atoms(std::vector<std::pair<double, double>> a) { return ParamLaw(Atoms{std::move(a)}); }

    const Variant& variant() const { return v_; }

    double lower() const; // left endpoint of the support
    double upper() const; // right endpoint of the support
    bool discrete() const;

    // Inverse-CDF draw from u in (0,1).
    double quantile(double u) const;

    // E[h(x)]. Exact sums for discrete laws, adaptive quadrature otherwise.
    double expect(const std::function<double(double)>& h) const;

    // E[(c0 + c1 x)^-k] for k >= 1. Returns +inf if c0 + c1 x vanishes on the
    // support and the moment diverges, or if c0 + c1 x < 0 somewhere on it.
    double inv_moment(double c0, double c1, int k) const;

    // Throws ConfigError if the support is not admissible for kind.
    void check_support(ModelKind kind) const;

    bool operator==(const ParamLaw& o) const;

private:
    double power_inv_moment(const PowerDensity& d, double c0, double c1, int k) const;
    Variant v_;
};

struct ModelSpec {
    ModelKind kind = ModelKind::Geometric;
    ParamLaw alpha = ParamLaw::point(0.5);
    ParamLaw beta = ParamLaw::point(0.5);
    std::uint64_t seed = 0;
    std::optional<double> boundary_z;
    bool allow_degenerate = false;

    // Throws ConfigError when any invariant is violated.
    void validate() const;
};

struct WeightMatrix {
    ModelKind kind = ModelKind::Exponential;
    Grid<double> w; // w(i-1, j-1) = W(i, j); geometric entries are whole numbers
    std::vector<double> a, b;

    std::size_t m() const { return w.rows(); }
    std::size_t n() const { return w.cols(); }
};

// Extended (m+1) x (n+1) matrix indexed from 0 with W(0,0) = 0.
struct BoundaryWeights {
    ModelKind kind = ModelKind::Exponential;
    double z = 0;
    Grid<double> w;
    std::vector<double> a, b;
};

struct Sequences {
    std::vector<double> a, b;
};

Sequences sample_sequences(const ModelSpec& spec, std::size_t m, std::size_t n);

// Single draws by inverse CDF.
double draw_exponential(double rate, double u);
double draw_geometric(double q, double u); // P(W >= k) = q^k

WeightMatrix sample_weights(const ModelSpec& spec, const std::vector<double>& a, const std::vector<double>& b);
WeightMatrix sample_weights(const ModelSpec& spec, std::size_t m, std::size_t n);

// Draws W(i, j) for one row on demand; used by the streaming DP.
class RowSampler {
public:
    RowSampler(const ModelSpec& spec, const std::vector<double>& a, const std::vector<double>& b);
    // Fills row i (1-based, length n) of interior weights.
    void row(std::size_t i, std::vector<double>& out) const;

private:
    const ModelSpec& spec_;
    const std::vector<double>& a_;
    const std::vector<double>& b_;
};

BoundaryWeights sample_boundary_weights(const ModelSpec& spec, std::size_t m, std::size_t n);
BoundaryWeights sample_boundary_weights(const ModelSpec& spec, const std::vector<double>& a,
                                        const std::vector<double>& b);

// Integral transforms of a single law. The exponential ones:
//   A(z) = E[1/(a+z)], A2(z) = E[(a+z)^-2], A3(z) = E[(a+z)^-3].
double transform_A(const ParamLaw& law, double z);
double transform_A2(const ParamLaw& law, double z);
double transform_A3(const ParamLaw& law, double z);

// Geometric ones, with derivatives d = 0, 1, 2 in z:
//   Ga(z) = E[a/(z-a)],  Gb(z) = E[bz/(1-bz)].
double transform_Ga(const ParamLaw& law, double z, int d = 0);
double transform_Gb(const ParamLaw& law, double z, int d = 0);

} // namespace cg
