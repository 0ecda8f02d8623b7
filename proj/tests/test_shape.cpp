#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cg/errors.hpp"
#include "cg/rng.hpp"
#include "cg/shape.hpp"

using namespace cg;

namespace {

ParamLaw uniform_or_point(double lo, double width) {
    return width == 0 ? ParamLaw::point(lo) : ParamLaw::uniform(lo, lo + width);
}

// Power densities 3a^2 on [0,1] and 4(b-1)^3 on [1,2]; both cone edges finite.
const ParamLaw kCubicA = ParamLaw::power(2, 0, 1);
const ParamLaw kQuarticB = ParamLaw::power(3, 1, 2);

} // namespace

TEST_CASE("exponential point masses give the parabola") {
    auto p = ParamLaw::point(0.5);
    auto e = shape_exponential(p, p, 1, 1);
    CHECK(e.g == doctest::Approx(4).epsilon(1e-12));
    CHECK(e.regime == Regime::StrictlyConcave);
    for (double s : {0.3, 1.0, 4.0})
        for (double t : {0.2, 2.0, 9.0}) {
            double g = std::pow(std::sqrt(s) + std::sqrt(t), 2);
            CHECK(shape_exponential(p, p, s, t).g == doctest::Approx(g).epsilon(1e-11));
            CHECK(shape_exponential_closed_uniform(1, 0, 0, s, t) == doctest::Approx(g).epsilon(1e-14));
        }
}

TEST_CASE("exponential uniform laws at the diagonal") {
    auto u = ParamLaw::uniform(0.5, 1.5);
    CHECK(shape_exponential(u, u, 1, 1).g == doctest::Approx(2 * std::log(3.0)).epsilon(1e-12));
    CHECK(shape_exponential_closed_uniform(1, 1, 1, 1, 1) == doctest::Approx(2 * std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("closed uniform form matches numeric minimization") {
    struct P {
        double lam, l, m;
    };
    for (P p : {P{1, 1, 1}, P{1, 0, 1}, P{2, 0.5, 1.5}, P{1.5, 0.7, 0}, P{0.8, 0.3, 0.3}}) {
        auto a = uniform_or_point(p.lam / 2, p.l), b = uniform_or_point(p.lam / 2, p.m);
        for (double s : {0.1, 0.7, 2.5, 10.0})
            for (double t : {0.1, 1.3, 4.0, 10.0}) {
                double num = shape_exponential(a, b, s, t).g;
                double closed = shape_exponential_closed_uniform(p.lam, p.l, p.m, s, t);
                CHECK(std::abs(num - closed) < 1e-9);
            }
    }
    CHECK_THROWS_AS(shape_exponential_closed_uniform(0, 1, 1, 1, 1), ConfigError);
}

TEST_CASE("critical values for the power-density pair") {
    auto [c1, c2] = critical_values(ModelKind::Exponential, kCubicA, kQuarticB);
    CHECK(c1 == doctest::Approx((-8 + 12 * std::log(2.0)) / 3).epsilon(1e-10));
    CHECK(std::abs(c1 - 0.105922) < 1e-5);
    CHECK(std::abs(c2 - 5.863092) < 1e-5);
    // Independent oracle: E[b^-2] / E[a^-2] and E[(b-1)^-2] / E[(a+1)^-2] by hand.
    double ea = 3.0, eb1 = 2.0;
    double eap1 = 3 * (1.5 - 2 * std::log(2.0));
    CHECK(c2 == doctest::Approx(eb1 / eap1).epsilon(1e-10));
    CHECK(c1 * ea == doctest::Approx(kQuarticB.inv_moment(0, 1, 2)).epsilon(1e-10));
}

TEST_CASE("regimes and linearity outside the concave cone") {
    auto [c1, c2] = critical_values(ModelKind::Exponential, kCubicA, kQuarticB);
    auto g = [&](double s, double t) { return shape_exponential(kCubicA, kQuarticB, s, t); };
    CHECK(g(0.5 * c1, 1).regime == Regime::LinearLow);
    CHECK(g(2 * c2, 1).regime == Regime::LinearHigh);
    CHECK(g(1, 1).regime == Regime::StrictlyConcave);
    CHECK(g(0.5 * c1, 1).zeta == 0.0);
    CHECK(g(2 * c2, 1).zeta == 1.0);
    // g is linear in (s,t) on each flat region.
    for (auto [r1, r2] : {std::pair{0.1 * c1, 0.9 * c1}, std::pair{1.5 * c2, 6 * c2}}) {
        double a = g(r1, 1).g, b = g(r2, 2).g, mid = g(0.5 * (r1 + r2), 1.5).g;
        CHECK(mid == doctest::Approx(0.5 * (a + b)).epsilon(1e-12));
    }
    // Boundary extension.
    auto e0 = g(1, 0);
    CHECK(e0.regime == Regime::LinearHigh);
    CHECK(e0.g == doctest::Approx(kCubicA.inv_moment(1, 1, 1)).epsilon(1e-12));
    auto e1 = g(0, 1);
    CHECK(e1.regime == Regime::LinearLow);
    CHECK(e1.g == doctest::Approx(kQuarticB.inv_moment(0, 1, 1)).epsilon(1e-12));
    CHECK_THROWS_AS(g(-1, 1), ConfigError);
    CHECK_THROWS_AS(g(0, 0), ConfigError);
}

TEST_CASE("degenerate exponential branch") {
    auto a = ParamLaw::power(1, 0, 1, true); // density 2a, E[1/a] = 2
    auto e = shape_exponential(a, a, 1.5, 0.5);
    CHECK(e.regime == Regime::Degenerate);
    CHECK(std::isnan(e.c1));
    CHECK(e.g == doctest::Approx(4).epsilon(1e-12));
    auto u = ParamLaw::uniform(0, 1);
    auto d = shape_exponential(u, u, 1, 1);
    CHECK(d.regime == Regime::Degenerate);
    CHECK(std::isinf(d.g));
}

TEST_CASE("geometric homogeneous model") {
    double q = 0.25;
    auto p = ParamLaw::point(std::sqrt(q));
    for (double r : {0.2, 0.5, 1.0, 2.0, 3.5}) {
        auto e = shape_geometric(p, p, r, 1);
        REQUIRE(e.regime == Regime::StrictlyConcave);
        CHECK(e.g == doctest::Approx(homogeneous_gamma(q, r)).epsilon(1e-11));
        CHECK(e.sigma == doctest::Approx(homogeneous_sigma(q, r)).epsilon(1e-8));
    }
    CHECK(homogeneous_gamma(q, 1) == doctest::Approx((0.5 + 1.0) / 0.75).epsilon(1e-15));
}

TEST_CASE("geometric diagonal identity") {
    for (auto law : {ParamLaw::uniform(0.2, 0.5), ParamLaw::reciprocal(0.1, 0.6),
                     ParamLaw::atoms({{0.2, 0.25}, {0.5, 0.75}})}) {
        double mean = law.expect([](double a) { return a / (1 - a); });
        for (double s : {0.5, 1.0, 3.0}) CHECK(shape_geometric(law, law, s, s).g == doctest::Approx(2 * s * mean).epsilon(1e-10));
    }
}

TEST_CASE("closed reciprocal form matches numeric minimization") {
    Stream rs(11, Tag::Aux);
    for (int k = 0; k < 40; ++k) {
        double q = 0.1 + 0.8 * rs.uniform(), rq = std::sqrt(q);
        double l = rq * (0.05 + 0.9 * rs.uniform()), m = rq * (0.05 + 0.9 * rs.uniform());
        double s = 0.1 + 5 * rs.uniform(), t = 0.1 + 5 * rs.uniform();
        auto a = ParamLaw::reciprocal(rq - l, rq), b = ParamLaw::reciprocal(rq - m, rq);
        auto e = shape_geometric(a, b, s, t);
        if (e.regime != Regime::StrictlyConcave) continue;
        CHECK(std::abs(e.g - shape_geometric_closed_reciprocal(q, l, m, s, t)) < 1e-9);
    }
    // With l = m the formula is symmetric in (s, t).
    CHECK(shape_geometric_closed_reciprocal(0.3, 0.2, 0.2, 1, 2.5) ==
          doctest::Approx(shape_geometric_closed_reciprocal(0.3, 0.2, 0.2, 2.5, 1)).epsilon(1e-14));
    // Homogeneous limit.
    double prev = 1e300;
    for (double l : {1e-1, 1e-2, 1e-3, 1e-4}) {
        double err = std::abs(shape_geometric_closed_reciprocal(0.25, l, l, 2, 1) - homogeneous_gamma(0.25, 2));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(shape_geometric_closed_reciprocal(0.25, 0.6, 0.1, 1, 1), ConfigError);
}

TEST_CASE("symmetry, homogeneity, stationarity, concavity") {
    Stream rs(12, Tag::Aux);
    struct Case {
        ModelKind kind;
        ParamLaw a, b;
    };
    std::vector<Case> cases{{ModelKind::Exponential, ParamLaw::uniform(0.5, 1.5), ParamLaw::uniform(0.3, 2)},
                            {ModelKind::Exponential, kCubicA, kQuarticB},
                            {ModelKind::Geometric, ParamLaw::uniform(0.2, 0.4), ParamLaw::reciprocal(0.3, 0.6)},
                            {ModelKind::Geometric, ParamLaw::atoms({{0.1, 0.5}, {0.4, 0.5}}), ParamLaw::point(0.5)}};
    for (auto& c : cases) {
        for (int k = 0; k < 25; ++k) {
            double s = 0.05 + 5 * rs.uniform(), t = 0.05 + 5 * rs.uniform();
            auto e = shape_eval(c.kind, c.a, c.b, s, t);
            CHECK(e.g == doctest::Approx(shape_eval(c.kind, c.b, c.a, t, s).g).epsilon(1e-10));
            for (double cc : {0.5, 2.0, 7.0})
                CHECK(shape_eval(c.kind, c.a, c.b, cc * s, cc * t).g == doctest::Approx(cc * e.g).epsilon(1e-10));
            CHECK(e.c1 >= 0);
            CHECK(e.c1 < e.c2);
            bool interior = e.zeta > (c.kind == ModelKind::Exponential ? -c.a.lower() : c.a.upper()) &&
                            e.zeta < (c.kind == ModelKind::Exponential ? c.b.lower() : 1 / c.b.upper());
            CHECK(interior == (e.regime == Regime::StrictlyConcave));
            if (e.regime == Regime::StrictlyConcave) {
                double z = e.zeta, h = 1e-6 * (1 + std::abs(z));
                auto f = [&](double w) {
                    return c.kind == ModelKind::Exponential ? s * transform_A(c.a, w) + t * c.b.inv_moment(-w, 1, 1)
                                                            : s * transform_Ga(c.a, w) + t * transform_Gb(c.b, w);
                };
                double dg = c.kind == ModelKind::Exponential
                                ? -s * c.a.inv_moment(z, 1, 2) + t * c.b.inv_moment(-z, 1, 2)
                                : s * transform_Ga(c.a, z, 1) + t * transform_Gb(c.b, z, 1);
                CHECK(std::abs(dg) <= 1e-10 * (s + t) * (1 + std::abs(f(z))));
                CHECK(f(z - h) >= f(z) - 1e-12 * e.g);
                CHECK(f(z + h) >= f(z) - 1e-12 * e.g);
            }
            double s2 = 0.05 + 5 * rs.uniform(), t2 = 0.05 + 5 * rs.uniform();
            double mid = shape_eval(c.kind, c.a, c.b, 0.5 * (s + s2), 0.5 * (t + t2)).g;
            CHECK(mid >= 0.5 * (e.g + shape_eval(c.kind, c.a, c.b, s2, t2).g) - 1e-10 * mid);
        }
    }
}

TEST_CASE("geometric support errors") {
    CHECK_THROWS_AS(shape_geometric(ParamLaw::point(0.9), ParamLaw::point(1.2), 1, 1), ConfigError);
}

TEST_CASE("empirical shape") {
    double q = 0.25, rq = 0.5;
    std::vector<double> a(30, rq), b(20, rq);
    auto emp = empirical_shape(a, b);
    auto pop = shape_geometric(ParamLaw::point(rq), ParamLaw::point(rq), 1.5, 1);
    CHECK(emp.zeta == doctest::Approx(pop.zeta).epsilon(1e-12));
    CHECK(emp.gamma == doctest::Approx(pop.g).epsilon(1e-12));
    CHECK(emp.sigma == doctest::Approx(pop.sigma).epsilon(1e-10));
    CHECK(emp.gamma == doctest::Approx(homogeneous_gamma(q, 1.5)).epsilon(1e-12));
    CHECK(std::abs(empirical_g(a, b, emp.zeta, 1)) < 1e-12);

    Stream rs(13, Tag::Aux);
    std::vector<double> ra, rb;
    for (int k = 0; k < 17; ++k) ra.push_back(0.2 + 0.3 * rs.uniform());
    for (int k = 0; k < 23; ++k) rb.push_back(0.1 + 0.6 * rs.uniform());
    auto e1 = empirical_shape(ra, rb), e2 = empirical_shape(rb, ra);
    CHECK(e1.zeta * e2.zeta == doctest::Approx(1).epsilon(1e-12));
    CHECK(e1.gamma == doctest::Approx(17.0 / 23.0 * e2.gamma).epsilon(1e-12));
    CHECK(e1.zeta > *std::max_element(ra.begin(), ra.end()));
    CHECK(e1.zeta < 1 / *std::max_element(rb.begin(), rb.end()));

    CHECK_THROWS_AS(empirical_shape({0.9}, {1.2}), ConfigError);
    CHECK_THROWS_AS(empirical_shape({}, {0.5}), ConfigError);
}

TEST_CASE("empirical zeta converges to the population minimizer") {
    auto law_a = ParamLaw::uniform(0.2, 0.4), law_b = ParamLaw::uniform(0.3, 0.5);
    double zeta = shape_geometric(law_a, law_b, 1, 1).zeta;
    double err[3];
    int k = 0;
    for (std::size_t n : {100, 1000, 10000}) {
        double acc = 0;
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            ModelSpec s{ModelKind::Geometric, law_a, law_b, seed};
            auto seq = sample_sequences(s, n, n);
            acc += std::abs(empirical_shape(seq.a, seq.b).zeta - zeta);
        }
        err[k++] = acc / 8;
    }
    CHECK(err[2] < err[0]);
    CHECK(err[2] < 3e-3);
}

TEST_CASE("scaling index") {
    std::vector<double> a(40, 0.5), b(40, 0.5);
    auto e = empirical_shape(a, b);
    CHECK(scaling_index(e, 0) == static_cast<long long>(std::floor(40 * e.gamma)));
    Stream rs(14, Tag::Aux);
    double unit = std::cbrt(40.0) * e.sigma;
    for (int k = 0; k < 100; ++k) {
        double s = -5 + 10 * rs.uniform();
        long long l = static_cast<long long>(rs.next() % 20) - 10;
        // Nudge away from floor discontinuities where roundoff could flip the result.
        double frac = 40 * e.gamma + unit * s;
        if (std::abs(frac - std::round(frac)) < 1e-9) continue;
        CHECK(scaling_index(e, s) + l == scaling_index(e, s + l / unit));
        CHECK(std::abs(scaling_index(e, s) - (40 * e.gamma + unit * s)) <= 1.0);
    }
}

TEST_CASE("level curve lies on g = 1") {
    auto u = ParamLaw::uniform(0.5, 1.5);
    auto pts = level_curve(ModelKind::Exponential, u, u, 20);
    REQUIRE(pts.size() == 20);
    for (auto& p : pts) CHECK(shape_exponential(u, u, p.x, p.y).g == doctest::Approx(1).epsilon(1e-12));
    CHECK(to_string(Regime::StrictlyConcave) == "strictly_concave");
}
