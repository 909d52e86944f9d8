#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "galband/gal.hpp"
#include "helpers.hpp"

using namespace galband;
using Catch::Matchers::WithinAbs;

TEST_CASE("potential evaluation: trivial and Lame specs", "[gal]") {
    const GALSpec zero = make_spec(0, 0, 0, 0, 0.5);
    for (double x : {-1.0, 0.0, 0.7, 2.2})
        CHECK(std::abs(eval_potential(zero, x)) < 1e-14);

    const double m = 0.5;
    const GALSpec lame = lame_spec(1, m);
    for (double x : {-0.4, 0.0, 1.3}) {
        const complex y(lame.beta, x);
        const complex sn = jacobi(y, m).sn;
        CHECK(std::abs(eval_potential(lame, x) + 2.0 * m * sn * sn) < 1e-13);
    }
}

TEST_CASE("bracket equivalence under parameter reflection", "[gal]") {
    // a -> -a-1 leaves a(a+1) and hence the potential unchanged
    const GALSpec s1 = make_spec(1, 0, 0, 0, 0.5);
    const GALSpec s2 = make_spec(-2, 0, 0, 0, 0.5);
    for (double x : period_grid(s1, 64))
        CHECK(std::abs(eval_potential(s1, x) - eval_potential(s2, x)) < 1e-12);

    const GALSpec t1 = make_spec(2, 1, 1.5, 0.5, 0.3);
    GALSpec t2 = t1;
    t2.b = -2;
    t2.g = -1.5;
    for (double x : period_grid(t1, 64))
        CHECK(std::abs(eval_potential(t1, x) - eval_potential(t2, x)) < 1e-12);
}

TEST_CASE("PotentialOnLine matches the generic evaluator", "[gal]") {
    const GALSpec s = make_spec(3, 1, 1, 1, 0.5);
    const PotentialOnLine V(s);
    for (double x : period_grid(s, 128))
        CHECK(std::abs(V(x) - eval_potential(s, x)) < 1e-12);
}

TEST_CASE("potential periodicity over 2K'", "[gal]") {
    for (const GALSpec& s : {make_spec(1, 0, 0, 0, 0.5), make_spec(2, 1, 0, 1, 0.35)}) {
        const PotentialOnLine V(s);
        const double L = s.period();
        for (double x : period_grid(s, 64))
            CHECK(std::abs(V(x + L) - V(x)) < 1e-11);
    }
}

TEST_CASE("translation transforms permute parameters and match shifted lines", "[gal]") {
    const GALSpec s = make_spec(2, 1, 0, 0, 0.5);
    const TransformResult rK = transform_spec(s, GalTransform::shift_K);
    CHECK(rK.new_spec.a == 1.0);
    CHECK(rK.new_spec.b == 2.0);
    CHECK(rK.new_spec.f == 0.0);
    CHECK(rK.new_spec.g == 0.0);
    CHECK(rK.sigma == 1.0);
    CHECK(rK.offset == 0.0);

    // V_{permuted}(y) = V_{original}(y + shift), pointwise on the line
    const GALSpec q = make_spec(2, 1, 1.5, 0.5, 0.4);
    const double K = complete_K(q.m), Kp = complete_Kprime(q.m);
    const complex I(0, 1);
    struct Row { GalTransform op; complex delta; };
    for (const Row& row : {Row{GalTransform::shift_K, complex(K, 0)},
                           Row{GalTransform::shift_iKp, I * Kp},
                           Row{GalTransform::shift_K_iKp, K + I * Kp}}) {
        const GALSpec p = transform_spec(q, row.op).new_spec;
        for (double x : period_grid(q, 48)) {
            const complex y(q.beta, x);
            const complex lhs = eval_gal_bracket(p.A(), p.B(), p.F(), p.G(), q.m, y);
            const complex rhs =
                eval_gal_bracket(q.A(), q.B(), q.F(), q.G(), q.m, y + row.delta);
            CHECK(std::abs(lhs - rhs) < 1e-11);
        }
    }
}

TEST_CASE("duality transform and its involution", "[gal]") {
    const GALSpec s = make_spec(2, 1, 0, 0, 0.4);
    const TransformResult d = transform_spec(s, GalTransform::dual);
    CHECK(d.new_spec.a == 2.0);
    CHECK(d.new_spec.b == 0.0);
    CHECK(d.new_spec.f == 0.0);
    CHECK(d.new_spec.g == 1.0);
    CHECK_THAT(d.new_spec.m.m, WithinAbs(0.6, 1e-15));
    CHECK(d.sigma == -1.0);
    CHECK_THAT(d.offset, WithinAbs(-8.0, 1e-13));  // A+B = 6+2
    CHECK_THAT(d.map_energy(-2.0), WithinAbs(-6.0, 1e-13));

    const TransformResult dd = transform_spec(d.new_spec, GalTransform::dual);
    CHECK(dd.new_spec.a == s.a);
    CHECK(dd.new_spec.b == s.b);
    CHECK(dd.new_spec.g == s.g);
    CHECK_THAT(dd.new_spec.m.m, WithinAbs(s.m.m, 1e-15));
    for (double E : {-3.0, 0.0, 2.5})
        CHECK_THAT(dd.map_energy(d.map_energy(E)), WithinAbs(E, 1e-12));

    const TransformResult rr =
        transform_spec(transform_spec(s, GalTransform::reflect_a).new_spec,
                       GalTransform::reflect_a);
    CHECK(rr.new_spec.a == s.a);
}

TEST_CASE("translation transforms compose to the identity", "[gal]") {
    const GALSpec s = make_spec(2, 1, 1.5, 0.5, 0.4);
    for (GalTransform op : {GalTransform::shift_K, GalTransform::shift_iKp,
                            GalTransform::shift_K_iKp}) {
        const TransformResult once = transform_spec(s, op);
        const TransformResult twice = transform_spec(once.new_spec, op);
        CHECK(twice.new_spec.a == s.a);
        CHECK(twice.new_spec.b == s.b);
        CHECK(twice.new_spec.f == s.f);
        CHECK(twice.new_spec.g == s.g);
        CHECK(twice.map_energy(once.map_energy(1.7)) == 1.7);
    }
}

TEST_CASE("PT symmetry residual certifies the realized potential", "[gal]") {
    auto grid = period_grid(make_spec(1, 0, 0, 0, 0.5), 200);
    for (const GALSpec& s : {make_spec(2, 1, 0, 0, 0.5), make_spec(3, 1, 1, 1, 0.5)})
        CHECK(pt_symmetry_residual(s, grid) < 1e-12);

    // a deliberately non-real offset breaks the symmetry at O(1)
    const GALSpec s = make_spec(3, 1, 1, 1, 0.5);
    CHECK(pt_symmetry_residual_at(s, grid, complex(s.beta, 0.1)) > 0.1);
}

TEST_CASE("spec validation rejects singular lines", "[gal]") {
    GALSpec bad = make_spec(1, 0, 0, 0, 0.5);
    bad.beta = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.beta = complete_K(0.5);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
