#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "galband/heun.hpp"
#include "helpers.hpp"

using namespace galband;
using Catch::Matchers::WithinAbs;

TEST_CASE("dictionary for the Lame family", "[heun]") {
    for (double a : {1.0, 2.0, 3.5}) {
        const GALSpec s = lame_spec(a, 0.5);
        const HeunParameters hp = gal_to_heun(s, complex(-1.0));
        CHECK_THAT(hp.gamma, WithinAbs(0.5, 1e-15));
        CHECK_THAT(hp.delta, WithinAbs(0.5, 1e-15));
        CHECK_THAT(hp.epsilon, WithinAbs(0.5, 1e-15));
        CHECK_THAT(hp.alpha.real(), WithinAbs(-a / 2.0, 1e-13));
        CHECK_THAT(hp.beta.real(), WithinAbs((a + 1.0) / 2.0, 1e-13));
        CHECK_THAT(hp.c, WithinAbs(2.0, 1e-15));
        CHECK(hp.constraint_residual() < 1e-14);
    }
}

TEST_CASE("accessory parameter from R", "[heun]") {
    const GALSpec s = make_spec(2, 0, 0, 1, 0.5);
    const HeunParameters hp = gal_to_heun(s, complex(-6.0));
    CHECK_THAT(hp.q.real(), WithinAbs(-2.25, 1e-14));  // R = -6+1+0.5, q = R/(4m)
    CHECK_THAT(hp.q.imag(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("constraint holds for arbitrary specs", "[heun]") {
    for (const GALSpec& s :
         {make_spec(1.3, 0.7, -0.2, 2.1, 0.35), make_spec(3, 1, 1, 1, 0.8),
          make_spec(0.5, 1.5, 0.25, -0.75, 0.5)}) {
        const HeunParameters hp = gal_to_heun(s, complex(-2.0, 0.3));
        CHECK(hp.constraint_residual() < 1e-14);
    }
}

TEST_CASE("round trip: algebraized equation equals the pulled-back Heun form",
          "[heun]") {
    const GALSpec s = make_spec(1.7, 0.4, 0.9, 0.2, 0.6);
    const complex E(-3.1, 0.0);
    const HeunParameters hp = gal_to_heun(s, E);
    const PotentialOnLine V(s);
    for (double x : period_grid(s, 64)) {
        const EllipticTriple t = V.triple(x);
        const PhiCoefficients lhs = phi_equation_coeffs(s, E, t);
        const PhiCoefficients rhs = heun_pullback_coeffs(hp, s.m, t);
        CHECK(std::abs(lhs.p1 - rhs.p1) < 1e-11);
        CHECK(std::abs(lhs.p0 - rhs.p0) < 1e-11);
    }
}

TEST_CASE("catalog states solve the canonical Heun equation", "[heun]") {
    const double m = 0.5;
    // Lame a=1 cn state (E = -1)
    {
        const GALSpec s = lame_spec(1, m);
        for (const QESState& st : closed_form_edges(s)) {
            const HeunParameters hp = heun_for_state(st, s);
            CHECK(hp.constraint_residual() < 1e-14);
            CHECK(heun_residual(hp, st, s) < 1e-8);
        }
    }
    // sn^2 realization of [6,0,0,2]
    {
        const GALSpec s = make_spec(2, 0, 0, 1, m);
        for (const QESState& st : closed_form_edges(s)) {
            INFO(st.provenance);
            const HeunParameters hp = heun_for_state(st, s);
            CHECK(heun_residual(hp, st, s) < 1e-8);
        }
    }
    // mid-band Bloch states map too
    {
        const GALSpec s = make_spec(0.8, 0.5, 1, 0, m);
        for (const QESState& st : midband_states(MidbandCase::b_half, 1.3, 1, 1, 0.5, m)) {
            const HeunParameters hp = heun_for_state(st, s);
            CHECK(heun_residual(hp, st, s) < 1e-8);
        }
    }
}

TEST_CASE("residual is sensitive to the accessory parameter", "[heun]") {
    const GALSpec s = lame_spec(1, 0.5);
    const std::vector<QESState> states = closed_form_edges(s);
    HeunParameters hp = heun_for_state(states[1], s);
    CHECK(heun_residual(hp, states[1], s) < 1e-8);
    hp.q += 0.01;
    CHECK(heun_residual(hp, states[1], s) > 1e-3);
}
