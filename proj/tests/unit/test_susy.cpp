#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "galband/susy.hpp"
#include "helpers.hpp"

using namespace galband;
using Catch::Matchers::WithinAbs;

namespace {

QESState state_with_energy(const std::vector<QESState>& states, complex E,
                           double tol = 1e-9) {
    for (const QESState& st : states)
        if (std::abs(st.energy - E) < tol) return st;
    throw std::runtime_error("state not found");
}

// mean-free max deviation between two complex profiles
double meanfree_deviation(const std::vector<complex>& a, const std::vector<complex>& b) {
    complex ma{}, mb{};
    for (const complex& v : a) ma += v;
    for (const complex& v : b) mb += v;
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs((a[i] - ma) - (b[i] - mb)));
    return worst;
}

} // namespace

TEST_CASE("superpotential of the Lame a=1 dn state", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(1, m);
    const QESState& dn_state = state_with_energy(closed_form_edges(s), complex(-m));
    for (double x : {-0.7, 0.1, 1.2}) {
        const complex y(s.beta, x);
        const EllipticTriple t = jacobi(y, m);
        const complex expected = complex(0, 1) * m * t.sn * t.cn / t.dn;
        CHECK(std::abs(superpotential(dn_state, s, x) - expected) < 1e-12);
    }

    // the three partners are the quarter-period translates of the potential;
    // the pairing is dn -> y+K, sn -> y+iK', cn -> y+K+iK'
    const std::vector<double> grid = period_grid(s, 257);
    struct Pair { complex E; QuarterShift shift; };
    const std::vector<Pair> pairing = {{complex(-m), QuarterShift::K},
                                       {complex(-1.0 - m), QuarterShift::iKp},
                                       {complex(-1.0), QuarterShift::K_iKp}};
    for (const Pair& pr : pairing) {
        const QESState st = state_with_energy(closed_form_edges(s), pr.E);
        const PartnerProfile prof = partner_profile(st, s, grid);
        std::vector<complex> shifted;
        for (double x : grid) {
            const EllipticTriple q = quarter_shift(complex(s.beta, x), m, pr.shift);
            shifted.push_back(-2.0 * m * q.sn * q.sn);
        }
        CHECK(meanfree_deviation(prof.values, shifted) < 1e-9);
    }
}

TEST_CASE("superpotential of the free constant state vanishes", "[susy]") {
    const GALSpec zero = make_spec(0, 0, 0, 0, 0.5);
    const std::vector<QESState> st = qes_spectrum_general(zero, FactorTriple{}, 1);
    for (double x : {-1.0, 0.3, 2.0})
        CHECK(std::abs(superpotential(st[0], zero, x)) < 1e-12);
}

TEST_CASE("superpotential agrees with a finite-difference oracle", "[susy]") {
    const double m = 0.4;
    const GALSpec s = make_spec(2, 1, 0, 0, m);
    for (const QESState& st : closed_form_edges(s)) {
        for (double x : {0.2, 0.9, 1.7}) {
            const double h = 1e-6;
            const complex num =
                -(eval_state(st, s, x + h) - eval_state(st, s, x - h)) /
                (2.0 * h * eval_state(st, s, x));
            CHECK(std::abs(superpotential(st, s, x) - num) < 1e-7);
        }
    }
}

TEST_CASE("factorization identities on the grid", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(2, m);
    const PotentialOnLine V(s);
    const std::vector<double> grid = period_grid(s, 129);
    for (const QESState& st : closed_form_edges(s)) {
        const PartnerProfile prof = partner_profile(st, s, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            const Jet2<complex> psi = eval_state_jets(st, s, x);
            const complex lr = psi.d1 / psi.f;
            const complex W2 = -lr * lr;
            const complex Wp = psi.d2 / psi.f - lr * lr;
            // V- - E = W^2 - W'
            CHECK(std::abs((W2 - Wp) - (V(x) - st.energy)) < 1e-9);
            // V+ - V- = 2 W' with V- the shifted originating potential
            CHECK(std::abs(prof.values[i] - (V(x) - st.energy) - 2.0 * Wp) < 1e-9);
        }
    }
}

TEST_CASE("partner of [12,0,0,0] from sn cn dn is the [6,2,2,2] potential", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(3, m);
    const QESState& state =
        state_with_energy(closed_form_edges(s), complex(-4.0 * (1.0 + m)));
    const std::vector<double> grid = period_grid(s, 512);
    const PartnerProfile prof = partner_profile(state, s, grid);

    // V(x) = -m[6 sn^2(y) + 2 sn^2(y+K) + 2 sn^2(y+iK') + 2 sn^2(y+K+iK')]
    std::vector<complex> bracket6222;
    for (double x : grid)
        bracket6222.push_back(eval_gal_bracket(6, 2, 2, 2, m, complex(s.beta, x)));
    CHECK(meanfree_deviation(prof.values, bracket6222) < 1e-9);

    const auto hit = identify_gal(prof, m, s.beta);
    REQUIRE(hit.has_value());
    CHECK_THAT(hit->first.A(), WithinAbs(6.0, 1e-8));
    CHECK_THAT(hit->first.B(), WithinAbs(2.0, 1e-8));
    CHECK_THAT(hit->first.F(), WithinAbs(2.0, 1e-8));
    CHECK_THAT(hit->first.G(), WithinAbs(2.0, 1e-8));
    CHECK(hit->second < 1e-10);
}

TEST_CASE("partner rows for each a=2 PT-Lame edge state", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(2, m);
    const std::vector<double> grid = period_grid(s, 257);
    const std::vector<QESState> edges = closed_form_edges(s);

    // row: psi = sn cn (E = -4-m) ->
    //   -2m[sn^2(y) + sn^2(y+K+iK') + sn^2(y+iK')] - E
    {
        const QESState& st = state_with_energy(edges, complex(-4.0 - m));
        const PartnerProfile prof = partner_profile(st, s, grid);
        std::vector<complex> formula;
        for (double x : grid) {
            const complex y(s.beta, x);
            const complex t0 = jacobi(y, m).sn;
            const complex t1 = quarter_shift(y, m, QuarterShift::K_iKp).sn;
            const complex t2 = quarter_shift(y, m, QuarterShift::iKp).sn;
            formula.push_back(-2.0 * m * (t0 * t0 + t1 * t1 + t2 * t2) - st.energy);
        }
        CHECK(meanfree_deviation(prof.values, formula) < 1e-9);
        // bracket [2,0,2,2] up to ordering of the translated terms
        const auto hit = identify_gal(prof, m, s.beta);
        REQUIRE(hit.has_value());
        CHECK_THAT(hit->first.A(), WithinAbs(2.0, 1e-8));
        CHECK_THAT(hit->first.B(), WithinAbs(0.0, 1e-8));
        CHECK_THAT(hit->first.F(), WithinAbs(2.0, 1e-8));
        CHECK_THAT(hit->first.G(), WithinAbs(2.0, 1e-8));
    }

    // row: psi = 1 + (E/2) sn^2 at E = -2(1+m) - 2 delta ->
    //   6m sn^2 + E - 2E^2 sn^2 cn^2 dn^2 / (1 + (E/2) sn^2)^2, not a GAL
    // profile (the rational term carries the squared denominator)
    {
        const double delta = std::sqrt(1.0 - m + m * m);
        const complex E(-2.0 * (1.0 + m) - 2.0 * delta);
        const QESState& st = state_with_energy(edges, E);
        const PartnerProfile prof = partner_profile(st, s, grid);
        std::vector<complex> formula;
        for (double x : grid) {
            const EllipticTriple t = jacobi(complex(s.beta, x), m);
            const complex sn2 = t.sn * t.sn;
            const complex num = 2.0 * E * E * sn2 * (t.cn * t.cn) * (t.dn * t.dn);
            const complex den = 1.0 + 0.5 * E * sn2;
            formula.push_back(6.0 * m * sn2 + E - num / (den * den));
        }
        CHECK(meanfree_deviation(prof.values, formula) < 1e-9);
        CHECK_FALSE(identify_gal(prof, m, s.beta).has_value());
    }
}

TEST_CASE("partner construction rejects a non-factorizing state", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(1, m);
    QESState st = closed_form_edges(s).front();
    st.energy += 0.1;  // no longer an eigenstate of the potential
    const std::vector<double> grid = period_grid(s, 65);
    CHECK_THROWS_AS(partner_profile(st, s, grid), std::invalid_argument);
}

TEST_CASE("pole freedom of the a=2 edge states on the real axis", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(2, m);
    const std::vector<double> grid = period_grid(s, 4096);
    for (const QESState& st : closed_form_edges(s)) {
        double lo = 1e300, hi = 0.0;
        for (double x : grid) {
            const double v = std::abs(eval_state(st, s, x));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        INFO(st.provenance);
        CHECK(lo > 1e-6 * hi);
    }
}

TEST_CASE("strict-isospectrality pairs share their full edge sets", "[susy]") {
    const double m = 0.4;
    struct Pair { GALSpec a, b; };
    for (const Pair& pr : {Pair{lame_spec(3, m), make_spec(2, 1, 1, 1, m)},
                           Pair{make_spec(3, 1, 0, 0, m), make_spec(2, 2, 1, 0, m)}}) {
        const auto ea = qes_all_states(pr.a);
        const auto eb = qes_all_states(pr.b);
        INFO(pr.a.bracket() << " vs " << pr.b.bracket());
        REQUIRE(ea.size() == eb.size());
        for (std::size_t i = 0; i < ea.size(); ++i) {
            CHECK(std::abs(ea[i].energy - eb[i].energy) < 1e-9);
            // each shared energy is a band edge of both potentials
            const double E = ea[i].energy.real();
            CHECK(std::abs(std::abs(discriminant(pr.a, E).delta.real()) - 2.0) < 1e-6);
            CHECK(std::abs(std::abs(discriminant(pr.b, E).delta.real()) - 2.0) < 1e-6);
        }
    }
}

TEST_CASE("isospectrality via the sampled partner potential", "[susy]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(3, m);
    const QESState& st =
        state_with_energy(closed_form_edges(s), complex(-4.0 * (1.0 + m)));
    const IsospectralityReport rep = isospectrality_report(s, st, -14.0, 0.5, 3000);
    REQUIRE(rep.counts_match);
    CHECK(rep.edges_direct.size() == 7);
    CHECK(rep.max_discrepancy < 1e-6);
}
