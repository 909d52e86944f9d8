#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "galband/spectral.hpp"
#include "helpers.hpp"

using namespace galband;
using Catch::Matchers::WithinAbs;

TEST_CASE("free-particle discriminant is 2 cos(L sqrt(E))", "[spectral]") {
    const GALSpec zero = make_spec(0, 0, 0, 0, 0.5);
    const double L = zero.period();
    for (double E : {0.4, 1.0, 2.3}) {
        const DiscriminantSample s = discriminant(zero, E);
        CHECK_THAT(s.delta.real(), WithinAbs(2.0 * std::cos(L * std::sqrt(E)), 1e-8));
        CHECK_THAT(s.delta.imag(), WithinAbs(0.0, 1e-9));
    }
    const double E1 = std::pow(std::numbers::pi / L, 2);
    CHECK_THAT(discriminant(zero, E1).delta.real(), WithinAbs(-2.0, 1e-8));
}

TEST_CASE("free-particle band edges: touching bands, zero-width gaps", "[spectral]") {
    const GALSpec zero = make_spec(0, 0, 0, 0, 0.5);
    const double L = zero.period();
    const double e1 = std::pow(std::numbers::pi / L, 2);
    const double e2 = std::pow(2.0 * std::numbers::pi / L, 2);
    const BandStructure bs = classify_bands(zero, 0.1, e2 + 0.1);
    REQUIRE(bs.edges.size() == 2);
    CHECK_THAT(bs.edges[0], WithinAbs(e1, 1e-4));  // tangency fit is noise-limited
    CHECK_THAT(bs.edges[1], WithinAbs(e2, 1e-4));
    CHECK(bs.gap_count == 0);
    std::size_t zero_width = 0;
    for (const auto& [lo, hi] : bs.gaps)
        if (hi - lo < 1e-12) ++zero_width;
    CHECK(zero_width == 2);
}

TEST_CASE("PT-Lame a=1 edge energies from the oracle", "[spectral]") {
    const GALSpec s = lame_spec(1, 0.5);
    const DiscriminantSample cn_edge = discriminant(s, -1.0);
    CHECK(std::abs(std::abs(cn_edge.delta.real()) - 2.0) < 1e-6);

    const std::vector<double> edges = band_edges_numeric(s, -3.0, 1.0);
    REQUIRE(edges.size() == 3);
    CHECK_THAT(edges[0], WithinAbs(-1.5, 1e-8));
    CHECK_THAT(edges[1], WithinAbs(-1.0, 1e-8));
    CHECK_THAT(edges[2], WithinAbs(-0.5, 1e-8));
}

TEST_CASE("PT-Lame a=2: the five closed-form edges are |Delta|=2 points", "[spectral]") {
    const double m = 0.5;
    const GALSpec s = lame_spec(2, m);
    const double delta = std::sqrt(1.0 - m + m * m);
    const std::vector<double> expected = {-2.0 * (1.0 + m) - 2.0 * delta, -4.0 - m,
                                          -1.0 - 4.0 * m, -1.0 - m,
                                          -2.0 * (1.0 + m) + 2.0 * delta};
    for (double E : expected)
        CHECK(std::abs(std::abs(discriminant(s, E).delta.real()) - 2.0) < 1e-6);

    const std::vector<double> edges = band_edges_numeric(s, -6.0, 0.0, 4000);
    REQUIRE(edges.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK_THAT(edges[i], WithinAbs(expected[i], 1e-6));
}

TEST_CASE("PT realness of the discriminant for a four-parameter spec", "[spectral]") {
    const GALSpec s = make_spec(3, 1, 1, 1, 0.5);
    std::uniform_real_distribution<double> uE(-25.0, 5.0);
    for (int i = 0; i < 8; ++i) {
        const double E = uE(testing::rng());
        const complex d = discriminant(s, E).delta;
        // integrator noise is relative to |Delta|, which grows like
        // cosh(kappa L) below the ground state
        CHECK(std::abs(d.imag()) / std::max(2.0, std::abs(d.real())) < 1e-8);
    }
}

TEST_CASE("gap counts for finite-gap specs", "[spectral]") {
    const BandStructure al = classify_bands(make_spec(2, 1, 0, 0, 0.5), -9.5, 1.0, 4000);
    CHECK(al.edges.size() == 5);
    CHECK(al.gap_count == 2);
    CHECK_FALSE(al.broken_pt);

    const BandStructure lame1 = classify_bands(lame_spec(1, 0.5), -3.0, 1.0, 2000);
    CHECK(lame1.edges.size() == 3);
    CHECK(lame1.gap_count == 1);
}

TEST_CASE("discriminant is independent of the integration start point", "[spectral]") {
    const GALSpec s = make_spec(2, 1, 0, 0, 0.5);
    const double L = s.period();
    for (double E : {-7.0, -4.0, -1.0}) {
        const complex d0 = discriminant(s, E).delta;
        const complex d1 = discriminant(s, E, {}, L / 3.0).delta;
        CHECK(std::abs(d0 - d1) < 1e-8);
    }
}

TEST_CASE("empty scan range yields no edges, not an error", "[spectral]") {
    const GALSpec s = lame_spec(1, 0.5);
    CHECK(band_edges_numeric(s, 5.0, 6.0, 200).empty());
}

TEST_CASE("a closed gap inside the band region is reported at zero width", "[spectral]") {
    // [12,0,0,2] has a = 3 open gaps; the next gap is closed and shows up
    // as a discriminant tangency between two touching bands
    const GALSpec s = make_spec(3, 0, 0, 1, 0.5);
    const BandStructure bs = classify_bands(s, -7.5, 0.0, 3000);
    bool found = false;
    for (const auto& [lo, hi] : bs.gaps)
        if (hi - lo < 1e-10 && std::abs(lo + 3.60535798) < 1e-3) found = true;
    CHECK(found);
    CHECK(bs.gap_count == 1);  // only the open gap (-7.359, -6.749) counts here
}

TEST_CASE("non-PT potentials are flagged broken and classified on Re Delta",
          "[spectral]") {
    // deliberately non-PT: V(-x) != conj(V(x))
    auto V = [](double x) { return complex(2.0 * std::cos(x), 0.4 * std::sin(x + 0.7)); };
    const double L = 2.0 * std::numbers::pi;
    const BandStructure bs = classify_bands(V, L, -1.0, 2.0, 600);
    CHECK(bs.broken_pt);
}

TEST_CASE("integrator failure near a genuine singularity carries the location",
          "[spectral]") {
    auto V = [](double x) { return complex(1.0 / (x - 1.0), 0.0); };
    try {
        integrate_monodromy(V, complex(0.0), 2.0);
        FAIL("expected integration_error");
    } catch (const integration_error& e) {
        CHECK(std::abs(e.location() - 1.0) < 0.05);
    }
}
