#ifndef GALBAND_SUSY_HPP
#define GALBAND_SUSY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "galband/catalog.hpp"
#include "galband/core.hpp"
#include "galband/gal.hpp"
#include "galband/spectral.hpp"

namespace galband {

/// W(x) = -psi'(x)/psi(x) via the analytic factor form of the state;
/// derivatives along x come from i * d/dy.
inline complex superpotential(const QESState& st, const GALSpec& spec, double x,
                              double pole_threshold = 1e-10) {
    const Jet2<complex> psi = eval_state_jets(st, spec, x);
    if (std::abs(psi.f) < pole_threshold)
        throw pole_error(complex(spec.beta, x), complex(spec.beta, x),
                         "superpotential: |psi| below pole threshold at x = " +
                             std::to_string(x));
    const complex i(0.0, 1.0);
    return -i * psi.d1 / psi.f;
}

/// SUSY partner samples V+ = W^2 + W'.  With psi an eigenstate at energy E,
/// V+ is spectrally equivalent to V - E: the +E shift is left to the caller
/// (the factorization energy rides along in the profile).
struct PartnerProfile {
    std::vector<double> grid;
    std::vector<complex> values;
    complex factorization_energy{};
    std::string offset_convention =
        "V+ = W^2 + W'; isospectral to V - E, compare profiles mean-free";

    complex mean() const {
        complex s{};
        for (const complex& v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

inline PartnerProfile partner_profile(const QESState& st, const GALSpec& spec,
                                      std::span<const double> grid) {
    spec.validate();
    const PotentialOnLine V(spec);
    PartnerProfile out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());
    out.factorization_energy = st.energy;

    double psi_max = 0.0;
    std::vector<Jet2<complex>> jets;
    jets.reserve(grid.size());
    for (double x : grid) {
        jets.push_back(eval_state_jets(st, spec, x));
        psi_max = std::max(psi_max, std::abs(jets.back().f));
    }
    double worst_factorization = 0.0;
    for (std::size_t i = 0; i < jets.size(); ++i) {
        const Jet2<complex>& psi = jets[i];
        const double x = out.grid[i];
        if (std::abs(psi.f) < 1e-8 * psi_max)
            throw pole_error(complex(spec.beta, x), complex(spec.beta, x),
                             "partner_profile: state vanishes on the real axis at x = " +
                                 std::to_string(x));
        const complex lr = psi.d1 / psi.f;        // psi'/psi in y
        const complex w2 = -lr * lr;              // W^2
        const complex wp = psi.d2 / psi.f - lr * lr;  // W' = d/dx(-psi_x/psi)
        out.values.push_back(w2 + wp);
        // V- - E = W^2 - W' certifies that psi really factorizes V
        worst_factorization =
            std::max(worst_factorization,
                     std::abs((w2 - wp) - (V(x) - st.energy)));
    }
    if (worst_factorization > 1e-6)
        throw std::invalid_argument(
            "partner_profile: state does not factorize the potential (|V - E - (W^2 - W')| = " +
            std::to_string(worst_factorization) + ")");
    return out;
}

/// Least-squares identification of a profile as a GAL potential plus a
/// constant.  Returns the spec and fit residual when the profile is in the
/// family (max deviation below `accept_tol`), nothing otherwise.
inline std::optional<std::pair<GALSpec, double>>
identify_gal(const PartnerProfile& profile, ModulusM m, double beta,
             double accept_tol = 1e-8) {
    const std::size_t n = profile.grid.size();
    Eigen::MatrixXd X(2 * n, 5);
    Eigen::VectorXd rhs(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const complex y(beta, profile.grid[i]);
        const EllipticTriple t = jacobi(y, m);
        const complex sn2 = t.sn * t.sn, cn2 = t.cn * t.cn, dn2 = t.dn * t.dn;
        const complex basis[5] = {complex(1.0), -m.m * sn2, -m.m * cn2 / dn2,
                                  -dn2 / cn2, -1.0 / sn2};
        for (int k = 0; k < 5; ++k) {
            X(static_cast<Eigen::Index>(i), k) = basis[k].real();
            X(static_cast<Eigen::Index>(i + n), k) = basis[k].imag();
        }
        rhs(static_cast<Eigen::Index>(i)) = profile.values[i].real();
        rhs(static_cast<Eigen::Index>(i + n)) = profile.values[i].imag();
    }
    const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(rhs);
    double residual = 0.0;
    const Eigen::VectorXd fit = X * coef;
    for (Eigen::Index i = 0; i < fit.size(); ++i)
        residual = std::max(residual, std::abs(fit(i) - rhs(i)));
    if (!(residual < accept_tol)) return std::nullopt;

    auto param_of = [](double coeff) {
        if (std::abs(coeff - std::round(coeff)) < 1e-7) coeff = std::round(coeff);
        // principal root of p(p+1) = coeff
        return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * coeff));
    };
    GALSpec spec;
    spec.a = param_of(coef(1));
    spec.b = param_of(coef(2));
    spec.f = param_of(coef(3));
    spec.g = param_of(coef(4));
    spec.m = m;
    spec.beta = beta;
    return std::make_pair(spec, residual);
}

/// Periodic uniform Catmull-Rom interpolation of complex samples; smooth
/// enough for the monodromy integrator at >= 4096 samples per period.
class PeriodicCubic {
public:
    PeriodicCubic(std::vector<complex> values, double period)
        : v_(std::move(values)), L_(period) {}

    complex operator()(double x) const {
        const std::size_t n = v_.size();
        double s = std::fmod(x, L_) / L_ * static_cast<double>(n);
        if (s < 0) s += static_cast<double>(n);
        const auto j = static_cast<std::size_t>(s);
        const double u = s - static_cast<double>(j);
        const complex p0 = v_[(j + n - 1) % n], p1 = v_[j % n], p2 = v_[(j + 1) % n],
                      p3 = v_[(j + 2) % n];
        const complex a = 2.0 * p1;
        const complex b = p2 - p0;
        const complex c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
        const complex d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
        return 0.5 * (a + b * u + c * u * u + d * u * u * u);
    }

private:
    std::vector<complex> v_;
    double L_;
};

/// Band edges of the sampled partner, shifted back by the factorization
/// energy, against the direct edges of the originating spec.
struct IsospectralityReport {
    std::vector<double> edges_direct;
    std::vector<double> edges_partner;  // already shifted by +E
    complex factorization_energy{};
    double max_discrepancy = 0.0;
    bool counts_match = false;
};

inline IsospectralityReport isospectrality_report(const GALSpec& spec,
                                                  const QESState& state_used,
                                                  double E_min, double E_max,
                                                  std::size_t scan_points = 0,
                                                  std::size_t profile_points = 4096,
                                                  const SpectralOptions& opt = {}) {
    IsospectralityReport rep;
    rep.factorization_energy = state_used.energy;
    rep.edges_direct = band_edges_numeric(spec, E_min, E_max, scan_points, opt);

    const std::vector<double> grid = period_grid(spec, profile_points);
    const PartnerProfile prof = partner_profile(state_used, spec, grid);
    const PeriodicCubic vplus(prof.values, spec.period());
    const double E0 = state_used.energy.real();
    rep.edges_partner = band_edges_numeric(vplus, spec.period(), E_min - E0, E_max - E0,
                                           scan_points, opt);
    for (double& e : rep.edges_partner) e += E0;

    rep.counts_match = rep.edges_direct.size() == rep.edges_partner.size();
    if (rep.counts_match) {
        for (std::size_t i = 0; i < rep.edges_direct.size(); ++i)
            rep.max_discrepancy = std::max(
                rep.max_discrepancy, std::abs(rep.edges_direct[i] - rep.edges_partner[i]));
    } else {
        rep.max_discrepancy = std::numeric_limits<double>::infinity();
    }
    return rep;
}

/// Direct spec-vs-spec edge comparison for the strict-isospectrality
/// conjecture pairs.
struct EdgePairReport {
    std::string bracket_a, bracket_b;
    std::vector<double> edges_a, edges_b;
    double max_discrepancy = 0.0;
    bool counts_match = false;
};

inline EdgePairReport compare_edge_sets(const GALSpec& sa, const GALSpec& sb, double E_min,
                                        double E_max, std::size_t scan_points = 0,
                                        const SpectralOptions& opt = {}) {
    EdgePairReport rep;
    rep.bracket_a = sa.bracket();
    rep.bracket_b = sb.bracket();
    rep.edges_a = band_edges_numeric(sa, E_min, E_max, scan_points, opt);
    rep.edges_b = band_edges_numeric(sb, E_min, E_max, scan_points, opt);
    rep.counts_match = rep.edges_a.size() == rep.edges_b.size();
    if (rep.counts_match) {
        for (std::size_t i = 0; i < rep.edges_a.size(); ++i)
            rep.max_discrepancy =
                std::max(rep.max_discrepancy, std::abs(rep.edges_a[i] - rep.edges_b[i]));
    } else {
        rep.max_discrepancy = std::numeric_limits<double>::infinity();
    }
    return rep;
}

} // namespace galband

#endif // GALBAND_SUSY_HPP
