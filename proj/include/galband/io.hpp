#ifndef GALBAND_IO_HPP
#define GALBAND_IO_HPP

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "galband/catalog.hpp"
#include "galband/gal.hpp"
#include "galband/heun.hpp"
#include "galband/spectral.hpp"
#include "galband/susy.hpp"

namespace galband {

/// Fixed 15-significant-digit formatting so identical configs produce
/// byte-identical exports.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline nlohmann::json to_json(const GALSpec& s) {
    return {{"a", s.a}, {"b", s.b}, {"f", s.f}, {"g", s.g},
            {"m", s.m.m}, {"beta", s.beta}};
}

inline GALSpec spec_from_json(const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "a" && key != "b" && key != "f" && key != "g" && key != "m" &&
            key != "beta")
            throw std::invalid_argument("spec_from_json: unknown key '" + key + "'");
    }
    GALSpec s;
    s.a = j.value("a", 0.0);
    s.b = j.value("b", 0.0);
    s.f = j.value("f", 0.0);
    s.g = j.value("g", 0.0);
    s.m = ModulusM(j.value("m", 0.5));
    s.beta = j.contains("beta") ? j.at("beta").get<double>() : complete_K(s.m) / 2.0;
    s.validate();
    return s;
}

inline nlohmann::json to_json(const QESState& st) {
    nlohmann::json j;
    j["energy_re"] = st.energy.real();
    j["energy_im"] = st.energy.imag();
    j["rho_s"] = st.rho_s;
    j["rho_c"] = st.rho_c;
    j["rho_d"] = st.rho_d;
    auto factor = [](const FactorTriple& f) {
        std::string s;
        if (f.s) s += "sn";
        if (f.c) s += s.empty() ? "cn" : "*cn";
        if (f.d) s += s.empty() ? "dn" : "*dn";
        return s.empty() ? "1" : s;
    };
    j["factor_a"] = factor(st.factor_a);
    auto poly = [](const std::vector<complex>& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const complex& c : p) arr.push_back({c.real(), c.imag()});
        return arr;
    };
    j["poly_a"] = poly(st.poly_a);
    if (!st.poly_b.empty()) {
        j["factor_b"] = factor(st.factor_b);
        j["poly_b"] = poly(st.poly_b);
    }
    if (st.bloch) {
        j["bloch_base"] = st.bloch->base == BlochBase::cn_i_sn ? "cn+i*sn"
                          : st.bloch->base == BlochBase::dn_irtm_sn ? "dn+i*sqrt(m)*sn"
                                                                    : "dn+sqrt(m)*cn";
        j["bloch_t"] = st.bloch->t;
        j["bloch_reciprocal"] = st.bloch->reciprocal;
    }
    j["period_class"] = to_string(st.period_class);
    j["quasimomentum"] = st.quasimomentum;
    j["broken_pt"] = st.broken_pt;
    j["provenance"] = st.provenance;
    return j;
}

inline nlohmann::json to_json(const BandStructure& bs) {
    nlohmann::json j;
    j["edges"] = bs.edges;
    auto intervals = [](const std::vector<std::pair<double, double>>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [lo, hi] : v) arr.push_back({lo, hi});
        return arr;
    };
    j["bands"] = intervals(bs.bands);
    j["gaps"] = intervals(bs.gaps);
    j["gap_count"] = bs.gap_count;
    j["broken_pt"] = bs.broken_pt;
    return j;
}

inline nlohmann::json to_json(const HeunParameters& hp) {
    return {{"alpha_re", hp.alpha.real()}, {"alpha_im", hp.alpha.imag()},
            {"beta_re", hp.beta.real()},   {"beta_im", hp.beta.imag()},
            {"gamma", hp.gamma},           {"delta", hp.delta},
            {"epsilon", hp.epsilon},       {"q_re", hp.q.real()},
            {"q_im", hp.q.imag()},         {"c", hp.c}};
}

inline nlohmann::json to_json(const IsospectralityReport& rep) {
    return {{"edges_direct", rep.edges_direct},
            {"edges_partner", rep.edges_partner},
            {"factorization_energy_re", rep.factorization_energy.real()},
            {"factorization_energy_im", rep.factorization_energy.imag()},
            {"max_discrepancy", rep.max_discrepancy},
            {"counts_match", rep.counts_match}};
}

inline nlohmann::json to_json(const EdgePairReport& rep) {
    return {{"bracket_a", rep.bracket_a}, {"bracket_b", rep.bracket_b},
            {"edges_a", rep.edges_a},     {"edges_b", rep.edges_b},
            {"max_discrepancy", rep.max_discrepancy},
            {"counts_match", rep.counts_match}};
}

/// CSV with a header row and comma separators; cells already formatted.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
}

inline void discriminant_curve_csv(std::ostream& os,
                                   const std::vector<DiscriminantSample>& scan) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(scan.size());
    for (const DiscriminantSample& s : scan)
        rows.push_back({format_value(s.E), format_value(s.delta.real()),
                        format_value(s.delta.imag())});
    write_csv(os, {"E", "ReDelta", "ImDelta"}, rows);
}

} // namespace galband

#endif // GALBAND_IO_HPP
