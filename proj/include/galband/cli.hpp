#ifndef GALBAND_CLI_HPP
#define GALBAND_CLI_HPP

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "galband/catalog.hpp"
#include "galband/gal.hpp"
#include "galband/heun.hpp"
#include "galband/io.hpp"
#include "galband/spectral.hpp"
#include "galband/susy.hpp"
#include "galband/verify.hpp"

namespace galband::cli {

struct RunConfig {
    double a = 0.0, b = 0.0, f = 0.0, g = 0.0;
    double m = 0.5;
    double beta = std::numeric_limits<double>::quiet_NaN();  // default K(m)/2
    double emin = -10.0, emax = 2.0;
    std::size_t grid = 512;
    std::size_t scan_points = 0;
    double rtol = 1e-10, atol = 1e-12;
    std::string out;
    std::string format = "csv";
    // midband selection for the catalog subcommand
    std::string midband_case;  // "", "b", "f", "g"
    double t = 1.3, level = 0.5;
    int bigN = 0, split_p = 0;
    std::string suite = "all";

    void validate_common() const {
        if (!(rtol > 0.0) || !(atol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
        if (format != "csv" && format != "json")
            throw std::invalid_argument("format must be csv or json");
    }
    GALSpec spec() const {
        GALSpec s{a, b, f, g, ModulusM(m), beta};
        if (std::isnan(beta)) s.beta = complete_K(s.m) / 2.0;
        s.validate();
        return s;
    }
    SpectralOptions spectral() const {
        SpectralOptions o;
        o.rtol = rtol;
        o.atol = atol;
        return o;
    }
};

namespace detail {

inline void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    nlohmann::json j;
    in >> j;
    for (const auto& [key, value] : j.items()) {
        if (key == "a") cfg.a = value.get<double>();
        else if (key == "b") cfg.b = value.get<double>();
        else if (key == "f") cfg.f = value.get<double>();
        else if (key == "g") cfg.g = value.get<double>();
        else if (key == "m") cfg.m = value.get<double>();
        else if (key == "beta") cfg.beta = value.get<double>();
        else if (key == "emin") cfg.emin = value.get<double>();
        else if (key == "emax") cfg.emax = value.get<double>();
        else if (key == "grid") cfg.grid = value.get<std::size_t>();
        else if (key == "scan_points") cfg.scan_points = value.get<std::size_t>();
        else if (key == "rtol") cfg.rtol = value.get<double>();
        else if (key == "atol") cfg.atol = value.get<double>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

inline std::ostream& output_stream(const RunConfig& cfg, std::ofstream& file) {
    if (cfg.out.empty()) return std::cout;
    file.open(cfg.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output path: " + cfg.out);
    return file;
}

inline int cmd_eval(const RunConfig& cfg) {
    const GALSpec s = cfg.spec();
    const PotentialOnLine V(s);
    std::vector<std::vector<std::string>> rows;
    for (double x : period_grid(s, cfg.grid)) {
        const complex v = V(x);
        rows.push_back({format_value(x), format_value(v.real()), format_value(v.imag())});
    }
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    if (cfg.format == "csv") {
        write_csv(os, {"x", "ReV", "ImV"}, rows);
    } else {
        nlohmann::json j;
        j["spec"] = to_json(s);
        j["samples"] = rows;
        os << j.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_bands(const RunConfig& cfg) {
    const GALSpec s = cfg.spec();
    if (!(cfg.emin < cfg.emax))
        throw std::invalid_argument("energy range is degenerate (emin >= emax)");
    const BandStructure bs =
        classify_bands(s, cfg.emin, cfg.emax, cfg.scan_points, cfg.spectral());
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    if (cfg.format == "csv") {
        os << "# spec " << s.bracket() << " m=" << format_value(s.m) << "\n";
        os << "# edges";
        for (double e : bs.edges) os << " " << format_value(e);
        os << "\n# gap_count " << bs.gap_count << "\n";
        discriminant_curve_csv(os, bs.scan);
    } else {
        nlohmann::json j = to_json(bs);
        j["spec"] = to_json(s);
        os << j.dump(2) << "\n";
    }
    std::cerr << s.bracket() << ": " << bs.edges.size() << " edges, " << bs.gap_count
              << " gaps" << (bs.broken_pt ? " [broken PT]" : "") << "\n";
    return 0;
}

inline std::vector<QESState> catalog_states(const RunConfig& cfg, const GALSpec& s) {
    if (cfg.midband_case.empty()) return closed_form_edges(s);
    const MidbandCase mc = cfg.midband_case == "b"   ? MidbandCase::b_half
                           : cfg.midband_case == "f" ? MidbandCase::f_half
                                                     : MidbandCase::g_half;
    return midband_states(mc, cfg.t, cfg.bigN, cfg.split_p, cfg.level, ModulusM(cfg.m));
}

inline GALSpec midband_home_spec(const RunConfig& cfg) {
    const double a = cfg.t - 0.5;
    const double other1 = cfg.split_p, other2 = cfg.bigN - cfg.split_p;
    if (cfg.midband_case == "b") return make_spec(a, cfg.level, other1, other2, cfg.m);
    if (cfg.midband_case == "f") return make_spec(a, other1, cfg.level, other2, cfg.m);
    return make_spec(a, other1, other2, cfg.level, cfg.m);
}

inline int cmd_catalog(const RunConfig& cfg) {
    const GALSpec s = cfg.midband_case.empty() ? cfg.spec() : midband_home_spec(cfg);
    const std::vector<QESState> states = catalog_states(cfg, s);
    nlohmann::json arr = nlohmann::json::array();
    std::cout << "# " << s.bracket() << " m=" << format_value(s.m) << "\n";
    for (const QESState& st : states) {
        const double res = schrodinger_residual(st, s, 192);
        nlohmann::json j = to_json(st);
        j["residual"] = res;
        arr.push_back(j);
        std::ostringstream energy;
        energy << format_value(st.energy.real());
        if (st.energy.imag() != 0.0) energy << (st.energy.imag() > 0 ? "+" : "")
                                            << format_value(st.energy.imag()) << "i";
        std::cout << "E = " << energy.str() << "  period " << to_string(st.period_class)
                  << "  residual " << format_value(res) << "  [" << st.provenance << "]\n";
    }
    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output path: " + cfg.out);
        file << arr.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_susy(const RunConfig& cfg) {
    const GALSpec s = cfg.spec();
    if (!(cfg.emin < cfg.emax))
        throw std::invalid_argument("energy range is degenerate (emin >= emax)");
    nlohmann::json arr = nlohmann::json::array();
    for (const QESState& st : closed_form_edges(s)) {
        const IsospectralityReport rep = isospectrality_report(
            s, st, cfg.emin, cfg.emax, cfg.scan_points, 4096, cfg.spectral());
        nlohmann::json j = to_json(rep);
        j["state"] = to_json(st);
        const std::vector<double> grid = period_grid(s, 512);
        const PartnerProfile prof = partner_profile(st, s, grid);
        if (const auto hit = identify_gal(prof, s.m, s.beta))
            j["partner_bracket"] = hit->first.bracket();
        arr.push_back(j);
        std::cout << "E = " << format_value(st.energy.real()) << "  partner edges agree to "
                  << format_value(rep.max_discrepancy)
                  << (j.contains("partner_bracket")
                          ? "  partner " + j["partner_bracket"].get<std::string>()
                          : std::string())
                  << "\n";
    }
    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output path: " + cfg.out);
        file << arr.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_heun(const RunConfig& cfg) {
    const GALSpec s = cfg.midband_case.empty() ? cfg.spec() : midband_home_spec(cfg);
    const std::vector<QESState> states = catalog_states(cfg, s);
    nlohmann::json arr = nlohmann::json::array();
    for (const QESState& st : states) {
        const HeunParameters hp = heun_for_state(st, s);
        const double res = heun_residual(hp, st, s);
        nlohmann::json j = to_json(hp);
        j["energy_re"] = st.energy.real();
        j["energy_im"] = st.energy.imag();
        j["residual"] = res;
        arr.push_back(j);
        std::cout << "E = " << format_value(st.energy.real()) << "  (alpha,beta,gamma,delta,eps,q,c) = ("
                  << format_value(hp.alpha.real()) << (hp.complex_exponents() ? "+im" : "")
                  << "," << format_value(hp.beta.real()) << "," << format_value(hp.gamma)
                  << "," << format_value(hp.delta) << "," << format_value(hp.epsilon) << ","
                  << format_value(hp.q.real()) << "," << format_value(hp.c)
                  << ")  residual " << format_value(res) << "\n";
    }
    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output path: " + cfg.out);
        file << arr.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg) {
    AcceptanceOptions opt;
    opt.m = cfg.m;
    std::vector<CriterionResult> results;
    if (cfg.suite == "all") {
        results = run_acceptance(opt);
    } else {
        std::stringstream ss(cfg.suite);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok == "elliptic") results.push_back(criterion_elliptic_identities(opt));
            else if (tok == "bands") {
                results.push_back(criterion_lame1_edges(opt));
                results.push_back(criterion_lame2_discriminant(opt));
                results.push_back(criterion_gap_counts(opt));
            } else if (tok == "residuals") results.push_back(criterion_residual_sweep(opt));
            else if (tok == "collocation")
                results.push_back(criterion_collocation_vs_closed(opt));
            else if (tok == "duality") results.push_back(criterion_duality(opt));
            else if (tok == "discriminant")
                results.push_back(criterion_discriminant_identities(opt));
            else if (tok == "susy") results.push_back(criterion_susy_partners(opt));
            else if (tok == "conjectures") results.push_back(criterion_conjectures(opt));
            else if (tok == "midband") results.push_back(criterion_midband(opt));
            else if (tok == "heun") results.push_back(criterion_heun(opt));
            else throw std::invalid_argument("unknown suite '" + tok + "'");
        }
    }
    bool all_pass = true;
    for (const CriterionResult& r : results) {
        std::printf("%s  %2d  %-28s  %6.1f s  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace detail

/// Entry point shared by the binary and the tests.  Exit codes: 0 success,
/// 1 verification failure, 2 configuration error.
inline int run(std::vector<std::string> args) {
    CLI::App app{"band-edge and mid-band machinery for complex PT-symmetric "
                 "elliptic potentials"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    // config file first, flags override
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    try {
        if (!config_path.empty()) detail::apply_config_file(config_path, cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    auto add_spec_options = [&](CLI::App* sub) {
        sub->add_option("--a", cfg.a, "parameter a");
        sub->add_option("--b", cfg.b, "parameter b");
        sub->add_option("--f", cfg.f, "parameter f");
        sub->add_option("--g", cfg.g, "parameter g");
        sub->add_option("--m", cfg.m, "elliptic parameter m in (0,1)");
        sub->add_option("--beta", cfg.beta, "line offset (default K(m)/2)");
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--rtol", cfg.rtol, "integrator relative tolerance");
        sub->add_option("--atol", cfg.atol, "integrator absolute tolerance");
    };

    CLI::App* eval = app.add_subcommand("eval", "sample the potential over one period");
    add_spec_options(eval);
    eval->add_option("--grid", cfg.grid, "samples per period");

    CLI::App* bands = app.add_subcommand("bands", "band structure from the Floquet oracle");
    add_spec_options(bands);
    bands->add_option("--emin", cfg.emin, "scan start");
    bands->add_option("--emax", cfg.emax, "scan end");
    bands->add_option("--scan-points", cfg.scan_points, "scan resolution (0 = auto)");

    CLI::App* catalog = app.add_subcommand("catalog", "exact eigenstates with residuals");
    add_spec_options(catalog);
    catalog->add_option("--midband-case", cfg.midband_case,
                        "b|f|g: list mid-band states instead of band edges");
    catalog->add_option("--t", cfg.t, "mid-band Bloch exponent");
    catalog->add_option("--level", cfg.level, "half-integral level (0.5 or 1.5)");
    catalog->add_option("--N", cfg.bigN, "mid-band integer sum");
    catalog->add_option("--p", cfg.split_p, "mid-band split (p, N-p)");

    CLI::App* susy = app.add_subcommand("susy", "partner profiles and isospectrality");
    add_spec_options(susy);
    susy->add_option("--emin", cfg.emin, "scan start");
    susy->add_option("--emax", cfg.emax, "scan end");
    susy->add_option("--scan-points", cfg.scan_points, "scan resolution (0 = auto)");

    CLI::App* heun = app.add_subcommand("heun", "canonical-form dictionary and residuals");
    add_spec_options(heun);
    heun->add_option("--midband-case", cfg.midband_case, "b|f|g mid-band states");
    heun->add_option("--t", cfg.t, "mid-band Bloch exponent");
    heun->add_option("--level", cfg.level, "half-integral level");
    heun->add_option("--N", cfg.bigN, "mid-band integer sum");
    heun->add_option("--p", cfg.split_p, "mid-band split");

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--suite", cfg.suite,
                       "all or comma list: elliptic,bands,residuals,collocation,"
                       "duality,discriminant,susy,conjectures,midband,heun");
    verify->add_option("--m", cfg.m, "modulus for the m-parametric criteria");
    verify->add_option("--config", config_path, "JSON config file");

    std::vector<const char*> argv;
    argv.push_back("galband");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        cfg.validate_common();
        if (eval->parsed()) return detail::cmd_eval(cfg);
        if (bands->parsed()) return detail::cmd_bands(cfg);
        if (catalog->parsed()) return detail::cmd_catalog(cfg);
        if (susy->parsed()) return detail::cmd_susy(cfg);
        if (heun->parsed()) return detail::cmd_heun(cfg);
        if (verify->parsed()) return detail::cmd_verify(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace galband::cli

#endif // GALBAND_CLI_HPP
