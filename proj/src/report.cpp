#include "floatchain/report.hpp"

#include "floatchain/closed_form.hpp"
#include "floatchain/constants.hpp"
#include "floatchain/effective_coupling.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace floatchain {

namespace {

constexpr std::string_view kTool = "floatchain 0.1.0";

double r12(double v) { return round_significant(v, 12); }

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", key);
    return j.at(key);
}

double number(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number", key);
    return v.get<double>();
}

std::size_t count(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ParseError(std::string("field '") + key + "' must be a positive integer", key);
    return v.get<std::size_t>();
}

} // namespace

ChainSpec chain_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("chain spec must be a JSON object", "spec");
    ChainSpec spec;
    spec.n_qubits = count(j, "n");
    const auto& scheme = field(j, "scheme");
    if (!scheme.is_string()) throw ParseError("field 'scheme' must be a string", "scheme");
    spec.scheme = scheme_from_string(scheme.get<std::string>());
    if (spec.scheme == Scheme::SingleEnded) {
        spec.c_sh = units::from_fF(number(j, "c_sh_fF"));
        spec.c_c = units::from_fF(number(j, "c_c_fF"));
    } else {
        spec.c_q = units::from_fF(number(j, "c_q_fF"));
        spec.c_g = units::from_fF(number(j, "c_g_fF"));
        spec.c_c = units::from_fF(number(j, "c_c_fF"));
    }
    spec.validate();
    return spec;
}

Json chain_spec_to_json(const ChainSpec& spec) {
    Json j;
    j["n"] = spec.n_qubits;
    j["scheme"] = std::string(to_string(spec.scheme));
    if (spec.scheme == Scheme::SingleEnded) {
        j["c_sh_fF"] = r12(units::to_fF(spec.c_sh));
        j["c_c_fF"] = r12(units::to_fF(spec.c_c));
    } else {
        j["c_q_fF"] = r12(units::to_fF(spec.c_q));
        j["c_g_fF"] = r12(units::to_fF(spec.c_g));
        j["c_c_fF"] = r12(units::to_fF(spec.c_c));
    }
    return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'", path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), path.string());
    }
}

namespace {

ClosedFormComparison compare(std::string quantity, std::string unit, double numeric, double analytic) {
    ClosedFormComparison c{std::move(quantity), std::move(unit), numeric, analytic, 0.0};
    c.relative_deviation = analytic != 0.0 ? (numeric - analytic) / analytic : (numeric == 0.0 ? 0.0 : INFINITY);
    return c;
}

// Center-site checks against the infinite-chain forms; empty when the chain
// is too short to have a site with two neighbours on each side.
std::vector<ClosedFormComparison> closed_form_checks(const ChainSpec& spec, const EffectiveCoupling& ec,
                                                     std::size_t center) {
    std::vector<ClosedFormComparison> out;
    const std::size_t n = spec.n_qubits;
    if (n < 5) return out;
    const auto c = static_cast<Eigen::Index>(center - 1);
    const Matrix& inv = ec.c_eff_inv;
    const double chi = relative_coupling(inv, center - 1);
    const double xi = damping_factor(inv, center - 1);

    if (spec.scheme == Scheme::SingleEnded) {
        if (spec.c_sh <= 0.0) return out;
        out.push_back(compare("nnn_over_nn_ratio", "1", inv(c, c + 1) != 0.0 ? inv(c, c + 2) / inv(c, c + 1) : 0.0,
                              spec.c_c / spec.c_sh));
        out.push_back(compare("chi_over_xi", "1", xi > 0.0 ? chi / xi : 0.0, 0.5));
        return out;
    }
    if (spec.c_g <= 0.0 || spec.c_q <= 0.0) return out;

    const auto inf = infinite_chain_form(spec.c_q, spec.c_g, spec.c_c);
    const Matrix& ce = ec.c_eff;
    const double nn = ce(c, c + 1);
    if (spec.scheme == Scheme::AB) {
        out.push_back(compare("xi_c", "1", nn != 0.0 ? ce(c, c + 2) / nn : 0.0, inf.xi_c));
        out.push_back(compare("c_eff_nn", "fF", units::to_fF(nn), units::to_fF(inf.c_eff(1, 2))));
        const auto strong = strong_coupling_form(spec.c_q, spec.c_g, spec.c_c);
        out.push_back(compare("chi", "1", chi, strong.chi));
        out.push_back(compare("xi", "1", xi, strong.xi));
        out.push_back(compare("c_q_eff", "fF", units::to_fF(1.0 / inv(c, c)), units::to_fF(strong.c_q_eff)));
    } else {
        const auto aa = aa_forms(spec.c_q, spec.c_g, spec.c_c);
        out.push_back(compare("xi_c", "1", nn != 0.0 ? ce(c, c + 2) / nn : 0.0, aa.xi_c));
        out.push_back(compare("c_eff_nn", "fF", units::to_fF(nn), units::to_fF(aa.c_eff(1, 2))));
        out.push_back(compare("chi", "1", chi, aa.chi));
        out.push_back(compare("xi", "1", xi, aa.xi));
        out.push_back(compare("c_q_eff", "fF", units::to_fF(1.0 / inv(c, c)), units::to_fF(aa.c_q_eff)));
    }
    return out;
}

void fill_spectra(AnalysisReport& report) {
    const auto& ec = report.coupling;
    report.e_j = ej_from_inductance(report.options.l_j);
    report.spectra.clear();
    for (double e_c : ec.e_c)
        report.spectra.push_back(
            transmon_spectrum(TransmonParams{report.e_j, e_c}, report.options.method, report.options.n_cut));
    report.couplings = coupling_report(ec, report.spectra);
    report.center_site = (ec.n_qubits() + 1) / 2;
    if (report.spec) report.closed_form = closed_form_checks(*report.spec, ec, report.center_site);
}

NodeCapacitanceMatrix sorted_single_ended(const NodeCapacitanceMatrix& node) {
    const auto n = node.labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return node.labels[a].qubit < node.labels[b].qubit; });
    NodeCapacitanceMatrix out;
    out.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (node.labels[order[i]].qubit != i + 1)
            throw ValidationError("single-ended labels must be q1..q" + std::to_string(n), node.labels[order[i]].str());
        out.labels.push_back(node.labels[order[i]]);
        for (std::size_t k = 0; k < n; ++k)
            out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                node.matrix(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[k]));
    }
    return out;
}

void validate_options(const AnalysisOptions& o) {
    if (!std::isfinite(o.l_j) || !(o.l_j > 0.0)) throw ValidationError("junction inductance must be positive", "lj_nH");
}

} // namespace

AnalysisReport analyze_spec(const ChainSpec& spec, const AnalysisOptions& options) {
    spec.validate();
    validate_options(options);
    AnalysisReport report = analyze_node_matrix(build_node_matrix(spec), options, "spec");
    report.spec = spec;
    report.closed_form = closed_form_checks(spec, report.coupling, report.center_site);
    return report;
}

AnalysisReport analyze_node_matrix(const NodeCapacitanceMatrix& node, const AnalysisOptions& options,
                                   std::string source) {
    validate_options(options);
    if (node.labels.empty()) throw ValidationError("empty capacitance matrix", "matrix");
    AnalysisReport report;
    report.source = std::move(source);
    report.options = options;

    const bool grounded = std::all_of(node.labels.begin(), node.labels.end(),
                                      [](const NodeLabel& l) { return l.pad == Pad::Grounded; });
    if (grounded) {
        const auto sorted = sorted_single_ended(node);
        report.coupling = reduce_single_ended(sorted);
        report.scheme = Scheme::SingleEnded;
        // uniform when it equals the chain rebuilt from its first row
        const Matrix& m = sorted.matrix;
        ChainSpec guess;
        guess.scheme = Scheme::SingleEnded;
        guess.n_qubits = sorted.labels.size();
        guess.c_sh = m.row(0).sum();
        guess.c_c = guess.n_qubits > 1 ? -m(0, 1) : 0.0;
        if (guess.c_sh >= 0.0 && guess.c_c >= 0.0) {
            const Matrix diff = build_node_matrix(guess).matrix - m;
            report.uniform = diff.cwiseAbs().maxCoeff() <= 1e-9 * m.cwiseAbs().maxCoeff();
        }
        if (report.uniform) report.spec = guess;
    } else {
        report.coupling = reduce(node_to_pm(node));
        const auto structure = analyze_structure(node);
        report.uniform = structure.uniform;
        report.scheme = structure.scheme;
        report.stray_max = structure.stray_max;
        report.spec = structure.spec;
    }
    fill_spectra(report);
    return report;
}

Json to_json(const AnalysisReport& report) {
    const auto& ec = report.coupling;
    const auto& cr = report.couplings;
    const std::size_t n = ec.n_qubits();

    Json j;
    j["source"] = report.source;
    j["spec"] = report.spec ? chain_spec_to_json(*report.spec) : Json(nullptr);
    j["n_qubits"] = n;

    Json qubits = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = report.spectra[i];
        const auto k = static_cast<Eigen::Index>(i);
        Json q;
        q["qubit"] = i + 1;
        q["omega01_GHz"] = r12(units::angular_to_GHz(s.omega01));
        q["anharmonicity_MHz"] = r12(units::angular_to_MHz(s.anharmonicity));
        q["e_c_GHz"] = r12(units::energy_to_GHz(ec.e_c[i]));
        q["e_j_GHz"] = r12(units::energy_to_GHz(report.e_j));
        q["n_ge"] = r12(s.n_ge);
        q["c_eff_fF"] = r12(units::to_fF(ec.c_eff(k, k)));
        qubits.push_back(std::move(q));
    }
    j["qubits"] = std::move(qubits);

    Json jm = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < n; ++k)
            row.push_back(r12(units::angular_to_MHz(cr.j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)))));
        jm.push_back(std::move(row));
    }
    j["j_MHz"] = std::move(jm);

    Json chi = Json::array();
    for (std::size_t k = 0; k < cr.chi.size(); ++k)
        chi.push_back(Json{{"site", CouplingReport::chi_first + k + 1}, {"chi", r12(cr.chi[k])}});
    j["chi"] = std::move(chi);
    Json xi = Json::array();
    for (std::size_t k = 0; k < cr.xi.size(); ++k)
        xi.push_back(Json{{"site", CouplingReport::xi_first + k + 1}, {"xi", r12(cr.xi[k])}});
    j["xi"] = std::move(xi);

    const std::size_t c = report.center_site;
    Json center;
    center["site"] = c;
    const bool has_chi = c >= 2 && c + 1 <= n;
    const bool has_xi = c >= 3 && c + 2 <= n;
    center["chi"] = has_chi ? Json(r12(cr.chi[c - 1 - CouplingReport::chi_first])) : Json(nullptr);
    center["xi"] = has_xi ? Json(r12(cr.xi[c - 1 - CouplingReport::xi_first])) : Json(nullptr);
    center["j_nn_over_omega"] =
        has_chi ? Json(r12(cr.nn_coupling_over_omega[c - 1 - CouplingReport::chi_first])) : Json(nullptr);
    j["center"] = std::move(center);

    j["chi_identity"] = Json{{"max_relative_gap", r12(cr.chi_identity_gap)},
                             {"sqrt_ec_over_ej", r12(cr.chi_identity_scale)},
                             {"holds", cr.chi_identity_holds}};

    if (report.closed_form.empty()) {
        j["closed_form"] = nullptr;
    } else {
        Json cf = Json::array();
        for (const auto& e : report.closed_form)
            cf.push_back(Json{{"quantity", e.quantity},
                              {"unit", e.unit},
                              {"numeric", r12(e.numeric)},
                              {"analytic", r12(e.analytic)},
                              {"relative_deviation", r12(e.relative_deviation)}});
        j["closed_form"] = std::move(cf);
    }

    j["structure"] = Json{{"uniform", report.uniform},
                          {"scheme", report.scheme ? Json(std::string(to_string(*report.scheme))) : Json(nullptr)},
                          {"stray_max_fF", r12(units::to_fF(report.stray_max))}};

    Json prov;
    prov["tool"] = std::string(kTool);
    prov["method"] = std::string(to_string(report.options.method));
    prov["n_cut"] = report.options.method == SpectrumMethod::ChargeBasis ? Json(report.options.n_cut) : Json(nullptr);
    prov["l_j_nH"] = r12(units::to_nH(report.options.l_j));
    prov["constants"] = std::string(constants::version);
    prov["tolerances"] = Json{{"spd_inverse_residual", 1e-10},
                              {"csv_symmetry_relative", 1e-6},
                              {"charge_basis_edge_weight", 1e-8},
                              {"significant_digits", 12}};
    j["provenance"] = std::move(prov);
    return j;
}

Json design_report(double chi, double xi, double c_q_eff) {
    const auto caps = design_capacitances(chi, xi, c_q_eff);
    Json j;
    j["target"] = Json{{"chi", r12(chi)}, {"xi", r12(xi)}, {"c_q_eff_fF", r12(units::to_fF(c_q_eff))}};
    j["capacitances"] = Json{{"c_q_fF", r12(units::to_fF(caps.c_q))},
                             {"c_c_fF", r12(units::to_fF(caps.c_c))},
                             {"c_g_fF", r12(units::to_fF(caps.c_g))}};
    if (chi == 0.0) {
        j["round_trip"] = Json{{"chi", 0.0}, {"xi", nullptr}, {"c_q_eff_fF", r12(units::to_fF(caps.c_q))},
                               {"max_relative_error", 0.0}};
    } else {
        const auto back = strong_coupling_form(caps.c_q, caps.c_g, caps.c_c);
        const double err = std::max({std::abs(back.chi / chi - 1.0), std::abs(back.xi / xi - 1.0),
                                     std::abs(back.c_q_eff / c_q_eff - 1.0)});
        j["round_trip"] = Json{{"chi", r12(back.chi)},
                               {"xi", r12(back.xi)},
                               {"c_q_eff_fF", r12(units::to_fF(back.c_q_eff))},
                               {"max_relative_error", r12(err)}};
    }
    j["chi_bound"] = r12(ab_chi_bound(xi));
    j["provenance"] = Json{{"tool", std::string(kTool)}, {"scheme", "AB"}};
    return j;
}

namespace {

std::vector<double> axis(const nlohmann::json& j, const char* key, double scale) {
    const auto& v = field(j, key);
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ParseError(std::string("'") + key + "' entries must be numbers", key);
            out.push_back(x.get<double>() * scale);
        }
    } else if (v.is_object()) {
        const double lo = number(v, "min");
        const double hi = number(v, "max");
        const std::size_t points = count(v, "points");
        const std::string spacing = v.value("spacing", std::string("log"));
        if (spacing != "log" && spacing != "linear")
            throw ParseError("spacing must be 'log' or 'linear'", std::string(key) + ".spacing");
        if (spacing == "log" && !(lo > 0.0 && hi > 0.0))
            throw ValidationError("log spacing needs positive bounds", key);
        for (std::size_t k = 0; k < points; ++k) {
            const double t = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
            const double x = spacing == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
            out.push_back(x * scale);
        }
    } else {
        throw ParseError(std::string("'") + key + "' must be a list or a {min, max, points} object", key);
    }
    if (out.empty()) throw ValidationError(std::string("'") + key + "' is empty", key);
    for (double x : out)
        if (!std::isfinite(x) || x < 0.0) throw ValidationError(std::string("'") + key + "' values must be >= 0", key);
    return out;
}

SweepRow sweep_point(const SweepGrid& grid, std::size_t index, double ratio, double c_c) {
    SweepRow row;
    row.index = index;
    row.c_g_ratio = ratio;
    row.c_c = c_c;
    row.c_g = ratio * grid.c_q_eff;
    try {
        // C_G = 0 has no finite C_q,eff; keep C_q = C_q,eff and let the reduction report it
        row.c_q = row.c_g > 0.0 ? solve_c_q_for_c_q_eff(grid.c_q_eff, row.c_g, c_c) : grid.c_q_eff;
        ChainSpec spec;
        spec.n_qubits = grid.n_qubits;
        spec.c_q = row.c_q;
        spec.c_g = row.c_g;
        spec.c_c = c_c;
        const auto ec = reduce(build_chain_blocks(spec));
        const std::size_t center = (grid.n_qubits + 1) / 2 - 1;
        row.chi_center = relative_coupling(ec.c_eff_inv, center);
        row.xi_center = damping_factor(ec.c_eff_inv, center);
        const auto strong = strong_coupling_form(row.c_q, row.c_g, c_c);
        row.chi_analytic = strong.chi;
        row.xi_analytic = strong.xi;
    } catch (const NumericalError& e) {
        row.status = e.code();
        row.numerical_failure = true;
    } catch (const Error& e) {
        row.status = e.code();
    }
    if (row.status != "ok") row.chi_center = row.xi_center = row.chi_analytic = row.xi_analytic = NAN;
    return row;
}

} // namespace

SweepGrid sweep_grid_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("sweep grid must be a JSON object", "grid");
    SweepGrid grid;
    if (j.contains("n")) grid.n_qubits = count(j, "n");
    if (grid.n_qubits < 5) throw ValidationError("sweep needs n >= 5 for a center xi", "n");
    grid.c_q_eff = units::from_fF(number(j, "c_q_eff_fF"));
    if (!(grid.c_q_eff > 0.0)) throw ValidationError("c_q_eff_fF must be positive", "c_q_eff_fF");
    grid.c_g_ratio = axis(j, "c_g_ratio", 1.0);
    grid.c_c = axis(j, "c_c_fF", units::femto);
    return grid;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned jobs) {
    const std::size_t total = grid.c_c.size() * grid.c_g_ratio.size();
    std::vector<SweepRow> rows(total);
    auto work = [&](std::size_t k) {
        rows[k] = sweep_point(grid, k, grid.c_g_ratio[k % grid.c_g_ratio.size()], grid.c_c[k / grid.c_g_ratio.size()]);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    if (jobs == 1) {
        for (std::size_t k = 0; k < total; ++k) work(k);
        return rows;
    }
    // each worker writes only its own slots, so the result order is the grid order
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < total;) work(k);
        });
    pool.clear();
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "index,c_g_ratio,c_c_fF,c_q_fF,c_g_fF,chi_center,xi_center,chi_analytic,xi_analytic,status\n";
    for (const auto& r : rows)
        out << r.index << ',' << format_shortest(r.c_g_ratio) << ',' << format_shortest(units::to_fF(r.c_c)) << ','
            << format_shortest(units::to_fF(r.c_q)) << ',' << format_shortest(units::to_fF(r.c_g)) << ','
            << format_shortest(r.chi_center) << ',' << format_shortest(r.xi_center) << ','
            << format_shortest(r.chi_analytic) << ',' << format_shortest(r.xi_analytic) << ',' << r.status << '\n';
}

void write_trace_csv(std::ostream& out, const CrossingResult& result) {
    out << "L_nH,f_minus_GHz,f_plus_GHz\n";
    for (const auto& p : result.trace)
        out << format_shortest(units::to_nH(p.inductance)) << ',' << format_shortest(units::angular_to_GHz(p.omega_minus))
            << ',' << format_shortest(units::angular_to_GHz(p.omega_plus)) << '\n';
}

Json crossing_report(const EffectiveCoupling& coupling, std::size_t first, std::size_t second,
                     const CrossingOptions& options, const CrossingResult& result) {
    std::vector<QubitSpectrum> spectra;
    const double e_j = ej_from_inductance(options.l_fixed);
    for (double e_c : coupling.e_c) spectra.push_back(transmon_spectrum({e_j, e_c}, SpectrumMethod::Harmonic));
    const auto cr = coupling_report(coupling, spectra);
    const double j_harmonic =
        std::abs(cr.j(static_cast<Eigen::Index>(first - 1), static_cast<Eigen::Index>(second - 1)));

    Json j;
    j["pair"] = Json::array({first, second});
    j["spectators"] = options.spectators == SpectatorMode::PhasePinned ? "pinned" : "frozen";
    j["J_MHz"] = r12(units::angular_to_MHz(result.j));
    j["L_cross_nH"] = r12(units::to_nH(result.l_cross));
    j["min_splitting_MHz"] = r12(units::angular_to_MHz(result.min_splitting));
    j["harmonic_J_MHz"] = r12(units::angular_to_MHz(j_harmonic));
    j["relative_deviation"] = r12(j_harmonic > 0.0 ? result.j / j_harmonic - 1.0 : 0.0);
    j["sweep"] = Json{{"l_fixed_nH", r12(units::to_nH(options.l_fixed))},
                      {"l_lo_nH", r12(units::to_nH(options.l_lo))},
                      {"l_hi_nH", r12(units::to_nH(options.l_hi))},
                      {"points", options.n_points},
                      {"spacing", "log"}};
    j["provenance"] = Json{{"tool", std::string(kTool)}, {"constants", std::string(constants::version)}};
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace floatchain
