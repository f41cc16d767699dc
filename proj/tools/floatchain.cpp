// floatchain: capacitance-network analysis of floating-transmon chains.
//
//   floatchain analyze chain.json [--lj-nH 12] [--method harmonic] [--n-cut 40] [--out report.json]
//   floatchain design <chi> <xi> <c_q_eff_fF>
//   floatchain sweep grid.json [--jobs 4] [--out sweep.csv]
//   floatchain crossing chain.json --pair 2,3 [--trace trace.csv]
//   floatchain import matrix.csv --unit fF
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure. Errors are a JSON
// object {code, message, context} on stderr.

#include "floatchain/circuit_model.hpp"
#include "floatchain/constants.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/normal_modes.hpp"
#include "floatchain/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace fc = floatchain;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

int fail(const std::string& code, const std::string& message, const std::string& context, int status) {
    fc::Json err;
    err["code"] = code;
    err["message"] = message;
    err["context"] = context;
    std::cerr << err.dump() << '\n';
    return status;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw fc::ValidationError("cannot write '" + out + "'", out);
    file << text;
}

struct SpectrumFlags {
    double lj_nH = 12.0;
    std::string method = "harmonic";
    int n_cut = fc::kDefaultChargeCutoff;

    fc::AnalysisOptions options() const {
        fc::AnalysisOptions o;
        o.l_j = fc::units::from_nH(lj_nH);
        o.method = fc::spectrum_method_from_string(method);
        o.n_cut = n_cut;
        return o;
    }
};

void add_spectrum_flags(CLI::App* cmd, SpectrumFlags& f) {
    cmd->add_option("--lj-nH", f.lj_nH, "Junction inductance in nH (same for every qubit)")->capture_default_str();
    cmd->add_option("--method", f.method, "Transmon spectrum: harmonic, asymptotic or charge-basis")
        ->check(CLI::IsMember({"harmonic", "asymptotic", "charge-basis"}))
        ->capture_default_str();
    cmd->add_option("--n-cut", f.n_cut, "Charge-basis cutoff (states -n..n)")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantize chains of floating transmons and report mediated couplings"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::string out;
    SpectrumFlags spectrum;

    // analyze
    std::string config;
    auto* analyze = app.add_subcommand("analyze", "Full analysis of a uniform chain spec (JSON)");
    analyze->add_option("config", config, "Chain spec JSON {n, scheme, c_q_fF, c_g_fF, c_c_fF, c_sh_fF?}")
        ->required();
    add_spectrum_flags(analyze, spectrum);
    analyze->add_option("--out", out, "Write the report here instead of stdout");
    analyze->callback([&] {
        action = [&] {
            const auto spec = fc::chain_spec_from_json(fc::read_json_file(config));
            emit(fc::dump(fc::to_json(fc::analyze_spec(spec, spectrum.options()))), out);
            return 0;
        };
    });

    // design
    double chi = 0.0, xi = 0.0, c_q_eff_fF = 0.0;
    auto* design = app.add_subcommand("design", "Capacitances for a target (chi, xi) at fixed C_q,eff (A-B scheme)");
    design->add_option("chi", chi, "Relative coupling strength")->required();
    design->add_option("xi", xi, "Damping factor, 0 < xi < 1")->required();
    design->add_option("c_q_eff_fF", c_q_eff_fF, "Effective qubit capacitance in fF")->required();
    design->add_option("--out", out, "Write the result here instead of stdout");
    design->callback([&] {
        action = [&] {
            emit(fc::dump(fc::design_report(chi, xi, fc::units::from_fF(c_q_eff_fF))), out);
            return 0;
        };
    });

    // sweep
    std::string grid_path;
    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Center-site chi, xi over a C_G / C_c grid at fixed C_q,eff (CSV)");
    sweep->add_option("grid", grid_path, "Grid JSON {n?, c_q_eff_fF, c_g_ratio, c_c_fF}")->required();
    sweep->add_option("--jobs", jobs, "Worker threads; row order does not depend on it")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    sweep->add_option("--out", out, "Write the CSV here instead of stdout");
    sweep->callback([&] {
        action = [&] {
            const auto grid = fc::sweep_grid_from_json(fc::read_json_file(grid_path));
            const auto rows = fc::run_sweep(grid, jobs);
            std::ostringstream csv;
            fc::write_sweep_csv(csv, rows);
            emit(csv.str(), out);
            std::size_t numerical = 0, invalid = 0;
            for (const auto& r : rows) {
                if (r.numerical_failure) ++numerical;
                else if (r.status != "ok") ++invalid;
            }
            if (numerical + invalid == 0) return 0;
            const int status = numerical > 0 ? kExitNumerical : kExitInvalid;
            return fail(numerical > 0 ? "sweep_point_failed" : "sweep_point_invalid",
                        std::to_string(numerical + invalid) + " of " + std::to_string(rows.size()) +
                            " grid points failed; see the status column",
                        grid_path, status);
        };
    });

    // crossing
    std::string crossing_config, trace_path, spectators = "pinned";
    std::vector<std::size_t> pair;
    double lo_nH = 0.0, hi_nH = 0.0;
    int points = 201;
    auto* crossing = app.add_subcommand("crossing", "Avoided-crossing |J| for one qubit pair");
    crossing->add_option("config", crossing_config, "Chain spec JSON")->required();
    crossing->add_option("--pair", pair, "1-based qubit pair, e.g. 2,3; the second one is swept")
        ->required()
        ->expected(2)
        ->delimiter(',');
    crossing->add_option("--lj-nH", spectrum.lj_nH, "Fixed inductance of the first qubit in nH")
        ->capture_default_str();
    crossing->add_option("--sweep-lo-nH", lo_nH, "Sweep start (default 0.5 x fixed)");
    crossing->add_option("--sweep-hi-nH", hi_nH, "Sweep end (default 2 x fixed)");
    crossing->add_option("--points", points, "Geometric grid points")->capture_default_str();
    crossing->add_option("--spectators", spectators, "pinned (phase = 0) or frozen (charge = 0)")
        ->check(CLI::IsMember({"pinned", "frozen"}))
        ->capture_default_str();
    crossing->add_option("--trace", trace_path, "Write the sweep trace CSV here (default: embedded in the JSON)");
    crossing->add_option("--out", out, "Write the result here instead of stdout");
    crossing->callback([&] {
        action = [&] {
            const auto spec = fc::chain_spec_from_json(fc::read_json_file(crossing_config));
            spec.validate();
            for (std::size_t q : pair)
                if (q < 1 || q > spec.n_qubits)
                    throw fc::ValidationError("pair index " + std::to_string(q) + " outside 1.." +
                                                  std::to_string(spec.n_qubits),
                                              "pair");
            auto options = fc::CrossingOptions::around(fc::units::from_nH(spectrum.lj_nH));
            if (lo_nH > 0.0) options.l_lo = fc::units::from_nH(lo_nH);
            if (hi_nH > 0.0) options.l_hi = fc::units::from_nH(hi_nH);
            options.n_points = points;
            options.spectators = spectators == "pinned" ? fc::SpectatorMode::PhasePinned
                                                        : fc::SpectatorMode::ChargeFrozen;
            const auto coupling = fc::analyze_spec(spec).coupling;
            const auto result = fc::avoided_crossing_J(coupling.c_eff, {pair[0] - 1, pair[1] - 1}, options);
            auto report = fc::crossing_report(coupling, pair[0], pair[1], options, result);
            std::ostringstream trace;
            fc::write_trace_csv(trace, result);
            if (trace_path.empty()) {
                report["trace_csv"] = trace.str();
            } else {
                emit(trace.str(), trace_path);
                report["trace_file"] = trace_path;
            }
            emit(fc::dump(report), out);
            return 0;
        };
    });

    // import
    std::string csv_path, unit = "fF", labels_path;
    auto* import = app.add_subcommand("import", "Analyze a node capacitance matrix (CSV, q<i>a/q<i>b labels)");
    import->add_option("matrix", csv_path, "Square CSV; first row and column are node labels")->required();
    import->add_option("--unit", unit, "Capacitance unit of the cells")
        ->check(CLI::IsMember({"F", "fF"}))
        ->capture_default_str();
    import->add_option("--labels", labels_path, "JSON object mapping header names to node labels");
    add_spectrum_flags(import, spectrum);
    import->add_option("--out", out, "Write the report here instead of stdout");
    import->callback([&] {
        action = [&] {
            fc::CsvImportOptions options;
            options.unit = fc::capacitance_unit_from_string(unit);
            if (!labels_path.empty()) {
                const auto map = fc::read_json_file(labels_path);
                if (!map.is_object()) throw fc::ParseError("label map must be a JSON object", labels_path);
                for (const auto& [name, label] : map.items()) {
                    if (!label.is_string()) throw fc::ParseError("label for '" + name + "' must be a string", name);
                    options.labeling[name] = fc::NodeLabel::parse(label.get<std::string>());
                }
            }
            std::ifstream in(csv_path);
            if (!in) throw fc::ValidationError("cannot open '" + csv_path + "'", csv_path);
            const auto node = fc::import_capacitance_csv(in, options);
            emit(fc::dump(fc::to_json(fc::analyze_node_matrix(node, spectrum.options(), csv_path))), out);
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage_error", e.what(), e.get_name(), kExitInvalid);
    }

    try {
        return action();
    } catch (const fc::ValidationError& e) {
        return fail(e.code(), e.what(), e.context(), kExitInvalid);
    } catch (const fc::NumericalError& e) {
        return fail(e.code(), e.what(), e.context(), kExitNumerical);
    } catch (const nlohmann::json::exception& e) {
        return fail("parse_error", e.what(), "json", kExitInvalid);
    } catch (const std::exception& e) {
        return fail("internal_error", e.what(), "", 1);
    }
}
