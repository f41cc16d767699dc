#pragma once

#include "floatchain/circuit_model.hpp"
#include "floatchain/normal_modes.hpp"
#include "floatchain/transmon_spectrum.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Report assembly and serialization behind the command-line tool. Units at
// this boundary: fF, nH, GHz for frequencies and energies/h, MHz for
// couplings. Every serialized float is rounded to 12 significant digits.
namespace floatchain {

using Json = nlohmann::ordered_json;

/// `{n, scheme, c_q_fF, c_g_fF, c_c_fF, c_sh_fF?}`. Throws ParseError for
/// missing or mistyped fields and ValidationError for bad values.
ChainSpec chain_spec_from_json(const nlohmann::json& j);
Json chain_spec_to_json(const ChainSpec& spec);

/// Reads and parses a JSON file; malformed content raises ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);

struct AnalysisOptions {
    double l_j = 12e-9; ///< H, same junction on every qubit
    SpectrumMethod method = SpectrumMethod::Harmonic;
    int n_cut = kDefaultChargeCutoff;
};

/// One numeric-vs-closed-form check at the report's center site.
struct ClosedFormComparison {
    std::string quantity;
    std::string unit; ///< "1" for dimensionless
    double numeric = 0.0;
    double analytic = 0.0;
    double relative_deviation = 0.0; ///< (numeric - analytic) / analytic
};

struct AnalysisReport {
    std::optional<ChainSpec> spec; ///< echoed input, or inferred for uniform imports
    std::string source;            ///< "spec" or the imported file name
    AnalysisOptions options;

    EffectiveCoupling coupling;
    std::vector<QubitSpectrum> spectra;
    double e_j = 0.0; ///< J
    CouplingReport couplings;

    std::size_t center_site = 1; ///< 1-based, (N + 1) / 2
    std::vector<ClosedFormComparison> closed_form;

    bool uniform = false;
    std::optional<Scheme> scheme;
    double stray_max = 0.0; ///< F
};

AnalysisReport analyze_spec(const ChainSpec& spec, const AnalysisOptions& options = {});

/// Paired a/b matrices go through the +- transform and the Schur complement;
/// all-grounded (single-ended) matrices are used as C_eff directly.
AnalysisReport analyze_node_matrix(const NodeCapacitanceMatrix& node, const AnalysisOptions& options = {},
                                   std::string source = "matrix");

Json to_json(const AnalysisReport& report);

/// Inverse design with a forward round trip through the strong-coupling forms.
Json design_report(double chi, double xi, double c_q_eff);

/// Center-site chi, xi over a C_G / C_q,eff by C_c grid at fixed C_q,eff (A-B scheme).
struct SweepGrid {
    std::size_t n_qubits = 100;
    double c_q_eff = 0.0; ///< F
    std::vector<double> c_g_ratio;
    std::vector<double> c_c; ///< F
};

/// `{n?, c_q_eff_fF, c_g_ratio, c_c_fF}`; the two axes are lists or
/// `{min, max, points, spacing: "log"|"linear"}`.
SweepGrid sweep_grid_from_json(const nlohmann::json& j);

struct SweepRow {
    std::size_t index = 0;
    double c_g_ratio = 0.0;
    double c_c = 0.0;
    double c_q = 0.0;
    double c_g = 0.0;
    double chi_center = 0.0;
    double xi_center = 0.0;
    double chi_analytic = 0.0;
    double xi_analytic = 0.0;
    std::string status = "ok"; ///< "ok" or the error code of the failed point
    bool numerical_failure = false;
};

/// Rows ordered by grid index (C_c outer, C_G ratio inner) for any `jobs`.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned jobs = 1);

/// Columns: index,c_g_ratio,c_c_fF,c_q_fF,c_g_fF,chi_center,xi_center,
/// chi_analytic,xi_analytic,status. Shortest round-trip floats.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Columns: L_nH,f_minus_GHz,f_plus_GHz.
void write_trace_csv(std::ostream& out, const CrossingResult& result);

/// `pair` is 1-based here. The harmonic coupling_report value for the same
/// pair is included for comparison.
Json crossing_report(const EffectiveCoupling& coupling, std::size_t first, std::size_t second,
                     const CrossingOptions& options, const CrossingResult& result);

/// Stable text form: two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace floatchain
