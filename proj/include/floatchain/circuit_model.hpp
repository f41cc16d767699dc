#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace floatchain {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Scheme {
    AB,          ///< couplers alternate pads: b_i -- a_{i+1}
    AA,          ///< both couplers of a qubit on the same pad: b_i -- b_{i+1}
    SingleEnded, ///< one grounded pad per qubit, shunt C_sh to ground
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

/// Uniform chain geometry. Capacitances in farads.
struct ChainSpec {
    std::size_t n_qubits = 1;
    double c_q = 0.0;
    double c_g = 0.0;
    double c_c = 0.0;
    Scheme scheme = Scheme::AB;
    double c_sh = 0.0; ///< SingleEnded only

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

enum class Pad { A, B, Grounded };

/// Node identifier, 1-indexed qubit. Text form: `q3a`, `q3b`, or `q3` (single-ended).
struct NodeLabel {
    std::size_t qubit = 1;
    Pad pad = Pad::A;

    std::string str() const;
    static NodeLabel parse(std::string_view text);

    friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

/// Capacitance-coefficient matrix of T = 1/2 dPhi^T C dPhi over node fluxes.
/// Ground is implicit: capacitance to ground sits in the diagonal sum.
struct NodeCapacitanceMatrix {
    std::vector<NodeLabel> labels;
    Matrix matrix;

    std::size_t size() const { return labels.size(); }
};

/// Kinetic-energy blocks in the (Phi+, Phi-) basis, Phi+- = Phi_a +- Phi_b.
/// `cpm` is C^{+-} (rows: '+' modes, columns: '-' modes); C^{-+} = cpm^T.
struct BlockCapacitanceMatrix {
    Matrix cpp;
    Matrix cpm;
    Matrix cmm;

    std::size_t n_qubits() const { return static_cast<std::size_t>(cpp.rows()); }
    /// [[cpp, cpm], [cpm^T, cmm]]
    Matrix assembled() const;
};

NodeCapacitanceMatrix build_node_matrix(const ChainSpec& spec);

/// Congruence transform of a paired a/b node matrix to the +- blocks. Qubits
/// are ordered by label index; node order in the input is free.
BlockCapacitanceMatrix node_to_pm(const NodeCapacitanceMatrix& node);

/// Closed-form finite-N blocks (boundary rows 1 and N included). AB and AA only.
BlockCapacitanceMatrix build_chain_blocks(const ChainSpec& spec);

enum class CapacitanceUnit { Farad, Femtofarad };

CapacitanceUnit capacitance_unit_from_string(std::string_view s);

struct CsvImportOptions {
    CapacitanceUnit unit = CapacitanceUnit::Femtofarad;
    /// Optional header-name -> node mapping (e.g. field-solver net names).
    /// When empty, headers must already be canonical labels.
    std::map<std::string, NodeLabel> labeling;
    double symmetry_tolerance = 1e-6;
};

/// Square CSV table, first row and first column are node labels.
NodeCapacitanceMatrix import_capacitance_csv(std::istream& source, const CsvImportOptions& options = {});

void export_capacitance_csv(std::ostream& sink, const NodeCapacitanceMatrix& node,
                            CapacitanceUnit unit = CapacitanceUnit::Femtofarad);

/// Per-element breakdown of a paired a/b node matrix, used to decide whether an
/// imported matrix is a uniform chain (and so comparable to the closed forms).
struct ChainStructure {
    std::vector<double> c_q;      ///< -C(a_i, b_i)
    std::vector<double> c_ground; ///< row sums, one per node (a_1, b_1, a_2, ...)
    std::vector<double> c_link;   ///< coupler capacitance between consecutive qubits
    std::optional<Scheme> scheme; ///< AB or AA when every link has one consistent pad pattern
    double stray_max = 0.0;       ///< largest |coefficient| outside the chain pattern
    bool uniform = false;

    /// Uniform-chain parameters, present when `uniform`.
    std::optional<ChainSpec> spec;
};

ChainStructure analyze_structure(const NodeCapacitanceMatrix& node, double rel_tol = 1e-9);

} // namespace floatchain
