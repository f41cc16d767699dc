#pragma once

#include "floatchain/circuit_model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace floatchain {

/// Junction inductance in henries, or std::nullopt for a pinned coordinate
/// (zero-inductance limit: phase fixed to zero, capacitive loading kept).
using Inductance = std::optional<double>;
inline constexpr Inductance kPinned = std::nullopt;

/// Linearized chain: omega^2 C phi = L^-1 phi on the unpinned coordinates.
struct LinearChainModel {
    Matrix c_eff;
    std::vector<Inductance> inductances;

    std::vector<Eigen::Index> active() const;
};

/// How spectator qubits are removed in a pairwise model.
enum class SpectatorMode {
    PhasePinned,  ///< phase = 0: keep rows/cols of C_eff (zero-inductance spectators)
    ChargeFrozen, ///< charge = 0: keep rows/cols of C_eff^-1, then invert
};

struct NormalModes {
    std::vector<double> omega;      ///< rad/s, ascending
    Matrix vectors;                 ///< columns on the active coordinates, C-normalized
    std::vector<Eigen::Index> active;
};

NormalModes normal_mode_decomposition(const LinearChainModel& model);

/// Ascending mode frequencies (rad/s).
std::vector<double> normal_modes(const LinearChainModel& model);

/// Zero-based qubit pair.
using QubitPair = std::pair<std::size_t, std::size_t>;

/// Pins every qubit except the pair; both pair members get `inductance`.
/// With SpectatorMode::ChargeFrozen the returned model's c_eff is the 2x2
/// capacitance equivalent of the pair's block of C_eff^-1.
LinearChainModel pin_spectators(const Matrix& c_eff, QubitPair pair, double inductance = 12e-9,
                                SpectatorMode mode = SpectatorMode::PhasePinned);

struct CrossingOptions {
    double l_fixed = 12e-9;   ///< inductance of pair.first
    double l_lo = 6e-9;       ///< sweep range for pair.second
    double l_hi = 24e-9;
    int n_points = 201;       ///< geometric grid
    double rel_tol = 1e-10;   ///< golden-section tolerance on L
    SpectatorMode spectators = SpectatorMode::PhasePinned;

    /// [0.5, 2] x l_fixed.
    static CrossingOptions around(double l_fixed);
};

struct SweepPoint {
    double inductance = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;
};

struct CrossingResult {
    double j = 0.0;           ///< rad/s, |J| = minimal splitting / 2
    double l_cross = 0.0;     ///< H
    double min_splitting = 0.0;
    std::vector<SweepPoint> trace;
};

/// Sweeps pair.second's inductance through resonance with pair.first and
/// extracts |J| from the minimal avoided-crossing gap. Throws BracketError
/// when the bare detuning does not change sign over the range.
CrossingResult avoided_crossing_J(const Matrix& c_eff, QubitPair pair, const CrossingOptions& options = {});

} // namespace floatchain
