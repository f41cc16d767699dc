#pragma once

#include "floatchain/circuit_model.hpp"

#include <vector>

namespace floatchain {

/// Qubit-subspace view of a reduced chain. SI units throughout.
struct EffectiveCoupling {
    Matrix c_eff;                ///< F
    Matrix c_eff_inv;            ///< 1/F
    std::vector<double> e_c;     ///< J, 4 E_C = 2 e^2 (C_eff^-1)_ii
    Matrix g;                    ///< J, g_ij = (2e)^2 (C_eff^-1)_ij, zero diagonal

    std::size_t n_qubits() const { return static_cast<std::size_t>(c_eff.rows()); }
};

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// Throws FactorizationError with the zero-based failing pivot.
Matrix cholesky_factor(const Matrix& m);

/// SPD inverse with residual check ||m * m^-1 - I||_max <= 1e-10.
Matrix invert_spd(const Matrix& m);

/// C_eff = C-- - C-+ (C++)^-1 C+-. Throws SingularMatrixError when C++ is not
/// invertible (e.g. no capacitance to ground).
Matrix effective_capacitance(const BlockCapacitanceMatrix& blocks);

std::vector<double> charging_energies(const Matrix& c_eff_inv);
Matrix charge_couplings(const Matrix& c_eff_inv);

/// Full reduction: Schur complement, inverse, E_C, g.
EffectiveCoupling reduce(const BlockCapacitanceMatrix& blocks);

/// chi_i = sqrt|C^-1_{i,i+1} C^-1_{i,i-1}| / (2 C^-1_ii). Zero-based site with
/// both neighbours present.
double relative_coupling(const Matrix& c_eff_inv, std::size_t site);

/// xi_i = sqrt|C^-1_{i,i+2} C^-1_{i,i-2} / (C^-1_{i,i+1} C^-1_{i,i-1})|; needs two
/// neighbours on each side. Reported as 0 when the nearest-neighbour entries vanish.
double damping_factor(const Matrix& c_eff_inv, std::size_t site);

/// Single-ended chains have no '+' modes; the node matrix is already C_eff.
EffectiveCoupling reduce_single_ended(const NodeCapacitanceMatrix& node);

} // namespace floatchain
