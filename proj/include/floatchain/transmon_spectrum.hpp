#pragma once

#include "floatchain/effective_coupling.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace floatchain {

/// E_J = (Phi_0 / 2 pi)^2 / L_J for a junction linearized as an inductor.
double ej_from_inductance(double l_j);

struct TransmonParams {
    double e_j = 0.0; ///< J
    double e_c = 0.0; ///< J

    static TransmonParams from_inductance(double l_j, double e_c);
    void validate() const;
};

enum class SpectrumMethod {
    ChargeBasis, ///< diagonalize 4E_C n^2 - E_J cos(phi) in a truncated charge basis
    Asymptotic,  ///< omega = sqrt(8 E_J E_C)/hbar, alpha = -E_C/hbar, n_ge = (E_J/32E_C)^(1/4)
    Harmonic,    ///< linearized junction: same omega and n_ge, zero anharmonicity
};

std::string_view to_string(SpectrumMethod m);
SpectrumMethod spectrum_method_from_string(std::string_view s);

struct QubitSpectrum {
    double omega01 = 0.0;       ///< rad/s
    double anharmonicity = 0.0; ///< rad/s, (e2 - 2 e1 + e0)/hbar
    double n_ge = 0.0;          ///< |<e|n|g>|
    SpectrumMethod method = SpectrumMethod::Harmonic;
};

inline constexpr int kDefaultChargeCutoff = 40;

/// `n_cut` is only used by ChargeBasis (states -n_cut..n_cut, n_cut >= 10).
/// Offset charge is zero. Throws TruncationError when the ground state still
/// has weight above 1e-8 at the basis edge.
QubitSpectrum transmon_spectrum(const TransmonParams& p, SpectrumMethod method,
                                int n_cut = kDefaultChargeCutoff);

/// Exchange couplings and dimensionless chain parameters. Sites are zero-based
/// here; `chi[k]` belongs to site `chi_first + k`.
struct CouplingReport {
    Matrix j;                   ///< rad/s, J_ij = g_ij n_ge(i) n_ge(j) / hbar, zero diagonal
    std::vector<double> omega;  ///< rad/s
    std::vector<double> chi;    ///< sites 1 .. N-2
    std::vector<double> xi;     ///< sites 2 .. N-3
    static constexpr std::size_t chi_first = 1;
    static constexpr std::size_t xi_first = 2;

    /// sqrt|J_{i,i+1} J_{i,i-1}| / omega_i at the chi sites.
    std::vector<double> nn_coupling_over_omega;
    /// Largest relative gap between nn_coupling_over_omega and chi, and the
    /// sqrt(E_C/E_J) scale it is expected to stay within.
    double chi_identity_gap = 0.0;
    double chi_identity_scale = 0.0;
    bool chi_identity_holds = true;
};

CouplingReport coupling_report(const EffectiveCoupling& ec, const std::vector<QubitSpectrum>& spectra);

} // namespace floatchain
