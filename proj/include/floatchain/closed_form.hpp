#pragma once

#include <cstddef>
#include <functional>
#include <string>

// Analytic results for uniform chains. Indices in this header are 1-based
// chain positions, matching how the formulas are usually written.
namespace floatchain {

/// Infinite A-B chain: (C_eff)_ij = C_q delta_ij + C_c,eff xi_C^|i-j|.
struct InfiniteChainForm {
    double c_q = 0.0;
    double c_c_eff = 0.0; ///< sqrt((C_G/2)(C_c + C_G/2))
    double xi_c = 0.0;    ///< drop-off of the mediated capacitance

    double c_eff(long i, long j) const;
};

InfiniteChainForm infinite_chain_form(double c_q, double c_g, double c_c);

/// Leading order in C_G, C_c << C_q: chi ~ (C_c,eff / 2 C_q) xi_C, xi ~ xi_C.
struct WeakCouplingForm {
    double chi = 0.0;
    double xi = 0.0;
};

WeakCouplingForm weak_coupling_form(double c_q, double c_g, double c_c);

/// Exact infinite-chain inverse for the A-B scheme:
/// (C_eff^-1)_ij = [delta_ij (1 + 2chi/xi) - (2chi/xi) xi^|i-j|] / C_q,eff.
struct StrongCouplingForm {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double c_q_eff = 0.0;
    double chi = 0.0;
    double xi = 0.0;

    double c_eff_inv(long i, long j) const;
};

StrongCouplingForm strong_coupling_form(double c_q, double c_g, double c_c);

struct DesignCapacitances {
    double c_q = 0.0;
    double c_c = 0.0;
    double c_g = 0.0;
};

/// Upper edge of the realizable (chi, xi) region for the A-B scheme.
constexpr double ab_chi_bound(double xi) { return (1.0 - xi) / 4.0; }
constexpr double aa_chi_bound(double xi) { return xi * (1.0 - xi) / 4.0; }

/// Inverse design: capacitances realizing (chi, xi) at a given C_q,eff.
/// Requires 0 < xi < 1 and 0 <= chi < (1 - xi)/4; chi = 0 gives the decoupled
/// circuit. Throws InfeasibleTargetError otherwise.
DesignCapacitances design_capacitances(double chi, double xi, double c_q_eff);

/// A-A scheme. Same xi_C as A-B, negative mediated capacitance, and a
/// positive-coupling inverse (C_eff^-1)_ij = [delta_ij (1 - 2chi/xi) + (2chi/xi) xi^|i-j|] / C_q,eff.
struct AaForm {
    double c_q = 0.0;
    double c_g = 0.0;
    double c_c_eff = 0.0;
    double xi_c = 0.0;
    double mediated = 0.0; ///< C_G^2 / (4 C_c,eff)
    double chi = 0.0;
    double xi = 0.0;
    double c_q_eff = 0.0;
    double chi_bound = 0.0; ///< xi (1 - xi) / 4

    double c_eff(long i, long j) const;
    double c_eff_inv(long i, long j) const;
};

AaForm aa_forms(double c_q, double c_g, double c_c);

/// Large-but-finite chain with one mirror image per entry:
/// C_q delta_ij + C_c,eff (xi_C^|i-j| - xi_C^(n - |i+j-n-1|)).
/// Requires n >= 10; chains shorter than 20 trigger a warning.
double boundary_ceff(long i, long j, long n, double c_q, double c_g, double c_c);

/// Single-ended chain n.n.n / n.n. coupling ratio at the chain center.
struct SingleEndedRatio {
    double exact = 0.0;       ///< dense inverse of the tridiagonal matrix
    double approximate = 0.0; ///< C_c / C_sh
};

SingleEndedRatio single_ended_ratio(double c_sh, double c_c, std::size_t n = 51);

/// chi, xi of the single-ended chain from the dense inverse at the center.
struct FixedTransmonRelation {
    double chi = 0.0;
    double xi = 0.0;
    /// chi = xi / 2 within 5% (checked only when C_c/C_sh <= 0.1).
    bool consistent = true;
};

FixedTransmonRelation fixed_transmon_relation(double c_sh, double c_c, std::size_t n = 51);

/// Physical C_q that yields a target C_q,eff for given C_G, C_c (A-B scheme).
/// Throws InfeasibleTargetError when C_q,eff is below the C_q -> 0 limit.
double solve_c_q_for_c_q_eff(double c_q_eff, double c_g, double c_c);

/// Receives non-fatal diagnostics (default: stderr). Not thread-safe to swap.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);

} // namespace floatchain
