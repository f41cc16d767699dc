#include "floatchain/transmon_spectrum.hpp"

#include "floatchain/constants.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace floatchain {

double ej_from_inductance(double l_j) {
    if (!std::isfinite(l_j) || !(l_j > 0.0)) throw ValidationError("junction inductance must be positive", "l_j");
    const double phi = constants::reduced_flux_quantum;
    return phi * phi / l_j;
}

TransmonParams TransmonParams::from_inductance(double l_j, double e_c) { return {ej_from_inductance(l_j), e_c}; }

void TransmonParams::validate() const {
    if (!std::isfinite(e_j) || !(e_j > 0.0)) throw ValidationError("E_J must be positive", "e_j");
    if (!std::isfinite(e_c) || !(e_c > 0.0)) throw ValidationError("E_C must be positive", "e_c");
}

std::string_view to_string(SpectrumMethod m) {
    switch (m) {
    case SpectrumMethod::ChargeBasis: return "charge-basis";
    case SpectrumMethod::Asymptotic: return "asymptotic";
    case SpectrumMethod::Harmonic: return "harmonic";
    }
    return "?";
}

SpectrumMethod spectrum_method_from_string(std::string_view s) {
    if (s == "charge-basis") return SpectrumMethod::ChargeBasis;
    if (s == "asymptotic") return SpectrumMethod::Asymptotic;
    if (s == "harmonic") return SpectrumMethod::Harmonic;
    throw ValidationError("unknown spectrum method '" + std::string(s) +
                              "' (expected harmonic, charge-basis or asymptotic)",
                          "method");
}

namespace {

QubitSpectrum charge_basis(const TransmonParams& p, int n_cut) {
    if (n_cut < 10) throw ValidationError("charge-basis cutoff must be >= 10", "n_cut");
    const Eigen::Index dim = 2 * n_cut + 1;
    const double ratio = p.e_j / p.e_c;

    // energies in units of E_C
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double n = static_cast<double>(k - n_cut);
        h(k, k) = 4.0 * n * n;
        if (k + 1 < dim) h(k, k + 1) = h(k + 1, k) = -ratio / 2.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("charge-basis diagonalization failed", "eigensolver");

    const Vector& e = solver.eigenvalues();
    const Vector ground = solver.eigenvectors().col(0);
    const Vector excited = solver.eigenvectors().col(1);
    const double edge = std::max(std::abs(ground(0)), std::abs(ground(dim - 1)));
    if (edge > 1e-8)
        throw TruncationError("ground state amplitude " + format_g(edge, 3) + " at n = +-" + std::to_string(n_cut) +
                                  " exceeds 1e-8; increase n_cut",
                              "n_cut");

    double n_ge = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) n_ge += excited(k) * static_cast<double>(k - n_cut) * ground(k);

    QubitSpectrum out;
    out.method = SpectrumMethod::ChargeBasis;
    out.omega01 = (e(1) - e(0)) * p.e_c / constants::hbar;
    out.anharmonicity = (e(2) - 2.0 * e(1) + e(0)) * p.e_c / constants::hbar;
    out.n_ge = std::abs(n_ge);
    return out;
}

} // namespace

QubitSpectrum transmon_spectrum(const TransmonParams& p, SpectrumMethod method, int n_cut) {
    p.validate();
    if (p.e_j < p.e_c) throw ValidationError("transmon analysis needs E_J/E_C >= 1", "e_j");
    if (method == SpectrumMethod::ChargeBasis) return charge_basis(p, n_cut);

    QubitSpectrum out;
    out.method = method;
    out.omega01 = std::sqrt(8.0 * p.e_j * p.e_c) / constants::hbar;
    out.n_ge = std::pow(p.e_j / (32.0 * p.e_c), 0.25);
    out.anharmonicity = method == SpectrumMethod::Asymptotic ? -p.e_c / constants::hbar : 0.0;
    return out;
}

CouplingReport coupling_report(const EffectiveCoupling& ec, const std::vector<QubitSpectrum>& spectra) {
    const std::size_t n = ec.n_qubits();
    if (spectra.size() != n)
        throw ValidationError("got " + std::to_string(spectra.size()) + " qubit spectra for a " + std::to_string(n) +
                                  "-qubit chain",
                              "spectra");

    CouplingReport out;
    out.j = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        out.omega.push_back(spectra[i].omega01);
        for (std::size_t k = 0; k < n; ++k)
            if (k != i)
                out.j(i, k) = ec.g(i, k) * spectra[i].n_ge * spectra[k].n_ge / constants::hbar;
    }

    for (std::size_t i = CouplingReport::chi_first; i + 1 < n; ++i) {
        const double chi = relative_coupling(ec.c_eff_inv, i);
        out.chi.push_back(chi);
        const double ratio = std::sqrt(std::abs(out.j(i, i + 1) * out.j(i, i - 1))) / out.omega[i];
        out.nn_coupling_over_omega.push_back(ratio);
        if (chi > 0.0) out.chi_identity_gap = std::max(out.chi_identity_gap, std::abs(ratio / chi - 1.0));
        // E_J recovered from hbar omega = sqrt(8 E_J E_C)
        const double hw = constants::hbar * out.omega[i];
        const double e_j = hw * hw / (8.0 * ec.e_c[i]);
        out.chi_identity_scale = std::max(out.chi_identity_scale, std::sqrt(ec.e_c[i] / e_j));
    }
    for (std::size_t i = CouplingReport::xi_first; i + 2 < n; ++i) out.xi.push_back(damping_factor(ec.c_eff_inv, i));

    out.chi_identity_holds = out.chi_identity_gap <= std::max(out.chi_identity_scale, 1e-9);
    return out;
}

} // namespace floatchain
