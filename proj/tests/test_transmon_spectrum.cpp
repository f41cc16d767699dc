#include "catch_amalgamated.hpp"

#include "floatchain/closed_form.hpp"
#include "floatchain/constants.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/transmon_spectrum.hpp"
#include "oracles.hpp"

using namespace floatchain;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double fF = 1e-15;

TransmonParams ghz(double ej, double ec) { return {units::energy_from_GHz(ej), units::energy_from_GHz(ec)}; }

std::vector<QubitSpectrum> harmonic(const EffectiveCoupling& ec, double l_j = 12e-9) {
    std::vector<QubitSpectrum> out;
    for (double e_c : ec.e_c)
        out.push_back(transmon_spectrum(TransmonParams::from_inductance(l_j, e_c), SpectrumMethod::Harmonic));
    return out;
}

EffectiveCoupling chain(std::size_t n, double cq, double cg, double cc) {
    return reduce(build_chain_blocks({n, cq * fF, cg * fF, cc * fF, Scheme::AB, 0.0}));
}

} // namespace

TEST_CASE("Josephson energy of a linear inductor") {
    CHECK_THAT(units::energy_to_GHz(ej_from_inductance(12e-9)), WithinRel(13.622, 5e-5));
    CHECK_THAT(ej_from_inductance(24e-9), WithinRel(ej_from_inductance(12e-9) / 2.0, 1e-15));
    // 13.622 GHz x 12e-9: the energy scale is 163.46 Hz
    CHECK_THAT(units::energy_to_GHz(ej_from_inductance(1.0)) * 1e9, WithinRel(163.46, 5e-5));
    CHECK_THROWS_AS(ej_from_inductance(0.0), ValidationError);
}

TEST_CASE("asymptotic transmon at the first design's parameters") {
    const auto s = transmon_spectrum(ghz(13.622, 0.33171), SpectrumMethod::Asymptotic);
    CHECK_THAT(units::angular_to_GHz(s.omega01), WithinRel(6.0122, 5e-5));
    CHECK_THAT(s.n_ge, WithinRel(1.06434, 5e-5));
    CHECK_THAT(units::angular_to_GHz(s.anharmonicity), WithinRel(-0.33171, 1e-12));
    const auto h = transmon_spectrum(ghz(13.622, 0.33171), SpectrumMethod::Harmonic);
    CHECK(h.anharmonicity == 0.0);
    CHECK(h.omega01 == s.omega01);
}

TEST_CASE("charge basis against a finite-difference phase-grid oracle") {
    const auto s = transmon_spectrum(ghz(13.622, 0.33171), SpectrumMethod::ChargeBasis, 40);
    // leading order sqrt(8 E_J E_C) - E_C = 5.6805 GHz; the exact level sits slightly lower
    CHECK_THAT(units::angular_to_GHz(s.omega01), WithinRel(5.68, 0.005));
    CHECK(units::angular_to_GHz(s.omega01) < 5.6805);
    CHECK_THAT(units::angular_to_GHz(s.anharmonicity), WithinRel(-0.33171, 0.15));

    for (double ratio : {10.0, 41.07, 120.0}) {
        const auto e = oracle::transmon_levels_fd(ratio, 800);
        const auto cb = transmon_spectrum({ratio * 1e-24, 1e-24}, SpectrumMethod::ChargeBasis);
        const double scale = 1e-24 / constants::hbar;
        CHECK_THAT(cb.omega01 / scale, WithinRel(e[1] - e[0], 1e-6));
        CHECK_THAT(cb.anharmonicity / scale, WithinRel(e[2] - 2 * e[1] + e[0], 1e-5));
    }
}

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(transmon_spectrum({0.0, 1e-24}, SpectrumMethod::Harmonic), ValidationError);
    CHECK_THROWS_AS(transmon_spectrum({1e-24, -1.0}, SpectrumMethod::Harmonic), ValidationError);
    CHECK_THROWS_AS(transmon_spectrum({4e-24, 1e-24}, SpectrumMethod::ChargeBasis, 5), ValidationError);
    CHECK_THROWS_AS(transmon_spectrum({1e6 * 1e-24, 1e-24}, SpectrumMethod::ChargeBasis, 10), TruncationError);
    CHECK(spectrum_method_from_string("charge-basis") == SpectrumMethod::ChargeBasis);
    CHECK(to_string(SpectrumMethod::Asymptotic) == "asymptotic");
    CHECK_THROWS_AS(spectrum_method_from_string("exact"), ValidationError);
}

TEST_CASE("property: charge basis sits below the harmonic frequency") {
    std::mt19937_64 rng(0x7a11);
    for (int k = 0; k < 200; ++k) {
        const double ratio = oracle::log_uniform(rng, 30.0, 500.0);
        const TransmonParams p{ratio * 1e-24, 1e-24};
        const auto cb = transmon_spectrum(p, SpectrumMethod::ChargeBasis);
        const auto h = transmon_spectrum(p, SpectrumMethod::Harmonic);
        CHECK(cb.omega01 < h.omega01);
        CHECK(cb.anharmonicity < 0.0);
        CHECK_THAT(cb.n_ge, WithinRel(h.n_ge, 0.10));
    }
}

TEST_CASE("property: charge basis is converged by n_cut = 30") {
    std::mt19937_64 rng(0x7a12);
    for (int k = 0; k < 200; ++k) {
        const double ratio = oracle::log_uniform(rng, 10.0, 500.0);
        const TransmonParams p{ratio * 1e-24, 1e-24};
        const auto a = transmon_spectrum(p, SpectrumMethod::ChargeBasis, 30);
        const auto b = transmon_spectrum(p, SpectrumMethod::ChargeBasis, 60);
        CHECK_THAT(a.omega01, WithinRel(b.omega01, 1e-10));
    }
}

TEST_CASE("property: next-order asymptotic correction bound") {
    std::mt19937_64 rng(0x7a13);
    for (int k = 0; k < 200; ++k) {
        const double ratio = oracle::log_uniform(rng, 50.0, 500.0);
        const TransmonParams p{ratio * 1e-24, 1e-24};
        const auto cb = transmon_spectrum(p, SpectrumMethod::ChargeBasis);
        const double leading = (std::sqrt(8.0 * p.e_j * p.e_c) - p.e_c) / constants::hbar;
        CHECK(std::abs(cb.omega01 - leading) <= 0.25 * p.e_c / constants::hbar);
    }
}

TEST_CASE("coupling report on the first design") {
    const auto ec = chain(7, 42.3, 16.8, 27.4);
    const auto r = coupling_report(ec, harmonic(ec));
    // chain qubits 2..6 are the central five
    CHECK_THAT(std::abs(units::angular_to_MHz(r.j(1, 2))), WithinRel(279.3, 0.03));
    CHECK(r.chi.size() == 5);
    CHECK(r.xi.size() == 3);
    CHECK(r.j(1, 2) < 0.0);
    for (Eigen::Index i = 0; i < 7; ++i) {
        CHECK(r.j(i, i) == 0.0);
        for (Eigen::Index j = 0; j < 7; ++j) CHECK_THAT(r.j(i, j), WithinRel(r.j(j, i), 1e-12));
    }
    CHECK(r.chi_identity_holds);
    CHECK_THROWS_AS(coupling_report(ec, std::vector<QubitSpectrum>(3)), ValidationError);
}

TEST_CASE("short and decoupled chains") {
    const auto two = chain(2, 50, 10, 5);
    const auto r2 = coupling_report(two, harmonic(two));
    CHECK(r2.chi.empty());
    CHECK(r2.xi.empty());
    const auto off = chain(4, 50, 10, 0);
    const auto r0 = coupling_report(off, harmonic(off));
    CHECK(r0.j.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("N=100 center xi matches the strong-coupling form") {
    const auto ec = chain(100, 42.3, 16.8, 27.4);
    const auto r = coupling_report(ec, harmonic(ec));
    const auto f = strong_coupling_form(42.3 * fF, 16.8 * fF, 27.4 * fF);
    CHECK_THAT(r.xi[49 - CouplingReport::xi_first], WithinRel(f.xi, 1e-6));
    CHECK_THAT(r.chi[49 - CouplingReport::chi_first], WithinRel(f.chi, 1e-6));
}

// ---- properties on random uniform chains ----

TEST_CASE("property: chi equals the nearest-neighbour J over omega at the center") {
    std::mt19937_64 rng(0x7a14);
    for (int k = 0; k < 200; ++k) {
        const double cq = oracle::log_uniform(rng, 10.0, 200.0);
        const double cg = cq * oracle::log_uniform(rng, 0.05, 5.0);
        const double cc = cq * oracle::log_uniform(rng, 0.01, 2.0);
        const auto ec = chain(101, cq, cg, cc);
        const auto r = coupling_report(ec, harmonic(ec));
        const std::size_t c = 50 - CouplingReport::chi_first;
        CHECK_THAT(r.nn_coupling_over_omega[c], WithinRel(r.chi[c], 1e-10));
    }
}

TEST_CASE("property: log|J| decays linearly with slope log xi") {
    std::mt19937_64 rng(0x7a15);
    for (int k = 0; k < 200; ++k) {
        const double cq = oracle::log_uniform(rng, 10.0, 200.0);
        const double cg = cq * oracle::log_uniform(rng, 0.05, 5.0);
        const double cc = cq * oracle::log_uniform(rng, 0.05, 5.0);
        const auto ec = chain(101, cq, cg, cc);
        const auto r = coupling_report(ec, harmonic(ec));
        const Eigen::Index i = 50;
        const double log_xi = std::log(r.xi[static_cast<std::size_t>(i) - CouplingReport::xi_first]);
        // use distances where J is well above roundoff
        int kmax = 3;
        while (kmax < 20 && (kmax - 1) * log_xi > std::log(1e-6)) ++kmax;
        for (int d = 1; d < kmax; ++d) {
            const double slope = std::log(std::abs(r.j(i, i + d + 1))) - std::log(std::abs(r.j(i, i + d)));
            INFO("d=" << d << " xi=" << std::exp(log_xi));
            CHECK_THAT(slope, WithinAbs(log_xi, 1e-3));
        }
    }
}
