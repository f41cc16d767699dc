#include "catch_amalgamated.hpp"

#include "floatchain/constants.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/normal_modes.hpp"
#include "floatchain/transmon_spectrum.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace floatchain;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double fF = 1e-15;
constexpr double nH = 1e-9;

EffectiveCoupling chain(std::size_t n, double cq, double cg, double cc) {
    return reduce(build_chain_blocks({n, cq * fF, cg * fF, cc * fF, Scheme::AB, 0.0}));
}

/// |J| from the capacitance path with harmonic spectra at 12 nH.
double harmonic_j(const EffectiveCoupling& ec, Eigen::Index i, Eigen::Index j, double l_j = 12 * nH) {
    std::vector<QubitSpectrum> s;
    for (double e_c : ec.e_c)
        s.push_back(transmon_spectrum(TransmonParams::from_inductance(l_j, e_c), SpectrumMethod::Harmonic));
    return std::abs(coupling_report(ec, s).j(i, j));
}

Matrix diag2(double c) { return Matrix::Identity(2, 2) * c; }

} // namespace

TEST_CASE("single LC mode") {
    Matrix c(1, 1);
    c(0, 0) = 58.394 * fF;
    const auto w = normal_modes({c, {12 * nH}});
    REQUIRE(w.size() == 1);
    CHECK_THAT(units::angular_to_GHz(w[0]), WithinRel(6.0122, 5e-5));
    CHECK_THAT(w[0], WithinRel(1.0 / std::sqrt(12 * nH * 58.394 * fF), 1e-14));
}

TEST_CASE("uncoupled identical qubits are degenerate") {
    const auto w = normal_modes({diag2(60 * fF), {12 * nH, 12 * nH}});
    CHECK_THAT(w[0], WithinRel(w[1], 1e-14));
}

TEST_CASE("pinned coordinates drop out of the eigenproblem") {
    const auto ec = chain(7, 42.3, 16.8, 27.4);
    const auto model = pin_spectators(ec.c_eff, {0, 2});
    CHECK(model.active() == std::vector<Eigen::Index>{0, 2});
    const auto modes = normal_mode_decomposition(model);
    CHECK(modes.omega.size() == 2);
    // same frequencies as the explicit 2x2 block of rows/cols {1, 3}
    Matrix block(2, 2);
    block << ec.c_eff(0, 0), ec.c_eff(0, 2), ec.c_eff(2, 0), ec.c_eff(2, 2);
    const auto w = normal_modes({block, {12 * nH, 12 * nH}});
    CHECK_THAT(modes.omega[0], WithinRel(w[0], 1e-13));
    CHECK_THAT(modes.omega[1], WithinRel(w[1], 1e-13));

    const auto two = chain(2, 50, 10, 5);
    const auto same = pin_spectators(two.c_eff, {0, 1});
    CHECK(same.c_eff == two.c_eff);
    CHECK(same.active().size() == 2);

    CHECK_THROWS_AS(pin_spectators(ec.c_eff, {1, 1}), ValidationError);
    CHECK_THROWS_AS(pin_spectators(ec.c_eff, {0, 7}), ValidationError);
    LinearChainModel none{ec.c_eff, std::vector<Inductance>(7, kPinned)};
    CHECK_THROWS_AS(normal_modes(none), ValidationError);
}

TEST_CASE("two coupled qubits split by 2J at resonance") {
    const auto ec = chain(2, 50, 10, 5);
    const auto r = avoided_crossing_J(ec.c_eff, {0, 1});
    CHECK_THAT(r.j, WithinRel(harmonic_j(ec, 0, 1), 0.01));
    // symmetric pair: minimum near the fixed inductance, pulled off it because
    // the capacitive coupling scales with sqrt(omega_1 omega_2)
    CHECK_THAT(r.l_cross, WithinRel(12 * nH, 1e-3));
    REQUIRE(r.trace.size() == 201);
    const auto best = std::min_element(r.trace.begin(), r.trace.end(), [](const auto& a, const auto& b) {
        return a.omega_plus - a.omega_minus < b.omega_plus - b.omega_minus;
    });
    CHECK_THAT(best->inductance, WithinRel(12 * nH, 0.01));
}

TEST_CASE("no off-diagonal capacitance, no gap") {
    const auto r = avoided_crossing_J(diag2(60 * fF), {0, 1});
    CHECK_THAT(r.min_splitting, WithinAbs(0.0, 1e-6 * 2 * std::numbers::pi * 1e9));
}

TEST_CASE("first design: nearest neighbours of the central five") {
    const auto ec = chain(7, 42.3, 16.8, 27.4);
    const auto r = avoided_crossing_J(ec.c_eff, {1, 2});
    CHECK_THAT(r.j, WithinRel(harmonic_j(ec, 1, 2), 0.05));
    CHECK_THAT(units::angular_to_MHz(r.j), WithinRel(285.0, 0.03));
}

TEST_CASE("charge-frozen spectators keep the next-nearest virtual path") {
    const auto ec = chain(7, 42.3, 16.8, 27.4);
    CrossingOptions frozen;
    frozen.spectators = SpectatorMode::ChargeFrozen;
    const double j12 = avoided_crossing_J(ec.c_eff, {1, 2}, frozen).j;
    const double j13 = avoided_crossing_J(ec.c_eff, {1, 3}, frozen).j;
    CHECK_THAT(j13 / j12, WithinRel(0.249, 0.10));
    CHECK_THAT(j13, WithinRel(harmonic_j(ec, 1, 3), 0.05));
    // phase pinning removes that path and overestimates the longer-range pair
    const double pinned13 = avoided_crossing_J(ec.c_eff, {1, 3}).j;
    CHECK(pinned13 > 1.2 * j13);
}

TEST_CASE("sweep validation") {
    const auto ec = chain(3, 50, 10, 5);
    CrossingOptions o;
    o.l_lo = 20 * nH;
    o.l_hi = 30 * nH;
    CHECK_THROWS_AS(avoided_crossing_J(ec.c_eff, {0, 2}, o), BracketError);
    o = CrossingOptions{};
    o.n_points = 2;
    CHECK_THROWS_AS(avoided_crossing_J(ec.c_eff, {0, 2}, o), ValidationError);
    o = CrossingOptions{};
    o.l_hi = o.l_lo;
    CHECK_THROWS_AS(avoided_crossing_J(ec.c_eff, {0, 2}, o), ValidationError);
    CHECK_THROWS_AS(avoided_crossing_J(ec.c_eff, {0, 0}), ValidationError);
    CHECK_THROWS_AS(avoided_crossing_J(ec.c_eff, {0, 3}), ValidationError);
    const auto around = CrossingOptions::around(10 * nH);
    CHECK(around.l_lo == 5 * nH);
    CHECK(around.l_hi == 20 * nH);
}

TEST_CASE("indefinite capacitance is rejected") {
    Matrix c(2, 2);
    c << 1 * fF, 2 * fF, 2 * fF, 1 * fF;
    CHECK_THROWS_AS(normal_modes({c, {12 * nH, 12 * nH}}), NumericalError);
}

// ---- properties ----

TEST_CASE("property: scaling all inductances by s^2 divides frequencies by s") {
    std::mt19937_64 rng(0x0de1);
    for (int k = 0; k < 200; ++k) {
        const auto s = oracle::random_spec(rng, 1, 8);
        const auto ec = reduce(build_chain_blocks(s));
        LinearChainModel m{ec.c_eff, {}};
        for (std::size_t i = 0; i < s.n_qubits; ++i) m.inductances.push_back(oracle::log_uniform(rng, 5, 30) * nH);
        const auto w = normal_modes(m);
        const double scale = oracle::log_uniform(rng, 0.1, 10.0);
        for (auto& l : m.inductances) *l *= scale * scale;
        const auto w2 = normal_modes(m);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK_THAT(w2[i], WithinRel(w[i] / scale, 1e-12));
    }
}

TEST_CASE("property: symmetric and antisymmetric modes of a mirror pair") {
    std::mt19937_64 rng(0x0de2);
    for (int k = 0; k < 200; ++k) {
        const double cq = oracle::log_uniform(rng, 20, 100);
        const auto ec = chain(2, cq, cq * oracle::log_uniform(rng, 0.05, 2), cq * oracle::log_uniform(rng, 0.01, 0.5));
        const auto r = avoided_crossing_J(ec.c_eff, {0, 1});
        // exact at equal inductances
        const auto equal = normal_mode_decomposition({ec.c_eff, {12 * nH, 12 * nH}});
        const auto modes = normal_mode_decomposition({ec.c_eff, {12 * nH, r.l_cross}});
        for (int col = 0; col < 2; ++col) {
            CHECK_THAT(std::abs(equal.vectors(0, col)) / std::abs(equal.vectors(1, col)), WithinRel(1.0, 1e-10));
            const double dev = std::abs(std::abs(modes.vectors(0, col)) / std::abs(modes.vectors(1, col)) - 1.0);
            // residual imbalance is first order in J / omega
            CHECK(dev <= 1.5 * r.j / modes.omega[0]);
        }
    }
}

TEST_CASE("property: two-qubit extraction agrees with the capacitance path") {
    std::mt19937_64 rng(0x0de3);
    for (int k = 0; k < 200; ++k) {
        const double cq = oracle::log_uniform(rng, 20, 100);
        const double ratio = oracle::log_uniform(rng, 0.001, 0.5);
        const auto ec = chain(2, cq, cq * oracle::log_uniform(rng, 0.05, 2), cq * ratio);
        const auto r = avoided_crossing_J(ec.c_eff, {0, 1});
        INFO("cc/cq=" << ratio);
        CHECK_THAT(r.j, WithinRel(harmonic_j(ec, 0, 1), 0.02));
    }
}
