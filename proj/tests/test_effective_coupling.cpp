#include "catch_amalgamated.hpp"

#include "floatchain/closed_form.hpp"
#include "floatchain/constants.hpp"
#include "floatchain/effective_coupling.hpp"
#include "floatchain/errors.hpp"
#include "oracles.hpp"

using namespace floatchain;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double fF = 1e-15;

ChainSpec chain(std::size_t n, double cq, double cg, double cc, Scheme scheme = Scheme::AB) {
    ChainSpec s;
    s.n_qubits = n;
    s.c_q = cq * fF;
    s.c_g = cg * fF;
    s.c_c = cc * fF;
    s.scheme = scheme;
    return s;
}

double residual(const Matrix& m, const Matrix& inv) {
    return (m * inv - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("SPD inverse of trivial matrices") {
    CHECK(invert_spd(Matrix::Identity(4, 4)).isIdentity(0.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2 * fF;
    d(1, 1) = 4 * fF;
    const Matrix inv = invert_spd(d);
    CHECK_THAT(inv(0, 0) * fF, WithinRel(0.5, 1e-15));
    CHECK_THAT(inv(1, 1) * fF, WithinRel(0.25, 1e-15));
    CHECK(inv(0, 1) == 0.0);
}

TEST_CASE("Cholesky reports the failing pivot") {
    Matrix m(3, 3);
    m << 4, 2, 0, 2, 1, 0, 0, 0, 1; // rank-deficient leading 2x2
    try {
        cholesky_factor(m);
        FAIL("expected FactorizationError");
    } catch (const FactorizationError& e) {
        CHECK(e.pivot() == 1);
    }
    Matrix indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(invert_spd(indefinite), FactorizationError);
    Matrix asym(2, 2);
    asym << 2, 1, 0, 2;
    CHECK_THROWS_AS(invert_spd(asym), ValidationError);
}

TEST_CASE("property: random 50x50 SPD inverse residual") {
    std::mt19937_64 rng(0xc0ffee);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 200; ++k) {
        const Eigen::Index n = k < 20 ? 50 : 1 + k % 30;
        Matrix a(n, n);
        for (auto& x : a.reshaped()) x = gauss(rng);
        const Matrix m = (a.transpose() * a + 0.1 * Matrix::Identity(n, n)) * fF;
        const Matrix inv = invert_spd(m);
        CHECK(residual(m, inv) <= 1e-10);
        CHECK((inv - inv.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * inv.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("two-qubit effective capacitance matches the 4x4 dense inversion") {
    const auto s = chain(2, 50, 10, 5);
    const Matrix c_eff = effective_capacitance(build_chain_blocks(s));
    const Matrix ref = oracle::chain_c_eff_inv(2, s.c_q, s.c_g, s.c_c).inverse();
    CHECK(oracle::max_rel_diff(c_eff, ref) < 1e-12);
    // the coupler pulls the off-diagonal positive in the A-B scheme
    CHECK(c_eff(0, 1) > 0.0);
}

TEST_CASE("no +- coupling leaves C-- untouched") {
    BlockCapacitanceMatrix b;
    b.cpp = Matrix::Identity(3, 3) * 5 * fF;
    b.cpm = Matrix::Zero(3, 3);
    b.cmm = Matrix::Identity(3, 3) * 55 * fF;
    b.cmm(0, 1) = b.cmm(1, 0) = 2 * fF;
    CHECK(effective_capacitance(b) == b.cmm);
}

TEST_CASE("ungrounded chain is singular") {
    CHECK_THROWS_AS(effective_capacitance(build_chain_blocks(chain(4, 50, 0, 5))), SingularMatrixError);
}

TEST_CASE("N=100 center entries match the infinite-chain capacitance") {
    const auto s = chain(100, 42.3, 16.8, 27.4);
    const Matrix c_eff = effective_capacitance(build_chain_blocks(s));
    const auto inf = infinite_chain_form(s.c_q, s.c_g, s.c_c);
    for (long k = 0; k <= 4; ++k) CHECK_THAT(c_eff(49, 49 + k), WithinRel(inf.c_eff(50, 50 + k), 1e-6));
}

TEST_CASE("charging energies") {
    Matrix inv(1, 1);
    inv(0, 0) = 1.0 / (58.394 * fF);
    CHECK_THAT(units::energy_to_GHz(charging_energies(inv)[0]), WithinRel(0.33171, 2e-5));
    inv(0, 0) = 1.0 / (71.648 * fF);
    CHECK_THAT(units::energy_to_GHz(charging_energies(inv)[0]), WithinRel(0.27035, 2e-5));
    const double e1 = charging_energies(inv)[0];
    inv(0, 0) /= 2.0;
    CHECK_THAT(charging_energies(inv)[0], WithinRel(e1 / 2.0, 1e-15));
}

TEST_CASE("charge couplings") {
    Matrix diag = Matrix::Identity(3, 3) / fF;
    CHECK(charge_couplings(diag).cwiseAbs().maxCoeff() == 0.0);

    const auto ec = reduce(build_chain_blocks(chain(7, 42.3, 16.8, 27.4)));
    const double e = constants::elementary_charge;
    for (Eigen::Index i = 0; i < 7; ++i) {
        CHECK(ec.g(i, i) == 0.0);
        CHECK_THAT(4.0 * ec.e_c[i], WithinRel(2.0 * e * e * ec.c_eff_inv(i, i), 1e-14));
        for (Eigen::Index j = 0; j < 7; ++j) {
            if (i == j) continue;
            CHECK_THAT(ec.g(i, j), WithinRel(4.0 * e * e * ec.c_eff_inv(i, j), 1e-14));
            CHECK(ec.g(i, j) == ec.g(j, i));
        }
    }
    // g / 16 E_C is the inverse-capacitance ratio behind chi
    for (Eigen::Index i = 1; i < 6; ++i)
        CHECK_THAT(ec.g(i, i + 1) / (16.0 * ec.e_c[i]),
                   WithinRel(ec.c_eff_inv(i, i + 1) / (2.0 * ec.c_eff_inv(i, i)), 1e-13));
}

TEST_CASE("relative coupling and damping factor need neighbours") {
    const auto ec = reduce(build_chain_blocks(chain(5, 42.3, 16.8, 27.4)));
    CHECK_THROWS_AS(relative_coupling(ec.c_eff_inv, 0), ValidationError);
    CHECK_THROWS_AS(relative_coupling(ec.c_eff_inv, 4), ValidationError);
    CHECK_NOTHROW(relative_coupling(ec.c_eff_inv, 1));
    CHECK_THROWS_AS(damping_factor(ec.c_eff_inv, 1), ValidationError);
    CHECK_NOTHROW(damping_factor(ec.c_eff_inv, 2));
    const auto decoupled = reduce(build_chain_blocks(chain(5, 42.3, 16.8, 0)));
    CHECK(relative_coupling(decoupled.c_eff_inv, 2) == 0.0);
    CHECK(damping_factor(decoupled.c_eff_inv, 2) == 0.0);
}

TEST_CASE("single-ended chains use the node matrix directly") {
    ChainSpec s;
    s.n_qubits = 4;
    s.scheme = Scheme::SingleEnded;
    s.c_sh = 50 * fF;
    s.c_c = 1 * fF;
    const auto node = build_node_matrix(s);
    const auto ec = reduce_single_ended(node);
    CHECK(ec.c_eff == node.matrix);
    CHECK_THROWS_AS(reduce_single_ended(build_node_matrix(chain(2, 40, 10, 5))), ValidationError);
}

// ---- properties on random chains ----

TEST_CASE("property: Schur complement equals the lower-right block of the full inverse") {
    std::mt19937_64 rng(0xabcdef01);
    for (int k = 0; k < 250; ++k) {
        const auto s = oracle::random_spec(rng);
        const auto ec = reduce(build_chain_blocks(s));
        const Matrix ref =
            oracle::chain_c_eff_inv(static_cast<int>(s.n_qubits), s.c_q, s.c_g, s.c_c, s.scheme == Scheme::AA);
        INFO("k=" << k << " n=" << s.n_qubits);
        CHECK(oracle::max_rel_diff(ec.c_eff_inv, ref) < 1e-10);
        CHECK(residual(ec.c_eff, ec.c_eff_inv) <= 1e-10);
    }
}

TEST_CASE("property: outputs are symmetric") {
    std::mt19937_64 rng(0xabcdef02);
    for (int k = 0; k < 200; ++k) {
        const auto ec = reduce(build_chain_blocks(oracle::random_spec(rng)));
        CHECK(oracle::max_rel_diff(ec.c_eff, ec.c_eff.transpose()) <= 1e-12);
        CHECK(oracle::max_rel_diff(ec.c_eff_inv, ec.c_eff_inv.transpose()) <= 1e-12);
        CHECK(oracle::max_rel_diff(ec.g, ec.g.transpose()) <= 1e-12);
    }
}

TEST_CASE("property: A-B inverse has negative, decaying off-diagonals") {
    std::mt19937_64 rng(0xabcdef03);
    for (int k = 0; k < 200; ++k) {
        auto s = oracle::random_spec(rng, 9, 15);
        s.scheme = Scheme::AB;
        const auto ec = reduce(build_chain_blocks(s));
        const auto n = static_cast<Eigen::Index>(s.n_qubits);
        const Eigen::Index i = n / 2;
        double prev = std::abs(ec.c_eff_inv(i, i));
        // stop once entries approach roundoff relative to the diagonal
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = ec.c_eff_inv(i, j);
            if (std::abs(v) < 1e-12 * ec.c_eff_inv(i, i)) break;
            CHECK(v < 0.0);
            CHECK(std::abs(v) < prev);
            prev = std::abs(v);
        }
    }
}

TEST_CASE("property: freezing the '+' charges leaves the C_eff^-1 energy") {
    std::mt19937_64 rng(0xabcdef04);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 200; ++k) {
        const auto s = oracle::random_spec(rng);
        const auto blocks = build_chain_blocks(s);
        const auto n = static_cast<Eigen::Index>(s.n_qubits);
        const Matrix full_inv = blocks.assembled().fullPivLu().inverse();
        Vector q = Vector::Zero(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) q(n + i) = gauss(rng);
        const Vector qm = q.tail(n);
        const double full = 0.5 * q.dot(full_inv * q);
        const double reduced = 0.5 * qm.dot(reduce(blocks).c_eff_inv * qm);
        CHECK_THAT(reduced, WithinRel(full, 1e-9));
    }
}
