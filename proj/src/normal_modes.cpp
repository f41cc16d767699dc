#include "floatchain/normal_modes.hpp"

#include "floatchain/effective_coupling.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>

namespace floatchain {

std::vector<Eigen::Index> LinearChainModel::active() const {
    std::vector<Eigen::Index> out;
    for (std::size_t k = 0; k < inductances.size(); ++k)
        if (inductances[k]) out.push_back(static_cast<Eigen::Index>(k));
    return out;
}

NormalModes normal_mode_decomposition(const LinearChainModel& model) {
    const auto n = static_cast<std::size_t>(model.c_eff.rows());
    if (model.c_eff.cols() != model.c_eff.rows() || model.inductances.size() != n)
        throw ValidationError("model needs a square C_eff and one inductance entry per coordinate", "model");

    NormalModes out;
    out.active = model.active();
    if (out.active.empty()) throw ValidationError("every coordinate is pinned; no modes left", "inductances");
    const auto m = static_cast<Eigen::Index>(out.active.size());

    Matrix c(m, m);
    Matrix k = Matrix::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const double l = *model.inductances[out.active[a]];
        if (!std::isfinite(l) || !(l > 0.0))
            throw ValidationError("inductance of coordinate " + std::to_string(out.active[a] + 1) + " must be positive",
                                  "inductances");
        k(a, a) = 1.0 / l;
        for (Eigen::Index b = 0; b < m; ++b) c(a, b) = model.c_eff(out.active[a], out.active[b]);
    }
    try {
        (void)cholesky_factor(c);
    } catch (const FactorizationError& e) {
        throw NumericalError("restricted capacitance matrix is not positive definite (pivot " +
                                 std::to_string(e.pivot()) + ")",
                             "c_eff");
    }

    // scale to O(1) before solving: C in units of its mean diagonal, K likewise
    const double c_scale = c.diagonal().mean();
    const double k_scale = k.diagonal().mean();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(k / k_scale, c / c_scale);
    if (solver.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed", "eigensolver");

    const double factor = k_scale / c_scale;
    for (Eigen::Index a = 0; a < m; ++a) {
        const double w2 = solver.eigenvalues()(a) * factor;
        if (!(w2 > 0.0)) throw NumericalError("non-positive mode frequency squared", "eigensolver");
        out.omega.push_back(std::sqrt(w2));
    }
    out.vectors = solver.eigenvectors() / std::sqrt(c_scale);
    return out;
}

std::vector<double> normal_modes(const LinearChainModel& model) { return normal_mode_decomposition(model).omega; }

namespace {

void check_pair(std::size_t n, QubitPair pair) {
    if (pair.first >= n || pair.second >= n)
        throw ValidationError("qubit pair (" + std::to_string(pair.first + 1) + ", " + std::to_string(pair.second + 1) +
                                  ") outside 1.." + std::to_string(n),
                              "pair");
    if (pair.first == pair.second)
        throw ValidationError("qubit pair needs two distinct qubits", "pair");
}

} // namespace

LinearChainModel pin_spectators(const Matrix& c_eff, QubitPair pair, double inductance, SpectatorMode mode) {
    const auto n = static_cast<std::size_t>(c_eff.rows());
    check_pair(n, pair);
    LinearChainModel model;
    if (mode == SpectatorMode::PhasePinned) {
        model.c_eff = c_eff;
        model.inductances.assign(n, kPinned);
        model.inductances[pair.first] = inductance;
        model.inductances[pair.second] = inductance;
        return model;
    }
    const Matrix inv = invert_spd(c_eff);
    const std::array<Eigen::Index, 2> idx{static_cast<Eigen::Index>(pair.first),
                                          static_cast<Eigen::Index>(pair.second)};
    Matrix block(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) block(a, b) = inv(idx[a], idx[b]);
    model.c_eff = invert_spd(block);
    model.inductances = {inductance, inductance};
    return model;
}

CrossingOptions CrossingOptions::around(double l_fixed) {
    CrossingOptions o;
    o.l_fixed = l_fixed;
    o.l_lo = 0.5 * l_fixed;
    o.l_hi = 2.0 * l_fixed;
    return o;
}

CrossingResult avoided_crossing_J(const Matrix& c_eff, QubitPair pair, const CrossingOptions& options) {
    const auto n = static_cast<std::size_t>(c_eff.rows());
    check_pair(n, pair);
    if (!(options.l_fixed > 0.0) || !(options.l_lo > 0.0) || !(options.l_hi > options.l_lo))
        throw ValidationError("sweep needs 0 < l_lo < l_hi and l_fixed > 0", "sweep");
    if (options.n_points < 3) throw ValidationError("sweep needs at least 3 points", "n_points");

    // reduce once to the pair's 2x2 model: coordinate 0 = pair.first, 1 = pair.second
    LinearChainModel pinned = pin_spectators(c_eff, pair, options.l_fixed, options.spectators);
    LinearChainModel model;
    if (options.spectators == SpectatorMode::PhasePinned) {
        const std::array<Eigen::Index, 2> idx{static_cast<Eigen::Index>(pair.first),
                                              static_cast<Eigen::Index>(pair.second)};
        model.c_eff.resize(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) model.c_eff(a, b) = c_eff(idx[a], idx[b]);
    } else {
        model.c_eff = pinned.c_eff;
    }
    model.inductances = {options.l_fixed, options.l_fixed};

    auto modes_at = [&](double l) {
        model.inductances[1] = l;
        const auto w = normal_modes(model);
        return std::pair{w[0], w[1]};
    };
    auto splitting = [&](double l) {
        const auto [lo, hi] = modes_at(l);
        return hi - lo;
    };

    // bare (other coordinate pinned) detuning must change sign over the sweep
    const double w_fixed = 1.0 / std::sqrt(options.l_fixed * model.c_eff(0, 0));
    auto detuning = [&](double l) { return 1.0 / std::sqrt(l * model.c_eff(1, 1)) - w_fixed; };
    if (detuning(options.l_lo) * detuning(options.l_hi) > 0.0) {
        const double l_res = 1.0 / (w_fixed * w_fixed * model.c_eff(1, 1));
        throw BracketError("sweep [" + format_g(options.l_lo * 1e9, 6) + ", " + format_g(options.l_hi * 1e9, 6) +
                               "] nH does not bracket the resonance; try a range around " +
                               format_g(l_res * 1e9, 6) + " nH",
                           "sweep");
    }

    CrossingResult out;
    const double ratio = options.l_hi / options.l_lo;
    std::size_t best = 0;
    double best_gap = 0.0;
    for (int k = 0; k < options.n_points; ++k) {
        const double l = options.l_lo * std::pow(ratio, static_cast<double>(k) / (options.n_points - 1));
        const auto [lo, hi] = modes_at(l);
        out.trace.push_back({l, lo, hi});
        // strict '<' on an ascending grid keeps the lower inductance on ties
        if (k == 0 || hi - lo < best_gap) {
            best_gap = hi - lo;
            best = static_cast<std::size_t>(k);
        }
    }

    double a = out.trace[best == 0 ? 0 : best - 1].inductance;
    double b = out.trace[std::min(best + 1, out.trace.size() - 1)].inductance;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = splitting(x1), f2 = splitting(x2);
    while (b - a > options.rel_tol * 0.5 * (a + b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = splitting(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = splitting(x2);
        }
    }
    const double l_min = 0.5 * (a + b);
    const double gap = splitting(l_min);
    if (gap <= best_gap) {
        out.l_cross = l_min;
        out.min_splitting = gap;
    } else {
        out.l_cross = out.trace[best].inductance;
        out.min_splitting = best_gap;
    }
    out.j = out.min_splitting / 2.0;
    return out;
}

} // namespace floatchain
