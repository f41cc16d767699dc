#include "floatchain/effective_coupling.hpp"

#include "floatchain/constants.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <cmath>

namespace floatchain {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-10;
// pivots below this fraction of the largest diagonal entry count as singular
constexpr double kPivotTolerance = 1e-13;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ValidationError(std::string(what) + " must be a nonempty square matrix", what);
}

} // namespace

Matrix cholesky_factor(const Matrix& m) {
    require_square(m, "matrix");
    const auto n = m.rows();
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = m(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > kPivotTolerance * scale))
            throw FactorizationError("matrix is not positive definite: pivot " + std::to_string(j) + " is " +
                                         format_g(d, 6),
                                     static_cast<long>(j), "pivot " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
    return l;
}

Matrix invert_spd(const Matrix& m) {
    require_square(m, "matrix");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale)
        throw ValidationError("matrix is not symmetric (relative asymmetry " + format_g(asym / scale, 3) + ")",
                              "symmetry");

    const Matrix l = cholesky_factor(m);
    const auto n = m.rows();
    // m^-1 = L^-T L^-1
    const Matrix l_inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    Matrix inv = l_inv.transpose() * l_inv;
    inv = 0.5 * (inv + inv.transpose()).eval();

    const double residual = (m * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual <= kResidualTolerance))
        throw NumericalError("inverse residual " + format_g(residual, 3) + " exceeds " +
                                 format_g(kResidualTolerance, 3) + " (matrix is ill-conditioned)",
                             "residual");
    return inv;
}

Matrix effective_capacitance(const BlockCapacitanceMatrix& blocks) {
    require_square(blocks.cpp, "cpp");
    require_square(blocks.cmm, "cmm");
    if (blocks.cpm.rows() != blocks.cpp.rows() || blocks.cpm.cols() != blocks.cmm.rows())
        throw ValidationError("cpm block shape does not match cpp/cmm", "cpm");

    Matrix l;
    try {
        l = cholesky_factor(blocks.cpp);
    } catch (const FactorizationError& e) {
        throw SingularMatrixError(
            "C++ is singular at pivot " + std::to_string(e.pivot()) +
                ": the '+' modes have no capacitance to ground, which is the infinite-range limit "
                "C_G/C_c -> 0. Add a (physical) ground capacitance instead of regularizing.",
            "cpp pivot " + std::to_string(e.pivot()));
    }
    // C-+ (C++)^-1 C+- = W^T W with W = L^-1 C+-
    const Matrix w = l.triangularView<Eigen::Lower>().solve(blocks.cpm);
    Matrix c_eff = blocks.cmm - w.transpose() * w;
    return 0.5 * (c_eff + c_eff.transpose());
}

std::vector<double> charging_energies(const Matrix& c_eff_inv) {
    require_square(c_eff_inv, "c_eff_inv");
    const double e = constants::elementary_charge;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(c_eff_inv.rows()));
    for (Eigen::Index i = 0; i < c_eff_inv.rows(); ++i) out.push_back(e * e * c_eff_inv(i, i) / 2.0);
    return out;
}

Matrix charge_couplings(const Matrix& c_eff_inv) {
    require_square(c_eff_inv, "c_eff_inv");
    const double q = constants::cooper_pair_charge;
    Matrix g = q * q * c_eff_inv;
    g.diagonal().setZero();
    return g;
}

double relative_coupling(const Matrix& c_eff_inv, std::size_t site) {
    const auto i = static_cast<Eigen::Index>(site);
    if (i < 1 || i + 1 >= c_eff_inv.rows())
        throw ValidationError("chi needs both nearest neighbours; site " + std::to_string(site + 1) +
                                  " of " + std::to_string(c_eff_inv.rows()),
                              "site");
    return std::sqrt(std::abs(c_eff_inv(i, i + 1) * c_eff_inv(i, i - 1))) / (2.0 * c_eff_inv(i, i));
}

double damping_factor(const Matrix& c_eff_inv, std::size_t site) {
    const auto i = static_cast<Eigen::Index>(site);
    if (i < 2 || i + 2 >= c_eff_inv.rows())
        throw ValidationError("xi needs two neighbours on each side; site " + std::to_string(site + 1) +
                                  " of " + std::to_string(c_eff_inv.rows()),
                              "site");
    const double nn = c_eff_inv(i, i + 1) * c_eff_inv(i, i - 1);
    if (nn == 0.0) return 0.0;
    return std::sqrt(std::abs(c_eff_inv(i, i + 2) * c_eff_inv(i, i - 2) / nn));
}

namespace {

EffectiveCoupling from_c_eff(Matrix c_eff) {
    EffectiveCoupling out;
    out.c_eff_inv = invert_spd(c_eff);
    out.c_eff = std::move(c_eff);
    out.e_c = charging_energies(out.c_eff_inv);
    out.g = charge_couplings(out.c_eff_inv);
    return out;
}

} // namespace

EffectiveCoupling reduce(const BlockCapacitanceMatrix& blocks) {
    return from_c_eff(effective_capacitance(blocks));
}

EffectiveCoupling reduce_single_ended(const NodeCapacitanceMatrix& node) {
    for (const auto& label : node.labels)
        if (label.pad != Pad::Grounded)
            throw ValidationError("single-ended reduction expects q<i> labels, got '" + label.str() + "'", label.str());
    return from_c_eff(node.matrix);
}

} // namespace floatchain
