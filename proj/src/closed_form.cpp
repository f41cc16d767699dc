#include "floatchain/closed_form.hpp"

#include "floatchain/circuit_model.hpp"
#include "floatchain/effective_coupling.hpp"
#include "floatchain/errors.hpp"
#include "floatchain/format.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>

namespace floatchain {

namespace {

WarningHandler& warning_handler() {
    static WarningHandler handler = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return handler;
}

void warn(const std::string& msg) {
    if (warning_handler()) warning_handler()(msg);
}

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(std::string(field) + " must be positive", field);
}

void require_nonnegative(double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(std::string(field) + " must be nonnegative", field);
}

double power_abs(double base, long exponent) { return std::pow(base, static_cast<double>(std::labs(exponent))); }

} // namespace

void set_warning_handler(WarningHandler handler) { warning_handler() = std::move(handler); }

double InfiniteChainForm::c_eff(long i, long j) const {
    return (i == j ? c_q : 0.0) + c_c_eff * power_abs(xi_c, i - j);
}

InfiniteChainForm infinite_chain_form(double c_q, double c_g, double c_c) {
    require_nonnegative(c_q, "c_q");
    require_nonnegative(c_c, "c_c");
    require_nonnegative(c_g, "c_g");
    if (c_g == 0.0)
        throw NumericalError("C_G = 0 is the infinite-range limit (xi_C -> 1); the mediated capacitance diverges",
                             "c_g");
    InfiniteChainForm out;
    out.c_q = c_q;
    out.c_c_eff = std::sqrt(c_g / 2.0 * (c_c + c_g / 2.0));
    if (c_c > 0.0) {
        const double r = c_g / (2.0 * c_c);
        const double s = std::sqrt(r) + std::sqrt(1.0 + r);
        out.xi_c = 1.0 / (s * s);
    }
    return out;
}

WeakCouplingForm weak_coupling_form(double c_q, double c_g, double c_c) {
    require_positive(c_q, "c_q");
    const auto inf = infinite_chain_form(c_q, c_g, c_c);
    return {inf.c_c_eff / (2.0 * c_q) * inf.xi_c, inf.xi_c};
}

double StrongCouplingForm::c_eff_inv(long i, long j) const {
    // 2 chi / xi = eta1 eta2 / (1 - eta1 eta2), finite also at xi = 0
    const double p = eta1 * eta2;
    const double ratio = p / (1.0 - p);
    return ((i == j ? 1.0 + ratio : 0.0) - ratio * power_abs(xi, i - j)) / c_q_eff;
}

StrongCouplingForm strong_coupling_form(double c_q, double c_g, double c_c) {
    require_positive(c_q, "c_q");
    require_positive(c_g, "c_g");
    require_nonnegative(c_c, "c_c");
    StrongCouplingForm out;
    const double half_g = c_g / 2.0;
    out.eta1 = std::sqrt(half_g / (half_g + c_q));
    out.eta2 = std::sqrt((half_g + c_c) / (half_g + c_c + c_q));
    const double p = out.eta1 * out.eta2;
    out.c_q_eff = c_q / (1.0 - p);
    out.xi = (out.eta2 - out.eta1) / (out.eta2 + out.eta1);
    out.chi = p / (2.0 * (1.0 - p)) * out.xi;
    return out;
}

DesignCapacitances design_capacitances(double chi, double xi, double c_q_eff) {
    require_positive(c_q_eff, "c_q_eff");
    if (!std::isfinite(chi) || chi < 0.0) throw InfeasibleTargetError("chi must be nonnegative", "chi");
    if (!std::isfinite(xi) || xi < 0.0 || xi >= 1.0)
        throw InfeasibleTargetError("xi must lie in [0, 1); got " + format_g(xi, 6), "xi");
    if (chi == 0.0) return {c_q_eff, 0.0, 0.0};
    if (xi == 0.0)
        throw InfeasibleTargetError("xi = 0 with chi > 0 requires C_q = 0, which is not a realizable circuit", "xi");
    const double bound = ab_chi_bound(xi);
    if (chi >= bound)
        throw InfeasibleTargetError("chi = " + format_g(chi, 6) + " exceeds the realizable bound chi < (1 - xi)/4 = " +
                                        format_g(bound, 6) + " at xi = " + format_g(xi, 6),
                                    "chi");
    const double s = xi + 2.0 * chi;
    const double t = xi + 4.0 * chi;
    DesignCapacitances out;
    out.c_q = xi / s * c_q_eff;
    out.c_c = 8.0 * chi / (1.0 - t * t) * c_q_eff;
    out.c_g = 4.0 * (1.0 - xi) * chi / (s * (1.0 + t)) * c_q_eff;
    return out;
}

double AaForm::c_eff(long i, long j) const {
    return (i == j ? c_q + c_g : 0.0) - mediated * power_abs(xi_c, i - j);
}

double AaForm::c_eff_inv(long i, long j) const {
    const double s = xi > 0.0 ? 2.0 * chi / xi : 0.0;
    return ((i == j ? 1.0 - s : 0.0) + s * power_abs(xi, i - j)) / c_q_eff;
}

AaForm aa_forms(double c_q, double c_g, double c_c) {
    require_positive(c_q, "c_q");
    require_positive(c_g, "c_g");
    require_nonnegative(c_c, "c_c");
    const auto inf = infinite_chain_form(c_q, c_g, c_c);

    AaForm out;
    out.c_q = c_q;
    out.c_g = c_g;
    out.c_c_eff = inf.c_c_eff;
    out.xi_c = inf.xi_c;
    out.mediated = c_g * c_g / (4.0 * inf.c_c_eff);

    // C_eff^-1(k) = [1 + C_G^2 / (P - Q cos k)] / (C_q + C_G)
    const double sum = c_q + c_g;
    const double p = 2.0 * sum * (c_g + c_c) - c_g * c_g;
    const double q = 2.0 * sum * c_c;
    const double r = std::sqrt((p - q) * (p + q));
    const double g2 = c_g * c_g;
    out.xi = q / (p + r);
    out.chi = out.xi * g2 / (2.0 * (r + g2));
    out.c_q_eff = sum * r / (r + g2);
    out.chi_bound = aa_chi_bound(out.xi);
    return out;
}

double boundary_ceff(long i, long j, long n, double c_q, double c_g, double c_c) {
    if (n < 10) throw ValidationError("boundary formula needs n >= 10; use the dense path for short chains", "n");
    if (i < 1 || i > n || j < 1 || j > n)
        throw ValidationError("indices (" + std::to_string(i) + ", " + std::to_string(j) + ") outside 1.." +
                                  std::to_string(n),
                              "index");
    if (n < 20) warn("boundary formula is a large-N approximation; n = " + std::to_string(n) + " < 20");
    const auto inf = infinite_chain_form(c_q, c_g, c_c);
    const long image = n - std::labs(i + j - n - 1);
    return (i == j ? c_q : 0.0) + inf.c_c_eff * (power_abs(inf.xi_c, i - j) - power_abs(inf.xi_c, image));
}

namespace {

Matrix single_ended_inverse(double c_sh, double c_c, std::size_t n) {
    require_positive(c_sh, "c_sh");
    require_nonnegative(c_c, "c_c");
    if (n < 5) throw ValidationError("single-ended center analysis needs n >= 5", "n");
    ChainSpec spec;
    spec.n_qubits = n;
    spec.scheme = Scheme::SingleEnded;
    spec.c_sh = c_sh;
    spec.c_c = c_c;
    return invert_spd(build_node_matrix(spec).matrix);
}

} // namespace

SingleEndedRatio single_ended_ratio(double c_sh, double c_c, std::size_t n) {
    const Matrix inv = single_ended_inverse(c_sh, c_c, n);
    const auto c = static_cast<Eigen::Index>((n + 1) / 2 - 1);
    SingleEndedRatio out;
    out.approximate = c_c / c_sh;
    out.exact = inv(c, c + 1) != 0.0 ? inv(c, c + 2) / inv(c, c + 1) : 0.0;
    return out;
}

FixedTransmonRelation fixed_transmon_relation(double c_sh, double c_c, std::size_t n) {
    const Matrix inv = single_ended_inverse(c_sh, c_c, n);
    const std::size_t c = (n + 1) / 2 - 1;
    FixedTransmonRelation out;
    out.chi = relative_coupling(inv, c);
    out.xi = damping_factor(inv, c);
    if (c_c / c_sh <= 0.1 && out.xi > 0.0) out.consistent = std::abs(out.chi / (out.xi / 2.0) - 1.0) <= 0.05;
    return out;
}

double solve_c_q_for_c_q_eff(double c_q_eff, double c_g, double c_c) {
    require_positive(c_q_eff, "c_q_eff");
    require_positive(c_g, "c_g");
    require_nonnegative(c_c, "c_c");
    auto residual = [&](double c_q) { return strong_coupling_form(c_q, c_g, c_c).c_q_eff - c_q_eff; };

    const double hi = c_q_eff;
    const double lo = c_q_eff * 1e-12;
    const double f_hi = residual(hi);
    if (f_hi == 0.0) return hi;
    const double f_lo = residual(lo);
    if (f_lo >= 0.0) {
        const double a = c_g / 2.0, b = c_g / 2.0 + c_c;
        throw InfeasibleTargetError("C_q,eff = " + format_g(c_q_eff, 6) + " F is below the C_q -> 0 limit " +
                                        format_g(2.0 * a * b / (a + b), 6) + " F for these C_G, C_c",
                                    "c_q_eff");
    }
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi,
                                                          boost::math::tools::eps_tolerance<double>(52), iterations);
    return 0.5 * (a + b);
}

} // namespace floatchain
