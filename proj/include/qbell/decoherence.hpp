#pragma once

// Photon loss on mode B of |Psi2(alpha)> through a half mirror with
// transmissivity eta: |alpha>_B|0>_E -> |sqrt(eta) alpha>_B |sqrt(1-eta) alpha>_E.
// After tracing out the environment,
//   rho_AB = h2^2 { |a,-g><a,-g| + |-a,g><-a,g| - L |a,-g><-a,g| - L |-a,g><a,-g| }
// with g = sqrt(eta) alpha and coherence factor L = exp(-2(1-eta) alpha^2).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbell/coherent_layer.hpp"
#include "qbell/ent_measures.hpp"
#include "qbell/optimize.hpp"
#include "qbell/types.hpp"

namespace qbell {

class LossChannel {
public:
    explicit LossChannel(double eta) : eta_(eta) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity eta must lie in [0, 1]");
    }
    [[nodiscard]] double eta() const noexcept { return eta_; }

private:
    double eta_;
};

/// Alice-Bob state after the loss. `rho` is written in the orthonormal
/// bases |+->_A built from |+-alpha> and |+->_B built from |+-sqrt(eta) alpha>,
/// ordered |++>, |+->, |-+>, |-->.
struct DecoheredState {
    double alpha;
    LossChannel channel;
    double coherence;  // L
    TwoQubitDensity rho;

    [[nodiscard]] double attenuated_amplitude() const { return std::sqrt(channel.eta()) * alpha; }
};

namespace detail {

inline void require_positive_amplitude(double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("alpha must be > 0");
    if (overlap_of_amplitude(alpha) >= 1.0) throw DomainError("alpha too small (overlap must be < 1)");
}

/// Components (a, b) of |x> = a|+> + b|-> in the basis built from |+-x>.
[[nodiscard]] inline std::pair<double, double> plus_minus_components(double x) {
    return {std::sqrt(0.5 * (1.0 + overlap_of_amplitude(x))), std::sqrt(0.5 * one_minus_overlap(x))};
}

}  // namespace detail

[[nodiscard]] inline DecoheredState apply_loss(double alpha, LossChannel channel) {
    detail::require_positive_amplitude(alpha);
    const double eta = channel.eta();
    const double g = std::sqrt(eta) * alpha;
    const double coherence = std::exp(-2.0 * (1.0 - eta) * alpha * alpha);
    const double one_minus_coherence = -std::expm1(-2.0 * (1.0 - eta) * alpha * alpha);
    const double h2sq = 1.0 / (-2.0 * std::expm1(-4.0 * alpha * alpha));

    const auto [aa, ba] = detail::plus_minus_components(alpha);
    const auto [ab, bb] = detail::plus_minus_components(g);

    // rho = h2^2 [ (1+L)/2 |u1-u2><u1-u2| + (1-L)/2 |u1+u2><u1+u2| ],
    // u1 = |alpha>|-g>, u2 = |-alpha>|g>.
    Eigen::Vector4d diff(0.0, -2.0 * aa * bb, 2.0 * ba * ab, 0.0);
    Eigen::Vector4d sum(2.0 * aa * ab, 0.0, 0.0, -2.0 * ba * bb);
    const Eigen::Matrix4d rho = h2sq * (0.5 * (1.0 + coherence) * diff * diff.transpose() +
                                        0.5 * one_minus_coherence * sum * sum.transpose());
    return DecoheredState{alpha, channel, coherence, TwoQubitDensity(rho.cast<cplx>())};
}

namespace detail {

/// log(sinh(x) / x) for x >= 0, accurate in relative terms near zero.
[[nodiscard]] inline double log_sinhc(double x) {
    x = std::abs(x);
    if (x >= 1.0) return x + std::log(-std::expm1(-2.0 * x)) - std::numbers::ln2 - std::log(x);
    // sinh(x)/x - 1 = sum_{k>=1} x^{2k} / (2k+1)!
    const double x2 = x * x;
    double term = x2 / 6.0;
    double sum = 0.0;
    for (int k = 1; k < 30 && term > 1e-20 * sum; ++k) {
        sum += term;
        term *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return std::log1p(sum);
}

}  // namespace detail

/// The beta-dependent part of log <Psi2(beta)|rho_AB|Psi2(beta)>:
///   2 log(sinh(beta s)/(beta s)) - log(sinh(2 beta^2)/(2 beta^2)),  s = alpha + sqrt(eta) alpha.
/// It vanishes as beta -> 0 and is resolved to full relative precision, which
/// the fraction itself is not near its flat maximum.
[[nodiscard]] inline double fraction_profile(const DecoheredState& state, double beta) {
    const double s = state.alpha + state.attenuated_amplitude();
    return 2.0 * detail::log_sinhc(beta * s) - detail::log_sinhc(2.0 * beta * beta);
}

/// <Psi2(beta)| rho_AB |Psi2(beta)>
///   = (1+L)(k1 k2 - k3 k4)^2 / (2 (1-kA^2)(1-k0^2))
///   = (1+L) e^{-(alpha^2 + g^2)} s^2 / (2 (1-kA^2)) * exp(profile(beta)),
/// where k0 = e^{-2 beta^2}, k1 = e^{-(alpha-beta)^2/2}, k2 = e^{-(beta-g)^2/2},
/// k3 = e^{-(alpha+beta)^2/2}, k4 = e^{-(beta+g)^2/2} and s = alpha + g.
[[nodiscard]] inline double fraction_over_family(const DecoheredState& state, double beta) {
    if (!std::isfinite(beta) || overlap_of_amplitude(beta) >= 1.0)
        throw DomainError("beta must be nonzero (Psi2(beta) is undefined at beta = 0)");
    const double a = state.alpha;
    const double g = state.attenuated_amplitude();
    const double s = a + g;
    const double log_f = std::log1p(state.coherence) - (a * a + g * g) + 2.0 * std::log(s) - std::numbers::ln2 -
                         std::log(-std::expm1(-4.0 * a * a)) + fraction_profile(state, beta);
    return std::clamp(std::exp(log_f), 0.0, 1.0);
}

struct OptimalBeta {
    double beta_star;      // closed form alpha (1 + sqrt(eta)) / 2
    double f_star;         // fraction at beta_star
    double beta_numeric;   // golden-section maximizer of the profile on (0, 2 alpha]
    double f_numeric;
    int iterations;
};

/// Closed-form maximizer of the fraction over the Psi2(beta) family, halfway
/// between the sent and the attenuated amplitude, together with an
/// independent bracketed numerical maximization on (0, 2 alpha].
[[nodiscard]] inline OptimalBeta optimal_beta(double alpha, LossChannel channel) {
    const DecoheredState state = apply_loss(alpha, channel);
    const double beta_star = 0.5 * alpha * (1.0 + std::sqrt(channel.eta()));
    const double f_star = fraction_over_family(state, beta_star);

    const double lo = 1e-6 * alpha;
    const double hi = 2.0 * alpha;
    auto profile = [&state](double b) { return fraction_profile(state, b); };
    const auto num = optimize::golden_section_maximize(profile, lo, hi, 1e-13);
    if (!num.converged)
        throw ConvergenceError("beta maximizer did not converge on (0, " + std::to_string(hi) + "] after " +
                                   std::to_string(num.iterations) + " iterations at beta=" + std::to_string(num.x),
                               num.value);
    return OptimalBeta{beta_star, f_star, num.x, fraction_over_family(state, num.x), num.iterations};
}

/// Fraction of the lossy single-photon polarization singlet: eta.
[[nodiscard]] inline EntFraction biphoton_fraction(LossChannel channel) { return EntFraction(channel.eta()); }

/// eta |singlet><singlet| + (1-eta) I_A/2 x |0><0|_B on qubit A and mode B
/// restricted to {|H>, |V>, |vac>}; index = 3 * a + b with a in {H, V}.
[[nodiscard]] inline Eigen::Matrix<cplx, 6, 6> biphoton_density(LossChannel channel) {
    const double eta = channel.eta();
    Eigen::Matrix<cplx, 6, 6> rho = Eigen::Matrix<cplx, 6, 6>::Zero();
    Eigen::Matrix<cplx, 6, 1> singlet = Eigen::Matrix<cplx, 6, 1>::Zero();
    singlet(0 * 3 + 1) = std::numbers::sqrt2 / 2.0;   // |H>|V>
    singlet(1 * 3 + 0) = -std::numbers::sqrt2 / 2.0;  // |V>|H>
    rho += eta * singlet * singlet.adjoint();
    rho(0 * 3 + 2, 0 * 3 + 2) += 0.5 * (1.0 - eta);
    rho(1 * 3 + 2, 1 * 3 + 2) += 0.5 * (1.0 - eta);
    return rho;
}

/// General two-qubit fully entangled fraction of rho_AB on its own 4-d
/// support. Diagnostic only: the Psi2(beta) states lie outside this support,
/// so this is not comparable with the family maximum.
[[nodiscard]] inline EntFraction support_fef(const DecoheredState& state) { return fully_entangled_fraction(state.rho); }

struct FractionCurvePoint {
    double alpha;
    double eta;
    double f;          // NaN when `error` is set
    double beta_star;  // NaN when `error` is set
    std::optional<std::string> error;
};

/// f* and beta* for every (alpha, eta), ordered by eta descending then alpha
/// ascending. A failing point records its error and the sweep continues.
[[nodiscard]] inline std::vector<FractionCurvePoint> figure1_sweep(std::vector<double> alphas,
                                                                   std::vector<double> etas) {
    for (double a : alphas)
        if (!(a > 0.0)) throw DomainError("sweep amplitudes must be > 0");
    for (double e : etas) (void)LossChannel(e);
    std::stable_sort(alphas.begin(), alphas.end());
    std::stable_sort(etas.begin(), etas.end(), std::greater<>());

    std::vector<FractionCurvePoint> out;
    out.reserve(alphas.size() * etas.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double eta : etas) {
        for (double alpha : alphas) {
            try {
                const auto opt = optimal_beta(alpha, LossChannel(eta));
                out.push_back({alpha, eta, opt.f_star, opt.beta_star, std::nullopt});
            } catch (const Error& e) {
                out.push_back({alpha, eta, nan, nan, std::string(e.what())});
            }
        }
    }
    return out;
}

}  // namespace qbell
