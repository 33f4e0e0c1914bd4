#pragma once

// Entanglement functionals on pure and two-qubit mixed states. All
// logarithms are base 2, so a maximally entangled qubit pair carries 1 ebit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "qbell/error.hpp"
#include "qbell/optimize.hpp"
#include "qbell/types.hpp"

namespace qbell {

/// -p log2 p, zero at p = 0.
[[nodiscard]] inline double entropy_term(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Binary entropy H(x) = -x log2 x - (1-x) log2 (1-x).
[[nodiscard]] inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("probability must lie in [0, 1]");
    return entropy_term(x) + entropy_term(1.0 - x);
}

/// Shannon entropy of a probability vector; entries below `floor` contribute nothing.
[[nodiscard]] inline double shannon_entropy(std::span<const double> p, double floor = 0.0) noexcept {
    double h = 0.0;
    for (double v : p)
        if (v > floor) h += entropy_term(v);
    return h;
}

[[nodiscard]] inline double entropy(const Spectrum& s) noexcept { return shannon_entropy(s.values()); }

/// Concurrence |<psi| sigma_y x sigma_y |psi*>| = 2 |c00 c11 - c01 c10|.
[[nodiscard]] inline double concurrence_pure(const TwoQubitPure& psi) {
    const auto& c = psi.coeffs();
    return std::min(1.0, 2.0 * std::abs(c(0) * c(3) - c(1) * c(2)));
}

/// E = H((1 + sqrt(1 - C^2)) / 2), the entanglement carried by concurrence C.
[[nodiscard]] inline double entanglement_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("concurrence must lie in [0, 1]");
    return binary_entropy(0.5 * (1.0 + std::sqrt((1.0 - c) * (1.0 + c))));
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// With rho = W W^dagger, W = V sqrt(diag p), the numbers lambda_i are the
/// singular values of W^T (sigma_y x sigma_y) W. Working with the factor W
/// instead of sqrt(rho) rho~ sqrt(rho) keeps null eigenvalues from leaking
/// O(sqrt(eps)) errors into lambda.
[[nodiscard]] inline double concurrence(const TwoQubitDensity& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.matrix());
    Eigen::Matrix4cd w = es.eigenvectors();
    for (int k = 0; k < 4; ++k) w.col(k) *= std::sqrt(std::max(0.0, es.eigenvalues()(k)));

    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const Eigen::Matrix4cd tau = w.transpose() * flip * w;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    const Eigen::Vector4d s = svd.singularValues();  // descending
    return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

/// Exact entanglement of formation of a two-qubit state.
[[nodiscard]] inline double eof_wootters(const TwoQubitDensity& rho) {
    return entanglement_from_concurrence(concurrence(rho));
}

/// Lower bound h[f] on the entanglement of formation from the fully entangled fraction.
[[nodiscard]] inline double eof_lower_bound(EntFraction f) {
    const double v = f.value();
    if (v < 0.5) return 0.0;
    return binary_entropy(std::min(1.0, 0.5 + std::sqrt(v * (1.0 - v))));
}

/// (I x U)|Phi+> for the SU(2) element with unit quaternion q.
[[nodiscard]] inline Eigen::Vector4cd maximally_entangled_state(const Eigen::Vector4d& q) {
    using namespace std::complex_literals;
    const Eigen::Vector4d u = q.normalized();
    Eigen::Matrix2cd m;
    m << u(0) + 1i * u(3), u(2) + 1i * u(1),
        -u(2) + 1i * u(1), u(0) - 1i * u(3);
    const double r = std::numbers::sqrt2 / 2.0;
    Eigen::Vector4cd e;
    e << r * m(0, 0), r * m(1, 0), r * m(0, 1), r * m(1, 1);
    return e;
}

struct FefOptions {
    int starts = 8;
    std::uint64_t seed = 0x5eedf00dULL;
    optimize::NelderMeadOptions local{};
};

namespace detail {

[[nodiscard]] inline Eigen::Vector4d quaternion_from_angles(const Eigen::VectorXd& t) {
    const double s0 = std::sin(t(0));
    const double s1 = std::sin(t(1));
    return {std::cos(t(0)), s0 * std::cos(t(1)), s0 * s1 * std::cos(t(2)), s0 * s1 * std::sin(t(2))};
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
[[nodiscard]] inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Fully entangled fraction max_e <e|rho|e> over maximally entangled states,
/// maximized numerically over local-unitary parameters (three hyperspherical
/// angles of an SU(2) quaternion) from several deterministic starts.
[[nodiscard]] inline EntFraction fully_entangled_fraction(const TwoQubitDensity& rho,
                                                          const FefOptions& opt = {}) {
    const Eigen::Matrix4cd& m = rho.matrix();
    auto overlap = [&m](const Eigen::VectorXd& t) {
        const Eigen::Vector4cd e = maximally_entangled_state(detail::quaternion_from_angles(t));
        return (e.adjoint() * m * e)(0, 0).real();
    };

    std::mt19937_64 rng(opt.seed);
    double best = -1.0;
    bool any_converged = false;
    for (int s = 0; s < opt.starts; ++s) {
        Eigen::VectorXd t0(3);
        t0 << std::numbers::pi * detail::unit_uniform(rng), std::numbers::pi * detail::unit_uniform(rng),
            2.0 * std::numbers::pi * detail::unit_uniform(rng);
        const auto r = optimize::nelder_mead_maximize(overlap, t0, opt.local);
        any_converged = any_converged || r.converged;
        best = std::max(best, r.value);
    }
    if (!any_converged) throw ConvergenceError("fully entangled fraction maximizer did not converge", best);
    return EntFraction(std::clamp(best, 0.0, 1.0));
}

}  // namespace qbell
