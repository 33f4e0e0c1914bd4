#pragma once

// Abstract quasi-Bell states over two nonorthogonal states with real overlap
// kappa, expressed in closed form and in the orthonormal basis
//   |+-> = (|psi1> +- |psi2>) / sqrt(2 +- 2 kappa).

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "qbell/ent_measures.hpp"
#include "qbell/types.hpp"

namespace qbell {

/// h_i: 1/sqrt(2(1+kappa^2)) for indices 1, 3 and 1/sqrt(2(1-kappa^2)) for 2, 4.
[[nodiscard]] inline double normalization_constant(QBIndex index, Overlap kappa) {
    const double k2 = kappa.value() * kappa.value();
    return 1.0 / std::sqrt(2.0 * (1.0 + relative_sign(index) * k2));
}

/// D = 2 kappa / (1 + kappa^2), the only nonzero off-diagonal Gram element.
[[nodiscard]] inline double gram_offdiagonal(Overlap kappa) {
    const double k = kappa.value();
    return 2.0 * k / (1.0 + k * k);
}

/// |<Psi_i|Psi_j>| for the four quasi-Bell states.
[[nodiscard]] inline Eigen::Matrix4d gram_matrix(Overlap kappa) {
    Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
    g(0, 2) = g(2, 0) = gram_offdiagonal(kappa);
    return g;
}

/// Spectrum of either one-party reduced state.
[[nodiscard]] inline Spectrum reduced_spectrum(const QuasiBellSpec& spec) {
    if (is_maximally_entangled(spec.index)) return Spectrum({0.5, 0.5});
    const double k = spec.kappa.value();
    const double denom = 2.0 * (1.0 + k * k);
    return Spectrum({(1.0 + k) * (1.0 + k) / denom, (1.0 - k) * (1.0 - k) / denom});
}

/// Entropy of entanglement in ebits: exactly 1 for indices 2 and 4,
/// H((1 + D) / 2) for indices 1 and 3.
[[nodiscard]] inline double entropy_of_entanglement(const QuasiBellSpec& spec) {
    if (is_maximally_entangled(spec.index)) return 1.0;
    return binary_entropy(0.5 * (1.0 + gram_offdiagonal(spec.kappa)));
}

/// Coefficients of |Psi_i> in the |++>, |+->, |-+>, |--> basis. The global
/// phase makes the |+-> coefficient real and non-negative.
[[nodiscard]] inline TwoQubitPure embed_qubit(const QuasiBellSpec& spec) {
    const double k = spec.kappa.value();
    // |psi1> = a|+> + b|->,  |psi2> = a|+> - b|->
    const double a2 = 0.5 * (1.0 + k);
    const double b2 = 0.5 * (1.0 - k);
    const double r = std::numbers::sqrt2 / 2.0;
    Eigen::Vector4cd c = Eigen::Vector4cd::Zero();
    switch (spec.index) {
        case QBIndex::psi1:
        case QBIndex::psi3: {
            // 2h (a^2 |++> -+ b^2 |-->), h = 1/sqrt(2(1+k^2)) and a^4 + b^4 = (1+k^2)/2
            const double n = std::sqrt(a2 * a2 + b2 * b2);
            c(0) = a2 / n;
            c(3) = (spec.index == QBIndex::psi1 ? -b2 : b2) / n;
            break;
        }
        case QBIndex::psi2:
            c(1) = r;
            c(2) = -r;
            break;
        case QBIndex::psi4:
            c(1) = r;
            c(2) = r;
            break;
    }
    return TwoQubitPure(c);
}

}  // namespace qbell
