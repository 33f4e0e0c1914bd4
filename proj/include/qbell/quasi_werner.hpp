#pragma once

// Quasi-Werner mixtures
//   W = F |Psi2><Psi2| + (1-F)/3 (|Psi1><Psi1| + |Psi3><Psi3| + |Psi4><Psi4|).

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "qbell/ent_measures.hpp"
#include "qbell/qbell_core.hpp"
#include "qbell/types.hpp"

namespace qbell {

struct QuasiWernerSpec {
    QuasiWernerSpec(double fidelity_, Overlap kappa_) : fidelity(fidelity_), kappa(kappa_) {
        if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw DomainError("fidelity F must lie in [0, 1]");
    }

    double fidelity;
    Overlap kappa;

    /// Mixture weights in index order 1..4.
    [[nodiscard]] std::array<double, 4> weights() const {
        const double rest = (1.0 - fidelity) / 3.0;
        return {rest, fidelity, rest, rest};
    }
};

[[nodiscard]] inline TwoQubitDensity build_quasi_werner(const QuasiWernerSpec& spec) {
    const auto w = spec.weights();
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) {
        const auto psi = embed_qubit({static_cast<QBIndex>(i + 1), spec.kappa});
        rho += w[static_cast<std::size_t>(i)] * psi.density();
    }
    return TwoQubitDensity(rho);
}

/// Gram matrix of the weighted states sqrt(w_i)|Psi_i>; it shares its
/// nonzero eigenvalues with the mixture.
[[nodiscard]] inline Eigen::Matrix4d quasi_werner_gram(const QuasiWernerSpec& spec) {
    const auto w = spec.weights();
    const Eigen::Matrix4d g = gram_matrix(spec.kappa);
    Eigen::Matrix4d gw;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            gw(i, j) = std::sqrt(w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)]) * g(i, j);
    return gw;
}

/// {F, (1-F)/3, (1+D)(1-F)/3, (1-D)(1-F)/3}, sorted descending.
[[nodiscard]] inline Spectrum quasi_werner_spectrum(const QuasiWernerSpec& spec) {
    const double f = spec.fidelity;
    const double d = gram_offdiagonal(spec.kappa);
    const double rest = (1.0 - f) / 3.0;
    return Spectrum({f, rest, (1.0 + d) * rest, (1.0 - d) * rest});
}

/// The overlap <Psi2|W|Psi2> = F, reported as the fraction of the mixture.
[[nodiscard]] inline EntFraction quasi_werner_fraction(const QuasiWernerSpec& spec) {
    return EntFraction(spec.fidelity);
}

/// Entanglement of formation of the standard Werner state,
/// H(1/2 + sqrt(F(1-F))). Only valid for F >= 1/2; below that the Werner
/// state is separable and this expression no longer applies, so it throws.
[[nodiscard]] inline double werner_eof_reference(double fidelity) {
    if (!(fidelity >= 0.5 && fidelity <= 1.0))
        throw DomainError("Werner entanglement formula requires 1/2 <= F <= 1");
    return binary_entropy(std::min(1.0, 0.5 + std::sqrt(fidelity * (1.0 - fidelity))));
}

struct QuasiWernerReport {
    Spectrum spectrum;
    double fraction;           // F
    double numeric_fraction;   // numerical maximum over all maximally entangled states
    double eof_lower_bound;    // h[F]
    double eof_wootters;
};

/// Everything the CLI reports for one (F, kappa). The numeric fraction is
/// only known to satisfy numeric_fraction >= F.
[[nodiscard]] inline QuasiWernerReport quasi_werner_report(const QuasiWernerSpec& spec) {
    const TwoQubitDensity rho = build_quasi_werner(spec);
    const EntFraction f = quasi_werner_fraction(spec);
    return QuasiWernerReport{quasi_werner_spectrum(spec), f.value(),
                             fully_entangled_fraction(rho).value(), eof_lower_bound(f),
                             eof_wootters(rho)};
}

}  // namespace qbell
