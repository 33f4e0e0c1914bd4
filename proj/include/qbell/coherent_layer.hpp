#pragma once

// Quasi-Bell states over the coherent states |alpha>, |-alpha> of a bosonic
// mode. Amplitudes are real; the overlap is kappa = <alpha|-alpha> = exp(-2 alpha^2).

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbell/ent_measures.hpp"
#include "qbell/qbell_core.hpp"
#include "qbell/types.hpp"

namespace qbell {

/// exp(-2 alpha^2); equals 1 at alpha = 0, where no quasi-Bell state exists.
[[nodiscard]] inline double overlap_of_amplitude(double alpha) noexcept { return std::exp(-2.0 * alpha * alpha); }

/// 1 - exp(-2 alpha^2) without cancellation at small alpha.
[[nodiscard]] inline double one_minus_overlap(double alpha) noexcept { return -std::expm1(-2.0 * alpha * alpha); }

/// The overlap as a validated Overlap; throws for alpha = 0.
[[nodiscard]] inline Overlap overlap_for(double alpha) { return Overlap(overlap_of_amplitude(alpha)); }

/// Abstract description of a symmetric coherent quasi-Bell state.
[[nodiscard]] inline QuasiBellSpec abstract_spec(const CoherentQuasiBell& s) {
    if (!s.symmetric()) throw DomainError("abstract description requires equal mode amplitudes");
    return {s.index(), overlap_for(s.alpha())};
}

/// Mean photon number of each reduced state (equal for both modes):
/// (1-k^2)/(1+k^2) alpha^2 for indices 1, 3 and (1+k^2)/(1-k^2) alpha^2 for 2, 4.
[[nodiscard]] inline std::pair<double, double> mean_photon_numbers(const CoherentQuasiBell& s) {
    if (!s.symmetric()) throw DomainError("mean photon numbers require equal mode amplitudes");
    const double a2 = s.alpha() * s.alpha();
    const double k2 = std::exp(-4.0 * a2);
    const double one_minus_k2 = -std::expm1(-4.0 * a2);
    const double n = is_maximally_entangled(s.index()) ? (1.0 + k2) / one_minus_k2 * a2
                                                       : one_minus_k2 / (1.0 + k2) * a2;
    return {n, n};
}

namespace detail {

/// log of <g| e^{z a^dag} e^{-z* a} |d> for real coherent amplitudes g, d.
[[nodiscard]] inline cplx log_normal_ordered_element(double g, double d, cplx z) {
    return -0.5 * (g - d) * (g - d) + z * g - std::conj(z) * d;
}

}  // namespace detail

/// Symmetrically ordered characteristic function
///   C = Tr[rho e^{za a^dag} e^{-za* a} e^{zb b^dag} e^{-zb* b}] e^{-(|za|^2 + |zb|^2)/2},
/// evaluated from the coherent-state matrix elements of every dyad in rho.
[[nodiscard]] inline cplx characteristic_function(const CoherentQuasiBell& s, const CharFuncPoint& p) {
    const auto terms = superposition_terms(s);
    double norm2 = 0.0;
    cplx acc = 0.0;
    const cplx damping = -0.5 * (std::norm(p.zeta_a) + std::norm(p.zeta_b));
    for (const auto& tj : terms) {
        for (const auto& tk : terms) {
            const double w = tj.sign * tk.sign;
            const double ga = tk.amp_a - tj.amp_a;
            const double gb = tk.amp_b - tj.amp_b;
            norm2 += w * std::exp(-0.5 * (ga * ga + gb * gb));
            acc += w * std::exp(detail::log_normal_ordered_element(tk.amp_a, tj.amp_a, p.zeta_a) +
                                detail::log_normal_ordered_element(tk.amp_b, tj.amp_b, p.zeta_b) + damping);
        }
    }
    return acc / norm2;
}

struct WitnessOptions {
    int sample_count = 128;
    double radius = 2.0;
    double exclusion = 1e-8;  // |C| below this is too close to a node to take a log
    std::uint64_t seed = 0xc0ffee11ULL;
};

/// Deterministic sample of phase-space points: the first half on the real
/// axes, the rest with imaginary components, all inside [-r, r] per coordinate.
[[nodiscard]] inline std::vector<CharFuncPoint> witness_points(const WitnessOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    auto u = [&] { return opt.radius * (2.0 * detail::unit_uniform(rng) - 1.0); };
    std::vector<CharFuncPoint> pts;
    pts.reserve(static_cast<std::size_t>(opt.sample_count));
    const int real_half = opt.sample_count / 2;
    for (int i = 0; i < opt.sample_count; ++i) {
        if (i < real_half) {
            const double xa = u();
            const double xb = u();
            pts.push_back({cplx(xa, 0.0), cplx(xb, 0.0)});
        } else {
            const double xa = u();
            const double ya = u();
            const double xb = u();
            const double yb = u();
            pts.push_back({cplx(xa, ya), cplx(xb, yb)});
        }
    }
    return pts;
}

/// Distance from Gaussianity: fit log|C| at the sample points with the
/// closest quadratic polynomial in (Re za, Im za, Re zb, Im zb) and return the
/// largest absolute residual. For a Gaussian state log|C| is exactly
/// quadratic, so the residual sits at rounding level.
template <class CharFn>
    requires std::invocable<CharFn&, const CharFuncPoint&>
[[nodiscard]] double gaussianity_witness(CharFn&& charfn, const WitnessOptions& opt = {}) {
    constexpr int n_basis = 15;
    std::vector<std::array<double, 4>> coords;
    std::vector<double> targets;
    for (const auto& p : witness_points(opt)) {
        const double mag = std::abs(charfn(p));
        if (!(mag > opt.exclusion)) continue;
        coords.push_back({p.zeta_a.real(), p.zeta_a.imag(), p.zeta_b.real(), p.zeta_b.imag()});
        targets.push_back(std::log(mag));
    }
    if (static_cast<int>(coords.size()) < 2 * n_basis)
        throw DomainError("too few usable sample points for the quadratic fit");

    const auto rows = static_cast<Eigen::Index>(coords.size());
    Eigen::MatrixXd design(rows, n_basis);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& x = coords[static_cast<std::size_t>(r)];
        int c = 0;
        design(r, c++) = 1.0;
        for (int i = 0; i < 4; ++i) design(r, c++) = x[static_cast<std::size_t>(i)];
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                design(r, c++) = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        rhs(r) = targets[static_cast<std::size_t>(r)];
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    return (design * coef - rhs).cwiseAbs().maxCoeff();
}

[[nodiscard]] inline double gaussianity_witness(const CoherentQuasiBell& s, const WitnessOptions& opt = {}) {
    return gaussianity_witness([&s](const CharFuncPoint& p) { return characteristic_function(s, p); }, opt);
}

/// Reduced spectrum of |Psi_2> or |Psi_4> when mode A uses +-alpha and mode B
/// uses +-beta: (1+kA)(1-kB)/(2(1-kA kB)) and (1-kA)(1+kB)/(2(1-kA kB)).
[[nodiscard]] inline Spectrum asymmetric_spectrum(double alpha, double beta, QBIndex index) {
    if (!is_maximally_entangled(index)) throw DomainError("asymmetric spectrum is defined for indices 2 and 4");
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("amplitudes must be finite");
    const double one_minus_ab = -std::expm1(-2.0 * (alpha * alpha + beta * beta));
    if (!(one_minus_ab > 0.0)) throw DomainError("amplitudes must not both be zero (overlap must be < 1)");
    const double one_minus_a = one_minus_overlap(alpha);
    const double one_minus_b = one_minus_overlap(beta);
    const double one_plus_a = 1.0 + overlap_of_amplitude(alpha);
    const double one_plus_b = 1.0 + overlap_of_amplitude(beta);
    return Spectrum({one_plus_a * one_minus_b / (2.0 * one_minus_ab),
                     one_minus_a * one_plus_b / (2.0 * one_minus_ab)});
}

}  // namespace qbell
