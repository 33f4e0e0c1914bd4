#pragma once

// Value types shared by the closed-form modules and the Fock-space oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbell/error.hpp"

namespace qbell {

using cplx = std::complex<double>;

/// Real overlap <psi1|psi2> of the two nonorthogonal basis states, 0 <= kappa < 1.
class Overlap {
public:
    explicit Overlap(double kappa) : kappa_(kappa) {
        if (!std::isfinite(kappa)) throw DomainError("overlap must be finite");
        if (kappa < 0.0) throw DomainError("overlap must be >= 0");
        if (kappa >= 1.0) throw DomainError("overlap must be < 1");
    }

    /// Complex overlaps are outside the formalism; anything with a
    /// non-zero imaginary part is rejected instead of taking its modulus.
    static Overlap from_complex(cplx kappa) {
        if (kappa.imag() != 0.0) throw DomainError("overlap must be real");
        return Overlap(kappa.real());
    }

    [[nodiscard]] double value() const noexcept { return kappa_; }

private:
    double kappa_;
};

/// Which of the four quasi-Bell states.
///   psi1 ~ |1,2> + |2,1>     psi2 ~ |1,2> - |2,1>
///   psi3 ~ |1,1> + |2,2>     psi4 ~ |1,1> - |2,2>
enum class QBIndex : int { psi1 = 1, psi2 = 2, psi3 = 3, psi4 = 4 };

inline QBIndex qb_index_from_int(int i) {
    if (i < 1 || i > 4) throw DomainError("quasi-Bell index must be 1, 2, 3 or 4");
    return static_cast<QBIndex>(i);
}

[[nodiscard]] constexpr int to_int(QBIndex i) noexcept { return static_cast<int>(i); }

/// Indices 2 and 4 carry exactly one ebit for every overlap.
[[nodiscard]] constexpr bool is_maximally_entangled(QBIndex i) noexcept {
    return i == QBIndex::psi2 || i == QBIndex::psi4;
}

/// +1 for the symmetric combinations (1, 3), -1 for the antisymmetric ones (2, 4).
[[nodiscard]] constexpr double relative_sign(QBIndex i) noexcept {
    return is_maximally_entangled(i) ? -1.0 : 1.0;
}

struct QuasiBellSpec {
    QBIndex index;
    Overlap kappa;
};

/// Probability spectrum, sorted descending, summing to one.
class Spectrum {
public:
    static constexpr double sum_tolerance = 1e-12;

    explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw DomainError("spectrum must not be empty");
        double sum = 0.0;
        for (double v : values_) {
            if (!(v >= -sum_tolerance && v <= 1.0 + sum_tolerance))
                throw DomainError("spectrum entries must lie in [0, 1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > sum_tolerance) throw DomainError("spectrum must sum to 1");
        for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
        std::sort(values_.begin(), values_.end(), std::greater<>());
    }

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

/// Two-qubit pure state in the orthonormal |+>,|-> product basis, ordered
/// |++>, |+->, |-+>, |-->.
class TwoQubitPure {
public:
    static constexpr double norm_tolerance = 1e-12;

    explicit TwoQubitPure(const Eigen::Vector4cd& coeffs) : coeffs_(coeffs) {
        if (std::abs(coeffs_.squaredNorm() - 1.0) > norm_tolerance)
            throw DomainError("two-qubit state must be normalized");
    }

    [[nodiscard]] const Eigen::Vector4cd& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] cplx operator[](int i) const { return coeffs_(i); }

    [[nodiscard]] Eigen::Matrix4cd density() const { return coeffs_ * coeffs_.adjoint(); }

private:
    Eigen::Vector4cd coeffs_;
};

/// Validated two-qubit density matrix. The stored matrix is the Hermitian
/// part of the input; eigenvalues down to -eigen_floor are accepted and
/// treated as zero by consumers.
class TwoQubitDensity {
public:
    static constexpr double hermitian_tolerance = 1e-10;
    static constexpr double trace_tolerance = 1e-10;
    static constexpr double eigen_floor = 1e-12;

    explicit TwoQubitDensity(const Eigen::Matrix4cd& m) {
        if (!m.allFinite()) throw DomainError("density matrix must be finite");
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > hermitian_tolerance)
            throw DomainError("density matrix must be Hermitian");
        matrix_ = 0.5 * (m + m.adjoint());
        if (std::abs(matrix_.trace().real() - 1.0) > trace_tolerance)
            throw DomainError("density matrix must have unit trace");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(matrix_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -eigen_floor)
            throw DomainError("density matrix must be positive semidefinite");
    }

    static TwoQubitDensity from_pure(const TwoQubitPure& psi) { return TwoQubitDensity(psi.density()); }

    [[nodiscard]] const Eigen::Matrix4cd& matrix() const noexcept { return matrix_; }

    [[nodiscard]] double purity() const { return (matrix_ * matrix_).trace().real(); }

    /// Eigenvalues sorted descending, negatives clipped to zero.
    [[nodiscard]] Eigen::Vector4d eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(matrix_, Eigen::EigenvaluesOnly);
        Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).reverse();
        return ev;
    }

private:
    Eigen::Matrix4cd matrix_;
};

/// Fully entangled fraction, a value in [0, 1].
class EntFraction {
public:
    explicit EntFraction(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) throw DomainError("entangled fraction must lie in [0, 1]");
    }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double value_;
};

/// Quasi-Bell state built on coherent states: mode A uses {|alpha>, |-alpha>},
/// mode B uses {|beta>, |-beta>} with beta defaulting to alpha. Amplitudes are
/// real. A zero amplitude makes the two basis states identical and is rejected.
class CoherentQuasiBell {
public:
    CoherentQuasiBell(QBIndex index, double alpha, std::optional<double> beta = std::nullopt)
        : index_(index), alpha_(alpha), beta_(beta) {
        check_amplitude(alpha_, "alpha");
        if (beta_) check_amplitude(*beta_, "beta");
    }

    [[nodiscard]] QBIndex index() const noexcept { return index_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_.value_or(alpha_); }
    [[nodiscard]] bool symmetric() const noexcept { return !beta_ || *beta_ == alpha_; }

private:
    static void check_amplitude(double a, const char* name) {
        if (!std::isfinite(a)) throw DomainError(std::string(name) + " must be finite");
        // exp(-2 a^2) rounds to 1 below ~1e-8: the basis states coincide.
        if (std::exp(-2.0 * a * a) >= 1.0)
            throw DomainError(std::string(name) + " must be nonzero (overlap must be < 1)");
    }

    QBIndex index_;
    double alpha_;
    std::optional<double> beta_;
};

/// One product term sign * |amp_a>|amp_b> of an unnormalized coherent superposition.
struct CoherentTerm {
    double sign;
    double amp_a;
    double amp_b;
};

/// The two product terms of a coherent quasi-Bell state, before normalization.
[[nodiscard]] inline std::array<CoherentTerm, 2> superposition_terms(const CoherentQuasiBell& s) {
    const double a = s.alpha();
    const double b = s.beta();
    const double sign = relative_sign(s.index());
    switch (s.index()) {
        case QBIndex::psi1:
        case QBIndex::psi2:
            return {CoherentTerm{1.0, a, -b}, CoherentTerm{sign, -a, b}};
        case QBIndex::psi3:
        case QBIndex::psi4:
            break;
    }
    return {CoherentTerm{1.0, a, b}, CoherentTerm{sign, -a, -b}};
}

/// Phase-space arguments of the two-mode characteristic function.
struct CharFuncPoint {
    cplx zeta_a;
    cplx zeta_b;
};

}  // namespace qbell
