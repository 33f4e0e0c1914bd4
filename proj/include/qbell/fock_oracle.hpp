#pragma once

// Brute-force verifier in a truncated photon-number basis. Nothing here calls
// the closed-form modules: states are built from explicit Fock amplitudes,
// the loss channel is an exponentiated beam-splitter generator, and reduced
// states come from numeric partial traces.
//
// Multi-mode amplitudes are stored row-major with mode 0 most significant:
// flat = sum_m n_m * (N+1)^(modes-1-m).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbell/error.hpp"
#include "qbell/types.hpp"

namespace qbell::fock {

struct FockVector {
    int modes = 1;
    int truncation = 0;  // highest photon number kept per mode
    Eigen::VectorXcd amplitudes;

    [[nodiscard]] int dim() const noexcept { return truncation + 1; }
    [[nodiscard]] double norm() const { return amplitudes.norm(); }
    [[nodiscard]] FockVector normalized() const {
        FockVector out = *this;
        out.amplitudes /= norm();
        return out;
    }
};

struct FockDensity {
    int modes = 1;
    int truncation = 0;
    Eigen::MatrixXcd matrix;

    [[nodiscard]] int dim() const noexcept { return truncation + 1; }
};

/// ceil(alpha^2 + 10 sqrt(alpha^2 + 1) + 20): keeps the Poisson tail of a
/// coherent state of amplitude alpha below 1e-12 up to alpha = 3.
[[nodiscard]] inline int required_truncation(double alpha) {
    const double a2 = alpha * alpha;
    return static_cast<int>(std::ceil(a2 + 10.0 * std::sqrt(a2 + 1.0) + 20.0));
}

inline void check_truncation(double alpha, int truncation, bool override_rule) {
    if (truncation < 1) throw TruncationError("truncation must be >= 1");
    if (!override_rule && truncation < required_truncation(alpha))
        throw TruncationError("truncation " + std::to_string(truncation) + " is too small for amplitude " +
                              std::to_string(alpha) + "; need at least " +
                              std::to_string(required_truncation(alpha)));
}

namespace detail {

[[nodiscard]] inline long long ipow(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

[[nodiscard]] inline long long stride(int dim, int modes, int mode) { return ipow(dim, modes - 1 - mode); }

[[nodiscard]] inline int digit(long long flat, int dim, int modes, int mode) {
    return static_cast<int>((flat / stride(dim, modes, mode)) % dim);
}

}  // namespace detail

[[nodiscard]] inline FockVector coherent_vector(double alpha, int truncation, bool override_rule = false) {
    check_truncation(alpha, truncation, override_rule);
    FockVector v{1, truncation, Eigen::VectorXcd(truncation + 1)};
    double c = std::exp(-0.5 * alpha * alpha);
    v.amplitudes(0) = c;
    for (int n = 1; n <= truncation; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n));
        v.amplitudes(n) = c;
    }
    return v;
}

[[nodiscard]] inline FockVector vacuum(int truncation) { return coherent_vector(0.0, truncation, true); }

/// Tensor product; both factors must share a truncation.
[[nodiscard]] inline FockVector tensor(const FockVector& a, const FockVector& b) {
    if (a.truncation != b.truncation) throw DomainError("tensor factors must share a truncation");
    FockVector out{a.modes + b.modes, a.truncation, Eigen::VectorXcd(a.amplitudes.size() * b.amplitudes.size())};
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
        out.amplitudes.segment(i * b.amplitudes.size(), b.amplitudes.size()) = a.amplitudes(i) * b.amplitudes;
    return out;
}

/// Probability carried by basis states in which some mode sits within the
/// top `levels` photon numbers of the truncation.
[[nodiscard]] inline double tail_mass(const FockVector& v, int levels) {
    const int d = v.dim();
    const int cut = std::max(0, v.truncation + 1 - levels);
    double mass = 0.0;
    for (Eigen::Index flat = 0; flat < v.amplitudes.size(); ++flat) {
        for (int m = 0; m < v.modes; ++m) {
            if (detail::digit(flat, d, v.modes, m) >= cut) {
                mass += std::norm(v.amplitudes(flat));
                break;
            }
        }
    }
    return mass;
}

/// Two-mode coherent quasi-Bell state. The squared norm of the unnormalized
/// superposition must equal 2(1 +- exp(-2 alpha^2) exp(-2 beta^2)) to 1e-10,
/// otherwise the truncation has cut off real probability.
[[nodiscard]] inline FockVector build_quasi_bell_fock(const CoherentQuasiBell& s, int truncation,
                                                      bool override_rule = false) {
    check_truncation(std::max(std::abs(s.alpha()), std::abs(s.beta())), truncation, override_rule);
    FockVector sum{2, truncation, Eigen::VectorXcd::Zero((truncation + 1) * (truncation + 1))};
    for (const auto& t : superposition_terms(s)) {
        const FockVector term =
            tensor(coherent_vector(t.amp_a, truncation, true), coherent_vector(t.amp_b, truncation, true));
        sum.amplitudes += t.sign * term.amplitudes;
    }
    const double cross = std::exp(-2.0 * s.alpha() * s.alpha()) * std::exp(-2.0 * s.beta() * s.beta());
    const double expected = 2.0 * (1.0 + relative_sign(s.index()) * cross);
    const double got = sum.amplitudes.squaredNorm();
    if (std::abs(got - expected) > 1e-10)
        throw TruncationError("quasi-Bell norm check failed at truncation " + std::to_string(truncation) +
                              " (|norm^2 - expected| = " + std::to_string(std::abs(got - expected)) + ")");
    return sum.normalized();
}

/// Block of exp(theta (b e^dag - b^dag e)) on the states |k, n-k> with fixed
/// total photon number n, k running from k_lo upward.
[[nodiscard]] inline Eigen::MatrixXd beam_splitter_block(int n, int truncation, double theta) {
    const int k_lo = std::max(0, n - truncation);
    const int k_hi = std::min(n, truncation);
    const int size = k_hi - k_lo + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (int k = k_lo; k < k_hi; ++k) {
        const int i = k - k_lo;
        const double c = theta * std::sqrt(static_cast<double>(k + 1) * (n - k));
        gen(i + 1, i) = -c;
        gen(i, i + 1) = c;
    }
    return gen.exp();
}

/// Half-mirror loss coupling one mode to an environment mode; coherent
/// inputs map as |x>|0> -> |sqrt(eta) x>|sqrt(1-eta) x>. The generator
/// conserves the total photon number of the pair, so it is exponentiated one
/// block at a time and the blocks are kept for reuse. Blocks with
/// n > truncation are incomplete; input probability in them must stay below
/// `tail_tolerance`.
class BeamSplitter {
public:
    BeamSplitter(int truncation, double eta) : truncation_(truncation), eta_(eta) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity eta must lie in [0, 1]");
        if (truncation < 0) throw DomainError("truncation must be >= 0");
        const double theta = std::acos(std::sqrt(eta));
        blocks_.reserve(static_cast<std::size_t>(2 * truncation + 1));
        for (int n = 0; n <= 2 * truncation; ++n)
            blocks_.push_back(beam_splitter_block(n, truncation, theta).cast<cplx>());
    }

    [[nodiscard]] int truncation() const noexcept { return truncation_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }

    [[nodiscard]] FockVector apply(const FockVector& v, int mode_b, int mode_e,
                                   double tail_tolerance = 1e-20) const {
        if (v.truncation != truncation_) throw DomainError("beam splitter built for a different truncation");
        if (mode_b == mode_e || mode_b < 0 || mode_e < 0 || mode_b >= v.modes || mode_e >= v.modes)
            throw DomainError("beam splitter needs two distinct existing modes");
        const int d = v.dim();
        const int trunc = truncation_;
        const long long sb = detail::stride(d, v.modes, mode_b);
        const long long se = detail::stride(d, v.modes, mode_e);

        double overflow = 0.0;
        for (Eigen::Index flat = 0; flat < v.amplitudes.size(); ++flat)
            if (detail::digit(flat, d, v.modes, mode_b) + detail::digit(flat, d, v.modes, mode_e) > trunc)
                overflow += std::norm(v.amplitudes(flat));
        if (overflow > tail_tolerance)
            throw TruncationError("beam splitter input has probability " + std::to_string(overflow) +
                                  " beyond the truncation; increase the truncation");

        FockVector out{v.modes, trunc, Eigen::VectorXcd::Zero(v.amplitudes.size())};
        Eigen::VectorXcd in_block;
        for (Eigen::Index base = 0; base < v.amplitudes.size(); ++base) {
            if (detail::digit(base, d, v.modes, mode_b) != 0 || detail::digit(base, d, v.modes, mode_e) != 0)
                continue;
            for (int n = 0; n <= 2 * trunc; ++n) {
                const int k_lo = std::max(0, n - trunc);
                const int k_hi = std::min(n, trunc);
                in_block.resize(k_hi - k_lo + 1);
                for (int k = k_lo; k <= k_hi; ++k) in_block(k - k_lo) = v.amplitudes(base + k * sb + (n - k) * se);
                const Eigen::VectorXcd out_block = blocks_[static_cast<std::size_t>(n)] * in_block;
                for (int k = k_lo; k <= k_hi; ++k) out.amplitudes(base + k * sb + (n - k) * se) = out_block(k - k_lo);
            }
        }
        return out;
    }

private:
    int truncation_;
    double eta_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

[[nodiscard]] inline FockVector beam_splitter(const FockVector& v, int mode_b, int mode_e, double eta) {
    return BeamSplitter(v.truncation, eta).apply(v, mode_b, mode_e);
}

/// Two-mode form: mode 0 is the transmitted mode, mode 1 the environment.
[[nodiscard]] inline FockVector beam_splitter(const FockVector& v, double eta) {
    if (v.modes != 2) throw DomainError("two-mode beam splitter expects a two-mode vector");
    return beam_splitter(v, 0, 1, eta);
}

/// Reduced state on the modes in `keep` (listed in increasing order).
[[nodiscard]] inline FockDensity partial_trace(const FockVector& v, const std::vector<int>& keep) {
    const int d = v.dim();
    std::vector<bool> kept(static_cast<std::size_t>(v.modes), false);
    for (int m : keep) {
        if (m < 0 || m >= v.modes) throw DomainError("partial trace: mode out of range");
        kept[static_cast<std::size_t>(m)] = true;
    }
    const auto n_keep = static_cast<int>(keep.size());
    const long long keep_dim = detail::ipow(d, n_keep);
    const long long trace_dim = detail::ipow(d, v.modes - n_keep);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(keep_dim, trace_dim);
    for (Eigen::Index flat = 0; flat < v.amplitudes.size(); ++flat) {
        long long ki = 0;
        long long ti = 0;
        for (int mode = 0; mode < v.modes; ++mode) {
            const int n = detail::digit(flat, d, v.modes, mode);
            if (kept[static_cast<std::size_t>(mode)]) ki = ki * d + n;
            else ti = ti * d + n;
        }
        m(ki, ti) = v.amplitudes(flat);
    }
    return FockDensity{n_keep, v.truncation, m * m.adjoint()};
}

/// Reduced state of a mixed multi-mode density on the modes in `keep`.
[[nodiscard]] inline FockDensity partial_trace(const FockDensity& rho, const std::vector<int>& keep) {
    const int d = rho.dim();
    std::vector<bool> kept(static_cast<std::size_t>(rho.modes), false);
    for (int m : keep) {
        if (m < 0 || m >= rho.modes) throw DomainError("partial trace: mode out of range");
        kept[static_cast<std::size_t>(m)] = true;
    }
    const auto n_keep = static_cast<int>(keep.size());
    const long long keep_dim = detail::ipow(d, n_keep);
    const Eigen::Index total = rho.matrix.rows();

    std::vector<long long> kidx(static_cast<std::size_t>(total));
    std::vector<long long> tidx(static_cast<std::size_t>(total));
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        long long ki = 0;
        long long ti = 0;
        for (int mode = 0; mode < rho.modes; ++mode) {
            const int n = detail::digit(flat, d, rho.modes, mode);
            if (kept[static_cast<std::size_t>(mode)]) ki = ki * d + n;
            else ti = ti * d + n;
        }
        kidx[static_cast<std::size_t>(flat)] = ki;
        tidx[static_cast<std::size_t>(flat)] = ti;
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep_dim, keep_dim);
    for (Eigen::Index i = 0; i < total; ++i)
        for (Eigen::Index j = 0; j < total; ++j)
            if (tidx[static_cast<std::size_t>(i)] == tidx[static_cast<std::size_t>(j)])
                out(kidx[static_cast<std::size_t>(i)], kidx[static_cast<std::size_t>(j)]) += rho.matrix(i, j);
    return FockDensity{n_keep, rho.truncation, out};
}

[[nodiscard]] inline FockDensity density(const FockVector& v) {
    return FockDensity{v.modes, v.truncation, v.amplitudes * v.amplitudes.adjoint()};
}

/// Eigenvalues, sorted descending.
[[nodiscard]] inline Eigen::VectorXd spectrum(const FockDensity& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

/// -sum lambda log2 lambda over eigenvalues above 1e-14.
[[nodiscard]] inline double von_neumann_entropy(const FockDensity& rho) {
    const Eigen::VectorXd ev = spectrum(rho);
    double s = 0.0;
    for (double l : ev)
        if (l > 1e-14) s -= l * std::log2(l);
    return s;
}

/// Tr(rho n) for a single-mode density.
[[nodiscard]] inline double mean_photon_number(const FockDensity& rho) {
    if (rho.modes != 1) throw DomainError("mean photon number expects a single-mode density");
    double n = 0.0;
    for (int k = 0; k < rho.dim(); ++k) n += k * rho.matrix(k, k).real();
    return n;
}

/// Apply the bra <bra| to one mode, leaving a vector on the remaining modes.
[[nodiscard]] inline FockVector contract(const FockVector& v, int mode, const FockVector& bra) {
    if (bra.modes != 1 || bra.truncation != v.truncation) throw DomainError("contract: bra must be single-mode");
    if (mode < 0 || mode >= v.modes || v.modes < 2) throw DomainError("contract: mode out of range");
    const int d = v.dim();
    FockVector out{v.modes - 1, v.truncation, Eigen::VectorXcd::Zero(v.amplitudes.size() / d)};
    for (Eigen::Index flat = 0; flat < v.amplitudes.size(); ++flat) {
        long long rest = 0;
        int n_mode = 0;
        for (int m = 0; m < v.modes; ++m) {
            const int n = detail::digit(flat, d, v.modes, m);
            if (m == mode) n_mode = n;
            else rest = rest * d + n;
        }
        out.amplitudes(rest) += std::conj(bra.amplitudes(n_mode)) * v.amplitudes(flat);
    }
    return out;
}

/// e^{z a^dag} e^{-z* a} on the truncated space. Both factors are
/// exponentials of nilpotent matrices, so their series terminate and every
/// element with row, column <= truncation is exact.
[[nodiscard]] inline Eigen::MatrixXcd normal_ordered_displacement(cplx z, int truncation) {
    const int d = truncation + 1;
    Eigen::MatrixXcd create = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) create(n, n - 1) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd annihilate = create.transpose();

    auto nilpotent_exp = [d](const Eigen::MatrixXcd& x) {
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(d, d);
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
        for (int k = 1; k < d; ++k) {
            term = (term * x) / static_cast<double>(k);
            sum += term;
        }
        return sum;
    };
    return nilpotent_exp(z * create) * nilpotent_exp(-std::conj(z) * annihilate);
}

/// Characteristic function of a two-mode pure state as an explicit operator
/// trace, Tr[rho X_a x X_b] e^{-(|za|^2 + |zb|^2)/2}.
[[nodiscard]] inline cplx operator_trace_charfunc(const FockVector& v, const CharFuncPoint& p) {
    if (v.modes != 2) throw DomainError("characteristic function trace expects a two-mode vector");
    const double tail = tail_mass(v, 5);
    if (tail > 1e-12)
        throw TruncationError("state has probability " + std::to_string(tail) +
                              " near the truncation edge; increase the truncation");
    const int d = v.dim();
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> amp(
        v.amplitudes.data(), d, d);
    const Eigen::MatrixXcd xa = normal_ordered_displacement(p.zeta_a, v.truncation);
    const Eigen::MatrixXcd xb = normal_ordered_displacement(p.zeta_b, v.truncation);
    const Eigen::MatrixXcd applied = xa * amp * xb.transpose();
    const cplx tr = (amp.conjugate().cwiseProduct(applied)).sum();
    return tr * std::exp(-0.5 * (std::norm(p.zeta_a) + std::norm(p.zeta_b)));
}

/// Orthonormal (|+>, |->) with |+-> proportional to |x> +- |-x>. At x = 0
/// the |-> vector vanishes and is returned as zero.
[[nodiscard]] inline std::pair<FockVector, FockVector> plus_minus_basis(double x, int truncation) {
    const FockVector p = coherent_vector(x, truncation, true);
    const FockVector m = coherent_vector(-x, truncation, true);
    FockVector plus{1, truncation, p.amplitudes + m.amplitudes};
    FockVector minus{1, truncation, p.amplitudes - m.amplitudes};
    plus = plus.normalized();
    if (minus.norm() > 0.0) minus = minus.normalized();
    return {plus, minus};
}

/// |Psi2(alpha)>_AB |0>_E after the half mirror acts on (B, E): modes A, B, E.
[[nodiscard]] inline FockVector lossy_quasi_bell(double alpha, const BeamSplitter& channel,
                                                 bool override_rule = false) {
    const int trunc = channel.truncation();
    const FockVector ab = build_quasi_bell_fock(CoherentQuasiBell(QBIndex::psi2, alpha), trunc, override_rule);
    return channel.apply(tensor(ab, vacuum(trunc)), 1, 2);
}

[[nodiscard]] inline FockVector lossy_quasi_bell(double alpha, double eta, int truncation,
                                                 bool override_rule = false) {
    return lossy_quasi_bell(alpha, BeamSplitter(truncation, eta), override_rule);
}

/// <Psi2(beta)| rho_AB |Psi2(beta)> for the three-mode output of
/// lossy_quasi_bell: the squared norm of the partial inner product with
/// |Psi2(beta)> on (A, B). The probe is built and normalized at a truncation
/// adequate for beta; only its components inside the state's truncation
/// contribute.
[[nodiscard]] inline double family_overlap(const FockVector& abe, double beta) {
    if (abe.modes != 3) throw DomainError("family overlap expects the three-mode (A, B, E) vector");
    const int probe_trunc = std::max(abe.truncation, required_truncation(beta));
    const FockVector probe = build_quasi_bell_fock(CoherentQuasiBell(QBIndex::psi2, beta), probe_trunc);
    const int d = abe.dim();
    const int pd = probe.dim();
    Eigen::VectorXcd env = Eigen::VectorXcd::Zero(d);
    for (Eigen::Index flat = 0; flat < abe.amplitudes.size(); ++flat) {
        const Eigen::Index ab = flat / d;
        const Eigen::Index na = ab / d;
        const Eigen::Index nb = ab % d;
        env(flat % d) += std::conj(probe.amplitudes(na * pd + nb)) * abe.amplitudes(flat);
    }
    return env.squaredNorm();
}

/// rho_AB of the three-mode output projected onto the |+->_A x |+->_B basis
/// built from +-alpha on A and +-sqrt(eta) alpha on B, ordered |++>, |+->, |-+>, |-->.
[[nodiscard]] inline Eigen::Matrix4cd reduced_in_plus_minus_basis(const FockVector& abe, double alpha_a,
                                                                  double alpha_b) {
    const auto [pa, ma] = plus_minus_basis(alpha_a, abe.truncation);
    const auto [pb, mb] = plus_minus_basis(alpha_b, abe.truncation);
    const FockVector* basis_a[2] = {&pa, &ma};
    const FockVector* basis_b[2] = {&pb, &mb};
    std::vector<Eigen::VectorXcd> env;
    for (const auto* a : basis_a)
        for (const auto* b : basis_b) env.push_back(contract(contract(abe, 0, *a), 0, *b).amplitudes);
    Eigen::Matrix4cd rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho(i, j) = env[static_cast<std::size_t>(j)].dot(env[static_cast<std::size_t>(i)]);
    return rho;
}

}  // namespace qbell::fock
