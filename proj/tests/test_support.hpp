#pragma once

// Independent reference computations shared by the tests. Nothing here calls
// the routine it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace qbell::testing {

using cplx = std::complex<double>;

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Gaussian via Box-Muller on the platform-independent uniform.
inline double gauss(std::mt19937_64& rng) {
    const double u1 = 1.0 - unit(rng);
    const double u2 = unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// G G^dag / Tr with complex Gaussian G of the given rank.
inline Eigen::Matrix4cd random_density(std::mt19937_64& rng, int rank = 4) {
    Eigen::MatrixXcd g(4, rank);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::Matrix4cd rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline Eigen::Matrix2cd random_unitary2(std::mt19937_64& rng) {
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<Eigen::Matrix2cd>(g).householderQ();
}

/// Singlet (|01> - |10>)/sqrt2.
inline Eigen::Vector4cd singlet() {
    const double r = std::numbers::sqrt2 / 2.0;
    return Eigen::Vector4cd(0.0, r, -r, 0.0);
}

/// F |singlet><singlet| + (1-F)/3 (I - |singlet><singlet|).
inline Eigen::Matrix4cd werner(double f) {
    const Eigen::Vector4cd s = singlet();
    const Eigen::Matrix4cd p = s * s.adjoint();
    return f * p + (1.0 - f) / 3.0 * (Eigen::Matrix4cd::Identity() - p);
}

/// Magic basis: every maximally entangled state is a global phase times a
/// real unit combination of these columns.
inline Eigen::Matrix4cd magic_basis() {
    using namespace std::complex_literals;
    const double r = std::numbers::sqrt2 / 2.0;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = r;       m(3, 0) = r;
    m(0, 1) = 1i * r;  m(3, 1) = -1i * r;
    m(1, 2) = 1i * r;  m(2, 2) = 1i * r;
    m(1, 3) = r;       m(2, 3) = -r;
    return m;
}

/// Fully entangled fraction as the top eigenvalue of Re(M^dag rho M).
inline double fef_magic(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd m = magic_basis();
    const Eigen::Matrix4d re = (m.adjoint() * rho * m).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (re + re.transpose()));
    return es.eigenvalues().maxCoeff();
}

/// Wootters concurrence from the eigenvalues of sqrt(rho) rho~ sqrt(rho).
inline double concurrence_hermitian(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sq = es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::Matrix4cd r = sq * tilde * sq;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> er(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    Eigen::Vector4d l = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(l.data(), l.data() + 4, std::greater<>());
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

/// Reduced state of the first qubit of c00|00> + c01|01> + c10|10> + c11|11>.
inline Eigen::Matrix2cd reduce_first(const Eigen::Vector4cd& c) {
    Eigen::Matrix2cd m;
    m << c(0), c(1), c(2), c(3);
    return m * m.adjoint();
}

inline Eigen::Vector2d eigen_desc(const Eigen::Matrix2cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

/// -p log2 p - (1-p) log2 (1-p) written out independently.
inline double h2(double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log2(p);
    if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
    return s;
}

/// <Psi2(beta)|rho_AB|Psi2(beta)> written as the product of the individual
/// coherent-state overlaps, in extended precision:
///   (1+L)(k1 k2 - k3 k4)^2 / (2 (1-kA^2)(1-k0^2)).
inline long double literal_fraction(long double alpha, long double eta, long double beta) {
    const long double g = std::sqrt(eta) * alpha;
    const long double l = std::exp(-2.0L * (1.0L - eta) * alpha * alpha);
    const long double ka = std::exp(-2.0L * alpha * alpha);
    const long double k0 = std::exp(-2.0L * beta * beta);
    const long double k1 = std::exp(-(alpha - beta) * (alpha - beta) / 2.0L);
    const long double k2 = std::exp(-(beta - g) * (beta - g) / 2.0L);
    const long double k3 = std::exp(-(alpha + beta) * (alpha + beta) / 2.0L);
    const long double k4 = std::exp(-(beta + g) * (beta + g) / 2.0L);
    const long double d = k1 * k2 - k3 * k4;
    return (1.0L + l) * d * d / (2.0L * (1.0L - ka * ka) * (1.0L - k0 * k0));
}

struct GridMax {
    long double x;
    long double value;
};

/// Dense grid on [lo, hi], then repeated zooms onto the bracket around the
/// best node until the bracket is narrower than width_tol.
template <class F>
GridMax grid_refine_argmax(F&& f, long double lo, long double hi, long double width_tol, int nodes = 401) {
    GridMax best{lo, f(lo)};
    for (int round = 0; round < 200 && hi - lo > width_tol; ++round) {
        const long double h = (hi - lo) / (nodes - 1);
        int arg = 0;
        best = {lo, f(lo)};
        for (int i = 1; i < nodes; ++i) {
            const long double x = lo + i * h;
            const long double v = f(x);
            if (v > best.value) best = {x, v}, arg = i;
        }
        const long double new_lo = arg > 0 ? lo + (arg - 1) * h : lo;
        const long double new_hi = arg < nodes - 1 ? lo + (arg + 1) * h : hi;
        lo = new_lo;
        hi = new_hi;
    }
    return best;
}

}  // namespace qbell::testing
