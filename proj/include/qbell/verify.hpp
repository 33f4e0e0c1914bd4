#pragma once

// Closed-form results checked against the truncated Fock-space oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbell/coherent_layer.hpp"
#include "qbell/decoherence.hpp"
#include "qbell/fock_oracle.hpp"
#include "qbell/qbell_core.hpp"
#include "qbell/quasi_werner.hpp"

namespace qbell::verify {

struct CheckResult {
    std::string name;
    double max_deviation;
    double tolerance;
    bool passed;
};

struct VerifyOptions {
    std::optional<int> truncation;  // overrides the truncation rule; still checked for adequacy
    double tolerance = 1e-9;
    double alpha_max = 3.0;
};

namespace detail {

/// Amplitude grid {0.1, 0.5, 1, 2, 3} clipped to alpha_max, always ending at alpha_max.
[[nodiscard]] inline std::vector<double> amplitude_grid(double alpha_max) {
    std::vector<double> out;
    for (double a : {0.1, 0.5, 1.0, 2.0, 3.0})
        if (a < alpha_max) out.push_back(a);
    out.push_back(alpha_max);
    return out;
}

class Runner {
public:
    explicit Runner(const VerifyOptions& opt) : opt_(opt) {}

    /// Truncation for amplitude alpha; a user-supplied value must still satisfy the rule.
    [[nodiscard]] int truncation_for(double alpha) const {
        const int n = opt_.truncation.value_or(fock::required_truncation(alpha));
        fock::check_truncation(alpha, n, false);
        return n;
    }

    void add(std::string name, double deviation) {
        const bool ok = std::isfinite(deviation) && deviation <= opt_.tolerance;
        results_.push_back({std::move(name), deviation, opt_.tolerance, ok});
    }

    [[nodiscard]] std::vector<CheckResult> take() { return std::move(results_); }

private:
    VerifyOptions opt_;
    std::vector<CheckResult> results_;
};

[[nodiscard]] inline double spectrum_deviation(const Spectrum& closed, const Eigen::VectorXd& numeric) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < numeric.size(); ++i) {
        const double c = static_cast<std::size_t>(i) < closed.size() ? closed[static_cast<std::size_t>(i)] : 0.0;
        dev = std::max(dev, std::abs(c - numeric(i)));
    }
    return dev;
}

}  // namespace detail

/// Runs every comparison. Throws TruncationError before any work when the
/// requested truncation is inadequate for alpha_max.
[[nodiscard]] inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
    if (!(opt.alpha_max > 0.0 && std::isfinite(opt.alpha_max))) throw DomainError("alpha_max must be > 0");
    if (!(opt.tolerance > 0.0)) throw DomainError("tolerance must be > 0");
    detail::Runner run(opt);
    (void)run.truncation_for(opt.alpha_max);

    const auto alphas = detail::amplitude_grid(opt.alpha_max);
    constexpr QBIndex indices[] = {QBIndex::psi1, QBIndex::psi2, QBIndex::psi3, QBIndex::psi4};

    double spec_dev = 0.0, ent_dev = 0.0, photon_dev = 0.0, gram_dev = 0.0;
    for (double a : alphas) {
        const int n = run.truncation_for(a);
        std::vector<fock::FockVector> states;
        for (QBIndex idx : indices) {
            const CoherentQuasiBell s(idx, a);
            const auto v = fock::build_quasi_bell_fock(s, n);
            const auto rho_a = fock::partial_trace(v, {0});
            const auto rho_b = fock::partial_trace(v, {1});
            const auto spec = reduced_spectrum(abstract_spec(s));
            spec_dev = std::max({spec_dev, detail::spectrum_deviation(spec, fock::spectrum(rho_a)),
                                 detail::spectrum_deviation(spec, fock::spectrum(rho_b))});
            ent_dev = std::max(ent_dev, std::abs(entropy_of_entanglement(abstract_spec(s)) -
                                                 fock::von_neumann_entropy(rho_a)));
            const auto [na, nb] = mean_photon_numbers(s);
            photon_dev = std::max({photon_dev, std::abs(na - fock::mean_photon_number(rho_a)),
                                   std::abs(nb - fock::mean_photon_number(rho_b))});
            states.push_back(v);
        }
        Eigen::Matrix4d gram;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                gram(i, j) = std::abs(states[static_cast<std::size_t>(i)].amplitudes.dot(
                    states[static_cast<std::size_t>(j)].amplitudes));
        gram_dev = std::max(gram_dev, (gram - gram_matrix(overlap_for(a))).cwiseAbs().maxCoeff());
    }
    run.add("reduced_spectrum", spec_dev);
    run.add("entropy_of_entanglement", ent_dev);
    run.add("mean_photon_numbers", photon_dev);
    run.add("gram_matrix", gram_dev);

    {
        double dev = 0.0;
        const double pairs[][2] = {{0.3, 0.8}, {1.0, 0.5}, {0.7, 1.4}, {1.2, 0.2}};
        for (const auto& p : pairs) {
            const double a = std::min(p[0], opt.alpha_max);
            const double b = std::min(p[1], opt.alpha_max);
            const int n = run.truncation_for(std::max(a, b));
            for (QBIndex idx : {QBIndex::psi2, QBIndex::psi4}) {
                const auto v = fock::build_quasi_bell_fock(CoherentQuasiBell(idx, a, b), n);
                dev = std::max(dev, detail::spectrum_deviation(asymmetric_spectrum(a, b, idx),
                                                               fock::spectrum(fock::partial_trace(v, {0}))));
            }
        }
        run.add("asymmetric_spectrum", dev);
    }

    {
        double dev = 0.0;
        const double a = std::min(1.0, opt.alpha_max);
        const int n = run.truncation_for(a);
        const CharFuncPoint pts[] = {{{0.0, 0.0}, {0.0, 0.0}},
                                     {{0.0, 0.3}, {0.0, 0.0}},
                                     {{0.4, -0.2}, {-0.1, 0.5}},
                                     {{1.1, 0.0}, {0.0, -0.7}}};
        for (QBIndex idx : indices) {
            const CoherentQuasiBell s(idx, a);
            const auto v = fock::build_quasi_bell_fock(s, n);
            for (const auto& p : pts)
                dev = std::max(dev, std::abs(characteristic_function(s, p) - fock::operator_trace_charfunc(v, p)));
        }
        run.add("characteristic_function", dev);
    }

    {
        double rho_dev = 0.0, f_dev = 0.0, bs_dev = 0.0;
        for (double a : alphas) {
            const int n = run.truncation_for(a);
            for (double eta : {0.1, 0.5, 0.9}) {
                const fock::BeamSplitter bs(n, eta);
                const auto out = bs.apply(fock::tensor(fock::coherent_vector(a, n), fock::vacuum(n)), 0, 1);
                const auto expected = fock::tensor(fock::coherent_vector(std::sqrt(eta) * a, n, true),
                                                   fock::coherent_vector(std::sqrt(1.0 - eta) * a, n, true));
                bs_dev = std::max(bs_dev, 1.0 - std::norm(expected.amplitudes.dot(out.amplitudes)));

                const auto abe = fock::lossy_quasi_bell(a, bs);
                const auto state = apply_loss(a, LossChannel(eta));
                const auto rho = fock::reduced_in_plus_minus_basis(abe, a, std::sqrt(eta) * a);
                rho_dev = std::max(rho_dev, (rho - state.rho.matrix()).cwiseAbs().maxCoeff());
                for (double beta : {0.5 * a, 0.5 * a * (1.0 + std::sqrt(eta)), a})
                    f_dev = std::max(f_dev, std::abs(fraction_over_family(state, beta) - fock::family_overlap(abe, beta)));
            }
        }
        run.add("beam_splitter_fidelity", bs_dev);
        run.add("decohered_density", rho_dev);
        run.add("fraction_over_family", f_dev);
    }

    {
        double dev = 0.0;
        for (double f : {0.0, 0.3, 0.7, 1.0})
            for (double k : {0.0, 0.4, 0.9}) {
                const QuasiWernerSpec spec(f, Overlap(k));
                const Eigen::Vector4d ev = build_quasi_werner(spec).eigenvalues();
                const auto closed = quasi_werner_spectrum(spec);
                for (int i = 0; i < 4; ++i) dev = std::max(dev, std::abs(ev(i) - closed[static_cast<std::size_t>(i)]));
            }
        run.add("quasi_werner_spectrum", dev);
    }
    return run.take();
}

[[nodiscard]] inline bool all_passed(const std::vector<CheckResult>& r) {
    return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace qbell::verify
