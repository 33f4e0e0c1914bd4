// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qbell/coherent_layer.hpp"
#include "qbell/decoherence.hpp"
#include "qbell/fock_oracle.hpp"
#include "qbell/qbell_core.hpp"
#include "qbell/quasi_werner.hpp"
#include "qbell/report.hpp"
#include "test_support.hpp"

#ifndef QBELL_CLI_PATH
#error "QBELL_CLI_PATH must point at the qbell executable"
#endif

using namespace qbell;
namespace qt = qbell::testing;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

constexpr QBIndex kIndices[] = {QBIndex::psi1, QBIndex::psi2, QBIndex::psi3, QBIndex::psi4};

Outcome maximal_entanglement() {
    double dev = 0.0;
    for (double k : linspace(0.0, 0.999, 50))
        for (QBIndex i : {QBIndex::psi2, QBIndex::psi4})
            dev = std::max(dev, std::abs(entropy_of_entanglement({i, Overlap(k)}) - 1.0));
    return {dev <= 1e-12, "50 overlaps x indices 2,4, max |E-1| = " + sci(dev)};
}

Outcome spectrum_equivalence() {
    double dev = 0.0;
    for (double a : {0.1, 0.5, 1.0, 2.0, 3.0})
        for (QBIndex i : kIndices) {
            const CoherentQuasiBell s(i, a);
            const auto v = fock::build_quasi_bell_fock(s, fock::required_truncation(a));
            const Eigen::VectorXd ev = fock::spectrum(fock::partial_trace(v, {0}));
            const auto closed = reduced_spectrum(abstract_spec(s));
            for (Eigen::Index k = 0; k < ev.size(); ++k) {
                const double c = k < 2 ? closed[static_cast<std::size_t>(k)] : 0.0;
                dev = std::max(dev, std::abs(ev(k) - c));
            }
        }
    return {dev <= 1e-9, "20 (alpha, index) cases, max deviation = " + sci(dev)};
}

std::vector<double> werner_fs() { return linspace(0.0, 1.0, 10); }
std::vector<double> werner_kappas() { return linspace(0.0, 0.99, 10); }

Outcome quasi_werner_eigenvalues() {
    double dev = 0.0, sum_dev = 0.0;
    for (double f : werner_fs())
        for (double k : werner_kappas()) {
            const QuasiWernerSpec spec(f, Overlap(k));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(build_quasi_werner(spec).matrix(),
                                                               Eigen::EigenvaluesOnly);
            const Eigen::Vector4d ev = es.eigenvalues().reverse();
            const auto closed = quasi_werner_spectrum(spec);
            double sum = 0.0;
            for (int i = 0; i < 4; ++i) {
                dev = std::max(dev, std::abs(ev(i) - closed[static_cast<std::size_t>(i)]));
                sum += closed[static_cast<std::size_t>(i)];
            }
            sum_dev = std::max(sum_dev, std::abs(sum - 1.0));
        }
    return {dev <= 1e-10 && sum_dev <= 1e-15,
            "10x10 (F, kappa), max eigenvalue deviation = " + sci(dev) + ", max |sum-1| = " + sci(sum_dev)};
}

Outcome bound_consistency() {
    double worst = 0.0, werner_dev = 0.0;
    for (double f : werner_fs())
        for (double k : werner_kappas()) {
            const auto rho = build_quasi_werner(QuasiWernerSpec(f, Overlap(k)));
            worst = std::max(worst, eof_lower_bound(EntFraction(f)) - eof_wootters(rho));
            if (k == 0.0 && f >= 0.5)
                werner_dev = std::max(werner_dev, std::abs(eof_wootters(rho) - qt::h2(0.5 + std::sqrt(f * (1.0 - f)))));
        }
    return {worst <= 1e-9 && werner_dev <= 1e-9,
            "max (bound - EoF) = " + sci(worst) + ", Werner formula deviation = " + sci(werner_dev)};
}

Outcome decoherence_formula() {
    double dev = 0.0;
    int points = 0;
    for (double a : {0.1, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const int n = fock::required_truncation(a);
        for (double eta : linspace(0.1, 0.9, 9)) {
            const auto abe = fock::lossy_quasi_bell(a, eta, n);
            const auto state = apply_loss(a, LossChannel(eta));
            for (double beta : linspace(0.05, 2.0 * a + 0.5, 10)) {
                dev = std::max(dev, std::abs(fraction_over_family(state, beta) - fock::family_overlap(abe, beta)));
                ++points;
            }
        }
    }
    return {points >= 500 && dev <= 1e-9, std::to_string(points) + " (alpha, eta, beta) points, max deviation = " + sci(dev)};
}

Outcome maximizer() {
    double rel = 0.0, lossless = 0.0;
    int cases = 0;
    for (double a : linspace(0.1, 3.0, 10)) {
        for (double eta : linspace(0.1, 0.9, 9)) {
            const auto search = qt::grid_refine_argmax(
                [a, eta](long double b) { return qt::literal_fraction(a, eta, b); }, 1e-6L * a, 2.0L * a, 1e-13L * a);
            const double star = optimal_beta(a, LossChannel(eta)).beta_star;
            rel = std::max(rel, std::abs(static_cast<double>(search.x) - star) / star);
            ++cases;
        }
        lossless = std::max(lossless, std::abs(optimal_beta(a, LossChannel(1.0)).f_star - 1.0));
    }
    return {rel <= 1e-6 && lossless <= 1e-12, std::to_string(cases) + " (alpha, eta) cases, max relative beta deviation = " +
                                                  sci(rel) + ", max |f*(eta=1) - 1| = " + sci(lossless)};
}

Outcome biphoton_comparison() {
    bool exact = true;
    for (double eta : linspace(0.0, 1.0, 21)) exact = exact && biphoton_fraction(LossChannel(eta)).value() == eta;
    double margin = 1.0;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9})
        margin = std::min(margin, optimal_beta(0.1, LossChannel(eta)).f_star - eta);
    return {exact && margin > 0.0, std::string("biphoton fraction exact: ") + (exact ? "yes" : "no") +
                                        ", min f*(0.1, eta) - eta = " + sci(margin)};
}

Outcome figure_shape() {
    const report::SweepConfig cfg;
    const auto pts = report::run_sweep(cfg);
    std::map<double, std::map<double, double>> by_alpha;  // alpha -> eta -> f
    for (const auto& p : pts)
        if (!p.error) by_alpha[p.alpha][p.eta] = p.f;
    int violations = 0, checked = 0;
    for (const auto& [alpha, row] : by_alpha) {
        double prev = -1.0;
        for (const auto& [eta, f] : row) {
            if (!(f > prev)) ++violations;
            prev = f;
            ++checked;
        }
    }
    for (double eta : cfg.etas) {
        double prev = 2.0;
        for (const auto& [alpha, row] : by_alpha) {
            const double f = row.at(eta);
            if (f > prev) ++violations;
            prev = f;
        }
    }
    const bool complete = pts.size() == 300 && checked == 300;
    return {complete && violations == 0,
            std::to_string(pts.size()) + " grid points, " + std::to_string(violations) + " ordering violations"};
}

Outcome characteristic_functions() {
    double origin = 0.0;
    for (double a : {0.5, 1.0})
        for (QBIndex i : kIndices) origin = std::max(origin, std::abs(characteristic_function(CoherentQuasiBell(i, a), {}) - 1.0));

    std::mt19937_64 rng(0x5eed);
    double trace_dev = 0.0;
    std::vector<fock::FockVector> states;
    for (QBIndex i : kIndices) states.push_back(fock::build_quasi_bell_fock(CoherentQuasiBell(i, 1.0), 36));
    for (int t = 0; t < 50; ++t) {
        const auto i = static_cast<std::size_t>(t % 4);
        auto u = [&] { return 4.0 * qt::unit(rng) - 2.0; };
        const CharFuncPoint p{{u(), u()}, {u(), u()}};
        trace_dev = std::max(trace_dev, std::abs(characteristic_function(CoherentQuasiBell(kIndices[i], 1.0), p) -
                                                 fock::operator_trace_charfunc(states[i], p)));
    }

    const auto product = fock::tensor(fock::coherent_vector(0.7, 36), fock::coherent_vector(-0.4, 36));
    const double control =
        gaussianity_witness([&](const CharFuncPoint& p) { return fock::operator_trace_charfunc(product, p); });
    const double cat = gaussianity_witness(CoherentQuasiBell(QBIndex::psi2, 1.0));
    return {origin <= 1e-12 && trace_dev <= 1e-8 && control <= 1e-9 && cat > 1e-3,
            "|C(0)-1| = " + sci(origin) + ", trace deviation = " + sci(trace_dev) + ", witness coherent = " +
                sci(control) + ", index 2 = " + sci(cat)};
}

Outcome asymmetric_amplitudes() {
    std::mt19937_64 rng(0xa5);
    double dev = 0.0;
    for (int t = 0; t < 20; ++t) {
        const double a = 0.2 + 1.8 * qt::unit(rng);
        const double b = 0.2 + 1.8 * qt::unit(rng);
        const QBIndex idx = t % 2 ? QBIndex::psi4 : QBIndex::psi2;
        const auto v = fock::build_quasi_bell_fock(CoherentQuasiBell(idx, a, b), fock::required_truncation(std::max(a, b)));
        const Eigen::VectorXd ev = fock::spectrum(fock::partial_trace(v, {0}));
        const auto s = asymmetric_spectrum(a, b, idx);
        dev = std::max({dev, std::abs(ev(0) - s[0]), std::abs(ev(1) - s[1]), ev.tail(ev.size() - 2).cwiseAbs().maxCoeff()});
    }
    double best_beta = 0.0, best = -1.0;
    for (int k = 0; k <= 2000; ++k) {
        const double b = 0.01 + 0.001 * k;
        const double e = entropy(asymmetric_spectrum(1.0, b, QBIndex::psi2));
        if (e > best) best = e, best_beta = b;
    }
    const bool at_one = std::abs(best_beta - 1.0) <= 1e-3;
    return {dev <= 1e-10 && at_one,
            "20 pairs, max deviation = " + sci(dev) + ", entropy maximum at beta = " + std::to_string(best_beta)};
}

int run_cli(const std::string& args) {
    const std::string cmd = "'" + std::string(QBELL_CLI_PATH) + "' " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "qbell_acceptance";
    std::filesystem::create_directories(dir);
    const auto a = dir / "first.csv";
    const auto b = dir / "second.csv";
    const int ra = run_cli("decohere --output '" + a.string() + "'");
    const int rb = run_cli("decohere --output '" + b.string() + "'");
    const std::string ca = slurp(a);
    const bool same = ra == 0 && rb == 0 && !ca.empty() && ca == slurp(b);
    return {same, std::to_string(ca.size()) + " bytes, identical: " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"maximal entanglement invariance", maximal_entanglement},
        {"reduced spectra match the Fock oracle", spectrum_equivalence},
        {"quasi-Werner eigenvalues", quasi_werner_eigenvalues},
        {"entanglement bound consistency", bound_consistency},
        {"lossy family fraction matches the Fock oracle", decoherence_formula},
        {"optimal beta matches grid search", maximizer},
        {"comparison with the lossy biphoton", biphoton_comparison},
        {"sweep ordering in eta and alpha", figure_shape},
        {"characteristic functions and non-Gaussianity", characteristic_functions},
        {"asymmetric amplitudes", asymmetric_amplitudes},
        {"decohere output is byte-identical across runs", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failures;
        std::printf("[%s] criterion %zu: %s (%s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
