// qbell: command-line front end for the quasi-Bell library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qbell/coherent_layer.hpp"
#include "qbell/decoherence.hpp"
#include "qbell/fock_oracle.hpp"
#include "qbell/qbell_core.hpp"
#include "qbell/quasi_werner.hpp"
#include "qbell/report.hpp"
#include "qbell/verify.hpp"

namespace {

using json = nlohmann::json;

constexpr int exit_invalid = 2;
constexpr int exit_unwritable = 3;

struct UnwritableOutput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int fail(int code, const std::string& message) {
    std::cerr << json{{"error", message}}.dump() << '\n';
    return code;
}

json spectrum_json(const qbell::Spectrum& s) { return json(s.values()); }

json complex_json(qbell::cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// QBELL_TRUNCATION, if set; an unparsable value is an invalid argument.
std::optional<int> truncation_from_env() {
    const char* raw = std::getenv("QBELL_TRUNCATION");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const int n = std::stoi(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument(raw);
        return n;
    } catch (const std::exception&) {
        throw qbell::DomainError(std::string("QBELL_TRUNCATION must be an integer, got '") + raw + "'");
    }
}

// ---- measures ----

struct MeasuresArgs {
    std::optional<double> kappa;
    std::optional<double> alpha;
    int index = 2;
};

int run_measures(const MeasuresArgs& a) {
    if (a.kappa.has_value() == a.alpha.has_value())
        throw qbell::DomainError("exactly one of --kappa and --alpha is required");
    const qbell::QBIndex index = qbell::qb_index_from_int(a.index);
    json out;
    qbell::QuasiBellSpec spec{index, qbell::Overlap(0.0)};
    if (a.alpha) {
        const qbell::CoherentQuasiBell s(index, *a.alpha);
        spec = qbell::abstract_spec(s);
        const auto [na, nb] = qbell::mean_photon_numbers(s);
        out["alpha"] = *a.alpha;
        out["mean_photon_numbers"] = {na, nb};
    } else {
        spec.kappa = qbell::Overlap(*a.kappa);
    }
    out["index"] = a.index;
    out["kappa"] = spec.kappa.value();
    out["h"] = qbell::normalization_constant(index, spec.kappa);
    out["D"] = qbell::gram_offdiagonal(spec.kappa);
    out["spectrum"] = spectrum_json(qbell::reduced_spectrum(spec));
    out["entropy"] = qbell::entropy_of_entanglement(spec);
    out["concurrence"] = qbell::concurrence_pure(qbell::embed_qubit(spec));
    std::cout << out.dump(2) << '\n';
    return 0;
}

// ---- decohere ----

struct DecohereArgs {
    qbell::report::SweepConfig config;
    std::string format = "csv";
    std::string output;
};

int run_decohere(DecohereArgs a) {
    a.config.format = qbell::report::parse_format(a.format);
    if (!a.output.empty()) a.config.output = a.output;
    a.config.validate();
    const auto points = qbell::report::run_sweep(a.config);
    if (a.config.output) {
        std::ofstream file(*a.config.output, std::ios::binary | std::ios::trunc);
        if (!file) throw UnwritableOutput("cannot open output file '" + *a.config.output + "' for writing");
        qbell::report::write_sweep(file, points, a.config.format);
        file.flush();
        if (!file) throw UnwritableOutput("failed writing output file '" + *a.config.output + "'");
    } else {
        qbell::report::write_sweep(std::cout, points, a.config.format);
    }
    return 0;
}

// ---- werner ----

struct WernerArgs {
    double fidelity = 1.0;
    double kappa = 0.0;
};

int run_werner(const WernerArgs& a) {
    const qbell::QuasiWernerSpec spec(a.fidelity, qbell::Overlap(a.kappa));
    const auto r = qbell::quasi_werner_report(spec);
    json out{{"fidelity", a.fidelity},
             {"kappa", a.kappa},
             {"eigenvalues", spectrum_json(r.spectrum)},
             {"fraction", r.fraction},
             {"numeric_fraction", r.numeric_fraction},
             {"eof_lower_bound", r.eof_lower_bound},
             {"eof_wootters", r.eof_wootters}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

// ---- charfunc ----

struct CharfuncArgs {
    double alpha = 1.0;
    std::optional<double> beta;
    int index = 2;
    double za_re = 0.0, za_im = 0.0, zb_re = 0.0, zb_im = 0.0;
    int grid_steps = 0;
    double radius = 2.0;
    bool witness = false;
    bool oracle = false;
    std::optional<int> truncation;
    std::string format = "json";
};

int run_charfunc(const CharfuncArgs& a) {
    const auto fmt = qbell::report::parse_format(a.format);
    const qbell::CoherentQuasiBell s(qbell::qb_index_from_int(a.index), a.alpha, a.beta);
    std::optional<qbell::fock::FockVector> oracle_state;
    if (a.oracle) {
        const double amp = std::max(std::abs(s.alpha()), std::abs(s.beta()));
        const int n = a.truncation.value_or(qbell::fock::required_truncation(amp));
        oracle_state = qbell::fock::build_quasi_bell_fock(s, n);
    }

    if (a.grid_steps > 0) {
        if (a.grid_steps < 2) throw qbell::DomainError("--grid-steps must be >= 2");
        if (!(a.radius > 0.0)) throw qbell::DomainError("--radius must be > 0");
        using qbell::report::format_real;
        const double h = 2.0 * a.radius / (a.grid_steps - 1);
        json rows = json::array();
        if (fmt == qbell::report::Format::csv) std::cout << "za_re,zb_re,c_re,c_im\n";
        for (int i = 0; i < a.grid_steps; ++i)
            for (int j = 0; j < a.grid_steps; ++j) {
                const double xa = -a.radius + i * h;
                const double xb = -a.radius + j * h;
                const auto c = qbell::characteristic_function(s, {{xa, 0.0}, {xb, 0.0}});
                if (fmt == qbell::report::Format::csv)
                    std::cout << format_real(xa) << ',' << format_real(xb) << ',' << format_real(c.real()) << ','
                              << format_real(c.imag()) << '\n';
                else
                    rows.push_back({{"za_re", xa}, {"zb_re", xb}, {"c", complex_json(c)}});
            }
        if (fmt == qbell::report::Format::json) std::cout << rows.dump(2) << '\n';
        return 0;
    }

    const qbell::CharFuncPoint p{{a.za_re, a.za_im}, {a.zb_re, a.zb_im}};
    json out{{"index", a.index},
             {"alpha", s.alpha()},
             {"beta", s.beta()},
             {"zeta_a", complex_json(p.zeta_a)},
             {"zeta_b", complex_json(p.zeta_b)},
             {"c", complex_json(qbell::characteristic_function(s, p))}};
    if (oracle_state) out["c_oracle"] = complex_json(qbell::fock::operator_trace_charfunc(*oracle_state, p));
    if (a.witness) out["gaussianity_witness"] = qbell::gaussianity_witness(s);
    if (fmt == qbell::report::Format::csv) {
        using qbell::report::format_real;
        const auto c = qbell::characteristic_function(s, p);
        std::cout << "za_re,za_im,zb_re,zb_im,c_re,c_im\n"
                  << format_real(a.za_re) << ',' << format_real(a.za_im) << ',' << format_real(a.zb_re) << ','
                  << format_real(a.zb_im) << ',' << format_real(c.real()) << ',' << format_real(c.imag()) << '\n';
    } else {
        std::cout << out.dump(2) << '\n';
    }
    return 0;
}

// ---- verify ----

struct VerifyArgs {
    std::optional<int> truncation;
    double tolerance = 1e-9;
    double alpha_max = 3.0;
    std::string format = "json";
};

int run_verify(const VerifyArgs& a) {
    const auto fmt = qbell::report::parse_format(a.format);
    qbell::verify::VerifyOptions opt;
    opt.truncation = a.truncation;
    opt.tolerance = a.tolerance;
    opt.alpha_max = a.alpha_max;
    const auto results = qbell::verify::run_verification(opt);
    const bool ok = qbell::verify::all_passed(results);

    if (fmt == qbell::report::Format::csv) {
        std::cout << "check,max_deviation,tolerance,passed\n";
        for (const auto& r : results)
            std::cout << r.name << ',' << qbell::report::format_real(r.max_deviation) << ','
                      << qbell::report::format_real(r.tolerance) << ',' << (r.passed ? "true" : "false") << '\n';
    } else {
        json checks = json::array();
        for (const auto& r : results)
            checks.push_back({{"name", r.name},
                              {"max_deviation", r.max_deviation},
                              {"tolerance", r.tolerance},
                              {"passed", r.passed}});
        std::cout << json{{"passed", ok}, {"checks", checks}}.dump(2) << '\n';
    }
    for (const auto& r : results)
        if (!r.passed)
            std::cerr << json{{"failed_check", r.name}, {"max_deviation", r.max_deviation}, {"tolerance", r.tolerance}}
                             .dump()
                      << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-Bell states over nonorthogonal states: entanglement, mixtures, loss, oracle checks"};
    app.require_subcommand(1);

    MeasuresArgs measures;
    auto* m = app.add_subcommand("measures", "Normalization, Gram element, reduced spectrum and entanglement of one state");
    auto* m_kappa = m->add_option("--kappa", measures.kappa, "Overlap of the two nonorthogonal states, in [0, 1)");
    auto* m_alpha = m->add_option("--alpha", measures.alpha, "Coherent amplitude; kappa = exp(-2 alpha^2)");
    m_kappa->excludes(m_alpha);
    m->add_option("--index", measures.index, "Quasi-Bell index 1..4")->check(CLI::Range(1, 4));

    DecohereArgs decohere;
    auto* d = app.add_subcommand("decohere", "Sweep the best family fraction f* over amplitude and transmissivity");
    d->add_option("--alpha-min", decohere.config.alpha_min, "Smallest amplitude (> 0)")->capture_default_str();
    d->add_option("--alpha-max", decohere.config.alpha_max, "Largest amplitude")->capture_default_str();
    d->add_option("--steps", decohere.config.steps, "Number of amplitudes (>= 2)")->capture_default_str();
    d->add_option("--etas", decohere.config.etas, "Comma-separated transmissivities in [0, 1]")
        ->delimiter(',')
        ->capture_default_str();
    d->add_option("--output,-o", decohere.output, "Output file (stdout if omitted)");
    d->add_option("--format", decohere.format, "csv or json")->capture_default_str();

    WernerArgs werner;
    auto* w = app.add_subcommand("werner", "Spectrum, fraction and entanglement bounds of a quasi-Werner mixture");
    w->add_option("--F,--fidelity", werner.fidelity, "Weight on the index-2 state, in [0, 1]")->required();
    w->add_option("--kappa", werner.kappa, "Overlap, in [0, 1)")->required();

    CharfuncArgs charfunc;
    auto* c = app.add_subcommand("charfunc", "Two-mode characteristic function of a coherent quasi-Bell state");
    c->add_option("--alpha", charfunc.alpha, "Amplitude of mode A")->required();
    c->add_option("--beta", charfunc.beta, "Amplitude of mode B (defaults to alpha)");
    c->add_option("--index", charfunc.index, "Quasi-Bell index 1..4")->check(CLI::Range(1, 4));
    c->add_option("--za-re", charfunc.za_re, "Re zeta_a");
    c->add_option("--za-im", charfunc.za_im, "Im zeta_a");
    c->add_option("--zb-re", charfunc.zb_re, "Re zeta_b");
    c->add_option("--zb-im", charfunc.zb_im, "Im zeta_b");
    c->add_option("--grid-steps", charfunc.grid_steps, "Evaluate on an n x n grid of real (zeta_a, zeta_b) instead");
    c->add_option("--radius", charfunc.radius, "Grid half-width")->capture_default_str();
    c->add_flag("--witness", charfunc.witness, "Also report the Gaussianity witness residual");
    c->add_flag("--oracle", charfunc.oracle, "Also evaluate the operator trace in truncated Fock space");
    c->add_option("--truncation", charfunc.truncation, "Fock truncation for --oracle (overrides QBELL_TRUNCATION)");
    c->add_option("--format", charfunc.format, "json or csv")->capture_default_str();

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Compare every closed form against the truncated Fock-space oracle");
    v->add_option("--truncation", verify.truncation, "Fock truncation (overrides QBELL_TRUNCATION and the rule)");
    v->add_option("--tolerance", verify.tolerance, "Maximum allowed deviation")->capture_default_str();
    v->add_option("--alpha-max", verify.alpha_max, "Largest amplitude checked")->capture_default_str();
    v->add_option("--format", verify.format, "json or csv")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(exit_invalid, e.what());
    }

    try {
        if (*m) return run_measures(measures);
        if (*d) return run_decohere(decohere);
        if (*w) return run_werner(werner);
        if (*c) {
            if (!charfunc.truncation) charfunc.truncation = truncation_from_env();
            return run_charfunc(charfunc);
        }
        if (*v) {
            if (!verify.truncation) verify.truncation = truncation_from_env();
            return run_verify(verify);
        }
    } catch (const UnwritableOutput& e) {
        return fail(exit_unwritable, e.what());
    } catch (const qbell::ConvergenceError& e) {
        return fail(1, e.what());
    } catch (const qbell::Error& e) {
        return fail(exit_invalid, e.what());
    }
    return fail(exit_invalid, "no subcommand given");
}
