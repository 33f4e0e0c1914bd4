#pragma once

// Deterministic text output for sweeps: fixed float formatting, fixed row
// order, nothing time- or locale-dependent.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbell/decoherence.hpp"
#include "qbell/ent_measures.hpp"
#include "qbell/error.hpp"

namespace qbell::report {

/// Fixed notation with at least 12 significant digits (exactly 12 below
/// magnitude 1, and never fewer than 12 decimals); scientific with 12
/// significant digits below 1e-12. NaN prints as "nan".
[[nodiscard]] inline std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const double mag = std::abs(x);
    if (x == 0.0) {
        std::snprintf(buf, sizeof buf, "%.12f", 0.0);
    } else if (mag < 1e-12) {
        std::snprintf(buf, sizeof buf, "%.11e", x);
    } else {
        const int exponent = static_cast<int>(std::floor(std::log10(mag)));
        const int decimals = std::max(12, 11 - exponent);
        std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    }
    return buf;
}

enum class Format { csv, json };

[[nodiscard]] inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw DomainError("format must be csv or json, got '" + s + "'");
}

struct SweepConfig {
    double alpha_min = 0.05;
    double alpha_max = 3.0;
    int steps = 60;
    std::vector<double> etas{0.9, 0.7, 0.5, 0.3, 0.1};
    std::optional<std::string> output;  // stdout when empty
    Format format = Format::csv;

    void validate() const {
        if (!(std::isfinite(alpha_min) && alpha_min > 0.0)) throw DomainError("alpha_min must be > 0");
        if (!(std::isfinite(alpha_max) && alpha_max >= alpha_min))
            throw DomainError("alpha_max must be >= alpha_min");
        if (steps < 2) throw DomainError("steps must be >= 2");
        if (etas.empty()) throw DomainError("at least one eta is required");
        for (double e : etas)
            if (!(e >= 0.0 && e <= 1.0)) throw DomainError("each eta must lie in [0, 1]");
    }

    /// steps evenly spaced amplitudes from alpha_min to alpha_max inclusive.
    [[nodiscard]] std::vector<double> alphas() const {
        std::vector<double> a(static_cast<std::size_t>(steps));
        const double h = (alpha_max - alpha_min) / (steps - 1);
        for (int i = 0; i < steps; ++i) a[static_cast<std::size_t>(i)] = alpha_min + i * h;
        a.back() = alpha_max;
        return a;
    }
};

[[nodiscard]] inline std::vector<FractionCurvePoint> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    return figure1_sweep(cfg.alphas(), cfg.etas);
}

/// h[f] for a curve point; NaN when the point failed.
[[nodiscard]] inline double point_eof_bound(const FractionCurvePoint& p) {
    if (p.error || std::isnan(p.f)) return std::nan("");
    return eof_lower_bound(EntFraction(p.f));
}

inline void write_csv(std::ostream& os, const std::vector<FractionCurvePoint>& pts) {
    os << "alpha,eta,f,beta_star,eof_lower_bound\n";
    for (const auto& p : pts)
        os << format_real(p.alpha) << ',' << format_real(p.eta) << ',' << format_real(p.f) << ','
           << format_real(p.beta_star) << ',' << format_real(point_eof_bound(p)) << '\n';
}

/// JSON numbers go through the same formatter so the bytes are as stable as
/// the CSV; failed points carry an "error" string and null values.
inline void write_json(std::ostream& os, const std::vector<FractionCurvePoint>& pts) {
    os << "[\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        auto num = [](double x) { return std::isfinite(x) ? format_real(x) : std::string("null"); };
        os << "  {\"alpha\": " << num(p.alpha) << ", \"eta\": " << num(p.eta) << ", \"f\": " << num(p.f)
           << ", \"beta_star\": " << num(p.beta_star) << ", \"eof_lower_bound\": " << num(point_eof_bound(p));
        if (p.error) os << ", \"error\": " << nlohmann::json(*p.error).dump();
        os << '}' << (i + 1 < pts.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

inline void write_sweep(std::ostream& os, const std::vector<FractionCurvePoint>& pts, Format fmt) {
    if (fmt == Format::csv)
        write_csv(os, pts);
    else
        write_json(os, pts);
}

}  // namespace qbell::report
