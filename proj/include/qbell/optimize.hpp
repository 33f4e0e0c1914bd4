#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace qbell::optimize {

struct ScalarMaximum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than x_tol * max(1, |x|).
template <class F>
ScalarMaximum golden_section_maximize(F&& f, double lo, double hi, double x_tol = 1e-10,
                                      int max_iterations = 500) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);

    ScalarMaximum out;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        const double mid = 0.5 * (a + b);
        if (b - a <= x_tol * std::max(1.0, std::abs(mid))) {
            out.converged = true;
            break;
        }
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (fc >= fd) {
        out.x = c;
        out.value = fc;
    } else {
        out.x = d;
        out.value = fd;
    }
    return out;
}

struct NelderMeadOptions {
    double initial_step = 0.5;
    double f_tol = 1e-15;   // spread of function values across the simplex
    double x_tol = 1e-10;   // simplex diameter
    int max_iterations = 20000;
    int restarts = 3;       // re-seed a fresh simplex at the incumbent
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

template <class F>
NelderMeadResult nelder_mead_pass(F& f, const Eigen::VectorXd& x0, double step,
                                  const NelderMeadOptions& opt) {
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += step;
    // Internally minimize -f.
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = -f(pts[i]);

    std::vector<std::size_t> order(pts.size());
    NelderMeadResult res;
    for (int it = 0; it < opt.max_iterations; ++it) {
        res.iterations = it + 1;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto l, auto r) { return vals[l] < vals[r]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        double diameter = 0.0;
        for (const auto& p : pts) diameter = std::max(diameter, (p - pts[best]).cwiseAbs().maxCoeff());
        if (vals[worst] - vals[best] <= opt.f_tol && diameter <= opt.x_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst) centroid += pts[i];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
        const double fr = -f(reflected);
        if (fr < vals[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = -f(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = -f(contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            vals[i] = -f(pts[i]);
        }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    res.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    res.value = -*best_it;
    return res;
}

}  // namespace detail

/// Derivative-free maximization with restarts at the incumbent point, which
/// guards against premature simplex collapse.
template <class F>
NelderMeadResult nelder_mead_maximize(F&& f, const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& opt = {}) {
    NelderMeadResult res = detail::nelder_mead_pass(f, x0, opt.initial_step, opt);
    double step = opt.initial_step;
    for (int r = 0; r < opt.restarts; ++r) {
        step *= 0.1;
        NelderMeadResult next = detail::nelder_mead_pass(f, res.x, step, opt);
        const bool improved = next.value > res.value + opt.f_tol;
        next.iterations += res.iterations;
        if (next.value >= res.value) res = next;
        else res.iterations = next.iterations;
        if (!improved && res.converged) break;
    }
    return res;
}

}  // namespace qbell::optimize
