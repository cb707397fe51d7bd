#pragma once

// Discretization and energy functionals.
//
// Test functions are piecewise-linear nodal functions on a log-spaced radial
// grid, vanishing at the first and last node (the Lipschitz, compactly
// supported stand-in for C_0^infty). Energies are integrated per interval:
// the gradient term uses the constant slope, potential-type terms use
// adaptive Gauss-Legendre in log r. Discrete Rayleigh quotients over this
// class are upper-bound certificates for the continuous best constants.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hardyopt/common.hpp"
#include "hardyopt/domain.hpp"
#include "hardyopt/quadrature.hpp"
#include "hardyopt/weights.hpp"

namespace hardyopt {

class RadialGrid {
public:
    RadialGrid(ProblemParams params, RadialDomain dom, std::vector<double> nodes)
        : params_(std::move(params)), dom_(dom), nodes_(std::move(nodes)) {
        if (nodes_.size() < 17)
            throw PreconditionError(ErrorCode::GridTooNarrow, "grid requires at least 16 intervals");
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
            if (!(nodes_[i] < nodes_[i + 1]))
                throw PreconditionError(ErrorCode::InvalidProfile,
                                        "grid nodes must be strictly increasing");
        if (!dom_.contains(nodes_.front()) || !dom_.contains(nodes_.back()))
            throw PreconditionError(ErrorCode::InvalidProfile,
                                    "grid nodes must lie inside the open domain");
    }

    static RadialGrid log_spaced(const ProblemParams& params, const RadialDomain& dom,
                                 double r_lo, double r_hi, std::size_t n_nodes = 4096) {
        std::vector<double> nodes(n_nodes);
        const double a = std::log(r_lo), b = std::log(r_hi);
        for (std::size_t i = 0; i < n_nodes; ++i)
            nodes[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                                        static_cast<double>(n_nodes - 1));
        nodes.front() = r_lo;
        nodes.back() = r_hi;
        return RadialGrid(params, dom, std::move(nodes));
    }

    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const ProblemParams& params() const { return params_; }
    const RadialDomain& domain() const { return dom_; }
    double measure(double r) const { return params_.measure(r); }

    // int_{r_i}^{r_{i+1}} d nu; closed form for Lebesgue measure.
    double interval_mass(std::size_t i) const {
        const double a = nodes_[i], b = nodes_[i + 1];
        if (params_.lebesgue()) {
            const int n = params_.n;
            return sphere_area(n) * (std::pow(b, n) - std::pow(a, n)) / n;
        }
        return integrate_log([this](double r) { return measure(r); }, a, b);
    }

private:
    ProblemParams params_;
    RadialDomain dom_;
    std::vector<double> nodes_;
};

// Piecewise-linear nodal function; values.front() == values.back() == 0.
struct TestFunction {
    const RadialGrid* grid = nullptr;
    std::vector<double> values;

    TestFunction() = default;
    TestFunction(const RadialGrid& g, std::vector<double> vals)
        : grid(&g), values(std::move(vals)) {
        if (values.size() != g.size())
            throw PreconditionError(ErrorCode::InvalidProfile,
                                    "nodal values must match the grid size");
        if (values.front() != 0.0 || values.back() != 0.0)
            throw PreconditionError(ErrorCode::InvalidProfile,
                                    "test functions vanish at the boundary nodes");
    }

    static TestFunction zero(const RadialGrid& g) {
        return TestFunction(g, std::vector<double>(g.size(), 0.0));
    }
    // Nodal interpolation of f, clamped to zero at the ends.
    template <class F>
    static TestFunction sample(const RadialGrid& g, F&& f) {
        std::vector<double> vals(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) vals[i] = f(g.nodes()[i]);
        vals.front() = 0.0;
        vals.back() = 0.0;
        return TestFunction(g, std::move(vals));
    }

    double slope(std::size_t i) const {
        const auto& r = grid->nodes();
        return (values[i + 1] - values[i]) / (r[i + 1] - r[i]);
    }
    double operator()(double r) const {
        const auto& x = grid->nodes();
        if (r <= x.front() || r >= x.back()) return 0.0;
        auto it = std::upper_bound(x.begin(), x.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double t = (r - x[i]) / (x[i + 1] - x[i]);
        return (1.0 - t) * values[i] + t * values[i + 1];
    }
    // Width of the support, as a node-index range [first, last).
    std::pair<std::size_t, std::size_t> support() const {
        std::size_t a = 0, b = values.size();
        while (a < values.size() && values[a] == 0.0) ++a;
        while (b > a && values[b - 1] == 0.0) --b;
        return {a, b};
    }
};

struct EnergyReport {
    double Q = 0.0;
    double gradient_term = 0.0;
    double potential_term = 0.0;
    double X = std::numeric_limits<double>::quiet_NaN();
    double Y = std::numeric_limits<double>::quiet_NaN();
    double Qsim = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();       // int W |phi|^p d nu
    double rayleigh = std::numeric_limits<double>::quiet_NaN();  // Q / rhs
};

// Q_V(phi) = int (|phi'|^p + V |phi|^p) d nu over the grid span.
inline EnergyReport energy_QV(const TestFunction& phi, const PotentialProfile* V,
                              const QuadOptions& opt = {}) {
    const RadialGrid& g = *phi.grid;
    const double p = g.params().p;
    EnergyReport rep;
    const auto [a, b] = phi.support();
    if (a >= b) return rep;
    const std::size_t lo = (a == 0) ? 0 : a - 1;
    for (std::size_t i = lo; i < std::min(b, g.size() - 1); ++i) {
        const double s = phi.slope(i);
        if (s != 0.0) rep.gradient_term += std::pow(std::abs(s), p) * g.interval_mass(i);
        if (V) {
            const double r0 = g.nodes()[i], r1 = g.nodes()[i + 1];
            rep.potential_term += integrate_log(
                [&](double r) {
                    return V->value(r) * std::pow(std::abs(phi(r)), p) * g.measure(r);
                },
                r0, r1, opt);
        }
    }
    rep.Q = rep.gradient_term + rep.potential_term;
    return rep;
}

// int W |phi|^p d nu for a nodal phi.
inline double weighted_p_mass(const TestFunction& phi, const Weight& W,
                              const QuadOptions& opt = {}) {
    const RadialGrid& g = *phi.grid;
    const double p = g.params().p;
    const auto [a, b] = phi.support();
    if (a >= b) return 0.0;
    double total = 0.0;
    const std::size_t lo = (a == 0) ? 0 : a - 1;
    for (std::size_t i = lo; i < std::min(b, g.size() - 1); ++i) {
        const double r0 = g.nodes()[i], r1 = g.nodes()[i + 1];
        total += integrate_log(
            [&](double r) { return W(r) * std::pow(std::abs(phi(r)), p) * g.measure(r); }, r0,
            r1, opt);
    }
    return total;
}

// Simplified energy of a nonnegative nodal w against a ground state v:
//   1 < p <= 2 : int v^2 |w'|^2 (v |w'| + w |v'|)^{p-2} d nu
//   p > 2      : int ( v^p |w'|^p + v^2 |v'|^{p-2} w^{p-2} |w'|^2 ) d nu
inline double simplified_energy(const TestFunction& w, const GroundState& v,
                                const QuadOptions& opt = {}) {
    const RadialGrid& g = *w.grid;
    const double p = g.params().p;
    for (double val : w.values)
        if (val < 0.0)
            throw PreconditionError(ErrorCode::NegativeNodalValue,
                                    "simplified energy requires nonnegative nodal values");
    const auto [a, b] = w.support();
    if (a >= b) return 0.0;
    double total = 0.0;
    const std::size_t lo = (a == 0) ? 0 : a - 1;
    for (std::size_t i = lo; i < std::min(b, g.size() - 1); ++i) {
        const double s = std::abs(w.slope(i));
        const double r0 = g.nodes()[i], r1 = g.nodes()[i + 1];
        auto f = [&](double r) {
            const double vv = v.value(r);
            const double dv = std::abs(v.derivative(r));
            const double wv = w(r);
            if (p <= 2.0)
                return vv * vv * s * s * pow_abs(vv * s + wv * dv, p - 2.0) * g.measure(r);
            return (std::pow(vv, p) * std::pow(s, p) +
                    vv * vv * std::pow(dv, p - 2.0) * std::pow(wv, p - 2.0) * s * s) *
                   g.measure(r);
        };
        total += integrate_log(f, r0, r1, opt);
    }
    return total;
}

struct XYSplit {
    double X = 0.0;  // int v^p |w'|^p d nu
    double Y = 0.0;  // int |w|^p |v'|^p d nu
    double Qsim = 0.0;
    // Smallest C with Qsim <= C X (p <= 2) or Qsim <= C [X + (X/Y)^{2/p} Y] (p > 2).
    double C_min = 0.0;
};

inline XYSplit xy_split(const TestFunction& w, const GroundState& v,
                        const QuadOptions& opt = {}) {
    const RadialGrid& g = *w.grid;
    const double p = g.params().p;
    XYSplit out;
    const auto [a, b] = w.support();
    if (a >= b) return out;
    const std::size_t lo = (a == 0) ? 0 : a - 1;
    for (std::size_t i = lo; i < std::min(b, g.size() - 1); ++i) {
        const double s = std::abs(w.slope(i));
        const double r0 = g.nodes()[i], r1 = g.nodes()[i + 1];
        out.X += integrate_log(
            [&](double r) { return std::pow(v.value(r) * s, p) * g.measure(r); }, r0, r1, opt);
        out.Y += integrate_log(
            [&](double r) {
                return std::pow(std::abs(w(r) * v.derivative(r)), p) * g.measure(r);
            },
            r0, r1, opt);
    }
    out.Qsim = simplified_energy(w, v, opt);
    if (p <= 2.0 || out.Y == 0.0) {
        out.C_min = out.X > 0.0 ? out.Qsim / out.X : 0.0;
    } else {
        const double bound = out.X + std::pow(out.X / out.Y, 2.0 / p) * out.Y;
        out.C_min = bound > 0.0 ? out.Qsim / bound : 0.0;
    }
    return out;
}

}  // namespace hardyopt
