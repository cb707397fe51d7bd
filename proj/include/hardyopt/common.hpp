#pragma once

// Shared scalar types for the radial Hardy/Rellich weight toolkit:
// problem parameters (p, n, measure density), extended-real end limits,
// and the error taxonomy used across modules.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace hardyopt {

inline constexpr double kPi = 3.14159265358979323846;

// Surface measure of the unit (n-1)-sphere, omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

// |x|^q with the removable-singularity convention: q == 0 evaluates to 1
// everywhere, including x == 0. For q < 0 a zero base yields +infinity;
// quadrature treats that as an integrable point singularity.
inline double pow_abs(double x, double q) {
    if (q == 0.0) return 1.0;
    return std::pow(std::abs(x), q);
}

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Smooth positive measure density sigma(r); the measure is
// d nu = omega_{n-1} r^{n-1} sigma(r) dr. Lebesgue measure is sigma == 1.
struct RadialDensity {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

struct ProblemParams {
    double p = 2.0;
    int n = 2;
    std::optional<RadialDensity> sigma;  // absent => Lebesgue

    ProblemParams() = default;
    ProblemParams(double p_, int n_) : p(p_), n(n_) { validate(); }
    ProblemParams(double p_, int n_, RadialDensity s) : p(p_), n(n_), sigma(std::move(s)) {
        validate();
    }

    void validate() const {
        if (!(p > 1.0) || !std::isfinite(p))
            throw std::invalid_argument("ProblemParams: requires p > 1");
        if (n < 2) throw std::invalid_argument("ProblemParams: requires n >= 2");
    }

    bool lebesgue() const { return !sigma.has_value(); }
    double sigma_value(double r) const { return sigma ? sigma->value(r) : 1.0; }
    double sigma_log_derivative(double r) const {
        return sigma ? sigma->derivative(r) / sigma->value(r) : 0.0;
    }
    // d nu / dr at radius r.
    double measure(double r) const {
        return sphere_area(n) * std::pow(r, n - 1) * sigma_value(r);
    }
    // ((p-1)/p)^p, the optimal Hardy constant.
    double cp() const { return std::pow((p - 1.0) / p, p); }
};

// End limits live in [0, +inf]; avoid floating-point infinity arithmetic.
class ExtReal {
public:
    static ExtReal infinite() { return ExtReal(true, 0.0); }
    static ExtReal finite(double v) { return ExtReal(false, v); }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    // Finite value; throws on the infinite element.
    double value() const {
        if (infinite_) throw std::logic_error("ExtReal: value() on infinite limit");
        return value_;
    }
    double as_double() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

private:
    ExtReal(bool inf, double v) : infinite_(inf), value_(v) {}
    bool infinite_;
    double value_;
};

// ---------------------------------------------------------------------------
// Errors. CLI exit codes: config 2, precondition 3, non-convergence 4.

enum class ErrorCode {
    UnsupportedCombination,
    NonLebesgueMeasure,
    WrongClassification,
    GammaMismatch,
    AlphaOutOfRange,
    EndLimitMismatch,
    SignConditionViolated,
    VanishingDerivative,
    DerivativeVanishes,
    MissingSecondDerivative,
    LevelOutOfRange,
    SupportNotCompact,
    NonFiniteIntegrand,
    NegativeNodalValue,
    GridTooNarrow,
    ZeroDenominator,
    SuperharmonicityFails,
    InvalidProfile,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    PreconditionError(ErrorCode code, const std::string& msg) : Error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace hardyopt
