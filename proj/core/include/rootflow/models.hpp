#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rootflow/types.hpp"

namespace rootflow {

/// Exact rational p/q, normalized (q > 0, gcd(|p|, q) = 1).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t p, std::int64_t q);

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const noexcept { return num == 0; }

    /// Parses "p/q" or "p".
    static Rational parse(const std::string& text);
    std::string str() const;
};

enum class ModelKind {
    ExpVelocity,     // y_m'' = i r_m w y_m'   (order 1: y_m' = i r_m w y_m)
    Harmonic,        // y_m'' = -(r_m w)^2 y_m
    Mixed,           // component 1 exp-velocity, components 2..N harmonic
    DampedHarmonic,  // components 1..N-1 harmonic, last y_N'' = -a y_N'
    CustomLinear,    // u' = L u with u = y (order 1) or u = (y, y') (order 2)
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// A solvable evolution law for the first N polynomial coefficients.  The
/// named kinds have exact closed-form flows; custom-linear falls back to a
/// fixed-step fourth-order integration of u' = L u.
struct GeneratingModel {
    ModelKind kind = ModelKind::Harmonic;
    int order = 2;      // 1 or 2
    int dimension = 0;  // N
    std::vector<Rational> r;  // frequency ratios, one per component where applicable
    double omega = 0.0;
    double damping = 0.0;  // 'a' of the damped component
    std::vector<CVec> linear_matrix;  // custom-linear only, row-major square

    /// Frozen coefficients: custom-linear with a zero matrix.
    static GeneratingModel frozen(int order, int dimension);

    /// Throws std::invalid_argument on parameter-domain violations
    /// (omega = 0, zero r_m, a <= 0, dimension/order mismatches).
    void validate() const;
};

/// Evolution values f^{(1)} (order 1) or f^{(2)} (order 2) at time t.
/// ydot is required exactly when the model is second order.
CVec model_rhs(const GeneratingModel& model, double t, std::span<const Complex> y,
               std::span<const Complex> ydot = {});

struct FlowState {
    CVec y;
    CVec ydot;  // empty for first-order models
};

/// Exact flow from (t0, y0, ydot0) to time t.  For the named kinds this is
/// the closed-form solution; growth kernels like (e^{irwt}-1)/(irw) are
/// evaluated in cancellation-free form.  Custom-linear models are advanced
/// numerically.
FlowState model_flow(const GeneratingModel& model, double t0, double t,
                     std::span<const Complex> y0, std::span<const Complex> ydot0 = {});

struct ModelPeriod {
    double period = 0.0;
    bool asymptotic = false;  // periodic only up to a decaying transient
};

/// Least common period of the component flows: lcm over the active
/// components of 1/|r_m|, scaled by 2 pi / |omega|.  Exact rational
/// arithmetic end to end.  For damped-harmonic kinds this is the period of
/// the harmonic part, flagged asymptotic.  nullopt for custom models.
std::optional<ModelPeriod> model_period(const GeneratingModel& model);

}  // namespace rootflow
