#include "rootflow/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rootflow {

namespace {

constexpr Complex kImag{0.0, 1.0};

// e^{i phi} - 1, cancellation free for small |phi|
Complex expm1_imag(double phi) {
    const double s = std::sin(0.5 * phi);
    return Complex(-2.0 * s * s, std::sin(phi));
}

enum class Law { ExpVelocity, Harmonic, Damped };

struct Component {
    Law law;
    double rate;  // r_m for exp/harmonic (ratio), a for damped
};

std::vector<Component> component_laws(const GeneratingModel& model) {
    std::vector<Component> laws;
    laws.reserve(model.dimension);
    switch (model.kind) {
        case ModelKind::ExpVelocity:
            for (const auto& r : model.r) laws.push_back({Law::ExpVelocity, r.value()});
            break;
        case ModelKind::Harmonic:
            for (const auto& r : model.r) laws.push_back({Law::Harmonic, r.value()});
            break;
        case ModelKind::Mixed:
            laws.push_back({Law::ExpVelocity, model.r[0].value()});
            for (std::size_t i = 1; i < model.r.size(); ++i)
                laws.push_back({Law::Harmonic, model.r[i].value()});
            break;
        case ModelKind::DampedHarmonic:
            for (const auto& r : model.r) laws.push_back({Law::Harmonic, r.value()});
            laws.push_back({Law::Damped, model.damping});
            break;
        case ModelKind::CustomLinear:
            throw std::logic_error("component_laws: custom-linear has no per-component law");
    }
    return laws;
}

CVec stack_state(std::span<const Complex> y, std::span<const Complex> ydot) {
    CVec u(y.begin(), y.end());
    u.insert(u.end(), ydot.begin(), ydot.end());
    return u;
}

CVec apply_matrix(const std::vector<CVec>& m, const CVec& u) {
    CVec out(m.size(), Complex(0.0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) out[i] += m[i][j] * u[j];
    return out;
}

}  // namespace

Rational::Rational(std::int64_t p, std::int64_t q) : num(p), den(q) {
    if (q == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text), 1);
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ExpVelocity: return "exp-velocity";
        case ModelKind::Harmonic: return "harmonic";
        case ModelKind::Mixed: return "mixed";
        case ModelKind::DampedHarmonic: return "damped-harmonic";
        case ModelKind::CustomLinear: return "custom-linear";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "exp-velocity") return ModelKind::ExpVelocity;
    if (name == "harmonic") return ModelKind::Harmonic;
    if (name == "mixed") return ModelKind::Mixed;
    if (name == "damped-harmonic") return ModelKind::DampedHarmonic;
    if (name == "custom-linear") return ModelKind::CustomLinear;
    throw std::invalid_argument("unknown model kind: " + name);
}

GeneratingModel GeneratingModel::frozen(int order, int dimension) {
    GeneratingModel m;
    m.kind = ModelKind::CustomLinear;
    m.order = order;
    m.dimension = dimension;
    const int size = order == 2 ? 2 * dimension : dimension;
    m.linear_matrix.assign(size, CVec(size, Complex(0.0)));
    if (order == 2)
        for (int i = 0; i < dimension; ++i) m.linear_matrix[i][dimension + i] = 1.0;
    return m;
}

void GeneratingModel::validate() const {
    if (order != 1 && order != 2) throw std::invalid_argument("model order must be 1 or 2");
    if (dimension < 1) throw std::invalid_argument("model dimension must be positive");
    if (kind == ModelKind::CustomLinear) {
        const std::size_t size = order == 2 ? 2 * dimension : dimension;
        if (linear_matrix.size() != size)
            throw std::invalid_argument("custom-linear matrix has wrong size");
        for (const auto& row : linear_matrix)
            if (row.size() != size)
                throw std::invalid_argument("custom-linear matrix is not square");
        return;
    }
    if (omega == 0.0) throw std::invalid_argument("omega must be nonzero");
    std::size_t expected_r = dimension;
    if (kind == ModelKind::DampedHarmonic) {
        expected_r = dimension - 1;
        if (damping <= 0.0) throw std::invalid_argument("damping rate must be positive");
    }
    if (kind == ModelKind::Mixed && dimension < 2)
        throw std::invalid_argument("mixed model needs at least two components");
    if (r.size() != expected_r)
        throw std::invalid_argument("expected " + std::to_string(expected_r) +
                                    " frequency ratios");
    for (const auto& ratio : r)
        if (ratio.is_zero()) throw std::invalid_argument("frequency ratios must be nonzero");
    if (order == 1 && kind != ModelKind::ExpVelocity)
        throw std::invalid_argument("first-order form exists only for exp-velocity and "
                                    "custom-linear kinds");
}

CVec model_rhs(const GeneratingModel& model, double t, std::span<const Complex> y,
               std::span<const Complex> ydot) {
    (void)t;  // the built-in laws are autonomous; t kept for custom extensions
    model.validate();
    if (static_cast<int>(y.size()) != model.dimension)
        throw std::invalid_argument("model_rhs: dimension mismatch");
    if (model.order == 2 && ydot.size() != y.size())
        throw std::invalid_argument("model_rhs: second-order model needs ydot");

    if (model.kind == ModelKind::CustomLinear) {
        const CVec u = model.order == 2 ? stack_state(y, ydot) : CVec(y.begin(), y.end());
        CVec lu = apply_matrix(model.linear_matrix, u);
        if (model.order == 1) return lu;
        return CVec(lu.begin() + model.dimension, lu.end());
    }

    const auto laws = component_laws(model);
    CVec f(model.dimension);
    for (int m = 0; m < model.dimension; ++m) {
        switch (laws[m].law) {
            case Law::ExpVelocity:
                f[m] = kImag * laws[m].rate * model.omega *
                       (model.order == 2 ? ydot[m] : y[m]);
                break;
            case Law::Harmonic: {
                const double w = laws[m].rate * model.omega;
                f[m] = -w * w * y[m];
                break;
            }
            case Law::Damped:
                f[m] = -laws[m].rate * ydot[m];
                break;
        }
    }
    return f;
}

FlowState model_flow(const GeneratingModel& model, double t0, double t,
                     std::span<const Complex> y0, std::span<const Complex> ydot0) {
    model.validate();
    if (static_cast<int>(y0.size()) != model.dimension)
        throw std::invalid_argument("model_flow: dimension mismatch");
    if (model.order == 2 && ydot0.size() != y0.size())
        throw std::invalid_argument("model_flow: second-order model needs ydot0");
    const double dt = t - t0;

    if (model.kind == ModelKind::CustomLinear) {
        // no closed form registered: fixed-step fourth-order advance of u' = L u
        CVec u = model.order == 2 ? stack_state(y0, ydot0) : CVec(y0.begin(), y0.end());
        const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(dt) / 1e-3)));
        const double h = dt / steps;
        for (int s = 0; s < steps; ++s) {
            const CVec k1 = apply_matrix(model.linear_matrix, u);
            CVec tmp(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
            const CVec k2 = apply_matrix(model.linear_matrix, tmp);
            for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
            const CVec k3 = apply_matrix(model.linear_matrix, tmp);
            for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + h * k3[i];
            const CVec k4 = apply_matrix(model.linear_matrix, tmp);
            for (std::size_t i = 0; i < u.size(); ++i)
                u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        FlowState out;
        if (model.order == 2) {
            out.y.assign(u.begin(), u.begin() + model.dimension);
            out.ydot.assign(u.begin() + model.dimension, u.end());
        } else {
            out.y = std::move(u);
        }
        return out;
    }

    const auto laws = component_laws(model);
    FlowState out;
    out.y.resize(model.dimension);
    if (model.order == 2) out.ydot.resize(model.dimension);
    for (int m = 0; m < model.dimension; ++m) {
        switch (laws[m].law) {
            case Law::ExpVelocity: {
                const double phi = laws[m].rate * model.omega * dt;
                const Complex growth = Complex(1.0, 0.0) + expm1_imag(phi);
                if (model.order == 1) {
                    out.y[m] = y0[m] * growth;
                } else {
                    const Complex c = kImag * laws[m].rate * model.omega;
                    out.y[m] = y0[m] + ydot0[m] * expm1_imag(phi) / c;
                    out.ydot[m] = ydot0[m] * growth;
                }
                break;
            }
            case Law::Harmonic: {
                const double w = laws[m].rate * model.omega;
                const double c = std::cos(w * dt);
                const double s = std::sin(w * dt);
                out.y[m] = y0[m] * c + ydot0[m] * (s / w);
                out.ydot[m] = -y0[m] * (w * s) + ydot0[m] * c;
                break;
            }
            case Law::Damped: {
                const double a = laws[m].rate;
                const double decay = std::exp(-a * dt);
                out.y[m] = y0[m] - ydot0[m] * (std::expm1(-a * dt) / a);
                out.ydot[m] = ydot0[m] * decay;
                break;
            }
        }
    }
    return out;
}

std::optional<ModelPeriod> model_period(const GeneratingModel& model) {
    if (model.kind == ModelKind::CustomLinear) return std::nullopt;
    // lcm over components of 1/|r_m|, exactly; fractions stay normalized so
    // lcm(a/b, c/d) = lcm(a, c) / gcd(b, d)
    std::int64_t num = 0, den = 1;
    for (const auto& ratio : model.r) {
        const std::int64_t q = ratio.den;
        const std::int64_t p = ratio.num < 0 ? -ratio.num : ratio.num;
        if (num == 0) {
            num = q;
            den = p;
        } else {
            num = std::lcm(num, q);
            den = std::gcd(den, p);
        }
    }
    if (num == 0) return std::nullopt;  // no periodic component
    ModelPeriod out;
    out.period = 2.0 * std::numbers::pi / std::abs(model.omega) *
                 (static_cast<double>(num) / static_cast<double>(den));
    out.asymptotic = model.kind == ModelKind::DampedHarmonic;
    return out;
}

}  // namespace rootflow
