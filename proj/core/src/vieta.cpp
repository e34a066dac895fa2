#include "rootflow/vieta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rootflow {

namespace {

CVec multiset_with_multiplicity(const CVec& x, int m1) {
    CVec values;
    values.reserve(x.size() + m1);
    values.insert(values.end(), m1, x[0]);
    values.insert(values.end(), x.begin(), x.end());
    return values;
}

}  // namespace

CVec coeffs_from_roots(const RootState& state) {
    if (state.x.empty()) throw std::invalid_argument("coeffs_from_roots: empty state");
    const CVec values = multiset_with_multiplicity(state.x, state.m1);
    const CVec e = elem_sym_all(values);
    CVec y(values.size());
    for (std::size_t n = 1; n <= values.size(); ++n)
        y[n - 1] = (n % 2 == 0) ? e[n] : -e[n];
    return y;
}

CoeffState coeff_state_from_roots(const RootState& state, double t) {
    CoeffState out;
    out.t = t;
    const CVec y_full = coeffs_from_roots(state);
    out.y.assign(y_full.begin(), y_full.begin() + state.n_roots());
    if (state.has_velocities()) out.ydot = coeff_derivs_from_roots(state);
    return out;
}

CVec coeff_derivs_from_roots(const RootState& state) {
    if (!state.has_velocities())
        throw std::invalid_argument("coeff_derivs_from_roots: velocities required");
    const int N = state.n_roots();
    const int M = N + state.m1;
    CVec ydot(N, Complex(0.0));
    // Differentiate the product form: removing one copy of the slot value
    // leaves sigma_{j-1} of the reduced multiset; the x_1 slot carries
    // weight m1 + 1.
    for (int slot = 0; slot < N; ++slot) {
        const double weight = (slot == 0) ? state.m1 + 1.0 : 1.0;
        CVec reduced;
        reduced.reserve(M - 1);
        reduced.insert(reduced.end(), slot == 0 ? state.m1 : state.m1 + 1, state.x[0]);
        for (int i = 1; i < N; ++i)
            if (i != slot) reduced.push_back(state.x[i]);
        const CVec e = elem_sym_all(reduced);
        for (int j = 1; j <= N; ++j) {
            const Complex term = weight * state.xdot[slot] * e[j - 1];
            ydot[j - 1] += (j % 2 == 0) ? term : -term;
        }
    }
    return ydot;
}

CVec xi_from_y(std::span<const Complex> y, Complex x1, const CoefficientTables& tables) {
    const int N = tables.n_roots();
    if (static_cast<int>(y.size()) < N)
        throw std::invalid_argument("xi_from_y: expected at least N coefficients");
    CVec xi(N);
    for (int n = 1; n <= N; ++n) {
        Complex v = y[n - 1];
        Complex p = x1;
        for (int j = n - 1; j >= 1; --j) {
            v += tables.alpha_d(n, j) * p * y[j - 1];
            p *= x1;
        }
        // p is now x1^n
        xi[n - 1] = v - tables.gamma_d(n) * p;
    }
    return xi;
}

CVec extend_y(std::span<const Complex> y, Complex x1, const CoefficientTables& tables) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    if (static_cast<int>(y.size()) < N)
        throw std::invalid_argument("extend_y: expected at least N coefficients");
    // powers of x1 up to N + m1
    CVec pow(N + m1 + 1);
    pow[0] = 1.0;
    for (int i = 1; i <= N + m1; ++i) pow[i] = pow[i - 1] * x1;
    CVec tail(m1);
    for (int k = 1; k <= m1; ++k) {
        const double lead = static_cast<double>(binomial(m1, k));
        Complex v = ((k % 2 == 0) ? lead : -lead) * pow[k] * y[N - 1];
        for (int j = 1; j <= N - 1; ++j)
            v += static_cast<double>(tables.theta(k, j)) * pow[N + k - j] * y[j - 1];
        v += pow[N + k] * static_cast<double>(tables.phi(k));
        tail[k - 1] = v;
    }
    return tail;
}

CVec assemble_polynomial(std::span<const Complex> y_full) {
    CVec coeffs(y_full.size() + 1);
    coeffs[0] = 1.0;
    std::copy(y_full.begin(), y_full.end(), coeffs.begin() + 1);
    return coeffs;
}

CVec multiple_root_equation(std::span<const Complex> y, const CoefficientTables& tables) {
    const int N = tables.n_roots();
    if (static_cast<int>(y.size()) < N)
        throw std::invalid_argument("multiple_root_equation: expected N coefficients");
    CVec coeffs(N + 1);
    coeffs[0] = static_cast<double>(pochhammer(N + 1, tables.m1()));
    for (int j = 1; j <= N; ++j) coeffs[j] = tables.rising_d(j) * y[j - 1];
    return coeffs;
}

double coefficient_scale(std::span<const Complex> x, int m1) {
    double mx = 1.0;
    for (const Complex& v : x) mx = std::max(mx, std::abs(v));
    return std::pow(mx, static_cast<double>(x.size() + m1));
}

}  // namespace rootflow
