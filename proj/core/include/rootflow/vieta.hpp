#pragma once

#include <span>

#include "rootflow/coeffs.hpp"
#include "rootflow/types.hpp"

namespace rootflow {

/// Positions (and optionally velocities) of the N distinct roots.  x[0] is
/// the multiple root: it carries multiplicity m1+1 in the polynomial
///   p(z) = (z - x_1)^{m1} prod_n (z - x_n).
struct RootState {
    CVec x;
    CVec xdot;  // empty when velocities are absent
    int m1 = 1;

    int n_roots() const noexcept { return static_cast<int>(x.size()); }
    bool has_velocities() const noexcept { return !xdot.empty(); }
};

/// The first N polynomial coefficients y_1..y_N (and optionally their time
/// derivatives) at time t.
struct CoeffState {
    CVec y;
    CVec ydot;
    double t = 0.0;
};

/// All N+m1 coefficients of the monic polynomial with the given roots:
/// y_n = (-1)^n sigma_n over the multiset {x_1 (m1+1 times), x_2, .., x_N}.
CVec coeffs_from_roots(const RootState& state);

/// Coefficient initial data for the generating models: the first N
/// coefficients, plus their derivatives when the state has velocities.
CoeffState coeff_state_from_roots(const RootState& state, double t = 0.0);

/// Time derivatives of the first N coefficients, by differentiating the
/// product form: the x_1 slot carries weight m1+1.  Requires velocities.
CVec coeff_derivs_from_roots(const RootState& state);

/// Coefficients xi_1..xi_N of the simple-root factor prod_n (z - x_n),
/// recovered from the first N coefficients of the full polynomial:
///   xi_n = y_n + sum_{j<n} alpha_{nj} x1^{n-j} y_j - gamma_n x1^n.
CVec xi_from_y(std::span<const Complex> y, Complex x1, const CoefficientTables& tables);

/// The trailing coefficients y_{N+1}..y_{N+m1} from the first N and the
/// multiple root, via the theta/phi tables.
CVec extend_y(std::span<const Complex> y, Complex x1, const CoefficientTables& tables);

/// Monic polynomial in descending-power order: {1, y_1, .., y_{N+m1}}.
CVec assemble_polynomial(std::span<const Complex> y_full);

/// The multiple root x_1 is a simple root of
///   (N+1)_{m1} z^N + sum_j (N+1-j)_{m1} y_j z^{N-j} = 0.
/// Returns the descending coefficient vector of that degree-N polynomial.
CVec multiple_root_equation(std::span<const Complex> y, const CoefficientTables& tables);

/// Coefficient-magnitude scale max(1, max_n |x_n|)^{N+m1}, used to make
/// absolute tolerances meaningful at large root magnitudes.
double coefficient_scale(std::span<const Complex> x, int m1);

}  // namespace rootflow
