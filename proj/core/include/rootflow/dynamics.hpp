#pragma once

#include <array>
#include <span>

#include "rootflow/coeffs.hpp"
#include "rootflow/types.hpp"

namespace rootflow {

/// Default relative collision threshold: evaluation is refused when any
/// pairwise root distance falls below eps_rel * (1 + max |x_n|).
inline constexpr double kDefaultCollisionEps = 1e-8;

/// Absolute collision threshold for the given configuration.
double collision_threshold(std::span<const Complex> x,
                           double eps_rel = kDefaultCollisionEps);

/// Throws collision_error when two roots are closer than the threshold.
void require_separated(std::span<const Complex> x,
                       double eps_rel = kDefaultCollisionEps);

/// First derivative of the multiple root:
///   x1' = -[(m1+1)! prod_{n>=2}(x1-x_n)]^{-1} sum_j (N-j+1)_{m1} x1^{N-j} y_j'.
Complex x1_dot(std::span<const Complex> x, std::span<const Complex> ydot, int m1,
               double eps_rel = kDefaultCollisionEps);

/// Second derivative of the multiple root; same leading structure plus the
/// velocity correction sum_{n>=2} (m1 x1' + 2 x_n') / (x1 - x_n) * x1'.
Complex x1_ddot(std::span<const Complex> x, std::span<const Complex> xdot,
                std::span<const Complex> yddot, int m1,
                double eps_rel = kDefaultCollisionEps);

/// First-order root velocity h_n^{(1)}: expresses x_n' through the roots,
/// the first N coefficients and their first derivatives.  n is 1-based;
/// n = 1 is the multiple root (identical to x1_dot).
Complex h_first(int n, std::span<const Complex> x, std::span<const Complex> y,
                std::span<const Complex> ydot, const CoefficientTables& tables,
                double eps_rel = kDefaultCollisionEps);

/// Second-order root acceleration h_n^{(2)}; n = 1 is x1_ddot.
Complex h_second(int n, std::span<const Complex> x, std::span<const Complex> xdot,
                 std::span<const Complex> y, std::span<const Complex> ydot,
                 std::span<const Complex> yddot, const CoefficientTables& tables,
                 double eps_rel = kDefaultCollisionEps);

/// Closed-form N = 2 system, with the coefficient evolution values f
/// already substituted.  Cross-checks the generic h_second path.
std::array<Complex, 2> two_body_rhs(std::span<const Complex> x,
                                    std::span<const Complex> xdot,
                                    std::span<const Complex> f, int m1,
                                    double eps_rel = kDefaultCollisionEps);

/// Closed-form N = 3 system.
std::array<Complex, 3> three_body_rhs(std::span<const Complex> x,
                                      std::span<const Complex> xdot,
                                      std::span<const Complex> f, int m1,
                                      double eps_rel = kDefaultCollisionEps);

/// Residual of the first-order consistency identity
///   sum_j x1^{N-j} xi_j'  ==  sum_j (N-j+1)_{m1}/(m1+1)! x1^{N-j} y_j'.
/// Vanishes (to rounding) on consistent states.
Complex remark_residual_first(std::span<const Complex> x, std::span<const Complex> xdot,
                              std::span<const Complex> y, std::span<const Complex> ydot,
                              const CoefficientTables& tables);

/// Residual of the second-order identity, which carries the extra
///   -m1 (x1')^2 sum_{k>=2} prod_{l>=2, l!=k} (x1 - x_l)
/// term on the right-hand side.
Complex remark_residual_second(std::span<const Complex> x, std::span<const Complex> xdot,
                               std::span<const Complex> y, std::span<const Complex> ydot,
                               std::span<const Complex> yddot,
                               const CoefficientTables& tables);

}  // namespace rootflow
