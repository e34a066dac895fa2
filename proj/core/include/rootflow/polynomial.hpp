#pragma once

#include <span>

#include "rootflow/types.hpp"

namespace rootflow {

/// Horner evaluation; coefficients in descending-power order.
Complex polyval(std::span<const Complex> coeffs, Complex z);

/// Magnitude scale of the evaluation: sum_k |c_k| |z|^{deg-k}.  A residual
/// |p(z)| below eps * polyval_scale(p, z) is as small as double arithmetic
/// can certify.
double polyval_scale(std::span<const Complex> coeffs, Complex z);

/// Derivative, descending order.
CVec polyder(std::span<const Complex> coeffs);

/// Synthetic division by (z - root); remainder is dropped.
CVec deflate(std::span<const Complex> coeffs, Complex root);

/// All roots of a polynomial of degree >= 1 (descending coefficients,
/// leading coefficient nonzero), via companion-matrix eigenvalues with one
/// Newton polish pass.  Backward stable: |p(root)| stays within a small
/// multiple of machine epsilon times the evaluation scale.
CVec roots_of(std::span<const Complex> coeffs);

}  // namespace rootflow
