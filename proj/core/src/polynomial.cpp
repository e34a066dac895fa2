#include "rootflow/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace rootflow {

Complex polyval(std::span<const Complex> coeffs, Complex z) {
    Complex acc = 0.0;
    for (const Complex& c : coeffs) acc = acc * z + c;
    return acc;
}

double polyval_scale(std::span<const Complex> coeffs, Complex z) {
    const double az = std::abs(z);
    double acc = 0.0;
    for (const Complex& c : coeffs) acc = acc * az + std::abs(c);
    return acc;
}

CVec polyder(std::span<const Complex> coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg <= 0) return {Complex(0.0)};
    CVec out(deg);
    for (int i = 0; i < deg; ++i) out[i] = coeffs[i] * static_cast<double>(deg - i);
    return out;
}

CVec deflate(std::span<const Complex> coeffs, Complex root) {
    if (coeffs.size() < 2) throw std::invalid_argument("deflate: degree must be >= 1");
    CVec out(coeffs.size() - 1);
    Complex acc = 0.0;
    for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
        acc = acc * root + coeffs[i];
        out[i] = acc;
    }
    return out;
}

CVec roots_of(std::span<const Complex> coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) throw std::invalid_argument("roots_of: degree must be >= 1");
    if (coeffs[0] == Complex(0.0))
        throw std::invalid_argument("roots_of: vanishing leading coefficient");
    if (deg == 1) return {-coeffs[1] / coeffs[0]};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[deg - i] / coeffs[0];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("roots_of: eigenvalue iteration did not converge");

    const CVec dcoeffs = polyder(coeffs);
    CVec roots(deg);
    for (int i = 0; i < deg; ++i) {
        Complex z = solver.eigenvalues()(i);
        // one Newton polish pass; skip when the derivative is tiny
        // (clustered root, polishing would amplify noise)
        for (int it = 0; it < 2; ++it) {
            const Complex dp = polyval(dcoeffs, z);
            if (std::abs(dp) < 1e-3 * polyval_scale(dcoeffs, z)) break;
            const Complex step = polyval(coeffs, z) / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            z -= step;
        }
        roots[i] = z;
    }
    return roots;
}

}  // namespace rootflow
