// Independent oracles for the test suites: exact integer matrix algebra,
// brute-force polynomial expansion, second-order jets for prescribed root
// paths, and RNG helpers.  Everything here recomputes from first principles
// and must stay independent of the implementation paths it checks.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "rootflow/coeffs.hpp"
#include "rootflow/types.hpp"

namespace oracle {

using rootflow::BigInt;
using rootflow::Complex;
using rootflow::CVec;

// ---- exact integer matrices ------------------------------------------------

using BigMat = std::vector<std::vector<BigInt>>;

inline BigMat big_identity(int n) {
    BigMat m(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline BigMat big_mul(const BigMat& a, const BigMat& b) {
    const int n = static_cast<int>(a.size());
    BigMat out(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

// the nilpotent strictly-lower block C of the change-of-basis matrix,
// evaluated at x1 = 1 (0-based storage, 1-based formula indices)
inline BigMat c_matrix_at_one(int n_roots, int m1) {
    BigMat c(n_roots, std::vector<BigInt>(n_roots, 0));
    for (int n = 1; n <= n_roots; ++n)
        for (int j = 1; j <= n - 1; ++j) {
            const BigInt b = rootflow::binomial(m1, n - j);
            c[n - 1][j - 1] = ((n + j + 1) % 2 == 0) ? b : -b;
        }
    return c;
}

// upper N x N block of the full change-of-basis matrix at x1 = 1
inline BigMat a_matrix_at_one(int n_roots, int m1) {
    BigMat a = big_identity(n_roots);
    for (int n = 1; n <= n_roots; ++n)
        for (int j = 1; j <= n - 1; ++j) {
            const BigInt b = rootflow::binomial(m1, n - j);
            a[n - 1][j - 1] = ((n + j) % 2 == 0) ? b : -b;
        }
    return a;
}

// exact inverse of a lower unitriangular integer matrix by forward
// substitution; the inverse is again integer
inline BigMat unitriangular_inverse(const BigMat& a) {
    const int n = static_cast<int>(a.size());
    BigMat inv = big_identity(n);
    for (int col = 0; col < n; ++col)
        for (int row = col + 1; row < n; ++row) {
            BigInt acc = 0;
            for (int k = col; k < row; ++k) acc += a[row][k] * inv[k][col];
            inv[row][col] = -acc;
        }
    return inv;
}

// ---- brute-force polynomial expansion ---------------------------------------

// descending monic coefficients of prod (z - r) by repeated synthetic
// multiplication of linear factors
inline CVec poly_from_roots(const CVec& roots) {
    CVec c{Complex(1.0)};
    for (const Complex& r : roots) {
        CVec next(c.size() + 1, Complex(0.0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

// ---- jets: exact derivatives along prescribed smooth paths ------------------

// (value, first, second) derivative triple with product-rule arithmetic
struct Jet {
    Complex v{0.0}, d1{0.0}, d2{0.0};
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + 2.0 * a.d1 * b.d1 + a.d2 * b.v};
}

// a root path given by a quadratic-in-t complex polynomial
struct QuadPath {
    Complex a, b, c;  // x(t) = a + b t + c t^2
    Jet at(double t) const { return {a + b * t + c * t * t, b + 2.0 * c * t, 2.0 * c}; }
};

// coefficient jets (y_n, y_n', y_n'') of the full monic polynomial whose
// roots follow the given paths, the first with extra multiplicity m1
inline std::vector<Jet> coeff_jets(const std::vector<QuadPath>& paths, int m1, double t) {
    std::vector<Jet> factors;
    for (int k = 0; k < m1; ++k) factors.push_back(paths[0].at(t));
    for (const QuadPath& p : paths) factors.push_back(p.at(t));
    std::vector<Jet> coeffs{Jet{Complex(1.0), 0.0, 0.0}};
    for (const Jet& w : factors) {
        std::vector<Jet> next(coeffs.size() + 1);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] = next[i] + coeffs[i];
            next[i + 1] = next[i + 1] - w * coeffs[i];
        }
        coeffs = std::move(next);
    }
    return coeffs;  // coeffs[0] is the leading 1, coeffs[n] is y_n
}

// ---- randomness --------------------------------------------------------------

inline Complex random_complex(std::mt19937_64& rng, double radius = 1.0) {
    std::uniform_real_distribution<double> u(-radius, radius);
    const double re = u(rng);
    const double im = u(rng);
    return {re, im};
}

inline CVec random_separated_roots(std::mt19937_64& rng, int n, double min_sep,
                                   double radius = 2.0) {
    CVec x(n);
    while (true) {
        for (int i = 0; i < n; ++i) x[i] = random_complex(rng, radius);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(x[i] - x[j]) < min_sep) {
                    ok = false;
                    break;
                }
        if (ok) return x;
    }
}

inline std::vector<QuadPath> random_paths(std::mt19937_64& rng, int n, double min_sep) {
    const CVec base = random_separated_roots(rng, n, min_sep, 3.0);
    std::vector<QuadPath> paths(n);
    for (int i = 0; i < n; ++i)
        paths[i] = {base[i], random_complex(rng, 0.5), random_complex(rng, 0.5)};
    return paths;
}

}  // namespace oracle
