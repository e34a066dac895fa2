#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <span>
#include <vector>

#include "rootflow/types.hpp"

namespace rootflow {

/// Exact integer type for the combinatorial tables.  The recursive tables
/// compound binomials of m1 across up to N levels, which overflows 64-bit
/// integers well inside the supported parameter range.
using BigInt = boost::multiprecision::cpp_int;

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.
BigInt binomial(long long n, long long k);

/// Rising factorial a (a+1) ... (a+m-1); 1 when m = 0.  Requires m >= 0.
BigInt pochhammer(long long a, long long m);

/// The three-index table beta(k, n, m) behind the alpha coefficients:
///   beta(1, n, m) = C(m1, n-m) for m <= n-1, zero for m >= n
///   beta(k, n, m) = -sum_{j=m+1}^{n+1-k} C(m1, j-m) beta(k-1, n, j)
/// Entries vanish for m > n-k.  Indices are 1-based: 1 <= k, n, m <= N.
class BetaTable {
public:
    BetaTable(int n_roots, int m1);

    int n_roots() const noexcept { return n_roots_; }
    int m1() const noexcept { return m1_; }

    /// Zero outside the support (including k > n-m).
    const BigInt& at(int k, int n, int m) const;

private:
    int n_roots_;
    int m1_;
    std::vector<BigInt> data_;  // [k-1][n-1][m-1], dense N^3
    BigInt zero_;
};

/// All exact integer tables for a given pair (N, m1):
///
///   alpha(n, m)  N x N, strictly lower triangular; the off-diagonal part of
///                the inverse of the leading block of the root/coefficient
///                change-of-basis matrix, per power of the multiple root
///   gamma(n)     length N; the constant-term companion of alpha
///   theta(k, j)  m1 x (N-1) and phi(k) length m1; express the trailing m1
///                polynomial coefficients through the first N and the
///                multiple root
///
/// Indices are 1-based throughout, matching the conventional statement of
/// the tables.  Instances are immutable; `get` caches one per (N, m1).
class CoefficientTables {
public:
    CoefficientTables(int n_roots, int m1);

    /// Cached shared instance; thread safe.
    static std::shared_ptr<const CoefficientTables> get(int n_roots, int m1);

    int n_roots() const noexcept { return n_roots_; }
    int m1() const noexcept { return m1_; }

    const BigInt& alpha(int n, int m) const;
    const BigInt& gamma(int n) const;
    const BigInt& theta(int k, int j) const;
    const BigInt& phi(int k) const;

    const BetaTable& beta() const noexcept { return beta_; }

    // Double-precision mirrors for evaluation loops.
    double alpha_d(int n, int m) const;
    double gamma_d(int n) const;

    /// (N - j + 1)_{m1} for j = 1..N, as doubles.
    double rising_d(int j) const;
    /// (m1 + 1)!
    double multiplicity_factorial_d() const noexcept { return mult_fact_d_; }

private:
    int n_roots_;
    int m1_;
    BetaTable beta_;
    std::vector<BigInt> alpha_;   // N x N row-major, 1-based semantics
    std::vector<BigInt> gamma_;   // N
    std::vector<BigInt> theta_;   // m1 x (N-1)
    std::vector<BigInt> phi_;     // m1
    std::vector<double> alpha_d_;
    std::vector<double> gamma_d_;
    std::vector<double> rising_d_;
    double mult_fact_d_;
    BigInt zero_;
};

/// Elementary symmetric polynomial sigma_n over the given values:
/// 1 when n = 0, 0 when n > size or n < 0.  One-pass product-accumulation
/// recurrence, not subset enumeration.
Complex elem_sym(std::span<const Complex> values, int n);

/// All of sigma_0 .. sigma_M at once (length M+1).
CVec elem_sym_all(std::span<const Complex> values);

}  // namespace rootflow
