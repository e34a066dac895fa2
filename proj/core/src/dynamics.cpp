#include "rootflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rootflow {

namespace {

double max_abs(std::span<const Complex> x) {
    double m = 0.0;
    for (const Complex& v : x) m = std::max(m, std::abs(v));
    return m;
}

void check_sizes(std::span<const Complex> x, int m1) {
    if (x.size() < 2) throw std::invalid_argument("need at least two roots");
    if (m1 < 1) throw std::invalid_argument("m1 must be >= 1");
}

// x1 powers 0..N
CVec powers(Complex x1, int up_to) {
    CVec p(up_to + 1);
    p[0] = 1.0;
    for (int i = 1; i <= up_to; ++i) p[i] = p[i - 1] * x1;
    return p;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double rising(int a, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= a + i;
    return r;
}

// sum_j (N-j+1)_{m1} x1^{N-j} v_j  -- the recurring multiple-root sum
Complex rising_sum(std::span<const Complex> v, const CVec& pow, int N, int m1) {
    Complex s = 0.0;
    for (int j = 1; j <= N; ++j) s += rising(N - j + 1, m1) * pow[N - j] * v[j - 1];
    return s;
}

}  // namespace

double collision_threshold(std::span<const Complex> x, double eps_rel) {
    return eps_rel * (1.0 + max_abs(x));
}

void require_separated(std::span<const Complex> x, double eps_rel) {
    const double eps = collision_threshold(x, eps_rel);
    const int N = static_cast<int>(x.size());
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            const double d = std::abs(x[i] - x[j]);
            if (d < eps)
                throw collision_error("roots " + std::to_string(i + 1) + " and " +
                                          std::to_string(j + 1) + " within collision threshold",
                                      i, j, d);
        }
}

Complex x1_dot(std::span<const Complex> x, std::span<const Complex> ydot, int m1,
               double eps_rel) {
    check_sizes(x, m1);
    require_separated(x, eps_rel);
    const int N = static_cast<int>(x.size());
    const CVec pow = powers(x[0], N);
    Complex prod = 1.0;
    for (int l = 1; l < N; ++l) prod *= x[0] - x[l];
    return -rising_sum(ydot, pow, N, m1) / (factorial(m1 + 1) * prod);
}

Complex x1_ddot(std::span<const Complex> x, std::span<const Complex> xdot,
                std::span<const Complex> yddot, int m1, double eps_rel) {
    check_sizes(x, m1);
    require_separated(x, eps_rel);
    const int N = static_cast<int>(x.size());
    const CVec pow = powers(x[0], N);
    Complex prod = 1.0;
    for (int l = 1; l < N; ++l) prod *= x[0] - x[l];
    Complex corr = 0.0;
    for (int n = 1; n < N; ++n)
        corr += (static_cast<double>(m1) * xdot[0] + 2.0 * xdot[n]) / (x[0] - x[n]);
    return -rising_sum(yddot, pow, N, m1) / (factorial(m1 + 1) * prod) + xdot[0] * corr;
}

Complex h_first(int n, std::span<const Complex> x, std::span<const Complex> y,
                std::span<const Complex> ydot, const CoefficientTables& tables,
                double eps_rel) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    if (n < 1 || n > N) throw std::invalid_argument("h_first: index out of range");
    if (n == 1) return x1_dot(x, ydot, m1, eps_rel);
    require_separated(x, eps_rel);

    const int i = n - 1;
    const CVec pow1 = powers(x[0], N);
    const CVec pown = powers(x[i], N);

    Complex prod_all = 1.0;
    for (int l = 0; l < N; ++l)
        if (l != i) prod_all *= x[i] - x[l];

    // leading term: xi' with the x1' contribution split off
    Complex lead = 0.0;
    for (int m = 1; m <= N; ++m) {
        Complex inner = ydot[m - 1];
        for (int j = 1; j < m; ++j)
            inner += tables.alpha_d(m, j) * pow1[m - j] * ydot[j - 1];
        lead += pown[N - m] * inner;
    }
    lead = -lead / prod_all;

    // x1' chain term
    Complex prod_pairs = 1.0;
    for (int l = 1; l < N; ++l)
        if (l != i) prod_pairs *= (x[i] - x[l]) * (x[0] - x[l]);
    const Complex dx = x[i] - x[0];
    const Complex pref = -1.0 / (dx * dx * factorial(m1 + 1) * prod_pairs);

    const Complex drive = rising_sum(ydot, pow1, N, m1);

    Complex bracket = 0.0;
    for (int m = 1; m <= N; ++m) {
        Complex inner = -static_cast<double>(m) * tables.gamma_d(m) * pow1[m - 1];
        for (int j = 1; j < m; ++j)
            inner += tables.alpha_d(m, j) * static_cast<double>(m - j) * pow1[m - j - 1] *
                     y[j - 1];
        bracket += pown[N - m] * inner;
    }
    return lead + pref * drive * bracket;
}

Complex h_second(int n, std::span<const Complex> x, std::span<const Complex> xdot,
                 std::span<const Complex> y, std::span<const Complex> ydot,
                 std::span<const Complex> yddot, const CoefficientTables& tables,
                 double eps_rel) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    if (n < 1 || n > N) throw std::invalid_argument("h_second: index out of range");
    if (n == 1) return x1_ddot(x, xdot, yddot, m1, eps_rel);
    require_separated(x, eps_rel);

    const int i = n - 1;
    const Complex v1 = xdot[0];
    const CVec pow1 = powers(x[0], N);
    const CVec pown = powers(x[i], N);

    Complex pair_sum = 0.0;
    for (int l = 0; l < N; ++l)
        if (l != i) pair_sum += 2.0 * xdot[i] * xdot[l] / (x[i] - x[l]);

    Complex prod_all = 1.0;
    for (int l = 0; l < N; ++l)
        if (l != i) prod_all *= x[i] - x[l];

    // xi'' contributions that do not involve x1''
    Complex brace = 0.0;
    for (int m = 1; m <= N; ++m) {
        Complex inner = yddot[m - 1];
        for (int j = 1; j < m; ++j)
            inner += tables.alpha_d(m, j) * pow1[m - j] * yddot[j - 1];
        inner -= v1 * v1 * static_cast<double>(m) * static_cast<double>(m - 1) *
                 tables.gamma_d(m) * (m >= 2 ? pow1[m - 2] : Complex(0.0));
        for (int j = 1; j <= m - 2; ++j)
            inner += v1 * v1 * static_cast<double>(m - j) * static_cast<double>(m - j - 1) *
                     tables.alpha_d(m, j) * pow1[m - j - 2] * y[j - 1];
        for (int j = 1; j < m; ++j)
            inner += 2.0 * v1 * static_cast<double>(m - j) * tables.alpha_d(m, j) *
                     pow1[m - j - 1] * ydot[j - 1];
        brace += pown[N - m] * inner;
    }
    const Complex term2 = -brace / prod_all;

    // the x1'' block, with the two expressions for x1'' substituted
    Complex prod_pairs = 1.0;
    for (int l = 1; l < N; ++l)
        if (l != i) prod_pairs *= (x[i] - x[l]) * (x[0] - x[l]);
    const Complex dx = x[i] - x[0];
    const Complex part_a =
        rising_sum(yddot, pow1, N, m1) / (dx * dx * factorial(m1 + 1) * prod_pairs);

    Complex vel = 0.0;
    for (int j = 1; j < N; ++j)
        vel += (static_cast<double>(m1) * v1 + 2.0 * xdot[j]) / (x[0] - x[j]);
    const Complex part_b = v1 * vel / prod_all;

    Complex brace_c = 0.0;
    for (int m = 1; m <= N; ++m) {
        Complex inner = static_cast<double>(m) * tables.gamma_d(m) * pow1[m - 1];
        for (int j = 1; j < m; ++j)
            inner -= static_cast<double>(m - j) * tables.alpha_d(m, j) * pow1[m - j - 1] *
                     y[j - 1];
        brace_c += pown[N - m] * inner;
    }

    return pair_sum + term2 + (part_a + part_b) * brace_c;
}

std::array<Complex, 2> two_body_rhs(std::span<const Complex> x,
                                    std::span<const Complex> xdot,
                                    std::span<const Complex> f, int m1, double eps_rel) {
    if (x.size() != 2) throw std::invalid_argument("two_body_rhs: N must be 2");
    require_separated(x, eps_rel);
    const Complex gap = x[0] - x[1];
    const Complex pair = xdot[0] * (static_cast<double>(m1) * xdot[0] + 2.0 * xdot[1]) / gap;
    const double mbar = m1 + 1.0;
    const Complex a1 = -(mbar * x[0] * f[0] + f[1]) / (mbar * gap) + pair;
    const Complex a2 =
        ((static_cast<double>(m1) * x[0] + x[1]) * f[0] + f[1]) / gap - mbar * pair;
    return {a1, a2};
}

std::array<Complex, 3> three_body_rhs(std::span<const Complex> x,
                                      std::span<const Complex> xdot,
                                      std::span<const Complex> f, int m1, double eps_rel) {
    if (x.size() != 3) throw std::invalid_argument("three_body_rhs: N must be 3");
    require_separated(x, eps_rel);
    const double m = m1;
    const Complex x1 = x[0], x2 = x[1], x3 = x[2];
    const Complex d1 = xdot[0], d2 = xdot[1], d3 = xdot[2];

    const Complex a1 =
        d1 * ((m * d1 + 2.0 * d2) / (x1 - x2) + (m * d1 + 2.0 * d3) / (x1 - x3)) -
        ((m + 2.0) * (m + 1.0) * x1 * x1 * f[0] + 2.0 * (m + 1.0) * x1 * f[1] + 2.0 * f[2]) /
            (2.0 * (m + 1.0) * (x1 - x2) * (x1 - x3));

    const Complex a2 =
        (2.0 * m * (m + 1.0) * d1 * d1 * (x3 - x1) + 4.0 * (m + 1.0) * d1 * d2 * (x3 - x2) +
         4.0 * d2 * d3 * (x1 - x2) +
         (m * (m + 1.0) * x1 * x1 + 2.0 * x2 * (m * x1 + x2)) * f[0] +
         2.0 * (m * x1 + x2) * f[1] + 2.0 * f[2]) /
        (2.0 * (x1 - x2) * (x2 - x3));

    const Complex a3 =
        -(2.0 * m * (m + 1.0) * d1 * d1 * (x2 - x1) + 4.0 * (m + 1.0) * d1 * d3 * (x2 - x3) +
          4.0 * d2 * d3 * (x1 - x3) +
          (m * (m + 1.0) * x1 * x1 + 2.0 * x3 * (m * x1 + x3)) * f[0] +
          2.0 * (m * x1 + x3) * f[1] + 2.0 * f[2]) /
        (2.0 * (x1 - x3) * (x2 - x3));

    return {a1, a2, a3};
}

Complex remark_residual_first(std::span<const Complex> x, std::span<const Complex> xdot,
                              std::span<const Complex> y, std::span<const Complex> ydot,
                              const CoefficientTables& tables) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    const CVec pow1 = powers(x[0], N);
    const Complex v1 = xdot[0];

    Complex lhs = 0.0;
    for (int m = 1; m <= N; ++m) {
        // xi_m' by the chain rule through the table expression
        Complex d = ydot[m - 1];
        for (int j = 1; j < m; ++j)
            d += tables.alpha_d(m, j) *
                 (pow1[m - j] * ydot[j - 1] +
                  static_cast<double>(m - j) * pow1[m - j - 1] * v1 * y[j - 1]);
        d -= tables.gamma_d(m) * static_cast<double>(m) * pow1[m - 1] * v1;
        lhs += pow1[N - m] * d;
    }

    Complex rhs = 0.0;
    const double fact = factorial(m1 + 1);
    for (int j = 1; j <= N; ++j)
        rhs += rising(N - j + 1, m1) / fact * pow1[N - j] * ydot[j - 1];
    return lhs - rhs;
}

Complex remark_residual_second(std::span<const Complex> x, std::span<const Complex> xdot,
                               std::span<const Complex> y, std::span<const Complex> ydot,
                               std::span<const Complex> yddot,
                               const CoefficientTables& tables) {
    const int N = tables.n_roots();
    const int m1 = tables.m1();
    const CVec pow1 = powers(x[0], N);
    const Complex v1 = xdot[0];
    const Complex a1 = x1_ddot(x, xdot, yddot, m1);

    Complex lhs = 0.0;
    for (int m = 1; m <= N; ++m) {
        Complex d = yddot[m - 1];
        for (int j = 1; j < m; ++j) {
            const double mj = m - j;
            d += tables.alpha_d(m, j) *
                 (pow1[m - j] * yddot[j - 1] + 2.0 * mj * pow1[m - j - 1] * v1 * ydot[j - 1] +
                  mj * (mj - 1.0) * (m - j >= 2 ? pow1[m - j - 2] : Complex(0.0)) * v1 * v1 *
                      y[j - 1] +
                  mj * pow1[m - j - 1] * a1 * y[j - 1]);
        }
        d -= tables.gamma_d(m) *
             (static_cast<double>(m) * pow1[m - 1] * a1 +
              static_cast<double>(m) * (m - 1.0) * (m >= 2 ? pow1[m - 2] : Complex(0.0)) * v1 *
                  v1);
        lhs += pow1[N - m] * d;
    }

    Complex rhs = 0.0;
    const double fact = factorial(m1 + 1);
    for (int j = 1; j <= N; ++j)
        rhs += rising(N - j + 1, m1) / fact * pow1[N - j] * yddot[j - 1];
    Complex tail = 0.0;
    for (int k = 1; k < N; ++k) {
        Complex prod = 1.0;
        for (int l = 1; l < N; ++l)
            if (l != k) prod *= x[0] - x[l];
        tail += prod;
    }
    rhs -= static_cast<double>(m1) * v1 * v1 * tail;
    return lhs - rhs;
}

}  // namespace rootflow
