#include "rootflow/coeffs.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace rootflow {

BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    k = std::min(k, n - k);
    BigInt result = 1;
    for (long long i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;
    }
    return result;
}

BigInt pochhammer(long long a, long long m) {
    if (m < 0) throw std::invalid_argument("pochhammer: negative order");
    BigInt result = 1;
    for (long long i = 0; i < m; ++i) result *= (a + i);
    return result;
}

namespace {

void check_params(int n_roots, int m1) {
    if (n_roots < 2) throw std::invalid_argument("n_roots must be >= 2");
    if (m1 < 1) throw std::invalid_argument("m1 must be >= 1");
}

}  // namespace

BetaTable::BetaTable(int n_roots, int m1) : n_roots_(n_roots), m1_(m1), zero_(0) {
    check_params(n_roots, m1);
    const int N = n_roots;
    data_.assign(static_cast<std::size_t>(N) * N * N, BigInt(0));
    auto slot = [&](int k, int n, int m) -> BigInt& {
        return data_[(static_cast<std::size_t>(k - 1) * N + (n - 1)) * N + (m - 1)];
    };
    for (int n = 1; n <= N; ++n)
        for (int m = 1; m < n; ++m) slot(1, n, m) = binomial(m1, n - m);
    for (int k = 2; k <= N; ++k)
        for (int n = 1; n <= N; ++n)
            for (int m = 1; m <= N; ++m) {
                BigInt sum = 0;
                for (int j = m + 1; j <= n + 1 - k; ++j)
                    sum += binomial(m1, j - m) * slot(k - 1, n, j);
                slot(k, n, m) = -sum;
            }
}

const BigInt& BetaTable::at(int k, int n, int m) const {
    const int N = n_roots_;
    if (k < 1 || n < 1 || n > N || m < 1 || m > N) return zero_;
    if (k > N) return zero_;  // recursion support is exhausted past k = N-1
    return data_[(static_cast<std::size_t>(k - 1) * N + (n - 1)) * N + (m - 1)];
}

CoefficientTables::CoefficientTables(int n_roots, int m1)
    : n_roots_(n_roots), m1_(m1), beta_(n_roots, m1), zero_(0) {
    const int N = n_roots;
    alpha_.assign(static_cast<std::size_t>(N) * N, BigInt(0));
    gamma_.assign(N, BigInt(0));
    theta_.assign(static_cast<std::size_t>(m1) * std::max(N - 1, 1), BigInt(0));
    phi_.assign(m1, BigInt(0));

    auto alpha_slot = [&](int n, int m) -> BigInt& {
        return alpha_[static_cast<std::size_t>(n - 1) * N + (m - 1)];
    };

    for (int n = 1; n <= N; ++n)
        for (int m = 1; m < n; ++m) {
            BigInt sum = 0;
            for (int k = 1; k <= n - m; ++k) sum += beta_.at(k, n, m);
            alpha_slot(n, m) = ((n + m + 1) % 2 == 0) ? sum : -sum;
        }

    for (int n = 1; n <= N; ++n) {
        BigInt g = (n % 2 == 0) ? binomial(m1, n) : -binomial(m1, n);
        for (int j = 1; j < n; ++j) {
            BigInt term = binomial(m1, j) * alpha_slot(n, j);
            g += (j % 2 == 0) ? term : -term;
        }
        gamma_[n - 1] = g;
    }

    auto sign = [](int e) { return (e % 2 == 0) ? 1 : -1; };
    for (int k = 1; k <= m1; ++k) {
        for (int j = 1; j <= N - 1; ++j) {
            BigInt v = sign(N + k + j) * binomial(m1, N + k - j);
            for (int l = j + 1; l <= N; ++l)
                v += sign(N + k + l) * binomial(m1, N + k - l) * alpha_slot(l, j);
            theta_[static_cast<std::size_t>(k - 1) * (N - 1) + (j - 1)] = v;
        }
        BigInt inner = binomial(m1, N + k);
        for (int l = 1; l <= N; ++l) {
            BigInt bracket = binomial(m1, l);
            for (int j = 1; j < l; ++j)
                bracket += sign(l + j) * binomial(m1, j) * alpha_slot(l, j);
            inner -= binomial(m1, N + k - l) * bracket;
        }
        phi_[k - 1] = sign(N + k) * inner;
    }

    alpha_d_.resize(alpha_.size());
    for (std::size_t i = 0; i < alpha_.size(); ++i)
        alpha_d_[i] = static_cast<double>(alpha_[i]);
    gamma_d_.resize(gamma_.size());
    for (std::size_t i = 0; i < gamma_.size(); ++i)
        gamma_d_[i] = static_cast<double>(gamma_[i]);
    rising_d_.resize(N);
    for (int j = 1; j <= N; ++j)
        rising_d_[j - 1] = static_cast<double>(pochhammer(N - j + 1, m1));
    mult_fact_d_ = static_cast<double>(pochhammer(1, m1 + 1));
}

std::shared_ptr<const CoefficientTables> CoefficientTables::get(int n_roots, int m1) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const CoefficientTables>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[{n_roots, m1}];
    if (!entry) entry = std::make_shared<const CoefficientTables>(n_roots, m1);
    return entry;
}

const BigInt& CoefficientTables::alpha(int n, int m) const {
    if (n < 1 || n > n_roots_ || m < 1 || m > n_roots_) return zero_;
    return alpha_[static_cast<std::size_t>(n - 1) * n_roots_ + (m - 1)];
}

const BigInt& CoefficientTables::gamma(int n) const {
    if (n < 1 || n > n_roots_) return zero_;
    return gamma_[n - 1];
}

const BigInt& CoefficientTables::theta(int k, int j) const {
    if (k < 1 || k > m1_ || j < 1 || j > n_roots_ - 1) return zero_;
    return theta_[static_cast<std::size_t>(k - 1) * (n_roots_ - 1) + (j - 1)];
}

const BigInt& CoefficientTables::phi(int k) const {
    if (k < 1 || k > m1_) return zero_;
    return phi_[k - 1];
}

double CoefficientTables::alpha_d(int n, int m) const {
    if (n < 1 || n > n_roots_ || m < 1 || m > n_roots_) return 0.0;
    return alpha_d_[static_cast<std::size_t>(n - 1) * n_roots_ + (m - 1)];
}

double CoefficientTables::gamma_d(int n) const {
    if (n < 1 || n > n_roots_) return 0.0;
    return gamma_d_[n - 1];
}

double CoefficientTables::rising_d(int j) const {
    if (j < 1 || j > n_roots_) return 0.0;
    return rising_d_[j - 1];
}

Complex elem_sym(std::span<const Complex> values, int n) {
    if (n == 0) return 1.0;
    if (n < 0 || n > static_cast<int>(values.size())) return 0.0;
    return elem_sym_all(values)[static_cast<std::size_t>(n)];
}

CVec elem_sym_all(std::span<const Complex> values) {
    CVec e(values.size() + 1, Complex(0.0));
    e[0] = 1.0;
    std::size_t active = 0;
    for (const Complex& v : values) {
        ++active;
        for (std::size_t j = active; j >= 1; --j) e[j] += v * e[j - 1];
    }
    return e;
}

}  // namespace rootflow
