#include "thetalift/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace thetalift {

Factorization factorize(long n) {
    if (n < 1) throw std::domain_error("factorize: argument must be >= 1");
    Factorization f;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<long> divisors(long n) {
    if (n < 1) throw std::domain_error("divisors: argument must be >= 1");
    std::vector<long> d{1};
    for (auto [p, e] : factorize(n)) {
        size_t base = d.size();
        long pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

bool is_squarefree(long n) {
    if (n == 0) return false;
    if (n < 0) n = -n;
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

Int sigma(int k, long n) {
    if (n < 1) throw std::domain_error("sigma: argument must be >= 1");
    // multiplicative: sigma_k(p^e) = 1 + p^k + ... + p^{ek}
    Int r(1);
    for (auto [p, e] : factorize(n)) {
        Int pk = int_pow(Int(p), static_cast<unsigned long>(k));
        Int term(1), acc(1);
        for (int i = 1; i <= e; ++i) {
            term *= pk;
            acc += term;
        }
        r *= acc;
    }
    return r;
}

int mobius(long n) {
    if (n < 1) throw std::domain_error("mobius: argument must be >= 1");
    int r = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        r = -r;
    }
    return r;
}

int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

// Bernoulli numbers are cached; computed via the defining recurrence
// sum_{j=0}^{m} binom(m+1, j) B_j = 0.
std::mutex bernoulli_mutex;
std::vector<Rat> bernoulli_cache{Rat(1)};

Int binom(long n, long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

} // namespace

Rat bernoulli(int k) {
    if (k < 0) throw std::domain_error("bernoulli: negative index");
    std::lock_guard<std::mutex> lock(bernoulli_mutex);
    while (static_cast<int>(bernoulli_cache.size()) <= k) {
        int m = static_cast<int>(bernoulli_cache.size());
        Rat acc(0);
        for (int j = 0; j < m; ++j) acc += Rat(binom(m + 1, j)) * bernoulli_cache[j];
        bernoulli_cache.push_back(-acc / Rat(m + 1));
    }
    return bernoulli_cache[static_cast<size_t>(k)];
}

Rat bernoulli_poly(int k, const Rat& x) {
    // B_k(x) = sum_{j=0}^{k} binom(k,j) B_j x^{k-j}
    Rat acc(0);
    for (int j = 0; j <= k; ++j)
        acc += Rat(binom(k, j)) * bernoulli(j) * rat_pow(x, k - j);
    return acc;
}

bool is_fundamental_discriminant(long d) {
    if (d == 1) return false;
    long r = ((d % 4) + 4) % 4;
    if (r == 1) return is_squarefree(d);
    if (r == 0) {
        long m = d / 4;
        long rm = ((m % 4) + 4) % 4;
        return (rm == 2 || rm == 3) && is_squarefree(m);
    }
    return false;
}

Rat l_value(int k, long d) {
    if (k < 2) throw std::domain_error("l_value: k must be >= 2");
    if (d == 1) return -bernoulli(k) / k;
    if (!is_fundamental_discriminant(d))
        throw NotFundamental("l_value: " + std::to_string(d) + " is not a fundamental discriminant");
    long f = d > 0 ? d : -d;
    Rat b(0);
    for (long a = 1; a <= f; ++a) {
        int chi = kronecker(d, a);
        if (chi == 0) continue;
        b += Rat(chi) * bernoulli_poly(k, make_rat(a, f));
    }
    b *= rat_pow(Rat(f), k - 1);
    return -b / k;
}

Rat h_constant(int k, long d, long level, bool kohnen) {
    Rat h = l_value(k, d) / 2;
    long modulus = kohnen ? level : 2 * level;
    for (auto [p, e] : factorize(modulus)) {
        (void)e;
        Rat term = Rat(1) - Rat(kronecker(d, p)) * rat_pow(Rat(p), k - 1);
        h *= term;
    }
    return h;
}

Int twisted_sigma_sum(long top, int e, int w, long m) {
    if (m < 1) throw std::domain_error("twisted_sigma_sum: argument must be >= 1");
    Int acc(0);
    for (long d : divisors(m)) {
        int mu = mobius(d);
        if (mu == 0) continue;
        int chi = kronecker(top, d);
        if (chi == 0) continue;
        acc += Int(mu) * Int(chi) * int_pow(Int(d), static_cast<unsigned long>(e)) * sigma(w, m / d);
    }
    return acc;
}

Int twisted_coeff_sum(long top, int e, const CoeffProvider& tau, long m) {
    if (m < 1) throw std::domain_error("twisted_coeff_sum: argument must be >= 1");
    Int acc(0);
    for (long d : divisors(m)) {
        int mu = mobius(d);
        if (mu == 0) continue;
        int chi = kronecker(top, d);
        if (chi == 0) continue;
        acc += Int(mu) * Int(chi) * int_pow(Int(d), static_cast<unsigned long>(e)) * tau(m / d);
    }
    return acc;
}

namespace {

struct TwistSpec {
    long top;
    int e;
    int w;
};

const TwistSpec S_SPECS[8] = {
    {0, 0, 0}, {1, 1, 3}, {2, 1, 3}, {3, 1, 3}, {6, 1, 3}, {-2, 2, 5}, {-4, 2, 5}, {1, 3, 7}};

struct CoeffSpec {
    long top;
    int e;
    bool need_coprime6;
};

const CoeffSpec C_SPECS[8] = {{0, 0, false}, {2, 1, false},  {1, 1, true},  {-2, 2, false},
                              {-2, 2, false}, {1, 3, false}, {1, 3, true}, {-4, 2, true}};

} // namespace

Int s_function(int index, long m) {
    if (index < 1 || index > 7) throw std::domain_error("s_function: index must be 1..7");
    if (m < 1) throw std::domain_error("s_function: argument must be >= 1");
    if (m % 2 == 0) throw EvenArgument("s_function: argument must be odd");
    const auto& s = S_SPECS[index];
    return twisted_sigma_sum(s.top, s.e, s.w, m);
}

Int c_function(int index, long m, const CoeffProvider& tau) {
    if (index < 1 || index > 7) throw std::domain_error("c_function: index must be 1..7");
    if (m < 1) throw std::domain_error("c_function: argument must be >= 1");
    const auto& s = C_SPECS[index];
    if (m % 2 == 0 || (s.need_coprime6 && m % 3 == 0))
        throw CoprimalityViolation("c_function: argument violates the coprimality condition");
    return twisted_coeff_sum(s.top, s.e, tau, m);
}

} // namespace thetalift
