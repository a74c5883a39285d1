#include "thetalift/qseries.hpp"

#include <algorithm>

namespace thetalift {

namespace {

// Indices of nonzero coefficients, used to route multiplication and
// inversion through the sparser operand.
std::vector<long> nonzero_indices(const QSeries& s) {
    std::vector<long> idx;
    for (long n = 0; n <= s.trunc(); ++n)
        if (s.coeff(n) != 0) idx.push_back(n);
    return idx;
}

} // namespace

long QSeries::nonzero_count() const {
    long k = 0;
    for (const auto& x : c_)
        if (x != 0) ++k;
    return k;
}

bool QSeries::is_zero() const { return nonzero_count() == 0; }

QSeries QSeries::truncated(long new_trunc) const {
    if (new_trunc > trunc_)
        throw std::domain_error("QSeries::truncated: cannot extend a truncated series");
    QSeries r(new_trunc);
    for (long n = 0; n <= new_trunc; ++n) r.c_[n] = c_[n];
    return r;
}

QSeries QSeries::operator+(const QSeries& o) const {
    long t = std::min(trunc_, o.trunc_);
    QSeries r(t);
    for (long n = 0; n <= t; ++n) r.c_[n] = c_[n] + o.c_[n];
    return r;
}

QSeries QSeries::operator-(const QSeries& o) const {
    long t = std::min(trunc_, o.trunc_);
    QSeries r(t);
    for (long n = 0; n <= t; ++n) r.c_[n] = c_[n] - o.c_[n];
    return r;
}

QSeries QSeries::operator-() const {
    QSeries r(trunc_);
    for (long n = 0; n <= trunc_; ++n) r.c_[n] = -c_[n];
    return r;
}

QSeries QSeries::scaled(const Rat& s) const {
    QSeries r(trunc_);
    if (s == 0) return r;
    for (long n = 0; n <= trunc_; ++n) r.c_[n] = c_[n] * s;
    return r;
}

QSeries QSeries::operator*(const QSeries& o) const {
    long t = std::min(trunc_, o.trunc_);
    // Iterate over the sparser operand's nonzero exponents so that
    // dense*sparse costs O(t * nnz) rather than O(t^2).
    const QSeries* sparse = this;
    const QSeries* dense = &o;
    if (o.nonzero_count() < nonzero_count()) {
        sparse = &o;
        dense = this;
    }
    QSeries r(t);
    Rat tmp;
    for (long i = 0; i <= std::min(t, sparse->trunc_); ++i) {
        const Rat& a = sparse->c_[i];
        if (a == 0) continue;
        long jmax = std::min(t - i, dense->trunc_);
        for (long j = 0; j <= jmax; ++j) {
            const Rat& b = dense->c_[j];
            if (b == 0) continue;
            tmp = a * b;
            r.c_[i + j] += tmp;
        }
    }
    return r;
}

QSeries QSeries::dilated(long t) const {
    if (t <= 0) throw std::domain_error("QSeries::dilated: dilation factor must be positive");
    QSeries r(trunc_);
    for (long n = 0; n <= trunc_; ++n) {
        if (c_[n] == 0) continue;
        if (n > trunc_ / t) break;
        r.c_[n * t] = c_[n];
    }
    return r;
}

QSeries QSeries::derivative_D() const {
    QSeries r(trunc_);
    for (long n = 1; n <= trunc_; ++n) r.c_[n] = c_[n] * n;
    return r;
}

QSeries QSeries::inverse() const {
    if (c_[0] == 0)
        throw std::domain_error("QSeries::inverse: constant term is zero");
    // b[0] = 1/a[0];  b[n] = -(1/a[0]) * sum_{k>=1, a[k]!=0} a[k] b[n-k].
    // Only nonzero a[k] enter the recurrence, so inverting a sparse
    // series (an Euler product factor, say) costs O(trunc * nnz).
    std::vector<long> nz;
    for (long k = 1; k <= trunc_; ++k)
        if (c_[k] != 0) nz.push_back(k);
    QSeries r(trunc_);
    Rat inv0 = Rat(1) / c_[0];
    r.c_[0] = inv0;
    Rat acc, tmp;
    for (long n = 1; n <= trunc_; ++n) {
        acc = 0;
        for (long k : nz) {
            if (k > n) break;
            tmp = c_[k] * r.c_[n - k];
            acc += tmp;
        }
        r.c_[n] = -acc * inv0;
    }
    return r;
}

QSeries QSeries::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    QSeries result(trunc_);
    result.c_[0] = 1;
    QSeries base = *this;
    long k = e;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

QSeries theta_series(long trunc) {
    QSeries r(trunc);
    r.coeff_mut(0) = 1;
    for (long n = 1; n * n <= trunc; ++n) r.coeff_mut(n * n) = 2;
    return r;
}

namespace {

// sigma_w(n) for n = 1..trunc by a divisor sieve; values are exact Int
// since d^w overflows 64 bits already for moderate d when w = 7.
std::vector<Int> sigma_table(int w, long trunc) {
    std::vector<Int> s(trunc + 1, Int(0));
    for (long d = 1; d <= trunc; ++d) {
        Int dw = int_pow(Int(d), static_cast<unsigned long>(w));
        for (long m = d; m <= trunc; m += d) s[m] += dw;
    }
    return s;
}

} // namespace

QSeries eisenstein(int k, long trunc) {
    long factor;
    switch (k) {
        case 4: factor = 240; break;
        case 6: factor = -504; break;
        case 8: factor = 480; break;
        default:
            throw std::domain_error("eisenstein: weight must be 4, 6 or 8");
    }
    auto sig = sigma_table(k - 1, trunc);
    QSeries r(trunc);
    r.coeff_mut(0) = 1;
    for (long n = 1; n <= trunc; ++n) r.coeff_mut(n) = Rat(sig[n]) * factor;
    return r;
}

QSeries eisenstein2(long trunc) {
    auto sig = sigma_table(1, trunc);
    QSeries r(trunc);
    r.coeff_mut(0) = 1;
    for (long n = 1; n <= trunc; ++n) r.coeff_mut(n) = Rat(sig[n]) * (-24);
    return r;
}

namespace {

// E(q) = prod_{n>=1} (1-q^n) = sum_{k in Z} (-1)^k q^{k(3k-1)/2}
// truncated and dilated by t in one step.
QSeries euler_factor(long t, long trunc) {
    QSeries r(trunc);
    r.coeff_mut(0) = 1;
    for (long k = 1;; ++k) {
        long p1 = k * (3 * k - 1) / 2;
        long p2 = k * (3 * k + 1) / 2;
        if (t > 0 && p1 > trunc / t) break;
        long sign = (k % 2 == 0) ? 1 : -1;
        if (p1 * t <= trunc) r.coeff_mut(p1 * t) += sign;
        if (p2 * t <= trunc) r.coeff_mut(p2 * t) += sign;
        if (p1 * t > trunc) break;
    }
    return r;
}

} // namespace

QSeries eta_quotient(const std::vector<std::pair<long, long>>& factors, long trunc) {
    long lead24 = 0;
    for (auto [t, r] : factors) {
        if (t <= 0) throw std::domain_error("eta_quotient: eta argument multiplier must be positive");
        lead24 += t * r;
    }
    if (lead24 < 0 || lead24 % 24 != 0)
        throw NonIntegralLeadingExponent(
            "eta_quotient: leading exponent sum(t*r)/24 is not a non-negative integer");
    long lead = lead24 / 24;
    if (lead > trunc)
        return QSeries(trunc);
    long work_trunc = trunc - lead;

    QSeries num(work_trunc);
    num.coeff_mut(0) = 1;
    QSeries den(work_trunc);
    den.coeff_mut(0) = 1;
    bool have_den = false;
    for (auto [t, r] : factors) {
        if (r == 0) continue;
        QSeries f = euler_factor(t, work_trunc);
        long reps = r > 0 ? r : -r;
        for (long i = 0; i < reps; ++i) {
            if (r > 0)
                num = num * f;
            else {
                den = den * f;
                have_den = true;
            }
        }
    }
    QSeries work = have_den ? num * den.inverse() : num;

    QSeries out(trunc);
    for (long n = 0; n <= work_trunc; ++n) out.coeff_mut(n + lead) = work.coeff(n);
    return out;
}

} // namespace thetalift
