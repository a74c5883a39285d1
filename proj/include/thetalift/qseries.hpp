#ifndef THETALIFT_QSERIES_HPP
#define THETALIFT_QSERIES_HPP

// Truncated formal power series in q with exact rational coefficients.
//
// A QSeries holds coefficients c[0..trunc] of sum_{n>=0} c[n] q^n.  All
// ring operations truncate to the smaller of the two operands' orders,
// so a coefficient is only ever stored when it is exactly correct.

#include "thetalift/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace thetalift {

struct NonIntegralLeadingExponent : std::domain_error {
    using std::domain_error::domain_error;
};

class QSeries {
public:
    QSeries() : trunc_(0), c_(1, Rat(0)) {}
    explicit QSeries(long trunc) : trunc_(trunc), c_(trunc + 1, Rat(0)) {
        if (trunc < 0) throw std::domain_error("QSeries: negative truncation order");
    }
    QSeries(long trunc, std::vector<Rat> coeffs) : trunc_(trunc), c_(std::move(coeffs)) {
        if (trunc < 0 || c_.size() != static_cast<size_t>(trunc) + 1)
            throw std::domain_error("QSeries: coefficient count does not match truncation order");
    }

    long trunc() const { return trunc_; }
    const Rat& coeff(long n) const {
        if (n < 0 || n > trunc_)
            throw std::out_of_range("QSeries::coeff: exponent outside truncation range");
        return c_[static_cast<size_t>(n)];
    }
    Rat& coeff_mut(long n) {
        if (n < 0 || n > trunc_)
            throw std::out_of_range("QSeries::coeff_mut: exponent outside truncation range");
        return c_[static_cast<size_t>(n)];
    }
    const std::vector<Rat>& coeffs() const { return c_; }

    long nonzero_count() const;
    bool is_zero() const;

    // Drops coefficients above new_trunc (new_trunc <= trunc required).
    QSeries truncated(long new_trunc) const;

    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries operator-() const;
    QSeries scaled(const Rat& s) const;

    // q |-> q^t: exponent n moves to t*n, truncation order preserved.
    QSeries dilated(long t) const;

    // Theta operator q d/dq: c[n] |-> n*c[n].
    QSeries derivative_D() const;

    // Multiplicative inverse; requires c[0] != 0.
    QSeries inverse() const;

    QSeries pow(long e) const;

private:
    long trunc_;
    std::vector<Rat> c_;
};

// One of q, q^4, q^9, ...: theta(z) = 1 + 2 sum_{n>=1} q^{n^2}, possibly dilated later.
QSeries theta_series(long trunc);

// Normalized Eisenstein series of weight k in {4,6,8}:
//   E_k = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n
// with the classical constants +240, -504, +480.
QSeries eisenstein(int k, long trunc);

// Quasimodular E_2 = 1 - 24 sum sigma_1(n) q^n.
QSeries eisenstein2(long trunc);

// Product prod_i eta(t_i z)^{r_i} expanded as a q-series.  eta(z) =
// q^{1/24} prod (1-q^n), so the product has leading exponent
// (sum t_i r_i)/24 which must be a non-negative integer here; otherwise
// NonIntegralLeadingExponent is thrown.  Negative r_i are handled by
// series inversion.
QSeries eta_quotient(const std::vector<std::pair<long, long>>& factors, long trunc);

} // namespace thetalift

#endif
