#include "thetalift/shimura.hpp"

#include "thetalift/arith.hpp"

#include <numeric>

namespace thetalift {

long Twist::attached_discriminant() const {
    if (value == 1) return 1;
    if (kind == Kind::FundamentalDisc) return value;
    long r = ((value % 4) + 4) % 4;
    return r == 1 ? value : 4 * value;
}

std::string Twist::text() const {
    return (kind == Kind::SquareFree ? "sf:" : "fd:") + std::to_string(value);
}

Twist parse_twist_text(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad twist spec: " + s);
    std::string kind = s.substr(0, colon);
    long v = std::stol(s.substr(colon + 1));
    if (kind == "sf") return Twist::square_free(v);
    if (kind == "fd") return Twist::fundamental(v);
    throw std::invalid_argument("bad twist kind: " + kind);
}

ThetaProduct theta_product(const QuadForm& a, long trunc) {
    QSeries acc(trunc);
    acc.coeff_mut(0) = 1;
    QSeries base = theta_series(trunc);
    for (long aj : a.coeffs()) acc = acc * (aj == 1 ? base : base.dilated(aj));
    return ThetaProduct{std::move(acc), a, a.ell(), 4 * a.level()};
}

LiftParams lift_params_for(const QuadForm& a, const Twist& twist, bool assume_conjecture) {
    if (a.ell() < 5 || a.ell() % 2 == 0)
        throw std::domain_error("lift_params_for: need an odd number of variables, at least 5");
    LiftParams p;
    p.k = (a.ell() - 1) / 2;
    p.level = a.level();
    p.chi_tops = a.coeffs();
    p.twist = twist;
    p.assume_conjecture = assume_conjecture;
    return p;
}

namespace {

void check_twist(const LiftParams& p) {
    long v = p.twist.value;
    if (v == 0) throw std::domain_error("lift: twist value must be nonzero");
    if (p.twist.kind == Twist::Kind::SquareFree) {
        if (!is_squarefree(v)) throw std::domain_error("lift: twist must be square-free");
    } else {
        if (v != 1 && !is_fundamental_discriminant(v))
            throw NotFundamental("lift: twist must be a fundamental discriminant");
    }
    bool positive = (p.k % 2 == 0) ? v > 0 : v < 0;
    if (!positive)
        throw SignConditionViolated("lift: twist " + std::to_string(v) +
                                    " violates the sign condition (-1)^k twist > 0 for k = " +
                                    std::to_string(p.k));
    bool level_even = p.level % 2 == 0;
    bool admissible = (p.twist.kind == Twist::Kind::SquareFree) ? !level_even : level_even;
    if (!admissible && !p.assume_conjecture)
        throw AdmissibilityViolated(
            "lift: twist kind " + p.twist.text() + " is not admissible for level " +
            std::to_string(p.level) +
            " (square-free twists need odd N, fundamental ones even N); "
            "pass the conjecture override to apply it anyway");
}

int chi_value(const LiftParams& p, long d) {
    int r = 1;
    for (long top : p.chi_tops) r *= kronecker(top, d);
    return r;
}

} // namespace

Rat lift_constant(const LiftParams& p) {
    bool kohnen = p.twist.kind == Twist::Kind::FundamentalDisc;
    return h_constant(p.k, p.twist.attached_discriminant(), p.level, kohnen);
}

QSeries lift(const QSeries& coeffs, const LiftParams& p, long t_out) {
    check_twist(p);
    long abs_twist = p.twist.value < 0 ? -p.twist.value : p.twist.value;
    long required = abs_twist * t_out * t_out;
    if (coeffs.trunc() < required)
        throw InsufficientTruncation(
            "lift: input truncation " + std::to_string(coeffs.trunc()) +
            " is too small, need coefficients through " + std::to_string(required));

    long modulus = p.twist.kind == Twist::Kind::SquareFree ? 2 * p.level : p.level;
    QSeries out(t_out);
    out.coeff_mut(0) = coeffs.coeff(0) * lift_constant(p);
    for (long n = 1; n <= t_out; ++n) {
        Rat acc(0);
        for (long d : divisors(n)) {
            if (std::gcd(d, modulus) != 1) continue;
            int chi = chi_value(p, d);
            if (chi == 0) continue;
            int tw = kronecker(p.twist.value, d);
            if (tw == 0) continue;
            long q = n / d;
            Rat term = coeffs.coeff(abs_twist * q * q);
            term *= Rat(chi * tw) * Rat(int_pow(Int(d), static_cast<unsigned long>(p.k - 1)));
            acc += term;
        }
        out.coeff_mut(n) = acc;
    }
    return out;
}

} // namespace thetalift
