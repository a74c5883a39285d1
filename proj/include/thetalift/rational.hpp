#ifndef THETALIFT_RATIONAL_HPP
#define THETALIFT_RATIONAL_HPP

// Exact arithmetic used everywhere in this project: arbitrary precision
// integers and rationals from GMP.  No floating point enters any
// number-theoretic computation.

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace thetalift {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class(num,den) does not canonicalize on its own; route all
// num/den construction through here.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

// Accepts "a" or "a/b".
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw std::domain_error("rat_from_string: bad rational literal '" + s + "'");
    }
}

inline std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

// r^e for integer e (negative allowed when r != 0).
inline Rat rat_pow(const Rat& r, long e) {
    if (e == 0) return Rat(1);
    Rat base = r;
    bool invert = e < 0;
    unsigned long ue = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rat num, den;
    mpz_pow_ui(num.get_num_mpz_t(), base.get_num_mpz_t(), ue);
    mpz_pow_ui(num.get_den_mpz_t(), base.get_den_mpz_t(), ue);
    num.canonicalize();
    if (!invert) return num;
    if (num == 0) throw std::domain_error("rat_pow: negative power of zero");
    return Rat(1) / num;
}

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace thetalift

#endif
