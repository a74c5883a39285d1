#ifndef THETALIFT_ARITH_HPP
#define THETALIFT_ARITH_HPP

// Number-theoretic kernel: divisor sums, Moebius, Kronecker symbols,
// Bernoulli machinery for exact L(1-k, chi_D) values, and the twisted
// divisor-sum functions (s_i, C_i) that appear in the closed
// representation formulas.

#include "thetalift/rational.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace thetalift {

struct NotFundamental : std::domain_error {
    using std::domain_error::domain_error;
};
struct EvenArgument : std::domain_error {
    using std::domain_error::domain_error;
};
struct CoprimalityViolation : std::domain_error {
    using std::domain_error::domain_error;
};

// (prime, exponent) pairs sorted by prime; product reconstructs n.
using Factorization = std::vector<std::pair<long, int>>;

Factorization factorize(long n);
std::vector<long> divisors(long n);
bool is_squarefree(long n);

Int sigma(int k, long n);
int mobius(long n);

// Full Kronecker symbol (a/n), n may be 0, negative or even.
int kronecker(const Int& a, const Int& n);
inline int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

// Bernoulli numbers with B_1 = -1/2, and Bernoulli polynomials B_k(x).
Rat bernoulli(int k);
Rat bernoulli_poly(int k, const Rat& x);

bool is_fundamental_discriminant(long d);

// L(1-k, chi_D) for fundamental D (or D=1, which gives zeta(1-k)),
// via generalized Bernoulli numbers B_{k,chi} = f^{k-1} sum_{a=1}^f
// chi(a) B_k(a/f).
Rat l_value(int k, long d);

// (1/2) L(1-k, chi_D) prod_p (1 - (D/p) p^{k-1}), the product running
// over p | 2N when kohnen is false and p | N when it is true.
Rat h_constant(int k, long d, long level, bool kohnen);

// sum_{d|m} mu(d) (top/d) d^e sigma_w(m/d), m >= 1.
Int twisted_sigma_sum(long top, int e, int w, long m);

// Newform coefficient source: n >= 1 -> a(n), safe for concurrent reads.
using CoeffProvider = std::function<Int(long)>;

// sum_{d|m} mu(d) (top/d) d^e tau(m/d), m >= 1.
Int twisted_coeff_sum(long top, int e, const CoeffProvider& tau, long m);

// Named instances used across the closed formulas.  All seven require
// odd m; the (top, e, w) triples are
//   s_1:(1,1,3) s_2:(2,1,3) s_3:(3,1,3) s_4:(6,1,3)
//   s_5:(-2,2,5) s_6:(-4,2,5) s_7:(1,3,7)
Int s_function(int index, long m);

// Twisted sums against newform coefficients.  Indices 2, 6, 7 require
// gcd(m,6)=1, the others odd m.  The (top, e) pairs are
//   C_1:(2,1) C_2:(1,1) C_3:(-2,2) C_4:(-2,2) C_5:(1,3) C_6:(1,3) C_7:(-4,2)
Int c_function(int index, long m, const CoeffProvider& tau);

} // namespace thetalift

#endif
