#ifndef THETALIFT_SHIMURA_HPP
#define THETALIFT_SHIMURA_HPP

// Theta products for diagonal forms and the coefficient-level lift
// maps that send a half-integral weight expansion a(n) to the even
// weight expansion
//   b(0) = a(0) H_k,
//   b(n) = sum_{d|n, gcd(d,M)=1} chi(d) (twist/d) d^{k-1} a(|twist| n^2/d^2),
// where M = 2N for the square-free twist flavor and M = N for the
// fundamental-discriminant flavor.

#include "thetalift/qseries.hpp"
#include "thetalift/quadform.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace thetalift {

struct SignConditionViolated : std::domain_error {
    using std::domain_error::domain_error;
};
struct AdmissibilityViolated : std::domain_error {
    using std::domain_error::domain_error;
};
struct InsufficientTruncation : std::domain_error {
    using std::domain_error::domain_error;
};

struct Twist {
    enum class Kind { SquareFree, FundamentalDisc } kind;
    long value;

    static Twist square_free(long t) { return {Kind::SquareFree, t}; }
    static Twist fundamental(long d) { return {Kind::FundamentalDisc, d}; }

    // The fundamental discriminant attached to the twist: D itself for
    // the FundamentalDisc kind, t or 4t (by t mod 4) for SquareFree.
    // The value 1 acts as the trivial twist for either kind.
    long attached_discriminant() const;
    std::string text() const;
};

// Inverse of Twist::text(): "sf:3", "fd:-4".
Twist parse_twist_text(const std::string& s);

struct LiftParams {
    int k = 0;                    // image weight is 2k
    long level = 0;               // N; the input lives on level 4N
    std::vector<long> chi_tops;   // chi(d) = prod_j kronecker(top_j, d)
    Twist twist{Twist::Kind::SquareFree, 1};
    bool assume_conjecture = false;  // bypasses the parity admissibility gate
};

struct ThetaProduct {
    QSeries series;  // c_n = r_l(a; n)
    QuadForm form;
    int half_weight_num;  // the weight is half_weight_num / 2, i.e. l
    long theta_level;     // 4 N_a
};

// c_n counts representations n = sum a_j x_j^2 over integer vectors x.
ThetaProduct theta_product(const QuadForm& a, long trunc);

// Derives k = (l-1)/2, N = N_a and chi = psi_a for a lift of the theta
// product of a; requires l odd and l >= 5.
LiftParams lift_params_for(const QuadForm& a, const Twist& twist, bool assume_conjecture = false);

// Constant term factor a(0) H_k for the given parameters.
Rat lift_constant(const LiftParams& p);

// Applies the map to a coefficient sequence. Errors:
//   SignConditionViolated  unless (-1)^k twist > 0
//   AdmissibilityViolated  square-free twist needs N odd, fundamental
//                          twist needs N even, unless assume_conjecture
//   InsufficientTruncation input must know a(n) for n <= |twist| t_out^2
QSeries lift(const QSeries& coeffs, const LiftParams& p, long t_out);

} // namespace thetalift

#endif
