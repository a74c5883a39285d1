#ifndef THETALIFT_QUADFORM_HPP
#define THETALIFT_QUADFORM_HPP

// Diagonal quadratic form a_1 x_1^2 + ... + a_l x_l^2 given by its
// positive coefficient list, with the derived data used everywhere:
// number of variables l, level multiplier N = lcm(a_i), and the real
// character psi(d) = prod_j (a_j / d).

#include "thetalift/rational.hpp"

#include <string>
#include <vector>

namespace thetalift {

class QuadForm {
public:
    explicit QuadForm(std::vector<long> coeffs);

    const std::vector<long>& coeffs() const { return coeffs_; }
    int ell() const { return static_cast<int>(coeffs_.size()); }
    long level() const { return level_; }

    // Compact multiplicity notation, e.g. "1^4,2".
    std::string notation() const;

    bool operator==(const QuadForm& o) const { return coeffs_ == o.coeffs_; }

private:
    std::vector<long> coeffs_;
    long level_;
};

// Parses "1^3,2,4" (optionally wrapped in parentheses, spaces allowed)
// into the flat coefficient list [1,1,1,2,4].
QuadForm parse_quadform(const std::string& text);

// psi(d) = prod_j kronecker(a_j, d).
int psi_a(const QuadForm& a, long d);

} // namespace thetalift

#endif
