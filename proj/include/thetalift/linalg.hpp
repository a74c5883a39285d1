#ifndef THETALIFT_LINALG_HPP
#define THETALIFT_LINALG_HPP

// Small exact linear algebra over the rationals.  Matrices here are a
// handful of rows (Sturm-bound windows, Hecke matrices on spans of two
// or three forms), so plain Gaussian elimination on mpq entries is
// both exact and fast enough.

#include "thetalift/rational.hpp"

#include <cstddef>
#include <vector>

namespace thetalift {

using Mat = std::vector<std::vector<Rat>>;

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct LinearSolveResult {
    SolveStatus status;
    std::vector<Rat> x;              // populated when status == Unique
    std::vector<size_t> pivot_rows;  // rows that carried pivots
};

// Solves A x = b using every row of A as a constraint: rows beyond the
// pivot set must reduce to 0 = 0 or the system is Inconsistent.
LinearSolveResult solve_exact(const Mat& a, const std::vector<Rat>& b);

size_t matrix_rank(Mat a);

// Basis of the right kernel {x : A x = 0}.
std::vector<std::vector<Rat>> kernel_basis(Mat a);

} // namespace thetalift

#endif
