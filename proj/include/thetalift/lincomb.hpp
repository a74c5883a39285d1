#ifndef THETALIFT_LINCOMB_HPP
#define THETALIFT_LINCOMB_HPP

// Expressing a target q-expansion exactly in a declared space basis.
// The solve runs on coefficient rows 1..2B (B the Sturm bound of the
// space) with row 0 held out; the surplus rows double as an internal
// consistency check, and the held-out constant row is compared after
// the fact so constant-term disagreements are visible but never mask
// an otherwise exact match.

#include "thetalift/catalog.hpp"
#include "thetalift/qseries.hpp"
#include "thetalift/quadform.hpp"
#include "thetalift/shimura.hpp"

#include <optional>
#include <string>
#include <vector>

namespace thetalift {

struct Underdetermined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ComboStatus { Exact, ConstantMismatch, Inconsistent };

std::string combo_status_text(ComboStatus s);

struct ComboResult {
    std::vector<Rat> coefficients;   // aligned with the basis element order
    long residual_zero_through = 0;  // rows 1..this verified zero
    Rat constant_term_solved;        // sum lambda_j A_j(0)
    Rat constant_term_target;        // target coefficient 0 (a(0) H_k for lift images)
    ComboStatus status = ComboStatus::Inconsistent;
};

// target.trunc() must be >= 2 * sturm_bound(basis).  Throws
// Underdetermined when the basis matrix is rank-deficient (a catalog
// bug); an unsolvable system is reported via status, not an exception.
ComboResult solve_in_basis(const QSeries& target, const SpaceBasis& basis, const Catalog& cat);

bool series_equal(const QSeries& a, const QSeries& b, long through);

// One row of a stored coefficient table: a form vector, the basis the
// image is expressed in, the twist, and the expected coordinates.
struct TableRow {
    QuadForm form;
    std::string basis_id;
    Twist twist;
    bool override_conjecture = false;
    std::vector<Rat> lambda;
};

struct TableRowResult {
    TableRow row;
    ComboResult combo;
    bool lambda_match = false;
};

// Table file format, one row per line:
//   row (1^4,2) basis M4_4 twist fd:1 lambda 1/30,0,-8/15 [override]
std::vector<TableRow> load_table(const std::string& path);

// Lifts each row's theta product, solves in the declared basis, and
// diffs against the stored coordinates.  Mismatches are results, not
// errors.  Rows are processed in parallel.
std::vector<TableRowResult> reproduce_table(const Catalog& cat, const std::vector<TableRow>& rows);

// Convenience: run one row end to end.
TableRowResult reproduce_row(const Catalog& cat, const TableRow& row);

// Replaces the lambda vector of every row that has a counterpart in
// `fixes` (matched on form notation, basis, and twist).  Returns the
// number of rows patched.  A fix that matches nothing is an error: it
// means the correction list has drifted out of sync with the tables.
long apply_errata(std::vector<TableRow>& rows, const std::vector<TableRow>& fixes);

} // namespace thetalift

#endif
