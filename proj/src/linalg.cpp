#include "thetalift/linalg.hpp"

#include <stdexcept>

namespace thetalift {

namespace {

struct Echelon {
    Mat m;                            // reduced rows (row echelon, pivots normalized to 1)
    std::vector<size_t> pivot_cols;   // column of each pivot, by pivot row
    std::vector<size_t> pivot_rows;   // original row index of each pivot
};

// Row echelon form scanning rows top to bottom for each column, so the
// earliest usable row wins a pivot.  Rows arrive ordered by coefficient
// index n, which makes "earliest row" mean "smallest n".
Echelon echelon_form(Mat m) {
    size_t rows = m.size();
    size_t cols = rows == 0 ? 0 : m[0].size();
    std::vector<size_t> origin(rows);
    for (size_t i = 0; i < rows; ++i) origin[i] = i;

    Echelon e;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pivot = rows;
        for (size_t i = r; i < rows; ++i) {
            if (m[i][c] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        std::swap(origin[r], origin[pivot]);
        Rat inv = Rat(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        e.pivot_cols.push_back(c);
        e.pivot_rows.push_back(origin[r]);
        ++r;
    }
    e.m = std::move(m);
    return e;
}

} // namespace

LinearSolveResult solve_exact(const Mat& a, const std::vector<Rat>& b) {
    size_t rows = a.size();
    if (b.size() != rows) throw std::domain_error("solve_exact: row count mismatch");
    size_t cols = rows == 0 ? 0 : a[0].size();
    Mat aug(rows);
    for (size_t i = 0; i < rows; ++i) {
        if (a[i].size() != cols) throw std::domain_error("solve_exact: ragged matrix");
        aug[i] = a[i];
        aug[i].push_back(b[i]);
    }
    Echelon e = echelon_form(std::move(aug));

    LinearSolveResult result;
    result.pivot_rows = e.pivot_rows;

    // A pivot in the augmented column means some row reduced to 0 = 1.
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == cols) {
        result.status = SolveStatus::Inconsistent;
        return result;
    }
    if (e.pivot_cols.size() < cols) {
        result.status = SolveStatus::Underdetermined;
        return result;
    }
    result.status = SolveStatus::Unique;
    result.x.assign(cols, Rat(0));
    for (size_t i = 0; i < e.pivot_cols.size(); ++i) result.x[e.pivot_cols[i]] = e.m[i][cols];
    return result;
}

size_t matrix_rank(Mat a) {
    return echelon_form(std::move(a)).pivot_cols.size();
}

std::vector<std::vector<Rat>> kernel_basis(Mat a) {
    size_t rows = a.size();
    size_t cols = rows == 0 ? 0 : a[0].size();
    Echelon e = echelon_form(std::move(a));
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : e.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<Rat>> basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free_col] = 1;
        for (size_t i = 0; i < e.pivot_cols.size(); ++i)
            v[e.pivot_cols[i]] = -e.m[i][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace thetalift
