#include "thetalift/lincomb.hpp"

#include "thetalift/linalg.hpp"

#include <fstream>
#include <future>
#include <sstream>

namespace thetalift {

std::string combo_status_text(ComboStatus s) {
    switch (s) {
        case ComboStatus::Exact: return "Exact";
        case ComboStatus::ConstantMismatch: return "ConstantMismatch";
        case ComboStatus::Inconsistent: return "Inconsistent";
    }
    return "?";
}

ComboResult solve_in_basis(const QSeries& target, const SpaceBasis& basis, const Catalog& cat) {
    const long bound = sturm_bound(basis.weight, basis.level);
    const long rows = 2 * bound;
    if (target.trunc() < rows)
        throw std::domain_error("solve_in_basis: target truncated below 2B = " + std::to_string(rows));

    const std::size_t ncols = basis.elements.size();
    std::vector<QSeries> cols;
    cols.reserve(ncols);
    for (const auto& el : basis.elements) cols.push_back(cat.expand_element(el, rows));

    // Rows are indexed by the q-exponent n = 1..2B; row 0 is held out.
    Mat A(static_cast<std::size_t>(rows), std::vector<Rat>(ncols));
    std::vector<Rat> b(static_cast<std::size_t>(rows));
    for (long n = 1; n <= rows; ++n) {
        for (std::size_t j = 0; j < ncols; ++j) A[n - 1][j] = cols[j].coeff(n);
        b[n - 1] = target.coeff(n);
    }

    ComboResult res;
    res.constant_term_target = target.coeff(0);

    auto sol = solve_exact(A, b);
    if (sol.status == SolveStatus::Underdetermined)
        throw Underdetermined("basis '" + basis.id + "' is not linearly independent on rows 1.." +
                              std::to_string(rows));
    if (sol.status == SolveStatus::Inconsistent) {
        res.status = ComboStatus::Inconsistent;
        res.residual_zero_through = 0;
        return res;
    }

    res.coefficients = sol.x;
    res.residual_zero_through = rows;
    Rat c0 = 0;
    for (std::size_t j = 0; j < ncols; ++j) c0 += sol.x[j] * cols[j].coeff(0);
    res.constant_term_solved = c0;
    res.status = (c0 == res.constant_term_target) ? ComboStatus::Exact : ComboStatus::ConstantMismatch;
    return res;
}

bool series_equal(const QSeries& a, const QSeries& b, long through) {
    if (a.trunc() < through || b.trunc() < through)
        throw std::domain_error("series_equal: truncation below comparison window");
    for (long n = 0; n <= through; ++n)
        if (a.coeff(n) != b.coeff(n)) return false;
    return true;
}

std::vector<TableRow> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    std::vector<TableRow> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok != "row")
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'row', got '" + tok + "'");
        std::string vec, kw, basis_id, tw, lam;
        ls >> vec;
        ls >> kw;
        if (kw != "basis") throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'basis'");
        ls >> basis_id;
        ls >> kw;
        if (kw != "twist") throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'twist'");
        ls >> tw;
        ls >> kw;
        if (kw != "lambda") throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'lambda'");
        ls >> lam;
        TableRow row{parse_quadform(vec), basis_id, parse_twist_text(tw), false, {}};
        std::istringstream lamss(lam);
        std::string piece;
        while (std::getline(lamss, piece, ',')) row.lambda.push_back(rat_from_string(piece));
        if (ls >> kw) {
            if (kw == "override") row.override_conjecture = true;
            else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": trailing token '" + kw + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

TableRowResult reproduce_row(const Catalog& cat, const TableRow& row) {
    const SpaceBasis& space = cat.space(row.basis_id);
    const long bound = sturm_bound(space.weight, space.level);
    const long t_out = 2 * bound;

    LiftParams params = lift_params_for(row.form, row.twist, row.override_conjecture);
    long t_in = std::abs(row.twist.value) * t_out * t_out;
    ThetaProduct theta = theta_product(row.form, t_in);
    QSeries image = lift(theta.series, params, t_out);

    TableRowResult out{row, solve_in_basis(image, space, cat), false};
    out.lambda_match = (out.combo.status != ComboStatus::Inconsistent) &&
                       (out.combo.coefficients == row.lambda);
    return out;
}

long apply_errata(std::vector<TableRow>& rows, const std::vector<TableRow>& fixes) {
    auto same_slot = [](const TableRow& a, const TableRow& b) {
        return a.form.notation() == b.form.notation() && a.basis_id == b.basis_id &&
               a.twist.kind == b.twist.kind && a.twist.value == b.twist.value;
    };
    long patched = 0;
    for (const auto& fix : fixes) {
        bool hit = false;
        for (auto& row : rows) {
            if (!same_slot(row, fix)) continue;
            row.lambda = fix.lambda;
            hit = true;
            ++patched;
        }
        if (!hit)
            throw std::runtime_error("apply_errata: no row matches fix for (" + fix.form.notation() +
                                     ") in basis " + fix.basis_id);
    }
    return patched;
}

std::vector<TableRowResult> reproduce_table(const Catalog& cat, const std::vector<TableRow>& rows) {
    std::vector<std::future<TableRowResult>> futs;
    futs.reserve(rows.size());
    for (const auto& row : rows)
        futs.push_back(std::async(std::launch::async, [&cat, &row] { return reproduce_row(cat, row); }));
    std::vector<TableRowResult> out;
    out.reserve(rows.size());
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

} // namespace thetalift
