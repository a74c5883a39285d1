#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "thetalift/catalog.hpp"
#include "thetalift/formula.hpp"
#include "thetalift/lincomb.hpp"
#include "thetalift/repcount.hpp"

using namespace thetalift;

namespace {

const Catalog& cat() {
    static Catalog c = Catalog::builtin();
    return c;
}

const NewformProvider& prov() {
    static NewformProvider p = catalog_provider(cat());
    return p;
}

const FormulaRegistry& reg() {
    static FormulaRegistry r = load_formulas(std::string(THETALIFT_DATA_DIR) + "/corollaries.txt");
    return r;
}

Rat ev(const std::string& text, std::map<std::string, Rat> vars = {}) {
    EvalEnv env;
    env.vars = std::move(vars);
    env.coeff = prov();
    return Expression::parse(text).eval(env);
}

// Evaluate a registry record at sweep value n, requiring a value.
Rat rec_at(const std::string& id, long n) {
    const FormulaRecord* r = reg().find(id);
    REQUIRE(r != nullptr);
    auto v = eval_record(*r, formula_point(*r, n), prov());
    REQUIRE(v.has_value());
    return *v;
}

} // namespace

TEST_CASE("expression arithmetic and precedence") {
    CHECK(ev("1 + 2*3") == 7);
    CHECK(ev("(1+2)*3") == 9);
    CHECK(ev("2^10") == 1024);
    CHECK(ev("-2^2") == -4);          // unary minus binds looser than ^
    CHECK(ev("2^3^1") == 8);
    CHECK(ev("7 % 4") == 3);
    CHECK(ev("3/4 + 1/4") == 1);
    CHECK(ev("10/4") == make_rat(5, 2));
    CHECK(ev("abs(3-10)") == 7);
    CHECK(ev("gcd(12,18)") == 6);
    CHECK(ev("mu(30)") == -1);
    CHECK(ev("mu(12)") == 0);
    CHECK(ev("kron(-4,7)") == kronecker(-4, 7));
    CHECK(ev("true") == 1);
    CHECK(ev("false") == 0);
}

TEST_CASE("expression comparisons and logic") {
    CHECK(ev("3 == 3") == 1);
    CHECK(ev("3 != 3") == 0);
    CHECK(ev("2 < 3 && 3 <= 3") == 1);
    CHECK(ev("2 > 3 || 1 >= 1") == 1);
    CHECK(ev("!(1 == 2)") == 1);
    CHECK(ev("1 == 1 && 2 == 3") == 0);
    // variables come from the environment
    CHECK(ev("l2 >= 1 && m % 2 == 1", {{"l2", Rat(2)}, {"m", Rat(5)}}) == 1);
}

TEST_CASE("expression divisor and coefficient functions") {
    CHECK(ev("sigma(3,6)") == 252);
    CHECK(ev("sigma3(6)") == 252);
    CHECK(ev("sigma7(3)") == 2188);
    // zero extension at non-integral and non-positive arguments
    CHECK(ev("sigma3(5/2)") == 0);
    CHECK(ev("sigma3(0)") == 0);
    CHECK(ev("tau(Delta_4_6, 3/2)") == 0);
    CHECK(ev("tau(Delta_4_6, 2)") == prov()("Delta_4_6", 2));

    // twisted inner sums: sfn(top,e,w,m) = sum mu(d) (top/d) d^e sigma_w(m/d)
    CHECK(ev("s1(1)") == 1);
    CHECK(ev("s1(5)") == 121);
    CHECK(ev("s1(7)") == 337);
    CHECK(ev("s1(11)") == 1321);
    CHECK(ev("s2(3)") == 31);
    CHECK(ev("sfn(1,1,3,5)") == ev("s1(5)"));
    CHECK(ev("s5(3)") == Rat(s_function(5, 3)));
    CHECK(ev("C5(3)") == -15);
    CHECK(ev("C2(5)") == 1);
    CHECK(ev("C2(7)") == -23);
    CHECK(ev("C2(11)") == 1);
    CHECK(ev("cfn(Delta_4_6,1,1,5)") == ev("C2(5)"));
}

TEST_CASE("expression parse errors") {
    CHECK_THROWS_AS(Expression::parse("1 +"), FormulaParseError);
    CHECK_THROWS_AS(Expression::parse("(1"), FormulaParseError);
    // function names resolve at evaluation time
    CHECK_THROWS_AS(ev("nosuchfn(3)"), FormulaEvalError);
}

TEST_CASE("formula points bind valuations and split parts") {
    const FormulaRecord* sq = reg().find("cor:4.2/(1^3,2,4)");   // split 2
    REQUIRE(sq != nullptr);
    FormulaPoint p = formula_point(*sq, 24);
    CHECK(p.target == 576);
    CHECK(p.vars.at("n") == 24);
    CHECK(p.vars.at("l2") == 3);
    CHECK(p.vars.at("m") == 3);     // odd part

    const FormulaRecord* s6 = reg().find("cor:4.3/(1^3,3^2)");   // split 6
    REQUIRE(s6 != nullptr);
    p = formula_point(*s6, 180);
    CHECK(p.vars.at("l2") == 2);
    CHECK(p.vars.at("l3") == 2);
    CHECK(p.vars.at("m") == 5);     // prime-to-6 part

    const FormulaRecord* ts = reg().find("cor:5.1/(1^6,2)");     // triple square
    REQUIRE(ts != nullptr);
    p = formula_point(*ts, 10);
    CHECK(p.target == 300);

    const FormulaRecord* p4 = reg().find("cor:4.4/(1^6,2)");     // 4^k m^2
    REQUIRE(p4 != nullptr);
    p = formula_point(*p4, 2, 3);
    CHECK(p.target == 144);
    CHECK(p.vars.at("k") == 2);
    CHECK(p.vars.at("m") == 3);
    CHECK_THROWS_AS(formula_point(*p4, 0, 3), FormulaEvalError);  // k >= 1
    CHECK_THROWS_AS(formula_point(*p4, 1, 4), FormulaEvalError);  // m odd
}

TEST_CASE("registry loads with expected shape") {
    CHECK(reg().records.size() == 99);
    auto groups = reg().groups();
    REQUIRE(groups.size() == 9);
    CHECK(groups[0] == "cor:4.1");
    CHECK(groups[1] == "sec:4.1.1");
    CHECK(groups[8] == "cor:5.1");
    CHECK(reg().group("cor:4.1").size() == 18);
    CHECK(reg().group("cor:4.4").size() == 18);
    CHECK(reg().group("conjecture").size() == 10);
    CHECK(reg().find("cor:4.1/(1^4,2)") != nullptr);
    CHECK(reg().find("no-such-record") == nullptr);

    const FormulaRecord* dsf = reg().find("cor:4.1/(1^4,2)");
    REQUIRE(dsf->dsf.has_value());
    REQUIRE(dsf->dsf->sigma_terms.size() == 2);
    CHECK(dsf->dsf->sigma_terms[0].c == 8);
    CHECK(dsf->dsf->sigma_terms[0].scale == 1);
    CHECK(dsf->dsf->sigma_terms[1].c == -128);
    CHECK(dsf->dsf->sigma_terms[1].scale == 4);
    CHECK(dsf->cases.empty());
    CHECK_FALSE(dsf->conjectural);

    const FormulaRecord* cj = reg().find("conjecture/(1^5,2,4)");
    REQUIRE(cj != nullptr);
    CHECK(cj->conjectural);
    CHECK_FALSE(cj->domain.empty());
    CHECK(cj->dsf == std::nullopt);
    REQUIRE(cj->cases.size() == 1);
}

TEST_CASE("registry rejects malformed files") {
    auto write_tmp = [](const char* name, const char* body) {
        std::string path = std::string("/tmp/") + name;
        std::ofstream out(path);
        out << body;
        return path;
    };
    // missing form line
    CHECK_THROWS_AS(load_formulas(write_tmp("bad1.txt",
                                            "formula x/y\ntwist fd:1\ncase true : 1\nend\n")),
                    FormulaParseError);
    // terms and cases on the same record
    CHECK_THROWS_AS(
        load_formulas(write_tmp("bad2.txt", "formula x/y\nform (1^4,2)\ntwist fd:1\n"
                                            "term sigma 8 @ 1\ncase true : 1\nend\n")),
        FormulaParseError);
    CHECK_THROWS_AS(load_formulas("/tmp/does-not-exist-anywhere.txt"), std::runtime_error);
}

TEST_CASE("divisor sum records match frozen counts") {
    // r(n^2) for x1^2+x2^2+x3^2+x4^2+2 x5^2
    CHECK(rec_at("cor:4.1/(1^4,2)", 1) == 8);
    CHECK(rec_at("cor:4.1/(1^4,2)", 2) == 72);
    CHECK(rec_at("cor:4.1/(1^4,2)", 4) == 456);
    // the two all-odd forms keep their d=2 exclusion via the squarefree twist
    CHECK(rec_at("cor:4.1/(1^4,3)", 2) == 40);
    CHECK(rec_at("cor:4.1/(1,3^4)", 2) == 18);
}

TEST_CASE("case records match frozen counts") {
    // seven variables at 4^k m^2, k=1, m=1
    CHECK(rec_at("cor:4.2/(1^3,2,4)", 1) == 6);
    CHECK(rec_at("cor:4.3/(1^3,3^2)", 1) == 6);
    CHECK(rec_at("cor:4.3/(1^2,2,3,6)", 3) == 48);
    CHECK(rec_at("cor:4.3/(2,3^3,6)", 3) == 20);
    CHECK(rec_at("cor:4.3/(2,3^3,6)", 15) == 2420);
    CHECK(rec_at("cor:4.3/(2,3^3,6)", 21) == 6740);

    struct Anchor {
        const char* id;
        long val;
    };
    // k=1, m=1 values for the power-of-four group, one per shape
    const Anchor k1[] = {
        {"cor:4.4/(1^6,2)", 372},       {"cor:4.4/(1^5,2^2)", 254},
        {"cor:4.4/(1^4,2^3)", 180},     {"cor:4.4/(1^3,2^4)", 126},
        {"cor:4.4/(1^2,2^5)", 84},      {"cor:4.4/(1^5,4^2)", 94},
        {"cor:4.4/(1^3,4^4)", 14},      {"cor:4.4/(1^3,2^2,4^2)", 62},
        {"cor:4.4/(1^2,2^2,4^3)", 30},
    };
    for (const Anchor& a : k1) {
        const FormulaRecord* r = reg().find(a.id);
        REQUIRE(r != nullptr);
        auto v = eval_record(*r, formula_point(*r, 1, 1), prov());
        REQUIRE(v.has_value());
        CHECK(*v == a.val);
    }

    // nine variables
    CHECK(rec_at("cor:4.8/(1^7,2^2)", 1) == 14);
    CHECK(rec_at("cor:4.8/(1^7,3^2)", 1) == 14);
    CHECK(rec_at("cor:4.8/(1,4^8)", 1) == 2);
    CHECK(rec_at("cor:4.8/(1,4^8)", 2) == 18);
    CHECK(rec_at("cor:4.8/(1,4^8)", 3) == 226);
    CHECK(rec_at("cor:4.8/(1,4^8)", 4) == 2034);
    CHECK(rec_at("cor:4.8/(1^2,4^7)", 1) == 4);
    CHECK(rec_at("cor:4.8/(1^2,4^7)", 3) == 452);
    // even arguments of the last two agree
    for (long n : {2L, 4L, 6L, 8L})
        CHECK(rec_at("cor:4.8/(1,4^8)", n) == rec_at("cor:4.8/(1^2,4^7)", n));

    // seven variables at 3 n^2
    CHECK(rec_at("cor:5.1/(1^6,2)", 5) == 570584);
    CHECK(rec_at("cor:5.1/(1^6,4)", 5) == 504160);
    CHECK(rec_at("cor:5.1/(1^3,4^4)", 5) == 25208);
    CHECK(rec_at("cor:5.1/(1^3,4^4)", 2) == 280);
    CHECK(rec_at("cor:5.1/(1^3,4^4)", 4) == 9240);
    CHECK(rec_at("cor:5.1/(1^3,4^4)", 10) == 882280);
    CHECK(rec_at("cor:5.1/(1^2,4^5)", 1) == 0);
    CHECK(rec_at("cor:5.1/(1,4^6)", 3) == 0);
    CHECK(rec_at("cor:5.1/(1^3,3^4)", 1) == 16);
    CHECK(rec_at("cor:5.1/(1^3,3^4)", 5) == 96496);
}

TEST_CASE("conjectural records carry the flag and match at small odd n") {
    struct Anchor {
        const char* id;
        long val;
    };
    const Anchor at1[] = {
        {"conjecture/(1,2,4^5)", 2},     {"conjecture/(1,2^3,4^3)", 2},
        {"conjecture/(1^2,2,4^4)", 4},   {"conjecture/(1,2^5,4)", 2},
        {"conjecture/(1^2,2^3,4^2)", 4}, {"conjecture/(1^3,2,4^3)", 6},
        {"conjecture/(1^3,2^3,4)", 6},   {"conjecture/(1^4,2,4^2)", 8},
        {"conjecture/(1^5,2,4)", 10},    {"conjecture/rmk-(1^6,2)", 12},
    };
    for (const Anchor& a : at1) {
        const FormulaRecord* r = reg().find(a.id);
        REQUIRE(r != nullptr);
        CHECK(r->conjectural);
        CHECK(rec_at(a.id, 1) == a.val);
    }
}

TEST_CASE("domains exclude points as nullopt") {
    const FormulaRecord* even_only = reg().find("cor:4.5/(1,2,4^5)");
    REQUIRE(even_only != nullptr);
    CHECK_FALSE(eval_record(*even_only, formula_point(*even_only, 3), prov()).has_value());
    CHECK(eval_record(*even_only, formula_point(*even_only, 2), prov()).has_value());

    const FormulaRecord* odd_only = reg().find("conjecture/(1^5,2,4)");
    REQUIRE(odd_only != nullptr);
    CHECK_FALSE(eval_record(*odd_only, formula_point(*odd_only, 2), prov()).has_value());
}

TEST_CASE("eval_formula rejects bad arguments") {
    const FormulaRecord* dsf = reg().find("cor:4.1/(1^4,2)");
    REQUIRE(dsf != nullptr);
    REQUIRE(dsf->dsf.has_value());
    CHECK_THROWS_AS(eval_formula(*dsf->dsf, dsf->form, dsf->twist, 0, prov()),
                    FormulaEvalError);
    QuadForm seven(std::vector<long>{1, 1, 1, 1, 1, 1, 2});
    CHECK_THROWS_AS(eval_formula(*dsf->dsf, seven, dsf->twist, 1, prov()), FormulaEvalError);
}

TEST_CASE("solved lift images reproduce the divisor sum records") {
    // Lift each five-variable table row, solve it in its declared basis,
    // convert the coordinates to divisor-sum terms, and compare against
    // the stored record on an initial segment.  This ties the solver
    // path and the stored closed forms together without consulting the
    // stored coordinates (the row is re-solved from scratch).
    auto rows = load_table(std::string(THETALIFT_DATA_DIR) + "/tables/T3.txt");
    REQUIRE(rows.size() == 18);
    for (const TableRow& row : rows) {
        TableRowResult rr = reproduce_row(cat(), row);
        REQUIRE(rr.combo.status != ComboStatus::Inconsistent);
        DivisorSumFormula f =
            formula_from_combo(rr.combo, cat().space(row.basis_id), row.form, row.twist);
        std::string id = "cor:4.1/(" + row.form.notation() + ")";
        const FormulaRecord* stored = reg().find(id);
        REQUIRE(stored != nullptr);
        for (long n = 1; n <= 24; ++n) {
            Int via_combo = eval_formula(f, row.form, row.twist, n, prov());
            CHECK(Rat(via_combo) == rec_at(id, n));
        }
    }
}

TEST_CASE("relation records load and evaluate") {
    auto rels = load_relations(std::string(THETALIFT_DATA_DIR) + "/relations.txt");
    REQUIRE(rels.size() == 12);
    long p47 = 0, s5r = 0;
    for (const auto& r : rels) {
        if (r.set == "prop4_7") ++p47;
        if (r.set == "sec5_remark") ++s5r;
        CHECK_FALSE(r.check.empty());
        CHECK(r.forms.size() >= 2);
    }
    CHECK(p47 == 5);
    CHECK(s5r == 7);

    // spot-evaluate one identity by hand: at n=2 the first gap relation
    // says r1 - 2 r2 = 4 C3(1) with C3(1) = 1
    const RelationRecord* gap = nullptr;
    for (const auto& r : rels)
        if (r.id == "prop4_7/mod4-2-gap4") gap = &r;
    REQUIRE(gap != nullptr);
    CountCache counts;
    EvalEnv env;
    env.coeff = prov();
    env.vars = {{"n", Rat(2)}, {"l2", Rat(1)}, {"l3", Rat(0)}, {"m", Rat(1)}};
    const auto& forms = gap->forms;
    env.rep = [&](int i, long t) {
        REQUIRE(i >= 1);
        REQUIRE(i <= (int)forms.size());
        return counts.at(forms[i - 1], t);
    };
    CHECK(gap->domain.truthy(env));
    CHECK(gap->check.truthy(env));
}
