#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "thetalift/catalog.hpp"
#include "thetalift/formula.hpp"
#include "thetalift/repcount.hpp"

using namespace thetalift;

namespace {

const Catalog& cat() {
    static Catalog c = Catalog::builtin();
    return c;
}

QuadForm qf(std::vector<long> v) { return QuadForm(std::move(v)); }

} // namespace

TEST_CASE("brute counts at frozen anchors") {
    // five variables
    CHECK(count_brute(qf({1, 1, 1, 1, 1}), 1) == 10);
    CHECK(count_brute(qf({1, 1, 1, 1, 1}), 2) == 40);
    CHECK(count_brute(qf({1, 1, 1, 1, 1}), 3) == 80);
    CHECK(count_brute(qf({1, 1, 1, 1, 2}), 1) == 8);
    CHECK(count_brute(qf({1, 1, 1, 1, 2}), 4) == 72);
    CHECK(count_brute(qf({1, 1, 1, 2, 2}), 4) == 58);
    CHECK(count_brute(qf({1, 4, 4, 4, 4}), 2) == 0);
    CHECK(count_brute(qf({1, 4, 4, 4, 4}), 4) == 10);
    CHECK(count_brute(qf({2, 3, 3, 3, 3}), 9) == 32);
    CHECK(count_brute(qf({2, 3, 3, 3, 3}), 36) == 288);
    CHECK(count_brute(qf({1, 1, 2, 3, 6}), 9) == 48);
    CHECK(count_brute(qf({1, 2, 2, 3, 3}), 9) == 74);
    // seven variables
    CHECK(count_brute(qf({1, 1, 1, 1, 1, 1, 2}), 4) == 372);
    CHECK(count_brute(qf({1, 1, 1, 1, 1, 1, 2}), 75) == 570584);
    CHECK(count_brute(qf({1, 1, 1, 3, 3, 3, 3}), 3) == 16);
    CHECK(count_brute(qf({1, 1, 1, 4, 4, 4, 4}), 12) == 280);
    CHECK(count_brute(qf({1, 1, 1, 1, 2, 2, 4}), 12) == 2072);
    // nine variables
    CHECK(count_brute(qf({1, 1, 1, 1, 1, 1, 1, 2, 2}), 1) == 14);
    CHECK(count_brute(qf({1, 1, 1, 1, 1, 1, 1, 2, 2}), 9) == 16430);
    CHECK(count_brute(qf({1, 1, 1, 1, 1, 1, 1, 3, 3}), 9) == 9814);
    CHECK(count_brute(qf({1, 4, 4, 4, 4, 4, 4, 4, 4}), 9) == 226);
    CHECK(count_brute(qf({1, 1, 4, 4, 4, 4, 4, 4, 4}), 9) == 452);
    // n = 0 counts the single zero vector
    CHECK(count_brute(qf({1, 1, 1, 1, 2}), 0) == 1);
}

TEST_CASE("series counts agree with brute counts") {
    for (auto coeffs : {std::vector<long>{1, 1, 1, 1, 2}, std::vector<long>{1, 2, 2, 3, 3},
                        std::vector<long>{2, 3, 3, 3, 6}, std::vector<long>{1, 4, 4, 4, 4}}) {
        QuadForm a(coeffs);
        auto series = count_series(a, 60);
        REQUIRE(series.size() == 61u);
        CHECK(series[0] == 1);
        for (long n = 0; n <= 60; ++n) CHECK(series[n] == count_brute(a, n));
    }
    QuadForm nine(std::vector<long>{1, 1, 1, 1, 1, 1, 1, 2, 2});
    auto series = count_series(nine, 25);
    for (long n = 0; n <= 25; ++n) CHECK(series[n] == count_brute(nine, n));
}

TEST_CASE("brute counter refuses out-of-range targets") {
    CHECK_THROWS_AS(count_brute(qf({1, 1, 1, 1, 1, 1, 1, 2, 2}), 30000), std::domain_error);
    CHECK_THROWS_AS(count_brute(qf({1, 1, 1, 1, 2}), -1), std::domain_error);
}

TEST_CASE("count cache grows and stays consistent") {
    CountCache counts;
    QuadForm a(std::vector<long>{1, 1, 1, 1, 2});
    counts.ensure(a, 10);
    CHECK(counts.at(a, 4) == 72);
    // access beyond the prepared range forces regrowth
    CHECK(counts.at(a, 100) == count_brute(a, 100));
    CHECK(counts.at(a, 0) == 1);
}

TEST_CASE("report bookkeeping and rendering") {
    Report rep;
    rep.add({"g1/a", "n=1", "4", "4", CheckStatus::Pass, false});
    rep.add({"g1/b", "n=2", "5", "6", CheckStatus::Fail, false});
    rep.add({"g2/c", "n=3", "7", "7", CheckStatus::Pass, true});
    rep.add({"g2/d", "n=4", "8", "9", CheckStatus::Fail, true});
    rep.add({"g2/e", "", "", "skipped", CheckStatus::Note, false});
    CHECK(rep.passes() == 2);
    CHECK(rep.failures() == 2);
    CHECK(rep.notes() == 1);
    CHECK(rep.proved_failures() == 1);  // conjectural failures counted apart

    std::string summary = report_summary(rep);
    CHECK(summary.find("g1") != std::string::npos);
    CHECK(summary.find("conjectural") != std::string::npos);
    CHECK(summary.find("failures:") != std::string::npos);

    std::string csv = report_csv(rep);
    CHECK(csv.find("id,status,inputs,expected,got,flags") == 0);
    CHECK(csv.find("\"g1/b\",FAIL") != std::string::npos);

    Report other;
    other.add({"g3/f", "n=5", "1", "1", CheckStatus::Pass, false});
    rep.merge(other);
    CHECK(rep.records.size() == 6u);

    // sort is stable on id then inputs
    rep.sort();
    CHECK(std::is_sorted(rep.records.begin(), rep.records.end(),
                         [](const CheckRecord& x, const CheckRecord& y) {
                             return std::tie(x.id, x.inputs) < std::tie(y.id, y.inputs);
                         }));
}

TEST_CASE("hecke recursion matches expanded coefficients") {
    auto prov = catalog_provider(cat(), 700);
    struct Probe {
        const char* form;
        int weight;
        long level;
    };
    for (Probe pr : {Probe{"Delta_4_6", 4, 6}, Probe{"Delta_6_4", 6, 4}, Probe{"Delta_8_2", 8, 2}}) {
        for (long p : {5L, 7L, 11L, 13L, 23L}) {
            if (pr.level % p == 0) continue;
            for (int lam = 0; lam <= 3; ++lam) {
                long arg = 1;
                for (int i = 0; i < lam; ++i) arg *= p;
                if (arg > 700) break;
                CHECK(newform_prime_power(prov, pr.form, pr.weight, pr.level, p, lam) ==
                      prov(pr.form, arg));
            }
        }
    }
}

TEST_CASE("congruence sweep passes at reduced bounds") {
    Report rep = verify_congruences(cat(), 60, 2);
    CHECK(rep.failures() == 0);
    CHECK(rep.passes() > 0);
}

TEST_CASE("oracle cross-check driver") {
    std::vector<QuadForm> forms = {qf({1, 1, 1, 1, 2}), qf({1, 4, 4, 4, 4})};
    Report rep = verify_count_oracles(forms, 30);
    CHECK(rep.failures() == 0);
    CHECK(rep.records.size() == forms.size());
}

TEST_CASE("table form collection is deduplicated and sorted") {
    auto forms = table_forms(std::string(THETALIFT_DATA_DIR) + "/tables");
    CHECK(forms.size() >= 100u);
    CHECK(forms.size() <= 140u);
    for (size_t i = 1; i < forms.size(); ++i)
        CHECK(forms[i - 1].notation() < forms[i].notation());
    bool has_quinary = false, has_nonary = false;
    for (const auto& f : forms) {
        if (f.notation() == "1^4,2") has_quinary = true;
        if (f.notation() == "1,4^8") has_nonary = true;
    }
    CHECK(has_quinary);
    CHECK(has_nonary);
}

TEST_CASE("relation sweep passes at reduced bounds") {
    auto rels = load_relations(std::string(THETALIFT_DATA_DIR) + "/relations.txt");
    Report rep = verify_relations(cat(), rels, "prop4_7", 20);
    CHECK(rep.failures() == 0);
    CHECK(rep.passes() > 0);
    // unknown set name is a visible failure, not silence
    Report empty = verify_relations(cat(), rels, "no-such-set", 20);
    CHECK(empty.failures() == 1);
}

TEST_CASE("corollary sweep smoke test") {
    FormulaRegistry reg = load_formulas(std::string(THETALIFT_DATA_DIR) + "/corollaries.txt");
    Report rep = verify_corollary(cat(), reg, "cor:4.2", 12);
    CHECK(rep.failures() == 0);
    CHECK(rep.passes() > 0);
    Report one = verify_corollary(cat(), reg, "cor:4.1/(1^4,2)", 8);
    CHECK(one.failures() == 0);
    CHECK(one.passes() == 8);
    Report none = verify_corollary(cat(), reg, "no-such-scope", 8);
    CHECK(none.failures() == 1);
}
