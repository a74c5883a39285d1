#ifndef THETALIFT_FORMULA_HPP
#define THETALIFT_FORMULA_HPP

// Closed forms for representation numbers.  A solved basis combination
// turns, by Moebius inversion of the lift, into a divisor sum
//
//   r_l(a; |t| n^2) = sum_{d|n, gcd(d,M)=1} mu(d) psi_a(d) (t/d)
//                     d^{(l-3)/2} [ inner terms evaluated at n/d ]
//
// with M the lift's coprimality modulus and t the twist value.  The
// inner terms are sigma_{l-2} and newform coefficients at scaled
// arguments, zero-extended to non-integral inputs.  On top of that
// this module provides a small exact expression language for the
// piecewise case formulas (branching on the 2- and 3-adic valuations
// of n) and loaders for the record files shipped under data/.

#include "thetalift/arith.hpp"
#include "thetalift/catalog.hpp"
#include "thetalift/lincomb.hpp"
#include "thetalift/quadform.hpp"
#include "thetalift/shimura.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thetalift {

struct UnsupportedBasisElement : std::domain_error {
    using std::domain_error::domain_error;
};
struct FormulaParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormulaEvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient lookup by catalog form name, argument >= 1.
using NewformProvider = std::function<Int(const std::string&, long)>;

// Thread-safe provider backed by catalog expansions; series grow on
// demand (geometrically, so sweeps do not re-expand per coefficient).
NewformProvider catalog_provider(const Catalog& cat, long initial_trunc = 64);

// c * sigma_{l-2}((n/d)/scale), zero unless scale divides n/d.
struct SigmaTerm {
    Rat c;
    long scale = 1;
};

// c * a_form((n/d)/scale), same divisibility convention.
struct NewformTerm {
    Rat c;
    std::string form;
    long scale = 1;
};

struct DivisorSumFormula {
    int ell = 5;
    long psi_top = 1;     // psi_a = kronecker(psi_top, .)
    long twist_top = 1;   // the twist value, used verbatim in (t/d)
    long modulus = 1;     // outer sum runs over gcd(d, modulus) = 1
    int power = 1;        // (l-3)/2
    std::vector<SigmaTerm> sigma_terms;
    std::vector<NewformTerm> newform_terms;
};

// Outer data (character tops, modulus, power) for lifting a by D;
// terms start empty.
DivisorSumFormula make_divisor_sum(const QuadForm& a, const Twist& D);

// The full double sum at n.  The outer data is recomputed from (a, D)
// to match the lift exactly; f supplies the inner terms.  Throws
// FormulaEvalError if the result is not an integer.
Int eval_formula(const DivisorSumFormula& f, const QuadForm& a, const Twist& D, long n,
                 const NewformProvider& coeff);

// Translate solved basis coordinates into divisor-sum terms: an
// Eisenstein dilate E_k@s contributes lambda * (-2k/B_k) sigma at
// scale s, a newform dilate F@s contributes lambda * a_F at scale s.
// Anything else throws UnsupportedBasisElement.
DivisorSumFormula formula_from_combo(const ComboResult& combo, const SpaceBasis& basis,
                                     const QuadForm& a, const Twist& D);

// ---- expression language ----
//
// Exact rational expressions with variables, used for the piecewise
// case formulas and the relation checks.  Operators: + - * / % ^
// (integer exponent), comparisons, && || !, true/false.  Functions:
//   abs gcd kron mu  sigma(w,x) sigma1 sigma3 sigma5 sigma7
//   s1..s7 s6p  sfn(top,e,w,m)  tau(Form,x)  cfn(Form,top,e,m)
//   C1..C7  r(i,t)
// sigma* and tau zero-extend: non-integral or non-positive arguments
// give 0.  Form names resolve through the bound NewformProvider; r()
// indexes a relation record's form list through the bound callback.

struct ExprNode;

struct EvalEnv {
    std::map<std::string, Rat> vars;
    NewformProvider coeff;              // tau, cfn, C1..C7
    std::function<Int(int, long)> rep;  // r(i, t)
};

class Expression {
  public:
    Expression() = default;
    static Expression parse(const std::string& text);
    Rat eval(const EvalEnv& env) const;
    bool truthy(const EvalEnv& env) const { return eval(env) != 0; }
    bool empty() const { return root_ == nullptr; }
    const std::string& text() const { return text_; }

  private:
    std::shared_ptr<const ExprNode> root_;
    std::string text_;
};

// ---- stored formula records ----

enum class ArgKind { Square, TripleSquare, FourPowerSquare };

struct CaseBranch {
    Expression cond;
    Expression value;
};

// One stored closed formula for r_l(form; target), either as raw
// divisor-sum terms or as case expressions.  split controls which part
// of n the variable m names: the full n, its odd part, or its
// prime-to-6 part (l2 and l3 are always bound).
struct FormulaRecord {
    std::string id;
    std::string group;
    QuadForm form;
    Twist twist;
    ArgKind arg = ArgKind::Square;
    int split = 1;
    Expression domain;            // empty means no side condition
    std::string against;          // compare to this record, not to counts
    std::vector<CaseBranch> cases;
    std::optional<DivisorSumFormula> dsf;
    bool conjectural = false;
};

struct FormulaRegistry {
    std::vector<FormulaRecord> records;

    std::vector<std::string> groups() const;  // distinct, in file order
    std::vector<const FormulaRecord*> group(const std::string& g) const;
    const FormulaRecord* find(const std::string& id) const;
};

FormulaRegistry load_formulas(const std::string& path);

// One sweep point: the count argument plus the variable bindings the
// record's expressions see.
struct FormulaPoint {
    long target = 0;
    std::map<std::string, Rat> vars;
};

// Square and triple-square records take the sweep value as n.
FormulaPoint formula_point(const FormulaRecord& rec, long n);
// Four-power records take (k, m) with target 4^k m^2.
FormulaPoint formula_point(const FormulaRecord& rec, long k, long m);

// nullopt when the record's domain excludes the point.  A point no
// case covers is a registry bug and throws FormulaEvalError.
std::optional<Rat> eval_record(const FormulaRecord& rec, const FormulaPoint& pt,
                               const NewformProvider& coeff);

// ---- stored relation records ----

// An identity between representation numbers of several forms,
// checked by sweeping n and evaluating a boolean expression.  The
// expressions see n, l2, l3 and the odd part m; r(i, t) is the count
// for the i-th listed form (1-based) at t.
struct RelationRecord {
    std::string id;
    std::string set;
    std::vector<QuadForm> forms;
    Expression domain;
    Expression check;
};

std::vector<RelationRecord> load_relations(const std::string& path);

} // namespace thetalift

#endif
