#include "thetalift/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

namespace thetalift {

// ---- coefficient provider ----

namespace {

struct ProviderState {
    const Catalog* cat = nullptr;
    std::mutex mu;
    std::map<std::string, QSeries> series;
};

} // namespace

NewformProvider catalog_provider(const Catalog& cat, long initial_trunc) {
    auto st = std::make_shared<ProviderState>();
    st->cat = &cat;
    long floor_trunc = std::max(initial_trunc, 16L);
    return [st, floor_trunc](const std::string& name, long n) -> Int {
        if (n < 1)
            throw FormulaEvalError("coefficient index " + std::to_string(n) + " out of range");
        std::lock_guard<std::mutex> lock(st->mu);
        auto it = st->series.find(name);
        if (it == st->series.end()) {
            if (!st->cat->form(name).newform)
                throw FormulaEvalError("form '" + name + "' is not a newform");
            it = st->series.emplace(name, st->cat->expand(name, std::max(floor_trunc, 2 * n))).first;
        } else if (it->second.trunc() < n) {
            it->second = st->cat->expand(name, std::max(2 * n, 2 * it->second.trunc()));
        }
        const Rat& c = it->second.coeff(n);
        if (!rat_is_integer(c))
            throw FormulaEvalError("non-integral coefficient in form '" + name + "'");
        return Int(c.get_num());
    };
}

// ---- divisor-sum formulas ----

namespace {

long squarefree_core(long v) {
    long core = 1;
    for (const auto& [p, e] : factorize(v))
        if (e % 2) core *= p;
    return core;
}

} // namespace

DivisorSumFormula make_divisor_sum(const QuadForm& a, const Twist& D) {
    DivisorSumFormula f;
    f.ell = a.ell();
    long psi = 1;
    for (long c : a.coeffs()) psi = squarefree_core(psi * squarefree_core(c));
    f.psi_top = psi;
    f.twist_top = D.value;
    f.modulus = (D.kind == Twist::Kind::SquareFree ? 2 : 1) * a.level();
    f.power = (a.ell() - 3) / 2;
    return f;
}

Int eval_formula(const DivisorSumFormula& f, const QuadForm& a, const Twist& D, long n,
                 const NewformProvider& coeff) {
    if (n < 1) throw FormulaEvalError("eval_formula: n must be positive");
    if (f.ell != a.ell())
        throw FormulaEvalError("eval_formula: formula has " + std::to_string(f.ell) +
                               " variables, form has " + std::to_string(a.ell()));
    long modulus = (D.kind == Twist::Kind::SquareFree ? 2 : 1) * a.level();
    int power = (a.ell() - 3) / 2;
    int w = a.ell() - 2;
    Rat total(0);
    for (long d : divisors(n)) {
        if (std::gcd(d, modulus) != 1) continue;
        int chi = mobius(d);
        if (chi == 0) continue;
        chi *= psi_a(a, d) * kronecker(D.value, d);
        if (chi == 0) continue;
        long x = n / d;
        Rat inner(0);
        for (const SigmaTerm& t : f.sigma_terms) {
            if (x % t.scale != 0) continue;
            inner += t.c * Rat(sigma(w, x / t.scale));
        }
        for (const NewformTerm& t : f.newform_terms) {
            if (x % t.scale != 0) continue;
            inner += t.c * Rat(coeff(t.form, x / t.scale));
        }
        total += Rat(chi) * Rat(int_pow(Int(d), static_cast<unsigned long>(power))) * inner;
    }
    if (!rat_is_integer(total))
        throw FormulaEvalError("eval_formula: non-integral value " + rat_to_string(total) +
                               " at n = " + std::to_string(n));
    return Int(total.get_num());
}

DivisorSumFormula formula_from_combo(const ComboResult& combo, const SpaceBasis& basis,
                                     const QuadForm& a, const Twist& D) {
    if (combo.coefficients.size() != basis.elements.size())
        throw std::invalid_argument("formula_from_combo: coordinate count does not match basis");
    if (basis.weight != a.ell() - 1)
        throw std::invalid_argument("formula_from_combo: basis weight " +
                                    std::to_string(basis.weight) + " does not fit " +
                                    std::to_string(a.ell()) + " variables");
    DivisorSumFormula f = make_divisor_sum(a, D);
    for (size_t j = 0; j < basis.elements.size(); ++j) {
        const Rat& lam = combo.coefficients[j];
        if (lam == 0) continue;
        const BasisElement& e = basis.elements[j];
        if (e.form == "E4" || e.form == "E6" || e.form == "E8") {
            int w = e.form[1] - '0';
            f.sigma_terms.push_back({lam * Rat(-2 * w) / bernoulli(w), e.dilation});
        } else if (e.form.rfind("Delta_", 0) == 0) {
            f.newform_terms.push_back({lam, e.form, e.dilation});
        } else {
            throw UnsupportedBasisElement("basis element '" + e.label() +
                                          "' is neither an Eisenstein nor a newform dilate");
        }
    }
    return f;
}

// ---- expression language ----

struct ExprNode {
    enum class Kind { Num, Var, Unary, Binary, Call };
    Kind kind = Kind::Num;
    Rat num;
    std::string name;  // variable name, function name, or operator spelling
    std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode n) { return std::make_shared<ExprNode>(std::move(n)); }

NodePtr make_binary(const std::string& op, NodePtr a, NodePtr b) {
    ExprNode n;
    n.kind = ExprNode::Kind::Binary;
    n.name = op;
    n.args = {std::move(a), std::move(b)};
    return make_node(std::move(n));
}

enum class Tok { Num, Ident, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    size_t pos = 0;
};

std::vector<Token> lex_expression(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Num, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        bool two = false;
        for (const char* t : {"<=", ">=", "==", "!=", "&&", "||"}) {
            if (s.compare(i, 2, t) == 0) {
                out.push_back({Tok::Op, t, i});
                i += 2;
                two = true;
                break;
            }
        }
        if (two) continue;
        if (std::strchr("+-*/%^(),<>!", c)) {
            out.push_back({Tok::Op, std::string(1, c), i});
            ++i;
            continue;
        }
        throw FormulaParseError("unexpected character '" + std::string(1, c) +
                                "' at position " + std::to_string(i));
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

struct ExprParser {
    std::vector<Token> toks;
    size_t at = 0;

    const Token& peek() const { return toks[at]; }

    bool accept_op(const char* t) {
        if (peek().kind == Tok::Op && peek().text == t) {
            ++at;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormulaParseError(msg + " at position " + std::to_string(peek().pos));
    }

    NodePtr parse_or() {
        NodePtr a = parse_and();
        while (accept_op("||")) a = make_binary("||", a, parse_and());
        return a;
    }

    NodePtr parse_and() {
        NodePtr a = parse_cmp();
        while (accept_op("&&")) a = make_binary("&&", a, parse_cmp());
        return a;
    }

    NodePtr parse_cmp() {
        NodePtr a = parse_add();
        for (const char* op : {"==", "!=", "<=", ">=", "<", ">"})
            if (accept_op(op)) return make_binary(op, a, parse_add());
        return a;
    }

    NodePtr parse_add() {
        NodePtr a = parse_mul();
        while (true) {
            if (accept_op("+")) a = make_binary("+", a, parse_mul());
            else if (accept_op("-")) a = make_binary("-", a, parse_mul());
            else return a;
        }
    }

    NodePtr parse_mul() {
        NodePtr a = parse_unary();
        while (true) {
            if (accept_op("*")) a = make_binary("*", a, parse_unary());
            else if (accept_op("/")) a = make_binary("/", a, parse_unary());
            else if (accept_op("%")) a = make_binary("%", a, parse_unary());
            else return a;
        }
    }

    NodePtr parse_unary() {
        if (accept_op("-")) {
            ExprNode n;
            n.kind = ExprNode::Kind::Unary;
            n.name = "-";
            n.args = {parse_unary()};
            return make_node(std::move(n));
        }
        if (accept_op("!")) {
            ExprNode n;
            n.kind = ExprNode::Kind::Unary;
            n.name = "!";
            n.args = {parse_unary()};
            return make_node(std::move(n));
        }
        return parse_pow();
    }

    NodePtr parse_pow() {
        NodePtr base = parse_primary();
        if (accept_op("^")) return make_binary("^", base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        const Token& t = peek();
        if (t.kind == Tok::Num) {
            ++at;
            ExprNode n;
            n.kind = ExprNode::Kind::Num;
            n.num = Rat(Int(t.text));
            return make_node(std::move(n));
        }
        if (t.kind == Tok::Ident) {
            std::string name = t.text;
            ++at;
            if (name == "true" || name == "false") {
                ExprNode n;
                n.kind = ExprNode::Kind::Num;
                n.num = Rat(name == "true" ? 1 : 0);
                return make_node(std::move(n));
            }
            if (accept_op("(")) {
                ExprNode n;
                n.kind = ExprNode::Kind::Call;
                n.name = name;
                if (!accept_op(")")) {
                    n.args.push_back(parse_or());
                    while (accept_op(",")) n.args.push_back(parse_or());
                    if (!accept_op(")")) fail("expected ')'");
                }
                return make_node(std::move(n));
            }
            ExprNode n;
            n.kind = ExprNode::Kind::Var;
            n.name = name;
            return make_node(std::move(n));
        }
        if (accept_op("(")) {
            NodePtr inner = parse_or();
            if (!accept_op(")")) fail("expected ')'");
            return inner;
        }
        fail("expected a value");
    }
};

Int expr_int(const Rat& v, const std::string& what) {
    if (!rat_is_integer(v))
        throw FormulaEvalError(what + ": expected an integer, got " + rat_to_string(v));
    return Int(v.get_num());
}

long expr_long(const Rat& v, const std::string& what) {
    Int i = expr_int(v, what);
    if (!i.fits_slong_p()) throw FormulaEvalError(what + ": argument out of range");
    return i.get_si();
}

// sigma and tau zero-extend off the positive integers.
bool positive_integer(const Rat& x, long& out) {
    if (!rat_is_integer(x) || x <= 0) return false;
    if (!x.get_num().fits_slong_p())
        throw FormulaEvalError("argument " + rat_to_string(x) + " out of range");
    out = x.get_num().get_si();
    return true;
}

struct CBinding {
    int index;
    const char* form;
};

const std::map<std::string, CBinding>& c_bindings() {
    static const std::map<std::string, CBinding> m = {
        {"C1", {1, "Delta_4_8"}}, {"C2", {2, "Delta_4_6"}}, {"C3", {3, "Delta_6_4"}},
        {"C4", {4, "Delta_6_8"}}, {"C5", {5, "Delta_8_2"}}, {"C6", {6, "Delta_8_3"}},
        {"C7", {7, "Delta_6_3"}},
    };
    return m;
}

Rat eval_node(const NodePtr& n, const EvalEnv& env);

Rat eval_call(const ExprNode& call, const EvalEnv& env) {
    const std::string& f = call.name;
    auto want_args = [&](size_t k) {
        if (call.args.size() != k)
            throw FormulaEvalError("function " + f + " takes " + std::to_string(k) +
                                   " argument(s), got " + std::to_string(call.args.size()));
    };
    auto arg = [&](size_t i) { return eval_node(call.args[i], env); };
    auto form_arg = [&](size_t i) -> const std::string& {
        if (call.args[i]->kind != ExprNode::Kind::Var)
            throw FormulaEvalError("function " + f + " expects a form name as argument " +
                                   std::to_string(i + 1));
        return call.args[i]->name;
    };
    auto provider_for = [&](const std::string& form) -> CoeffProvider {
        if (!env.coeff)
            throw FormulaEvalError("function " + f + " needs a coefficient provider");
        const NewformProvider& coeff = env.coeff;
        return [&coeff, form](long t) { return coeff(form, t); };
    };

    if (f == "abs") {
        want_args(1);
        return abs(arg(0));
    }
    if (f == "gcd") {
        want_args(2);
        Int a = expr_int(arg(0), f), b = expr_int(arg(1), f);
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return Rat(g);
    }
    if (f == "kron") {
        want_args(2);
        return Rat(kronecker(expr_int(arg(0), f), expr_int(arg(1), f)));
    }
    if (f == "mu") {
        want_args(1);
        return Rat(mobius(expr_long(arg(0), f)));
    }
    if (f == "sigma") {
        want_args(2);
        long x = 0;
        if (!positive_integer(arg(1), x)) return Rat(0);
        return Rat(sigma(static_cast<int>(expr_long(arg(0), f)), x));
    }
    if (f == "sigma1" || f == "sigma3" || f == "sigma5" || f == "sigma7") {
        want_args(1);
        long x = 0;
        if (!positive_integer(arg(0), x)) return Rat(0);
        return Rat(sigma(f[5] - '0', x));
    }
    if (f.size() == 2 && f[0] == 's' && f[1] >= '1' && f[1] <= '7') {
        want_args(1);
        return Rat(s_function(f[1] - '0', expr_long(arg(0), f)));
    }
    if (f == "s6p") {
        want_args(1);
        return Rat(twisted_sigma_sum(-4, 2, 5, expr_long(arg(0), f)));
    }
    if (f == "sfn") {
        want_args(4);
        return Rat(twisted_sigma_sum(expr_long(arg(0), f), static_cast<int>(expr_long(arg(1), f)),
                                     static_cast<int>(expr_long(arg(2), f)),
                                     expr_long(arg(3), f)));
    }
    if (f == "tau") {
        want_args(2);
        const std::string& form = form_arg(0);
        if (!env.coeff)
            throw FormulaEvalError("function tau needs a coefficient provider");
        long x = 0;
        if (!positive_integer(arg(1), x)) return Rat(0);
        return Rat(env.coeff(form, x));
    }
    if (f == "cfn") {
        want_args(4);
        CoeffProvider tau = provider_for(form_arg(0));
        return Rat(twisted_coeff_sum(expr_long(arg(1), f), static_cast<int>(expr_long(arg(2), f)),
                                     tau, expr_long(arg(3), f)));
    }
    if (auto it = c_bindings().find(f); it != c_bindings().end()) {
        want_args(1);
        CoeffProvider tau = provider_for(it->second.form);
        return Rat(c_function(it->second.index, expr_long(arg(0), f), tau));
    }
    if (f == "r") {
        want_args(2);
        if (!env.rep) throw FormulaEvalError("function r needs a bound form list");
        long i = expr_long(arg(0), f);
        Rat t = arg(1);
        if (!rat_is_integer(t) || t < 0)
            throw FormulaEvalError("r: target must be a non-negative integer");
        if (!t.get_num().fits_slong_p()) throw FormulaEvalError("r: target out of range");
        return Rat(env.rep(static_cast<int>(i), t.get_num().get_si()));
    }
    throw FormulaEvalError("unknown function '" + f + "'");
}

Rat eval_node(const NodePtr& n, const EvalEnv& env) {
    switch (n->kind) {
    case ExprNode::Kind::Num:
        return n->num;
    case ExprNode::Kind::Var: {
        auto it = env.vars.find(n->name);
        if (it == env.vars.end()) throw FormulaEvalError("unbound variable '" + n->name + "'");
        return it->second;
    }
    case ExprNode::Kind::Unary: {
        Rat v = eval_node(n->args[0], env);
        if (n->name == "-") return -v;
        return Rat(v == 0 ? 1 : 0);
    }
    case ExprNode::Kind::Call:
        return eval_call(*n, env);
    case ExprNode::Kind::Binary:
        break;
    }
    const std::string& op = n->name;
    if (op == "&&") {
        if (eval_node(n->args[0], env) == 0) return Rat(0);
        return Rat(eval_node(n->args[1], env) != 0 ? 1 : 0);
    }
    if (op == "||") {
        if (eval_node(n->args[0], env) != 0) return Rat(1);
        return Rat(eval_node(n->args[1], env) != 0 ? 1 : 0);
    }
    Rat a = eval_node(n->args[0], env);
    Rat b = eval_node(n->args[1], env);
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") {
        if (b == 0) throw FormulaEvalError("division by zero");
        return a / b;
    }
    if (op == "%") {
        Int ia = expr_int(a, "%"), ib = expr_int(b, "%");
        if (ib == 0) throw FormulaEvalError("modulo by zero");
        Int r;
        mpz_mod(r.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
        return Rat(r);
    }
    if (op == "^") return rat_pow(a, expr_long(b, "^"));
    if (op == "==") return Rat(a == b ? 1 : 0);
    if (op == "!=") return Rat(a != b ? 1 : 0);
    if (op == "<") return Rat(a < b ? 1 : 0);
    if (op == "<=") return Rat(a <= b ? 1 : 0);
    if (op == ">") return Rat(a > b ? 1 : 0);
    if (op == ">=") return Rat(a >= b ? 1 : 0);
    throw FormulaEvalError("unknown operator '" + op + "'");
}

} // namespace

Expression Expression::parse(const std::string& text) {
    ExprParser p{lex_expression(text)};
    Expression e;
    e.root_ = p.parse_or();
    if (p.peek().kind != Tok::End) p.fail("trailing input");
    e.text_ = text;
    return e;
}

Rat Expression::eval(const EvalEnv& env) const {
    if (!root_) throw FormulaEvalError("evaluating an empty expression");
    return eval_node(root_, env);
}

// ---- record files ----

namespace {

std::string strip_line(std::string s) {
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// remainder of the line after what the stream has consumed
std::string rest_of(std::istringstream& ls, const std::string& line) {
    auto pos = ls.tellg();
    if (pos < 0) return "";
    std::string rest = line.substr(static_cast<size_t>(pos));
    auto begin = rest.find_first_not_of(" \t");
    return begin == std::string::npos ? "" : rest.substr(begin);
}

} // namespace

std::vector<std::string> FormulaRegistry::groups() const {
    std::vector<std::string> out;
    for (const FormulaRecord& r : records)
        if (std::find(out.begin(), out.end(), r.group) == out.end()) out.push_back(r.group);
    return out;
}

std::vector<const FormulaRecord*> FormulaRegistry::group(const std::string& g) const {
    std::vector<const FormulaRecord*> out;
    for (const FormulaRecord& r : records)
        if (r.group == g) out.push_back(&r);
    return out;
}

const FormulaRecord* FormulaRegistry::find(const std::string& id) const {
    for (const FormulaRecord& r : records)
        if (r.id == id) return &r;
    return nullptr;
}

FormulaRegistry load_formulas(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open formula file: " + path);
    FormulaRegistry reg;

    struct Pending {
        bool active = false;
        std::string id;
        std::optional<QuadForm> form;
        std::optional<Twist> twist;
        ArgKind arg = ArgKind::Square;
        int split = 1;
        Expression domain;
        std::string against;
        std::vector<CaseBranch> cases;
        std::vector<SigmaTerm> sigma_terms;
        std::vector<NewformTerm> newform_terms;
        bool conjectural = false;
    } cur;

    std::string line;
    long lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw FormulaParseError(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip_line(line);
        if (s.empty()) continue;
        std::istringstream ls(s);
        std::string kw;
        ls >> kw;
        if (kw == "formula") {
            if (cur.active) fail("missing 'end' before a new record");
            cur = Pending{};
            cur.active = true;
            ls >> cur.id;
            if (cur.id.empty()) fail("formula record needs an id");
            continue;
        }
        if (!cur.active) fail("directive outside a record: '" + kw + "'");
        if (kw == "form") {
            std::string v;
            ls >> v;
            cur.form = parse_quadform(v);
        } else if (kw == "twist") {
            std::string v;
            ls >> v;
            cur.twist = parse_twist_text(v);
        } else if (kw == "arg") {
            std::string v;
            ls >> v;
            if (v == "sq") cur.arg = ArgKind::Square;
            else if (v == "3sq") cur.arg = ArgKind::TripleSquare;
            else if (v == "pow4") cur.arg = ArgKind::FourPowerSquare;
            else fail("unknown arg kind '" + v + "'");
        } else if (kw == "split") {
            ls >> cur.split;
            if (cur.split != 1 && cur.split != 2 && cur.split != 6)
                fail("split must be 1, 2 or 6");
        } else if (kw == "domain") {
            cur.domain = Expression::parse(rest_of(ls, s));
        } else if (kw == "against") {
            ls >> cur.against;
        } else if (kw == "conjectural") {
            cur.conjectural = true;
        } else if (kw == "case") {
            std::string rest = rest_of(ls, s);
            auto colon = rest.find(':');
            if (colon == std::string::npos) fail("case line needs 'condition : value'");
            cur.cases.push_back({Expression::parse(rest.substr(0, colon)),
                                 Expression::parse(rest.substr(colon + 1))});
        } else if (kw == "term") {
            std::string kind, c, at;
            ls >> kind >> c;
            long scale = 0;
            if (kind == "sigma") {
                ls >> at >> scale;
                if (at != "@" || scale < 1) fail("term sigma needs 'COEFF @ SCALE'");
                cur.sigma_terms.push_back({rat_from_string(c), scale});
            } else if (kind == "newform") {
                std::string name;
                ls >> name >> at >> scale;
                if (at != "@" || scale < 1) fail("term newform needs 'COEFF NAME @ SCALE'");
                cur.newform_terms.push_back({rat_from_string(c), name, scale});
            } else {
                fail("unknown term kind '" + kind + "'");
            }
        } else if (kw == "end") {
            if (!cur.form || !cur.twist) fail("record needs 'form' and 'twist'");
            bool has_terms = !cur.sigma_terms.empty() || !cur.newform_terms.empty();
            if (has_terms == !cur.cases.empty())
                fail("record needs either term lines or case lines, not both");
            if (has_terms && cur.arg == ArgKind::FourPowerSquare)
                fail("four-power records need case lines");
            std::string group = cur.id.substr(0, cur.id.find('/'));
            FormulaRecord rec{cur.id,
                              group,
                              *cur.form,
                              *cur.twist,
                              cur.arg,
                              cur.split,
                              std::move(cur.domain),
                              std::move(cur.against),
                              std::move(cur.cases),
                              std::nullopt,
                              cur.conjectural};
            if (has_terms) {
                DivisorSumFormula f = make_divisor_sum(rec.form, rec.twist);
                f.sigma_terms = std::move(cur.sigma_terms);
                f.newform_terms = std::move(cur.newform_terms);
                rec.dsf = std::move(f);
            }
            reg.records.push_back(std::move(rec));
            cur = Pending{};
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }
    if (cur.active) fail("unterminated record '" + cur.id + "'");
    return reg;
}

FormulaPoint formula_point(const FormulaRecord& rec, long n) {
    if (rec.arg == ArgKind::FourPowerSquare)
        throw FormulaEvalError("record " + rec.id + " sweeps (k, m) pairs, not n");
    if (n < 1) throw FormulaEvalError("sweep value must be positive");
    long l2 = 0, l3 = 0, odd = n;
    while (odd % 2 == 0) {
        odd /= 2;
        ++l2;
    }
    long m6 = odd;
    while (m6 % 3 == 0) {
        m6 /= 3;
        ++l3;
    }
    FormulaPoint pt;
    pt.target = (rec.arg == ArgKind::TripleSquare ? 3 : 1) * n * n;
    pt.vars["n"] = Rat(n);
    pt.vars["l2"] = Rat(l2);
    pt.vars["l3"] = Rat(l3);
    pt.vars["m"] = Rat(rec.split == 1 ? n : rec.split == 2 ? odd : m6);
    return pt;
}

FormulaPoint formula_point(const FormulaRecord& rec, long k, long m) {
    if (rec.arg != ArgKind::FourPowerSquare)
        throw FormulaEvalError("record " + rec.id + " sweeps n, not (k, m)");
    if (k < 1 || m < 1 || m % 2 == 0)
        throw FormulaEvalError("four-power points need k >= 1 and odd m");
    long pow4 = 1;
    for (long i = 0; i < k; ++i) pow4 *= 4;
    FormulaPoint pt;
    pt.target = pow4 * m * m;
    pt.vars["k"] = Rat(k);
    pt.vars["m"] = Rat(m);
    return pt;
}

std::optional<Rat> eval_record(const FormulaRecord& rec, const FormulaPoint& pt,
                               const NewformProvider& coeff) {
    EvalEnv env;
    env.vars = pt.vars;
    env.coeff = coeff;
    if (!rec.domain.empty() && !rec.domain.truthy(env)) return std::nullopt;
    if (rec.dsf) {
        long n = expr_long(env.vars.at("n"), "eval_record");
        return Rat(eval_formula(*rec.dsf, rec.form, rec.twist, n, coeff));
    }
    for (const CaseBranch& c : rec.cases)
        if (c.cond.truthy(env)) return c.value.eval(env);
    throw FormulaEvalError("no case covers the point for record " + rec.id);
}

std::vector<RelationRecord> load_relations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open relation file: " + path);
    std::vector<RelationRecord> out;

    struct Pending {
        bool active = false;
        std::string id;
        std::string set;
        std::vector<QuadForm> forms;
        Expression domain;
        Expression check;
    } cur;

    std::string line;
    long lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw FormulaParseError(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip_line(line);
        if (s.empty()) continue;
        std::istringstream ls(s);
        std::string kw;
        ls >> kw;
        if (kw == "relation") {
            if (cur.active) fail("missing 'end' before a new record");
            cur = Pending{};
            cur.active = true;
            ls >> cur.id;
            if (cur.id.empty()) fail("relation record needs an id");
            continue;
        }
        if (!cur.active) fail("directive outside a record: '" + kw + "'");
        if (kw == "set") {
            ls >> cur.set;
        } else if (kw == "forms") {
            std::string v;
            while (ls >> v) cur.forms.push_back(parse_quadform(v));
        } else if (kw == "domain") {
            cur.domain = Expression::parse(rest_of(ls, s));
        } else if (kw == "check") {
            cur.check = Expression::parse(rest_of(ls, s));
        } else if (kw == "end") {
            if (cur.set.empty() || cur.forms.empty() || cur.check.empty())
                fail("relation record needs 'set', 'forms' and 'check'");
            out.push_back({cur.id, cur.set, std::move(cur.forms), std::move(cur.domain),
                           std::move(cur.check)});
            cur = Pending{};
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }
    if (cur.active) fail("unterminated record '" + cur.id + "'");
    return out;
}

} // namespace thetalift
