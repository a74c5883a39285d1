#include "thetalift/catalog.hpp"

#include "thetalift/linalg.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace thetalift {

// ---------------------------------------------------------------------------
// recipe expression parsing

namespace {

class RecipeParser {
public:
    explicit RecipeParser(const std::string& s) : s_(s) {}

    RecipePtr parse() {
        RecipePtr r = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("trailing characters after expression");
        return r;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) {
        throw CatalogError("recipe parse error at position " + std::to_string(pos_) + ": " + why +
                           " in '" + s_ + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    long parse_long() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return std::stol(s_.substr(start, pos_ - start));
    }

    Rat parse_rat() {
        Int num(std::to_string(parse_long()));
        if (consume('/')) {
            long den = parse_long();
            return make_rat(num, Int(den));
        }
        return Rat(num);
    }

    std::string parse_word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected expression");
        return s_.substr(start, pos_ - start);
    }

    RecipePtr expr() {
        std::string word = parse_word();
        auto r = std::make_shared<Recipe>();
        if (word == "E") {
            long k = parse_long();
            r->kind = k == 2 ? Recipe::Kind::Eis2 : Recipe::Kind::Eis;
            if (k != 2) {
                if (k != 4 && k != 6 && k != 8) fail("Eisenstein weight must be 2, 4, 6 or 8");
                r->weight = static_cast<int>(k);
            }
            r->dilation = consume('@') ? parse_long() : 1;
            if (r->dilation < 1) fail("dilation must be positive");
            return r;
        }
        if (word == "D") {
            r->kind = Recipe::Kind::Deriv;
            expect('(');
            r->children.push_back(expr());
            expect(')');
            return r;
        }
        if (word == "eta") {
            r->kind = Recipe::Kind::Eta;
            expect('[');
            do {
                expect('(');
                long t = parse_long();
                expect(',');
                long p = parse_long();
                expect(')');
                r->eta_factors.emplace_back(t, p);
            } while (consume(','));
            expect(']');
            return r;
        }
        if (word == "sum") {
            r->kind = Recipe::Kind::Sum;
            expect('[');
            do {
                expect('(');
                Rat scale = parse_rat();
                expect(',');
                r->terms.emplace_back(scale, expr());
                expect(')');
            } while (consume(','));
            expect(']');
            return r;
        }
        if (word == "prod") {
            r->kind = Recipe::Kind::Prod;
            expect('[');
            r->children.push_back(expr());
            expect(',');
            r->children.push_back(expr());
            expect(']');
            return r;
        }
        fail("unknown expression head '" + word + "'");
    }
};

} // namespace

RecipePtr parse_recipe(const std::string& text) { return RecipeParser(text).parse(); }

std::string serialize_recipe(const Recipe& r) {
    std::ostringstream out;
    switch (r.kind) {
        case Recipe::Kind::Eis:
            out << "E" << r.weight;
            if (r.dilation != 1) out << "@" << r.dilation;
            break;
        case Recipe::Kind::Eis2:
            out << "E2";
            if (r.dilation != 1) out << "@" << r.dilation;
            break;
        case Recipe::Kind::Eta: {
            out << "eta[";
            bool first = true;
            for (auto [t, p] : r.eta_factors) {
                if (!first) out << ",";
                out << "(" << t << "," << p << ")";
                first = false;
            }
            out << "]";
            break;
        }
        case Recipe::Kind::Deriv:
            out << "D(" << serialize_recipe(*r.children.at(0)) << ")";
            break;
        case Recipe::Kind::Sum: {
            out << "sum[";
            bool first = true;
            for (const auto& [scale, child] : r.terms) {
                if (!first) out << ",";
                out << "(" << rat_to_string(scale) << "," << serialize_recipe(*child) << ")";
                first = false;
            }
            out << "]";
            break;
        }
        case Recipe::Kind::Prod:
            out << "prod[" << serialize_recipe(*r.children.at(0)) << ","
                << serialize_recipe(*r.children.at(1)) << "]";
            break;
    }
    return out.str();
}

QSeries eval_recipe(const Recipe& r, long trunc) {
    switch (r.kind) {
        case Recipe::Kind::Eis: {
            QSeries e = eisenstein(r.weight, trunc);
            return r.dilation == 1 ? e : e.dilated(r.dilation);
        }
        case Recipe::Kind::Eis2: {
            QSeries e = eisenstein2(trunc);
            return r.dilation == 1 ? e : e.dilated(r.dilation);
        }
        case Recipe::Kind::Eta:
            return eta_quotient(r.eta_factors, trunc);
        case Recipe::Kind::Deriv:
            return eval_recipe(*r.children.at(0), trunc).derivative_D();
        case Recipe::Kind::Sum: {
            QSeries acc(trunc);
            for (const auto& [scale, child] : r.terms)
                acc = acc + eval_recipe(*child, trunc).scaled(scale);
            return acc;
        }
        case Recipe::Kind::Prod:
            return eval_recipe(*r.children.at(0), trunc) * eval_recipe(*r.children.at(1), trunc);
    }
    throw CatalogError("eval_recipe: unreachable");
}

long sturm_bound(int weight, long level) {
    Rat v = make_rat(static_cast<long>(weight) * level, 12);
    for (auto [p, e] : factorize(level)) {
        (void)e;
        v *= make_rat(p + 1, p);
    }
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return q.get_si() + 1;
}

// ---------------------------------------------------------------------------
// the compiled-in registry

namespace {

const char* BUILTIN_TEXT = R"CAT(catalog v1

form E4 weight 4 level 1 recipe E4
form E6 weight 6 level 1 recipe E6
form E8 weight 8 level 1 recipe E8

form Delta_4_6 weight 4 level 6 newform recipe eta[(1,2),(2,2),(3,2),(6,2)]
form Delta_4_8 weight 4 level 8 newform recipe eta[(2,4),(4,4)]
form Delta_4_12 weight 4 level 12 newform recipe sum[(1,eta[(2,2),(3,3),(4,3),(6,2),(1,-1),(12,-1)]),(-1,eta[(1,3),(2,2),(6,2),(12,3),(3,-1),(4,-1)])]

form Delta_6_3 weight 6 level 3 newform recipe eta[(1,6),(3,6)]
form Delta_6_4 weight 6 level 4 newform recipe eta[(2,12)]
form Delta_6_8 weight 6 level 8 newform recipe sum[(1/60480,E6),(1/4032,E6@2),(1/252,E6@4),(16/189,E6@8),(-9/8,eta[(2,12)]),(-6,eta[(4,12)]),(-4/45,prod[E2,E4@8]),(4/15,D(E4@8))]
form Delta_6_8_alt weight 6 level 8 recipe sum[(-1/6048,E6),(-1/2016,E6@2),(-1/504,E6@4),(-8/945,E6@8),(-3/4,eta[(2,12)]),(-9,eta[(4,12)]),(1/90,prod[E2@8,E4]),(-1/240,D(E4))]

form Delta_8_2 weight 8 level 2 newform recipe eta[(1,8),(2,8)]
form Delta_8_3 weight 8 level 3 newform recipe sum[(1,eta[(1,12),(3,4)]),(18,eta[(1,9),(3,4),(9,3)]),(81,eta[(1,6),(3,4),(9,6)])]
form Delta_8_6 weight 8 level 6 newform recipe sum[(1/240,prod[E4,E4@6]),(-1/240,prod[E4@2,E4@3])]
form G_4_8 weight 8 level 8 recipe sum[(1/240,prod[E4,E4@8]),(-1/240,prod[E4@2,E4@4])]
form Delta_8_8_1 weight 8 level 8 newform recipe sum[(7/3231360,E8),(-1687/3231360,E8@2),(-1687/201960,E8@4),(224/25245,E8@8),(-1385/2244,eta[(1,8),(2,8)]),(7450/561,eta[(2,8),(4,8)]),(15680/51,eta[(4,8),(8,8)]),(128/33,prod[eta[(2,4),(4,4)],E4@8]),(-224/99,sum[(1/240,prod[E4,E4@8]),(-1/240,prod[E4@2,E4@4])])]
form Delta_8_8_2 weight 8 level 8 newform recipe sum[(-1/489600,E8),(241/489600,E8@2),(241/30600,E8@4),(-32/3825,E8@8),(-77/68,eta[(1,8),(2,8)]),(-446/17,eta[(2,8),(4,8)]),(-4928/17,eta[(4,8),(8,8)]),(32/15,sum[(1/240,prod[E4,E4@8]),(-1/240,prod[E4@2,E4@4])])]

space M4_4 weight 4 level 4 elements E4@1 E4@2 E4@4
space M4_6 weight 4 level 6 elements E4@1 E4@2 E4@3 E4@6 Delta_4_6@1
space M4_8 weight 4 level 8 elements E4@1 E4@2 E4@4 E4@8 Delta_4_8@1
space M4_12 weight 4 level 12 elements E4@1 E4@2 E4@3 E4@4 E4@6 E4@12 Delta_4_6@1 Delta_4_6@2 Delta_4_12@1
space M6_4 weight 6 level 4 elements E6@1 E6@2 E6@4 Delta_6_4@1
space M6_6 weight 6 level 6 elements E6@1 E6@2 E6@3 E6@6 Delta_6_3@1 Delta_6_3@2 Delta_6_6@1
space M6_8 weight 6 level 8 elements E6@1 E6@2 E6@4 E6@8 Delta_6_4@1 Delta_6_4@2 Delta_6_8@1
space M8_4 weight 8 level 4 elements E8@1 E8@2 E8@4 Delta_8_2@1 Delta_8_2@2
space M8_6 weight 8 level 6 elements E8@1 E8@2 E8@3 E8@6 Delta_8_2@1 Delta_8_2@3 Delta_8_3@1 Delta_8_3@2 Delta_8_6@1
space M8_8 weight 8 level 8 elements E8@1 E8@2 E8@4 E8@8 Delta_8_2@1 Delta_8_2@2 Delta_8_2@4 Delta_8_8_1@1 Delta_8_8_2@1
)CAT";

BasisElement parse_element(const std::string& label) {
    auto at = label.rfind('@');
    BasisElement e;
    if (at == std::string::npos) {
        e.form = label;
        e.dilation = 1;
    } else {
        e.form = label.substr(0, at);
        try {
            e.dilation = std::stol(label.substr(at + 1));
        } catch (const std::exception&) {
            throw CatalogError("bad basis element label '" + label + "'");
        }
    }
    if (e.form.empty() || e.dilation < 1)
        throw CatalogError("bad basis element label '" + label + "'");
    return e;
}

} // namespace

Catalog Catalog::parse(const std::string& text) {
    Catalog cat;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        size_t first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        trimmed = trimmed.substr(first);
        if (trimmed[0] == '#') continue;
        auto bad = [&](const std::string& why) {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": " + why);
        };
        if (!saw_header) {
            if (trimmed.rfind("catalog v1", 0) != 0) bad("missing 'catalog v1' header");
            saw_header = true;
            continue;
        }
        std::istringstream ls(trimmed);
        std::string kind;
        ls >> kind;
        if (kind == "form") {
            FormSpec f;
            std::string kw;
            if (!(ls >> f.name >> kw)) bad("truncated form record");
            if (kw != "weight") bad("expected 'weight'");
            if (!(ls >> f.weight >> kw)) bad("truncated form record");
            if (kw != "level") bad("expected 'level'");
            if (!(ls >> f.level >> kw)) bad("truncated form record");
            if (kw == "newform") {
                f.newform = true;
                if (!(ls >> kw)) bad("truncated form record");
            }
            if (kw != "recipe") bad("expected 'recipe'");
            std::string rest;
            std::getline(ls, rest);
            f.recipe = parse_recipe(rest);
            if (cat.forms_.count(f.name)) bad("duplicate form '" + f.name + "'");
            cat.form_order_.push_back(f.name);
            cat.forms_[f.name] = std::move(f);
        } else if (kind == "space") {
            SpaceBasis s;
            std::string kw;
            if (!(ls >> s.id >> kw)) bad("truncated space record");
            if (kw != "weight") bad("expected 'weight'");
            if (!(ls >> s.weight >> kw)) bad("truncated space record");
            if (kw != "level") bad("expected 'level'");
            if (!(ls >> s.level >> kw)) bad("truncated space record");
            if (kw != "elements") bad("expected 'elements'");
            std::string label;
            while (ls >> label) s.elements.push_back(parse_element(label));
            if (s.elements.empty()) bad("space with no elements");
            if (cat.spaces_.count(s.id)) bad("duplicate space '" + s.id + "'");
            cat.space_order_.push_back(s.id);
            cat.spaces_[s.id] = std::move(s);
        } else {
            bad("unknown record kind '" + kind + "'");
        }
    }
    if (!saw_header) throw CatalogError("empty catalog text");
    cat.ensure_delta_6_6();
    cat.validate();
    return cat;
}

Catalog Catalog::builtin() { return parse(BUILTIN_TEXT); }

Catalog Catalog::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// The weight 6 level 6 newform is pinned down numerically rather than by
// a printed recipe: inside the span of the three integral eta quotients
//   B1 = eta(z)^6 eta(3z)^6      (the level 3 newform)
//   B2 = eta(2z)^6 eta(6z)^6     (its dilation)
//   B3 = eta(z)^5 eta(2z)^5 eta(3z) eta(6z)
// of weight 6 and level 6, the Hecke operator at 5 fixes the oldform
// plane with eigenvalue a_5(B1); the remaining eigenvector, normalized
// to c_1 = 1, is the newform.
void Catalog::ensure_delta_6_6() {
    const std::string name = "Delta_6_6";
    bool referenced = false;
    for (const auto& [id, sp] : spaces_)
        for (const auto& e : sp.elements)
            if (e.form == name) referenced = true;
    if (!referenced || forms_.count(name)) return;

    const std::vector<std::string> recipes = {
        "eta[(1,6),(3,6)]", "eta[(2,6),(6,6)]", "eta[(1,5),(2,5),(3,1),(6,1)]"};
    long rows = 2 * sturm_bound(6, 6);
    long t_ext = 5 * rows;
    std::vector<QSeries> b;
    for (const auto& r : recipes) b.push_back(eval_recipe(*parse_recipe(r), t_ext));

    Mat coeff_rows(rows, std::vector<Rat>(3));
    for (long n = 1; n <= rows; ++n)
        for (int i = 0; i < 3; ++i) coeff_rows[n - 1][i] = b[i].coeff(n);

    // (T_5 f)(n) = a(5n) + 5^5 a(n/5)
    auto hecke5 = [&](const QSeries& f) {
        std::vector<Rat> img(rows);
        for (long n = 1; n <= rows; ++n) {
            Rat v = f.coeff(5 * n);
            if (n % 5 == 0) v += Rat(3125) * f.coeff(n / 5);
            img[n - 1] = v;
        }
        return img;
    };

    Mat action(3, std::vector<Rat>(3));
    for (int i = 0; i < 3; ++i) {
        auto solved = solve_exact(coeff_rows, hecke5(b[i]));
        if (solved.status != SolveStatus::Unique)
            throw CatalogError("level 6 eigenform search: span is not Hecke stable");
        for (int j = 0; j < 3; ++j) action[j][i] = solved.x[j];
    }

    Rat old_eigenvalue = b[0].coeff(5);
    Rat lambda_new = action[0][0] + action[1][1] + action[2][2] - 2 * old_eigenvalue;

    Mat shifted = action;
    for (int i = 0; i < 3; ++i) shifted[i][i] -= lambda_new;
    auto ker = kernel_basis(shifted);
    if (ker.size() != 1)
        throw CatalogError("level 6 eigenform search: eigenspace dimension " +
                           std::to_string(ker.size()) + ", expected 1");

    Rat c1(0);
    for (int i = 0; i < 3; ++i) c1 += ker[0][i] * b[i].coeff(1);
    if (c1 == 0) throw CatalogError("level 6 eigenform search: eigenvector has c_1 = 0");

    auto recipe = std::make_shared<Recipe>();
    recipe->kind = Recipe::Kind::Sum;
    for (int i = 0; i < 3; ++i) {
        Rat scale = ker[0][i] / c1;
        if (scale == 0) continue;
        recipe->terms.emplace_back(scale, parse_recipe(recipes[i]));
    }

    // eigenvector check on the solved window
    QSeries combo(t_ext);
    for (int i = 0; i < 3; ++i) combo = combo + b[i].scaled(ker[0][i] / c1);
    auto img = hecke5(combo);
    for (long n = 1; n <= rows; ++n)
        if (img[n - 1] != lambda_new * combo.coeff(n))
            throw CatalogError("level 6 eigenform search: eigenvector verification failed");

    FormSpec f;
    f.name = name;
    f.weight = 6;
    f.level = 6;
    f.newform = true;
    f.recipe = recipe;
    form_order_.push_back(name);
    forms_[name] = std::move(f);
}

void Catalog::validate() const {
    for (const auto& fname : form_order_) {
        const FormSpec& f = forms_.at(fname);
        if (!f.newform) continue;
        QSeries s = expand(fname, 2);
        if (s.coeff(0) != 0 || s.coeff(1) != 1)
            throw CatalogError("form '" + fname + "' violates the newform normalization c0=0, c1=1");
    }
    for (const auto& id : space_order_) {
        const SpaceBasis& sp = spaces_.at(id);
        long rows = 2 * sturm_bound(sp.weight, sp.level);
        Mat m(rows + 1, std::vector<Rat>(sp.elements.size()));
        for (size_t j = 0; j < sp.elements.size(); ++j) {
            if (!forms_.count(sp.elements[j].form))
                throw UnknownForm("space '" + id + "' references unknown form '" +
                                  sp.elements[j].form + "'");
            QSeries s = expand_element(sp.elements[j], rows);
            for (long n = 0; n <= rows; ++n) m[n][j] = s.coeff(n);
        }
        if (matrix_rank(m) != sp.elements.size())
            throw CatalogError("space '" + id + "' basis is linearly dependent up to row " +
                               std::to_string(rows));
    }
}

bool Catalog::has_form(const std::string& name) const { return forms_.count(name) != 0; }

const FormSpec& Catalog::form(const std::string& name) const {
    auto it = forms_.find(name);
    if (it == forms_.end()) throw UnknownForm("unknown form '" + name + "'");
    return it->second;
}

const SpaceBasis& Catalog::space(const std::string& id) const {
    auto it = spaces_.find(id);
    if (it == spaces_.end()) throw UnknownForm("unknown space '" + id + "'");
    return it->second;
}

std::vector<std::string> Catalog::form_names() const { return form_order_; }
std::vector<std::string> Catalog::space_ids() const { return space_order_; }

QSeries Catalog::expand(const std::string& name, long trunc) const {
    const FormSpec& f = form(name);
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->entries.find(name);
        if (it != cache_->entries.end() && it->second.trunc() >= trunc)
            return it->second.truncated(trunc);
    }
    // computed outside the lock: concurrent duplicate work is possible
    // but harmless, and long expansions never block other readers
    QSeries s = eval_recipe(*f.recipe, trunc);
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->entries.find(name);
        if (it == cache_->entries.end() || it->second.trunc() < trunc)
            cache_->entries.insert_or_assign(name, s);
    }
    return s;
}

QSeries Catalog::expand_element(const BasisElement& e, long trunc) const {
    QSeries s = expand(e.form, trunc);
    return e.dilation == 1 ? s : s.dilated(e.dilation);
}

CoeffProvider Catalog::newform_coeffs(const std::string& name, long trunc) const {
    const FormSpec& f = form(name);
    if (!f.newform)
        throw CatalogError("form '" + name + "' is not a registered newform");
    auto series = std::make_shared<QSeries>(expand(name, trunc));
    std::string label = name;
    return [series, label](long n) -> Int {
        if (n < 1 || n > series->trunc())
            throw std::out_of_range("newform coefficient index " + std::to_string(n) +
                                    " outside expanded range of " + label);
        const Rat& c = series->coeff(n);
        if (!rat_is_integer(c))
            throw CatalogError("non-integral coefficient in newform " + label);
        return Int(c.get_num());
    };
}

std::string Catalog::serialize() const {
    std::ostringstream out;
    out << "catalog v1\n\n";
    for (const auto& name : form_order_) {
        const FormSpec& f = forms_.at(name);
        out << "form " << f.name << " weight " << f.weight << " level " << f.level;
        if (f.newform) out << " newform";
        out << " recipe " << serialize_recipe(*f.recipe) << "\n";
    }
    out << "\n";
    for (const auto& id : space_order_) {
        const SpaceBasis& sp = spaces_.at(id);
        out << "space " << sp.id << " weight " << sp.weight << " level " << sp.level
            << " elements";
        for (const auto& e : sp.elements) out << " " << e.label();
        out << "\n";
    }
    return out.str();
}

void Catalog::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw CatalogError("cannot write catalog file '" + path + "'");
    out << serialize();
}

} // namespace thetalift
