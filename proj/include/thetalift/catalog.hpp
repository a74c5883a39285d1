#ifndef THETALIFT_CATALOG_HPP
#define THETALIFT_CATALOG_HPP

// Registry of modular-form spaces and their basis elements.  Each named
// form carries a recipe (an expression tree over Eisenstein series, eta
// quotients, derivatives, products and rational combinations) that
// expands to a QSeries at any truncation.  Spaces list their ordered
// basis as form@dilation references.
//
// The catalog ships as a small text format, one record per line:
//   catalog v1
//   form NAME weight K level N [newform] recipe EXPR
//   space ID weight K level N elements NAME@T NAME@T ...
// with the recipe grammar
//   EXPR := E{k}@{t} | E2 | eta[(t,r),...] | D(EXPR)
//         | sum[(num/den,EXPR),...] | prod[EXPR,EXPR]

#include "thetalift/arith.hpp"
#include "thetalift/qseries.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace thetalift {

struct UnknownForm : std::domain_error {
    using std::domain_error::domain_error;
};
struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Recipe;
using RecipePtr = std::shared_ptr<const Recipe>;

struct Recipe {
    enum class Kind { Eis, Eis2, Eta, Deriv, Sum, Prod };
    Kind kind = Kind::Eis;
    int weight = 4;     // Eis only: 4, 6 or 8
    long dilation = 1;  // Eis / Eis2
    std::vector<std::pair<long, long>> eta_factors;  // Eta
    std::vector<std::pair<Rat, RecipePtr>> terms;    // Sum
    std::vector<RecipePtr> children;                 // Deriv (1), Prod (2)
};

RecipePtr parse_recipe(const std::string& text);
std::string serialize_recipe(const Recipe& r);
QSeries eval_recipe(const Recipe& r, long trunc);

struct FormSpec {
    std::string name;
    int weight = 0;
    long level = 0;
    bool newform = false;
    RecipePtr recipe;
};

struct BasisElement {
    std::string form;
    long dilation = 1;
    std::string label() const { return form + "@" + std::to_string(dilation); }
};

struct SpaceBasis {
    std::string id;
    int weight = 0;
    long level = 0;
    std::vector<BasisElement> elements;
    int dimension() const { return static_cast<int>(elements.size()); }
};

// ceil((k/12) N prod_{p|N} (1 + 1/p)) + 1: enough coefficients to pin
// down a form of weight k and level N, with +1 slack.
long sturm_bound(int weight, long level);

class Catalog {
public:
    // The compiled-in registry.  The level 6 weight 6 newform has no
    // closed recipe in the registry text; it is constructed at load by
    // a Hecke eigenvector computation (see ensure_delta_6_6).
    static Catalog builtin();
    static Catalog load_file(const std::string& path);

    void save_file(const std::string& path) const;
    std::string serialize() const;

    bool has_form(const std::string& name) const;
    const FormSpec& form(const std::string& name) const;
    const SpaceBasis& space(const std::string& id) const;
    std::vector<std::string> form_names() const;
    std::vector<std::string> space_ids() const;

    // Memoized recipe expansion.
    QSeries expand(const std::string& name, long trunc) const;
    QSeries expand_element(const BasisElement& e, long trunc) const;

    // Coefficient source tau(n) for a catalog newform, valid for
    // 1 <= n <= trunc; coefficients must be integers.
    CoeffProvider newform_coeffs(const std::string& name, long trunc) const;

private:
    Catalog() = default;
    static Catalog parse(const std::string& text);
    void ensure_delta_6_6();
    void validate() const;

    std::map<std::string, FormSpec> forms_;
    std::map<std::string, SpaceBasis> spaces_;
    std::vector<std::string> form_order_;
    std::vector<std::string> space_order_;

    // expansion cache, shared across copies; guarded by its own mutex
    struct CacheState {
        std::mutex mutex;
        std::map<std::string, QSeries> entries;
    };
    std::shared_ptr<CacheState> cache_ = std::make_shared<CacheState>();
};

} // namespace thetalift

#endif
