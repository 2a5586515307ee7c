// Typed lambda calculus for logical forms: three base types (t truth,
// v individual, r event), terms, capture-avoiding substitution,
// normal-order beta reduction, alpha equivalence and type checking.
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ud2lf {

class SemType {
 public:
  enum class Kind { Truth, Individual, Event, Fn };

  static SemType truth();
  static SemType individual();
  static SemType event();
  static SemType fn(const SemType& from, const SemType& to);

  Kind kind() const { return node_->kind; }
  bool is_fn() const { return node_->kind == Kind::Fn; }
  SemType from() const;
  SemType to() const;

  bool operator==(const SemType& other) const;
  bool operator!=(const SemType& other) const { return !(*this == other); }

  // "t", "v", "r", "<a,b>"
  std::string str() const;

  // Accepts both "<a,b>" and "(a->b)" spellings, arrows right-associative.
  static SemType parse(const std::string& text);

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const Node> from, to;
  };
  explicit SemType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  static bool eq(const Node& a, const Node& b);
  static std::string str(const Node& n);
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Const, Abs, App };
  Kind kind;
  std::string name;  // Var / Const
  SemType type;      // Var / Const (Abs/App carry no cached type)
  TermPtr left;      // Abs: the bound Var term; App: function
  TermPtr right;     // Abs: body; App: argument
};

TermPtr mk_var(std::string name, SemType type);
TermPtr mk_const(std::string name, SemType type);
TermPtr mk_abs(TermPtr bound_var, TermPtr body);
TermPtr mk_app(TermPtr fn, TermPtr arg);
// app(f, {a,b,c}) = ((f a) b) c
TermPtr mk_app(TermPtr fn, const std::vector<TermPtr>& args);

class TypeError : public std::runtime_error {
 public:
  TypeError(const std::string& msg, std::string path)
      : std::runtime_error(msg + " at " + (path.empty() ? "<root>" : path)),
        path(std::move(path)) {}
  std::string path;  // subterm path, e.g. "app.fn.abs.body"
};

class ReductionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::set<std::string> free_vars(const TermPtr& term);

// Capture-avoiding substitution of `value` for free occurrences of `var`.
// Throws TypeError if the types disagree.
TermPtr substitute(const TermPtr& body, const TermPtr& var, const TermPtr& value);

SemType type_of(const TermPtr& term);

constexpr int kDefaultMaxSteps = 10000;

// Normal-order reduction to beta-normal form.  Throws ReductionError once
// the step budget is exhausted (diagnostic; rule-generated terms stay far
// below it).
TermPtr beta_reduce(const TermPtr& term, int max_steps = kDefaultMaxSteps);

// Leftmost-innermost (applicative) reduction; used to cross-check
// confluence on small terms.
TermPtr beta_reduce_innermost(const TermPtr& term, int max_steps = kDefaultMaxSteps);

bool has_redex(const TermPtr& term);

// Bound variables renamed to a canonical numbering ($1, $2, ... by binding
// order).  Two terms are alpha-equivalent iff their reprs are equal; free
// variables and constants compare by name, binders also by type.
struct CanonicalForm {
  TermPtr term;
  std::string repr;
  bool operator==(const CanonicalForm& o) const { return repr == o.repr; }
};

CanonicalForm canonical(const TermPtr& term);
bool alpha_equivalent(const TermPtr& a, const TermPtr& b);

// Renames bound variables to a deterministic fresh supply: individual
// binders x1, x2, ...; event binders keep their names when they do not
// collide, otherwise e<k>.  Free variables are never touched.
TermPtr canonical_names(const TermPtr& term);

struct PrintOptions {
  bool quantifier_sugar = true;   // App(q, lambda x. b) as q(x, b)
  bool strip_event_abs = false;   // print the body of a top-level event lambda
};

std::string to_text(const TermPtr& term, const PrintOptions& opts = {});

// Grammar: term := symbol | symbol '(' term {',' term} ')'
//               | 'lambda' var ':' type '.' term | '(' term ')'
// Call syntax curries left: f(a,b) = (f a) b.  Free symbols become
// constants with a placeholder type (alpha comparison ignores it).
TermPtr parse_lf(const std::string& text);

}  // namespace ud2lf
