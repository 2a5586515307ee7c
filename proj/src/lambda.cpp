#include "ud2lf/lambda.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace ud2lf {

// ---------------------------------------------------------------------------
// SemType

SemType SemType::truth() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Truth, nullptr, nullptr});
  return SemType(n);
}
SemType SemType::individual() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Individual, nullptr, nullptr});
  return SemType(n);
}
SemType SemType::event() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Event, nullptr, nullptr});
  return SemType(n);
}
SemType SemType::fn(const SemType& from, const SemType& to) {
  return SemType(std::make_shared<const Node>(Node{Kind::Fn, from.node_, to.node_}));
}

SemType SemType::from() const { return SemType(node_->from); }
SemType SemType::to() const { return SemType(node_->to); }

bool SemType::eq(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != Kind::Fn) return true;
  return eq(*a.from, *b.from) && eq(*a.to, *b.to);
}

bool SemType::operator==(const SemType& other) const {
  return node_ == other.node_ || eq(*node_, *other.node_);
}

std::string SemType::str(const Node& n) {
  switch (n.kind) {
    case Kind::Truth: return "t";
    case Kind::Individual: return "v";
    case Kind::Event: return "r";
    case Kind::Fn: return "<" + str(*n.from) + "," + str(*n.to) + ">";
  }
  return "?";
}

std::string SemType::str() const { return str(*node_); }

namespace {

struct TypeParser {
  const std::string& s;
  size_t i = 0;
  explicit TypeParser(const std::string& text) : s(text) {}

  void ws() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }

  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("bad type '" + s + "': " + what);
  }

  SemType atom() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    char c = s[i];
    if (c == 't') { ++i; return SemType::truth(); }
    if (c == 'v') { ++i; return SemType::individual(); }
    if (c == 'r') { ++i; return SemType::event(); }
    if (c == '<') {
      ++i;
      SemType a = arrow();
      ws();
      if (i >= s.size() || s[i] != ',') fail("expected ','");
      ++i;
      SemType b = arrow();
      ws();
      if (i >= s.size() || s[i] != '>') fail("expected '>'");
      ++i;
      return SemType::fn(a, b);
    }
    if (c == '(') {
      ++i;
      SemType t = arrow();
      ws();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      ++i;
      return t;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  SemType arrow() {
    SemType lhs = atom();
    ws();
    if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>') {
      i += 2;
      return SemType::fn(lhs, arrow());
    }
    return lhs;
  }
};

}  // namespace

SemType SemType::parse(const std::string& text) {
  TypeParser p(text);
  SemType t = p.arrow();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return t;
}

// ---------------------------------------------------------------------------
// Term construction

TermPtr mk_var(std::string name, SemType type) {
  return std::make_shared<const Term>(Term{Term::Kind::Var, std::move(name), type, nullptr, nullptr});
}
TermPtr mk_const(std::string name, SemType type) {
  return std::make_shared<const Term>(Term{Term::Kind::Const, std::move(name), type, nullptr, nullptr});
}
TermPtr mk_abs(TermPtr bound_var, TermPtr body) {
  if (!bound_var || bound_var->kind != Term::Kind::Var)
    throw std::invalid_argument("mk_abs: binder must be a variable");
  return std::make_shared<const Term>(
      Term{Term::Kind::Abs, "", SemType::truth(), std::move(bound_var), std::move(body)});
}
TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return std::make_shared<const Term>(
      Term{Term::Kind::App, "", SemType::truth(), std::move(fn), std::move(arg)});
}
TermPtr mk_app(TermPtr fn, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(fn);
  for (const auto& a : args) t = mk_app(t, a);
  return t;
}

// ---------------------------------------------------------------------------
// Free variables / substitution

static void free_vars_rec(const TermPtr& t, std::set<std::string>& bound,
                          std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Term::Kind::Const:
      return;
    case Term::Kind::Abs: {
      bool inserted = bound.insert(t->left->name).second;
      free_vars_rec(t->right, bound, out);
      if (inserted) bound.erase(t->left->name);
      return;
    }
    case Term::Kind::App:
      free_vars_rec(t->left, bound, out);
      free_vars_rec(t->right, bound, out);
      return;
  }
}

std::set<std::string> free_vars(const TermPtr& term) {
  std::set<std::string> bound, out;
  free_vars_rec(term, bound, out);
  return out;
}

static std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  // strip a trailing numeric suffix so x3 freshens to x4, not x3'4
  size_t k = stem.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(stem[k - 1]))) --k;
  if (k > 0) stem = stem.substr(0, k);
  if (stem.empty()) stem = "x";
  for (int n = 1;; ++n) {
    std::string cand = stem + std::to_string(n);
    if (!avoid.count(cand)) return cand;
  }
}

static TermPtr subst_rec(const TermPtr& t, const std::string& name, const SemType& ty,
                         const TermPtr& value, const std::set<std::string>& value_fv) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->name == name) {
        if (t->type != ty)
          throw TypeError("substitution type mismatch for " + name, "var");
        return value;
      }
      return t;
    case Term::Kind::Const:
      return t;
    case Term::Kind::Abs: {
      const std::string& b = t->left->name;
      if (b == name) return t;  // shadowed
      if (value_fv.count(b)) {
        // rename binder to avoid capture
        std::set<std::string> avoid = value_fv;
        for (const auto& v : free_vars(t->right)) avoid.insert(v);
        avoid.insert(name);
        TermPtr nb = mk_var(fresh_name(b, avoid), t->left->type);
        std::set<std::string> nb_fv{nb->name};
        TermPtr renamed = subst_rec(t->right, b, t->left->type, nb, nb_fv);
        return mk_abs(nb, subst_rec(renamed, name, ty, value, value_fv));
      }
      return mk_abs(t->left, subst_rec(t->right, name, ty, value, value_fv));
    }
    case Term::Kind::App: {
      TermPtr l = subst_rec(t->left, name, ty, value, value_fv);
      TermPtr r = subst_rec(t->right, name, ty, value, value_fv);
      if (l == t->left && r == t->right) return t;
      return mk_app(l, r);
    }
  }
  return t;
}

TermPtr substitute(const TermPtr& body, const TermPtr& var, const TermPtr& value) {
  if (!var || var->kind != Term::Kind::Var)
    throw std::invalid_argument("substitute: second argument must be a variable");
  if (type_of(value) != var->type)
    throw TypeError("substitute: value type " + type_of(value).str() +
                        " does not match variable type " + var->type.str(),
                    "");
  return subst_rec(body, var->name, var->type, value, free_vars(value));
}

// ---------------------------------------------------------------------------
// Type checking

static SemType type_rec(const TermPtr& t, std::map<std::string, std::vector<SemType>>& env,
                        const std::string& path) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it != env.end() && !it->second.empty()) {
        if (it->second.back() != t->type)
          throw TypeError("variable " + t->name + " used at type " + t->type.str() +
                              " but bound at " + it->second.back().str(),
                          path);
      }
      return t->type;
    }
    case Term::Kind::Const:
      return t->type;
    case Term::Kind::Abs: {
      env[t->left->name].push_back(t->left->type);
      SemType body = type_rec(t->right, env, path + ".abs");
      env[t->left->name].pop_back();
      return SemType::fn(t->left->type, body);
    }
    case Term::Kind::App: {
      SemType f = type_rec(t->left, env, path + ".fn");
      SemType a = type_rec(t->right, env, path + ".arg");
      if (!f.is_fn())
        throw TypeError("applying non-function of type " + f.str(), path);
      if (f.from() != a)
        throw TypeError("argument type " + a.str() + " does not match expected " +
                            f.from().str(),
                        path);
      return f.to();
    }
  }
  throw TypeError("malformed term", path);
}

SemType type_of(const TermPtr& term) {
  std::map<std::string, std::vector<SemType>> env;
  return type_rec(term, env, "");
}

// ---------------------------------------------------------------------------
// Beta reduction

bool has_redex(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return false;
    case Term::Kind::Abs:
      return has_redex(t->right);
    case Term::Kind::App:
      if (t->left->kind == Term::Kind::Abs) return true;
      return has_redex(t->left) || has_redex(t->right);
  }
  return false;
}

// One leftmost-outermost step; returns nullptr when already normal.
static TermPtr step_normal(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return nullptr;
    case Term::Kind::Abs: {
      TermPtr b = step_normal(t->right);
      return b ? mk_abs(t->left, b) : nullptr;
    }
    case Term::Kind::App: {
      if (t->left->kind == Term::Kind::Abs) {
        const TermPtr& abs = t->left;
        return subst_rec(abs->right, abs->left->name, abs->left->type, t->right,
                         free_vars(t->right));
      }
      if (TermPtr l = step_normal(t->left)) return mk_app(l, t->right);
      if (TermPtr r = step_normal(t->right)) return mk_app(t->left, r);
      return nullptr;
    }
  }
  return nullptr;
}

// One leftmost-innermost step.
static TermPtr step_innermost(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return nullptr;
    case Term::Kind::Abs: {
      TermPtr b = step_innermost(t->right);
      return b ? mk_abs(t->left, b) : nullptr;
    }
    case Term::Kind::App: {
      if (TermPtr l = step_innermost(t->left)) return mk_app(l, t->right);
      if (TermPtr r = step_innermost(t->right)) return mk_app(t->left, r);
      if (t->left->kind == Term::Kind::Abs) {
        const TermPtr& abs = t->left;
        return subst_rec(abs->right, abs->left->name, abs->left->type, t->right,
                         free_vars(t->right));
      }
      return nullptr;
    }
  }
  return nullptr;
}

static TermPtr reduce_with(const TermPtr& term, int max_steps,
                           TermPtr (*step)(const TermPtr&)) {
  TermPtr cur = term;
  for (int n = 0; n < max_steps; ++n) {
    TermPtr next = step(cur);
    if (!next) return cur;
    cur = next;
  }
  if (!step(cur)) return cur;
  throw ReductionError("beta reduction exceeded " + std::to_string(max_steps) + " steps");
}

TermPtr beta_reduce(const TermPtr& term, int max_steps) {
  return reduce_with(term, max_steps, step_normal);
}
TermPtr beta_reduce_innermost(const TermPtr& term, int max_steps) {
  return reduce_with(term, max_steps, step_innermost);
}

// ---------------------------------------------------------------------------
// Alpha equivalence / canonical forms

static TermPtr canon_rec(const TermPtr& t, std::map<std::string, std::vector<std::string>>& ren,
                         int& next, std::string& repr) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = ren.find(t->name);
      if (it != ren.end() && !it->second.empty()) {
        repr += "(b " + it->second.back() + ")";
        return mk_var(it->second.back(), t->type);
      }
      // free variables and constants compare by name only
      repr += "(s " + t->name + ")";
      return t;
    }
    case Term::Kind::Const:
      repr += "(s " + t->name + ")";
      return t;
    case Term::Kind::Abs: {
      std::string nn = "$" + std::to_string(++next);
      repr += "(L " + t->left->type.str() + " ";
      ren[t->left->name].push_back(nn);
      TermPtr body = canon_rec(t->right, ren, next, repr);
      ren[t->left->name].pop_back();
      repr += ")";
      return mk_abs(mk_var(nn, t->left->type), body);
    }
    case Term::Kind::App: {
      repr += "(A ";
      TermPtr l = canon_rec(t->left, ren, next, repr);
      repr += " ";
      TermPtr r = canon_rec(t->right, ren, next, repr);
      repr += ")";
      return mk_app(l, r);
    }
  }
  return t;
}

CanonicalForm canonical(const TermPtr& term) {
  std::map<std::string, std::vector<std::string>> ren;
  int next = 0;
  std::string repr;
  TermPtr t = canon_rec(term, ren, next, repr);
  return CanonicalForm{t, repr};
}

bool alpha_equivalent(const TermPtr& a, const TermPtr& b) {
  return canonical(a).repr == canonical(b).repr;
}

static TermPtr rename_rec(const TermPtr& t, std::map<std::string, std::vector<TermPtr>>& ren,
                          int& next_x, int& next_e, std::set<std::string>& taken) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = ren.find(t->name);
      if (it != ren.end() && !it->second.empty()) return it->second.back();
      return t;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::Abs: {
      std::string nn;
      if (t->left->type == SemType::event()) {
        // keep a non-colliding numbered event name, else mint e<k>
        bool numbered = t->left->name.size() > 1 && t->left->name[0] == 'e' &&
                        t->left->name.find_first_not_of("0123456789", 1) ==
                            std::string::npos;
        if (numbered && !taken.count(t->left->name)) {
          nn = t->left->name;
        } else {
          do { nn = "e" + std::to_string(++next_e); } while (taken.count(nn));
        }
      } else {
        do { nn = "x" + std::to_string(++next_x); } while (taken.count(nn));
      }
      taken.insert(nn);
      TermPtr nv = mk_var(nn, t->left->type);
      ren[t->left->name].push_back(nv);
      TermPtr body = rename_rec(t->right, ren, next_x, next_e, taken);
      ren[t->left->name].pop_back();
      return mk_abs(nv, body);
    }
    case Term::Kind::App: {
      TermPtr l = rename_rec(t->left, ren, next_x, next_e, taken);
      TermPtr r = rename_rec(t->right, ren, next_x, next_e, taken);
      return mk_app(l, r);
    }
  }
  return t;
}

static void collect_const_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var: return;
    case Term::Kind::Const: out.insert(t->name); return;
    case Term::Kind::Abs: collect_const_names(t->right, out); return;
    case Term::Kind::App:
      collect_const_names(t->left, out);
      collect_const_names(t->right, out);
      return;
  }
}

TermPtr canonical_names(const TermPtr& term) {
  std::map<std::string, std::vector<TermPtr>> ren;
  int nx = 0, ne = 0;
  // fresh names must avoid free variables and all constants (embedded clause
  // events surface as constants named e<k>)
  std::set<std::string> taken = free_vars(term);
  collect_const_names(term, taken);
  return rename_rec(term, ren, nx, ne, taken);
}

// ---------------------------------------------------------------------------
// Printing

static void print_rec(const TermPtr& t, const PrintOptions& opts, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      out += t->name;
      return;
    case Term::Kind::Abs:
      out += "lambda " + t->left->name + ":" + t->left->type.str() + ". ";
      print_rec(t->right, opts, out);
      return;
    case Term::Kind::App: {
      // flatten application spine
      std::vector<const TermPtr*> args;
      const Term* head = t.get();
      const TermPtr* cur = &t;
      while ((*cur)->kind == Term::Kind::App) {
        args.push_back(&(*cur)->right);
        cur = &(*cur)->left;
      }
      head = cur->get();
      if (head->kind == Term::Kind::Var || head->kind == Term::Kind::Const) {
        out += head->name;
        out += "(";
        for (size_t i = args.size(); i-- > 0;) {
          const TermPtr& a = *args[i];
          if (opts.quantifier_sugar && a->kind == Term::Kind::Abs &&
              a->left->type == SemType::individual()) {
            out += a->left->name + ", ";
            print_rec(a->right, opts, out);
          } else if (a->kind == Term::Kind::Abs) {
            out += "(";
            print_rec(a, opts, out);
            out += ")";
          } else {
            print_rec(a, opts, out);
          }
          if (i > 0) out += ", ";
        }
        out += ")";
        return;
      }
      // head is an abstraction (unreduced redex): print explicitly
      out += "(";
      print_rec(*cur, opts, out);
      out += ")";
      for (size_t i = args.size(); i-- > 0;) {
        out += "(";
        print_rec(*args[i], opts, out);
        out += ")";
      }
      return;
    }
  }
}

std::string to_text(const TermPtr& term, const PrintOptions& opts) {
  TermPtr t = term;
  if (opts.strip_event_abs && t->kind == Term::Kind::Abs &&
      t->left->type == SemType::event()) {
    t = t->right;
  }
  std::string out;
  print_rec(t, opts, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct LfParser {
  const std::string& s;
  size_t i = 0;
  // symbols seen as binders (name -> stack of typed vars)
  std::map<std::string, std::vector<TermPtr>> scope;

  explicit LfParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("bad LF '" + s + "' at offset " + std::to_string(i) + ": " + what);
  }

  void ws() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }

  static bool sym_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
           c == '|' || c == '-' || c == '$' || c == '?' || c == '+' || c == '@';
  }

  std::string symbol() {
    ws();
    size_t start = i;
    while (i < s.size() && sym_char(s[i])) ++i;
    if (i == start) fail("expected symbol");
    return s.substr(start, i - start);
  }

  SemType type() {
    ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '(' || s[i] == '<')) {
      // bracketed type: consume the balanced group
      int depth = 0;
      while (i < s.size()) {
        char c = s[i];
        if (c == '<' || c == '(') ++depth;
        else if (c == ')' || (c == '>' && !(i > 0 && s[i - 1] == '-'))) --depth;
        ++i;
        if (depth == 0) break;
      }
    } else {
      // bare type like v or v->r->t
      while (i < s.size() && (s[i] == 'v' || s[i] == 'r' || s[i] == 't' ||
                              s[i] == '-' || s[i] == '>')) {
        ++i;
      }
    }
    return SemType::parse(s.substr(start, i - start));
  }

  TermPtr atom() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    if (s[i] == '(') {
      ++i;
      TermPtr t = term();
      ws();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      ++i;
      return calls(t);
    }
    std::string name = symbol();
    if (name == "lambda" || name == "\\") {
      std::string var = symbol();
      ws();
      if (i >= s.size() || s[i] != ':') fail("expected ':' after binder");
      ++i;
      SemType ty = type();
      ws();
      if (i >= s.size() || s[i] != '.') fail("expected '.' after binder type");
      ++i;
      TermPtr v = mk_var(var, ty);
      scope[var].push_back(v);
      TermPtr body = term();
      scope[var].pop_back();
      return mk_abs(v, body);
    }
    TermPtr head;
    // optional constant type annotation name:TYPE
    if (i < s.size() && s[i] == ':') {
      ++i;
      head = mk_const(name, type());
    } else {
      auto it = scope.find(name);
      if (it != scope.end() && !it->second.empty()) head = it->second.back();
      else head = mk_const(name, SemType::truth());
    }
    return calls(head);
  }

  TermPtr calls(TermPtr head) {
    ws();
    while (i < s.size() && s[i] == '(') {
      ++i;
      std::vector<TermPtr> args;
      ws();
      if (i < s.size() && s[i] == ')') { ++i; ws(); continue; }
      args.push_back(term());
      ws();
      while (i < s.size() && s[i] == ',') {
        ++i;
        args.push_back(term());
        ws();
      }
      if (i >= s.size() || s[i] != ')') fail("expected ')' in call");
      ++i;
      head = mk_app(head, args);
      ws();
    }
    return head;
  }

  TermPtr term() { return atom(); }
};

}  // namespace

TermPtr parse_lf(const std::string& text) {
  // A leading '\' abbreviation for lambda is handled by the symbol "\\" path.
  std::string prepped;
  prepped.reserve(text.size() + 8);
  for (char c : text) {
    if (c == '\\') prepped += "lambda ";
    else prepped += c;
  }
  LfParser p(prepped);
  TermPtr t = p.term();
  p.ws();
  if (p.i != prepped.size()) p.fail("trailing input");
  return t;
}

}  // namespace ud2lf
