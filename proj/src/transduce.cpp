#include "ud2lf/transduce.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <sstream>
#include <thread>

namespace ud2lf {

// ---------------------------------------------------------------------------
// Rule file parsing

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::set<std::string> pipe_set(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '|') {
      out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.insert(cur);
  return out;
}

bool glob_matches(const std::set<std::string>& set, const std::string& value) {
  if (set.empty()) return true;
  for (const auto& e : set) {
    if (!e.empty() && e.back() == '*') {
      if (value.compare(0, e.size() - 1, e, 0, e.size() - 1) == 0) return true;
    } else if (e == value) {
      return true;
    }
  }
  return false;
}

}  // namespace

LfRuleSet parse_lf_rules(const std::string& text) {
  LfRuleSet set;
  std::set<std::string> names;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    // fields separated by ' | '; bare '|' stays inside selector value lists
    std::vector<std::string> fields;
    size_t pos = 0;
    while (fields.size() < 4) {
      size_t sep = l.find(" | ", pos);
      if (sep == std::string::npos) break;
      fields.push_back(l.substr(pos, sep - pos));
      pos = sep + 3;
    }
    fields.push_back(l.substr(pos));
    if (fields.size() != 5)
      throw std::runtime_error("lf rules line " + std::to_string(line_no) +
                               ": expected 'kind | priority | name | selector | template'");
    LfAssignmentRule rule;
    std::string kind = trim(fields[0]);
    if (kind == "node") rule.kind = LfAssignmentRule::Kind::Node;
    else if (kind == "edge") rule.kind = LfAssignmentRule::Kind::Edge;
    else if (kind == "close") rule.kind = LfAssignmentRule::Kind::Close;
    else throw std::runtime_error("lf rules line " + std::to_string(line_no) +
                                  ": unknown kind '" + kind + "'");
    rule.priority = std::stoi(trim(fields[1]));
    rule.name = trim(fields[2]);
    if (!names.insert(rule.name).second)
      throw std::runtime_error("duplicate lf rule name '" + rule.name + "'");
    // selector
    std::istringstream sel(trim(fields[3]));
    std::string atom;
    while (sel >> atom) {
      size_t eq = atom.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("lf rules line " + std::to_string(line_no) +
                                 ": bad selector atom '" + atom + "'");
      std::string key = atom.substr(0, eq);
      std::set<std::string> vals = pipe_set(atom.substr(eq + 1));
      if (key == "upos") rule.selector.upos = vals;
      else if (key == "deprel") rule.selector.deprel = vals;
      else if (key == "parent_upos") rule.selector.parent_upos = vals;
      else if (key == "head") rule.selector.head_upos = vals;
      else if (key == "dep") rule.selector.dep_upos = vals;
      else if (key == "head_deprel") rule.selector.head_deprel = vals;
      else throw std::runtime_error("lf rules line " + std::to_string(line_no) +
                                    ": unknown selector key '" + key + "'");
    }
    // template
    std::string tmpl = trim(fields[4]);
    if (tmpl.rfind("term ", 0) == 0) {
      rule.tmpl = LfAssignmentRule::Template::Term;
      rule.term = parse_lf(tmpl.substr(5));
    } else if (tmpl.rfind("whvar ", 0) == 0) {
      rule.tmpl = LfAssignmentRule::Template::WhVar;
      rule.whvar_type = SemType::parse(trim(tmpl.substr(6)));
    } else if (tmpl == "apply") rule.tmpl = LfAssignmentRule::Template::Apply;
    else if (tmpl == "rapply") rule.tmpl = LfAssignmentRule::Template::RApply;
    else if (tmpl == "apply_under1") rule.tmpl = LfAssignmentRule::Template::ApplyUnder1;
    else if (tmpl == "ignore") rule.tmpl = LfAssignmentRule::Template::Ignore;
    else if (tmpl == "replace") rule.tmpl = LfAssignmentRule::Template::Replace;
    else throw std::runtime_error("lf rules line " + std::to_string(line_no) +
                                  ": unknown template '" + tmpl + "'");
    set.rules.push_back(std::move(rule));
  }
  std::stable_sort(set.rules.begin(), set.rules.end(),
                   [](const LfAssignmentRule& a, const LfAssignmentRule& b) {
                     return a.priority < b.priority;
                   });
  return set;
}

PriorityList parse_priorities(const std::string& text) {
  PriorityList list;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    list.labels.push_back(l);
  }
  return list;
}

std::pair<int, std::string> PriorityList::rank(const std::string& deprel) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == deprel) return {static_cast<int>(i), ""};
  return {static_cast<int>(labels.size()), deprel};
}

std::string failure_code(FailureReason reason) {
  switch (reason) {
    case FailureReason::InvalidTree: return "invalid-tree";
    case FailureReason::NoRuleForNode: return "no-rule-for-node";
    case FailureReason::NoRuleForEdge: return "no-rule-for-edge";
    case FailureReason::TypingFailure: return "typing-failure";
    case FailureReason::UnsupportedConstruction: return "unsupported-construction";
    case FailureReason::ResidualXDep: return "residual-X/dep";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Argument sharing across verb conjunction

DepTree share_arguments(const DepTree& tree) {
  DepTree out = tree;
  static const char* kCore[] = {"nsubj", "dobj", "iobj"};

  struct Copy {
    int src_child;  // root of the subtree to duplicate
    int dst_verb;
    std::string deprel;
  };
  std::vector<Copy> copies;

  for (const auto& t : tree.tokens) {
    if (t.deprel != "conj") continue;
    const Token* head = tree.find(t.head);
    if (!head || head->upos != "VERB" || t.upos != "VERB") continue;
    auto child_with = [&](int verb, const std::string& rel) -> int {
      for (int c : tree.children_of(verb))
        if (tree.find(c)->deprel == rel) return c;
      return 0;
    };
    for (const char* rel : kCore) {
      int hc = child_with(head->id, rel);
      int dc = child_with(t.id, rel);
      if (hc && !dc) copies.push_back({hc, t.id, rel});
      if (dc && !hc) copies.push_back({dc, head->id, rel});
    }
  }

  for (const auto& cp : copies) {
    // clone the subtree, appending tokens at the end in original order
    std::vector<int> subtree{cp.src_child};
    for (size_t i = 0; i < subtree.size(); ++i)
      for (int c : tree.children_of(subtree[i])) subtree.push_back(c);
    std::sort(subtree.begin(), subtree.end());
    std::map<int, int> remap;
    int next_id = static_cast<int>(out.tokens.size()) + 1;
    for (int id : subtree) remap[id] = next_id++;
    for (int id : subtree) {
      Token t = *tree.find(id);
      t.id = remap[id];
      if (id == cp.src_child) {
        t.head = cp.dst_verb;
        t.deprel = cp.deprel;
      } else {
        t.head = remap[t.head];
      }
      out.tokens.push_back(std::move(t));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binarization

namespace {

const std::set<std::string> kRightToLeftLabels = {"aux", "auxpass", "neg"};

struct ChildKey {
  int rank;
  std::string unlisted;
  long tie;
  bool operator<(const ChildKey& o) const {
    if (rank != o.rank) return rank < o.rank;
    if (unlisted != o.unlisted) return unlisted < o.unlisted;
    return tie < o.tie;
  }
};

}  // namespace

std::vector<Step> binarize(const DepTree& tree, const PriorityList& priorities) {
  std::vector<Step> plan;
  int det_rank = priorities.rank("det").first;

  std::function<void(int)> visit = [&](int node) {
    const Token* tok = tree.find(node);
    struct Entry {
      ChildKey key;
      Step step;
    };
    std::vector<Entry> entries;
    for (int c : tree.children_of(node)) {
      const Token* ct = tree.find(c);
      auto r = priorities.rank(ct->deprel);
      long tie = kRightToLeftLabels.count(ct->deprel) ? -c : c;
      entries.push_back({{r.first, r.second, tie},
                         {Step::Kind::Edge, node, c, ct->deprel}});
    }
    if (tok && tok->upos == "NOUN-BARE") {
      // the bare-noun quantifier closes at the determiner slot
      entries.push_back({{det_rank, "~close", 0}, {Step::Kind::Close, node, 0, ""}});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.key < b.key; });
    for (const auto& e : entries) {
      if (e.step.kind == Step::Kind::Edge) visit(e.step.dep);
      plan.push_back(e.step);
    }
  };

  int root = tree.root_id();
  if (root) {
    visit(root);
    plan.push_back({Step::Kind::Finalize, root, 0, ""});
  }
  return plan;
}

// ---------------------------------------------------------------------------
// LF assignment

namespace {

bool node_selector_matches(const LfSelector& s, const DepTree& tree, const Token& t) {
  if (!glob_matches(s.upos, t.upos)) return false;
  if (!glob_matches(s.deprel, t.deprel)) return false;
  if (!s.parent_upos.empty()) {
    if (t.head == 0) return false;
    const Token* p = tree.find(t.head);
    if (!p || !glob_matches(s.parent_upos, p->upos)) return false;
  }
  return true;
}

bool edge_selector_matches(const LfSelector& s, const DepTree& tree, const Token& head,
                           const Token& dep) {
  if (!glob_matches(s.deprel, dep.deprel)) return false;
  if (!glob_matches(s.head_upos, head.upos)) return false;
  if (!glob_matches(s.dep_upos, dep.upos)) return false;
  if (!s.head_deprel.empty()) {
    if (head.head == 0) {
      if (!glob_matches(s.head_deprel, "root")) return false;
    } else if (!glob_matches(s.head_deprel, head.deprel)) {
      return false;
    }
  }
  return true;
}

bool is_clause_upos(const std::string& upos) {
  return upos.rfind("VERB-", 0) == 0 || upos.rfind("ADJ-PRED", 0) == 0 ||
         upos.rfind("NOUN-PRED", 0) == 0;
}

const std::set<std::string> kEventMintDeprels = {
    "ccomp", "ccomp:frel", "xcomp",          "acl",
    "acl:inf", "acl:relcl:subj", "acl:relcl:obj", "csubj"};

// Replaces the @-slot constants of a rule template.
struct SlotContext {
  std::string lemma;
  std::string event;       // the node's own clause event (@e)
  std::string dep_event;   // @edep
  std::string xcomp_event; // @ex
};

TermPtr instantiate(const TermPtr& t, const SlotContext& ctx, const std::string& rule) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Const: {
      if (t->name.empty() || t->name[0] != '@') return t;
      auto named = [&](const std::string& value, const char* what) {
        if (value.empty())
          throw TypeError("rule " + rule + ": no " + what + " available for slot " +
                              t->name,
                          "");
        return mk_const(value, t->type);
      };
      if (t->name == "@lemma") return named(ctx.lemma, "lemma");
      if (t->name == "@e") return named(ctx.event, "clause event");
      if (t->name == "@edep") return named(ctx.dep_event, "dependent event");
      if (t->name == "@ex") return named(ctx.xcomp_event, "xcomp event");
      throw TypeError("rule " + rule + ": unknown slot " + t->name, "");
    }
    case Term::Kind::Abs:
      return mk_abs(t->left, instantiate(t->right, ctx, rule));
    case Term::Kind::App:
      return mk_app(instantiate(t->left, ctx, rule), instantiate(t->right, ctx, rule));
  }
  return t;
}

}  // namespace

AssignResult assign_lfs(const DepTree& tree, const LfRuleSet& rules) {
  AssignResult res;
  Derivation& d = res.derivation;
  d.transformed = tree;

  // residual annotation: the scheme's "unparseable" escape hatch
  {
    std::vector<int> bad;
    for (const auto& t : tree.tokens)
      if (t.upos == "X" || deprel_base(t.deprel) == "dep") bad.push_back(t.id);
    if (!bad.empty()) {
      res.failure = FailureReason::ResidualXDep;
      res.offending_tokens = bad;
      res.detail = "residual X/dep annotation";
      return res;
    }
  }

  // mint clause event variables in token order
  int next_event = 0;
  for (const auto& t : tree.tokens) {
    bool mint = (t.head == 0 && is_clause_upos(t.upos)) ||
                kEventMintDeprels.count(t.deprel) > 0;
    if (mint) d.node_events[t.id] = "e" + std::to_string(++next_event);
  }

  auto event_of = [&](int id) -> std::string {
    auto it = d.node_events.find(id);
    return it == d.node_events.end() ? "" : it->second;
  };
  auto xcomp_child_event = [&](int id) -> std::string {
    for (int c : tree.children_of(id))
      if (tree.find(c)->deprel == "xcomp") return event_of(c);
    return "";
  };

  int wh_counter = 0;
  for (const auto& t : tree.tokens) {
    const LfAssignmentRule* found = nullptr;
    for (const auto& rule : rules.rules) {
      if (rule.kind != LfAssignmentRule::Kind::Node) continue;
      if (node_selector_matches(rule.selector, tree, t)) {
        found = &rule;
        break;
      }
    }
    if (!found) {
      res.failure = FailureReason::NoRuleForNode;
      res.offending_tokens = {t.id};
      res.detail = "no node rule for upos=" + t.upos + " deprel=" + t.deprel;
      return res;
    }
    d.node_rules[t.id] = found->name;
    try {
      if (found->tmpl == LfAssignmentRule::Template::WhVar) {
        d.node_lfs[t.id] = mk_var("wh" + std::to_string(++wh_counter), *found->whvar_type);
        d.wh_nodes.push_back(t.id);
      } else if (found->tmpl == LfAssignmentRule::Template::Term) {
        SlotContext ctx{t.lemma, event_of(t.id), "", xcomp_child_event(t.id)};
        d.node_lfs[t.id] = instantiate(found->term, ctx, found->name);
      } else {
        throw TypeError("rule " + found->name + ": builtins are edge-only", "");
      }
    } catch (const TypeError& e) {
      res.failure = FailureReason::TypingFailure;
      res.offending_tokens = {t.id};
      res.detail = e.what();
      return res;
    }
  }

  // resolve edge rules (instantiation of term templates happens at
  // composition time for builtins; term edges are head-independent)
  for (const auto& t : tree.tokens) {
    if (t.head == 0) continue;
    const Token* head = tree.find(t.head);
    const LfAssignmentRule* found = nullptr;
    for (const auto& rule : rules.rules) {
      if (rule.kind != LfAssignmentRule::Kind::Edge) continue;
      if (edge_selector_matches(rule.selector, tree, *head, t)) {
        found = &rule;
        break;
      }
    }
    if (!found) {
      res.failure = FailureReason::NoRuleForEdge;
      res.offending_tokens = {t.id};
      res.detail = "no edge rule for deprel=" + t.deprel + " under upos=" + head->upos;
      return res;
    }
    d.edge_rules[t.id] = found->name;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Composition

namespace {

TermPtr synth_builtin(LfAssignmentRule::Template tmpl, const SemType& th,
                      const SemType& td) {
  TermPtr h = mk_var("h", th);
  TermPtr d = mk_var("d", td);
  switch (tmpl) {
    case LfAssignmentRule::Template::Apply:
      return mk_abs(h, mk_abs(d, mk_app(h, d)));
    case LfAssignmentRule::Template::RApply:
      return mk_abs(h, mk_abs(d, mk_app(d, h)));
    case LfAssignmentRule::Template::ApplyUnder1: {
      if (!th.is_fn()) throw TypeError("apply_under1 needs a function head", "");
      TermPtr o = mk_var("o", th.from());
      return mk_abs(h, mk_abs(d, mk_abs(o, mk_app(mk_app(h, o), d))));
    }
    case LfAssignmentRule::Template::Ignore:
      return mk_abs(h, mk_abs(d, h));
    case LfAssignmentRule::Template::Replace:
      return mk_abs(h, mk_abs(d, d));
    default:
      throw TypeError("not a builtin template", "");
  }
}

const LfAssignmentRule* find_rule(const LfRuleSet& rules, const std::string& name) {
  for (const auto& r : rules.rules)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

ConversionOutcome convert(const DepTree& tree, const RewriteRuleSet& rewrite_rules,
                          const LfRuleSet& lf_rules, const PriorityList& priorities,
                          const ConvertConfig& config, Derivation* derivation_out) {
  ConversionOutcome out;
  out.sentence_id = tree.sentence_id;

  auto fail = [&](FailureReason r, std::vector<int> toks, std::string detail) {
    out.failure = r;
    out.offending_tokens = std::move(toks);
    out.detail = std::move(detail);
    return out;
  };

  ValidationReport report = validate_tree(tree);
  if (!report.ok()) {
    std::string detail;
    for (const auto& v : report.violations) detail += (detail.empty() ? "" : "; ") + v;
    return fail(FailureReason::InvalidTree, {}, detail);
  }

  // residual annotation: the scheme's "unparseable" escape hatch
  {
    std::vector<int> bad;
    for (const auto& t : tree.tokens)
      if (t.upos == "X" || t.deprel == "dep" || deprel_base(t.deprel) == "dep")
        bad.push_back(t.id);
    if (!bad.empty())
      return fail(FailureReason::ResidualXDep, bad, "residual X/dep annotation");
  }

  bool is_question = false;
  for (const auto& t : tree.tokens)
    if (t.upos == "PUNCT" && t.form == "?") is_question = true;

  DepTree shared = share_arguments(tree);
  DepTree transformed;
  try {
    transformed = apply_rules(rewrite_rules, shared);
  } catch (const RuleError& e) {
    return fail(FailureReason::UnsupportedConstruction, {}, e.what());
  }

  {
    std::vector<int> bad;
    for (const auto& t : transformed.tokens)
      if (t.deprel == "acl:relcl") bad.push_back(t.id);
    if (!bad.empty())
      return fail(FailureReason::UnsupportedConstruction, bad,
                  "acl:relcl without :subj/:obj subtype");
  }

  AssignResult assigned = assign_lfs(transformed, lf_rules);
  if (assigned.failure)
    return fail(*assigned.failure, assigned.offending_tokens, assigned.detail);
  Derivation& d = assigned.derivation;

  std::vector<Step> plan = binarize(transformed, priorities);
  std::map<int, TermPtr> value = d.node_lfs;

  auto event_of = [&](int id) -> std::string {
    auto it = d.node_events.find(id);
    return it == d.node_events.end() ? "" : it->second;
  };

  try {
    for (const auto& step : plan) {
      DerivationStep rec;
      rec.step = step;
      if (step.kind == Step::Kind::Edge) {
        const LfAssignmentRule* rule = find_rule(lf_rules, d.edge_rules.at(step.dep));
        rec.rule = rule->name;
        TermPtr head_v = value.at(step.head);
        TermPtr dep_v = value.at(step.dep);
        TermPtr edge;
        if (rule->tmpl == LfAssignmentRule::Template::Term) {
          SlotContext ctx{"", event_of(step.head), event_of(step.dep), ""};
          edge = instantiate(rule->term, ctx, rule->name);
        } else {
          edge = synth_builtin(rule->tmpl, type_of(head_v), type_of(dep_v));
        }
        TermPtr applied = mk_app(mk_app(edge, head_v), dep_v);
        type_of(applied);  // typing errors surface here with a path
        rec.edge_lf = edge;
        rec.result = beta_reduce(applied, config.max_steps);
        value[step.head] = rec.result;
      } else if (step.kind == Step::Kind::Close) {
        const LfAssignmentRule* rule = nullptr;
        const Token* tok = transformed.find(step.head);
        for (const auto& r : lf_rules.rules) {
          if (r.kind != LfAssignmentRule::Kind::Close) continue;
          if (node_selector_matches(r.selector, transformed, *tok)) {
            rule = &r;
            break;
          }
        }
        if (!rule)
          return fail(FailureReason::NoRuleForNode, {step.head},
                      "no close rule for upos=" + tok->upos);
        rec.rule = rule->name;
        SlotContext ctx{tok->lemma, event_of(step.head), "", ""};
        TermPtr close_lf = instantiate(rule->term, ctx, rule->name);
        TermPtr applied = mk_app(close_lf, value.at(step.head));
        type_of(applied);
        rec.edge_lf = close_lf;
        rec.result = beta_reduce(applied, config.max_steps);
        value[step.head] = rec.result;
      } else {  // Finalize
        TermPtr v = value.at(step.head);
        if (!d.wh_nodes.empty()) {
          // bind the (first) question variable and wrap with WH
          TermPtr whv = d.node_lfs.at(d.wh_nodes.front());
          TermPtr lam = mk_abs(whv, v);
          SemType lam_ty = type_of(lam);
          TermPtr wh = mk_const("WH", SemType::fn(lam_ty, type_of(v)));
          v = mk_app(wh, lam);
        } else if (is_question &&
                   type_of(v) == SemType::fn(SemType::event(), SemType::truth())) {
          TermPtr ev = mk_var("eq", SemType::event());
          TermPtr q = mk_const("Q", SemType::fn(SemType::truth(), SemType::truth()));
          v = beta_reduce(mk_abs(ev, mk_app(q, mk_app(v, ev))), config.max_steps);
        }
        v = canonical_names(v);
        type_of(v);
        if (has_redex(v)) throw TypeError("final LF is not in normal form", "");
        rec.result = v;
        value[step.head] = v;
      }
      d.steps.push_back(std::move(rec));
    }
  } catch (const TypeError& e) {
    return fail(FailureReason::TypingFailure, {}, e.what());
  } catch (const ReductionError& e) {
    return fail(FailureReason::TypingFailure, {}, e.what());
  }

  d.final_lf = value.at(transformed.root_id());
  out.lf = d.final_lf;
  PrintOptions popts;
  popts.strip_event_abs = true;
  out.lf_text = to_text(out.lf, popts);
  if (derivation_out) *derivation_out = d;
  return out;
}

CorpusResult convert_corpus(const std::vector<Session>& sessions,
                            const RewriteRuleSet& rewrite_rules,
                            const LfRuleSet& lf_rules, const PriorityList& priorities,
                            const ConvertConfig& config, int jobs) {
  std::vector<const DepTree*> trees;
  for (const auto& s : sessions)
    for (const auto& t : s.trees) trees.push_back(&t);

  CorpusResult result;
  result.outcomes.resize(trees.size());

  auto work = [&](size_t i) {
    result.outcomes[i] =
        convert(*trees[i], rewrite_rules, lf_rules, priorities, config);
  };

  if (jobs <= 1 || trees.size() < 2) {
    for (size_t i = 0; i < trees.size(); ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= trees.size()) return;
        work(i);
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(trees.size()));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.summary.total = static_cast<int>(trees.size());
  for (const auto& o : result.outcomes)
    if (o.ok()) ++result.summary.converted;
  return result;
}

}  // namespace ud2lf
