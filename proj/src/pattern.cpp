#include "ud2lf/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace ud2lf {

// ---------------------------------------------------------------------------
// Matching

namespace {

bool entry_matches(const std::string& entry, const std::string& value) {
  if (!entry.empty() && entry.back() == '*')
    return value.compare(0, entry.size() - 1, entry, 0, entry.size() - 1) == 0;
  return entry == value;
}

bool set_matches(const std::set<std::string>& set, const std::string& value) {
  for (const auto& e : set)
    if (entry_matches(e, value)) return true;
  return false;
}

}  // namespace

bool NodeConstraint::matches(const Token& t) const {
  if (!upos.empty() && set_matches(upos, t.upos) == negate_upos) return false;
  if (!deprel.empty() && set_matches(deprel, t.deprel) == negate_deprel) return false;
  if (!lemma.empty() && !set_matches(lemma, t.lemma)) return false;
  return true;
}

std::optional<MatchBindings> match(const TreePattern& pattern, const DepTree& tree,
                                   int node_id) {
  const Token* target = tree.find(node_id);
  if (!target) return std::nullopt;
  if (!pattern.target.matches(*target)) return std::nullopt;

  if (pattern.parent_requirement) {
    if (target->head == 0) return std::nullopt;
    const Token* parent = tree.find(target->head);
    if (!parent || !pattern.parent_requirement->constraint.matches(*parent))
      return std::nullopt;
  }

  MatchBindings b;
  b.target = node_id;
  if (target->head != 0) b.parent = target->head;

  std::vector<int> kids = tree.children_of(node_id);
  for (const auto& req : pattern.child_requirements) {
    int found = 0;
    for (int kid : kids) {
      const Token* k = tree.find(kid);
      if (!req.constraint.matches(*k)) continue;
      if (req.adjacent && std::abs(kid - node_id) != 1) continue;
      found = kid;
      break;
    }
    if (req.forbidden) {
      if (found) return std::nullopt;
    } else {
      if (!found) return std::nullopt;
      b.children.push_back(found);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Rewriting

namespace {

// Working tree with stable per-token keys surviving renumbering.
struct Work {
  DepTree tree;
  std::vector<long> keys;  // keys[i] belongs to tree.tokens[i]

  int id_of(long key) const {
    for (size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == key) return static_cast<int>(i) + 1;
    return 0;
  }

  // removes token `id`; children reattach to its head
  void erase_reattach(int id, const std::string& rule) {
    Token victim = tree.tokens[id - 1];
    if (victim.head == 0) {
      std::vector<int> kids = tree.children_of(id);
      if (kids.size() != 1)
        throw RuleError("rule " + rule + " would orphan the root");
      // the sole child becomes the new root
      tree.tokens[kids[0] - 1].head = 0;
      tree.tokens[kids[0] - 1].deprel = "root";
    } else {
      for (auto& t : tree.tokens)
        if (t.head == id) t.head = victim.head;
    }
    remove_at(id);
  }

  void erase_subtree(int id, const std::string& rule) {
    if (tree.tokens[id - 1].head == 0)
      throw RuleError("rule " + rule + " would orphan the root");
    std::vector<int> doomed{id};
    for (size_t i = 0; i < doomed.size(); ++i)
      for (int c : tree.children_of(doomed[i])) doomed.push_back(c);
    std::sort(doomed.rbegin(), doomed.rend());
    for (int d : doomed) remove_at(d);
  }

  void remove_at(int id) {
    tree.tokens.erase(tree.tokens.begin() + (id - 1));
    keys.erase(keys.begin() + (id - 1));
    for (auto& t : tree.tokens) {
      if (t.id > id) --t.id;
      if (t.head > id) --t.head;
    }
  }
};

std::string join_atom(const std::string& a, const std::string& sep, const std::string& b) {
  if (a == "_" || a.empty()) return b;
  if (b == "_" || b.empty()) return a;
  return a + sep + b;
}

}  // namespace

DepTree apply_rules(const RewriteRuleSet& rules, const DepTree& tree, ApplyStats* stats) {
  Work w;
  w.tree = tree;
  w.keys.resize(tree.tokens.size());
  long next_key = 1;
  for (auto& k : w.keys) k = next_key++;

  ApplyStats local;

  for (int pass = 1; pass <= rules.passes; ++pass) {
    int root = w.tree.root_id();
    if (root == 0) break;
    std::deque<long> queue{w.keys[root - 1]};
    std::set<long> enqueued{w.keys[root - 1]};

    while (!queue.empty()) {
      long key = queue.front();
      queue.pop_front();
      int id = w.id_of(key);
      if (id == 0) continue;  // removed meanwhile

      const RewriteRule* fired = nullptr;
      MatchBindings bind;
      for (const auto& rule : rules.rules) {
        if (rule.pattern.pass != 0 && rule.pattern.pass != pass) continue;
        if (auto m = match(rule.pattern, w.tree, id)) {
          fired = &rule;
          bind = *m;
          break;
        }
      }

      std::vector<long> pre_child_keys;
      for (int c : w.tree.children_of(id)) pre_child_keys.push_back(w.keys[c - 1]);

      long survivor_key = key;
      if (fired) {
        ++local.rules_fired;
        local.max_fired_per_node_per_pass =
            std::max(local.max_fired_per_node_per_pass, 1);
        long bound_child_key = bind.children.empty() ? 0 : w.keys[bind.children[0] - 1];
        for (const auto& action : fired->actions) {
          int tid = w.id_of(key);
          int child = bound_child_key ? w.id_of(bound_child_key) : 0;
          if (!tid) break;  // target removed by an earlier action
          switch (action.kind) {
            case RewriteAction::Kind::SetUpos:
              w.tree.tokens[tid - 1].upos = action.argument;
              break;
            case RewriteAction::Kind::SetDeprel:
              w.tree.tokens[tid - 1].deprel = action.argument;
              break;
            case RewriteAction::Kind::DeleteNode:
              w.erase_reattach(tid, fired->name);
              break;
            case RewriteAction::Kind::DeleteSubtree:
              w.erase_subtree(tid, fired->name);
              break;
            case RewriteAction::Kind::MergeIntoHead: {
              if (!child) throw RuleError("rule " + fired->name +
                                          ": merge_into_head needs a bound child");
              Token& t = w.tree.tokens[tid - 1];
              const Token& c = w.tree.tokens[child - 1];
              t.lemma = join_atom(t.lemma, action.argument, c.lemma);
              t.morph = join_atom(t.morph, action.argument, c.morph);
              w.erase_reattach(child, fired->name);
              break;
            }
            case RewriteAction::Kind::MergeIntoDependent: {
              if (!child) throw RuleError("rule " + fired->name +
                                          ": merge_into_dependent needs a bound child");
              Token& t = w.tree.tokens[tid - 1];
              Token& c = w.tree.tokens[child - 1];
              if (!action.argument.empty())
                c.lemma = join_atom(t.lemma, action.argument, c.lemma);
              c.head = t.head;
              c.deprel = t.deprel;
              survivor_key = bound_child_key;
              // target's remaining children move to the surviving dependent
              for (auto& tok : w.tree.tokens)
                if (tok.head == tid && tok.id != child) tok.head = child;
              w.remove_at(tid);
              break;
            }
          }
        }
      }

      auto push = [&](long k) {
        if (enqueued.insert(k).second) queue.push_back(k);
      };
      for (long k : pre_child_keys) push(k);
      int sid = w.id_of(survivor_key);
      if (sid)
        for (int c : w.tree.children_of(sid)) push(w.keys[c - 1]);
    }
  }

  w.tree.sentence_id = tree.sentence_id;
  if (stats) *stats = local;
  return w.tree;
}

// ---------------------------------------------------------------------------
// Rule DSL

namespace {

std::vector<std::string> split_pipe_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '|') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// splits "(match upos=A (child ...) (no-child ...))" into head + items
struct SExpr {
  std::string head;
  std::vector<std::string> atoms;    // key=value or bare flags
  std::vector<SExpr> children;
};

SExpr parse_sexpr(const std::string& s, size_t& i) {
  auto ws = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
  ws();
  if (i >= s.size() || s[i] != '(') throw RuleError("pattern: expected '(' in " + s);
  ++i;
  SExpr e;
  ws();
  size_t start = i;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ')' && s[i] != '(')
    ++i;
  e.head = s.substr(start, i - start);
  for (;;) {
    ws();
    if (i >= s.size()) throw RuleError("pattern: unbalanced parens in " + s);
    if (s[i] == ')') {
      ++i;
      return e;
    }
    if (s[i] == '(') {
      e.children.push_back(parse_sexpr(s, i));
      continue;
    }
    start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ')')
      ++i;
    e.atoms.push_back(s.substr(start, i - start));
  }
}

void fill_constraint(NodeConstraint& c, const std::string& atom, bool& adjacent,
                     int& pass) {
  if (atom == "adjacent") {
    adjacent = true;
    return;
  }
  size_t eq = atom.find('=');
  if (eq == std::string::npos) throw RuleError("pattern: bad atom '" + atom + "'");
  std::string key = atom.substr(0, eq);
  std::string val = atom.substr(eq + 1);
  bool neg = !key.empty() && key[0] == '!';
  if (neg) key = key.substr(1);
  auto vals = split_pipe_list(val);
  if (key == "upos") {
    c.upos.insert(vals.begin(), vals.end());
    c.negate_upos = neg;
  } else if (key == "deprel") {
    c.deprel.insert(vals.begin(), vals.end());
    c.negate_deprel = neg;
  } else if (key == "lemma") {
    c.lemma.insert(vals.begin(), vals.end());
  } else if (key == "pass") {
    pass = std::stoi(val);
  } else {
    throw RuleError("pattern: unknown key '" + key + "'");
  }
}

TreePattern parse_pattern(const std::string& text) {
  size_t i = 0;
  SExpr e = parse_sexpr(text, i);
  if (e.head != "match") throw RuleError("pattern must start with (match ...)");
  TreePattern p;
  bool dummy_adj = false;
  for (const auto& a : e.atoms) fill_constraint(p.target, a, dummy_adj, p.pass);
  for (const auto& c : e.children) {
    if (c.head == "child" || c.head == "no-child") {
      ChildRequirement req;
      req.forbidden = (c.head == "no-child");
      int dummy_pass = 0;
      for (const auto& a : c.atoms)
        fill_constraint(req.constraint, a, req.adjacent, dummy_pass);
      p.child_requirements.push_back(std::move(req));
    } else if (c.head == "parent") {
      ParentRequirement req;
      bool adj = false;
      int dummy_pass = 0;
      for (const auto& a : c.atoms)
        fill_constraint(req.constraint, a, adj, dummy_pass);
      p.parent_requirement = std::move(req);
    } else {
      throw RuleError("pattern: unknown clause (" + c.head + " ...)");
    }
  }
  return p;
}

std::vector<RewriteAction> parse_actions(const std::string& text) {
  std::vector<RewriteAction> out;
  for (const auto& piece : [&] {
         std::vector<std::string> parts;
         std::string cur;
         for (char ch : text) {
           if (ch == ';') {
             parts.push_back(cur);
             cur.clear();
           } else {
             cur += ch;
           }
         }
         parts.push_back(cur);
         return parts;
       }()) {
    std::string a = trim(piece);
    if (a.empty()) continue;
    std::string name = a, arg;
    size_t p = a.find('(');
    if (p != std::string::npos) {
      if (a.back() != ')') throw RuleError("action: missing ')' in '" + a + "'");
      name = a.substr(0, p);
      arg = a.substr(p + 1, a.size() - p - 2);
    }
    RewriteAction act;
    if (name == "set_upos") act.kind = RewriteAction::Kind::SetUpos;
    else if (name == "set_deprel") act.kind = RewriteAction::Kind::SetDeprel;
    else if (name == "delete_node") act.kind = RewriteAction::Kind::DeleteNode;
    else if (name == "delete_subtree") act.kind = RewriteAction::Kind::DeleteSubtree;
    else if (name == "merge_into_head") act.kind = RewriteAction::Kind::MergeIntoHead;
    else if (name == "merge_into_dependent")
      act.kind = RewriteAction::Kind::MergeIntoDependent;
    else throw RuleError("unknown action '" + name + "'");
    act.argument = arg;
    out.push_back(std::move(act));
  }
  if (out.empty()) throw RuleError("rule has no actions: '" + text + "'");
  return out;
}

}  // namespace

RewriteRuleSet parse_rewrite_rules(const std::string& text) {
  RewriteRuleSet set;
  std::set<std::string> names;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    if (l.rfind("passes", 0) == 0) {
      size_t eq = l.find('=');
      if (eq == std::string::npos)
        throw RuleError("line " + std::to_string(line_no) + ": bad passes header");
      set.passes = std::stoi(trim(l.substr(eq + 1)));
      continue;
    }
    // priority | name | pattern | actions
    std::vector<std::string> fields;
    std::string cur;
    int depth = 0;
    for (char c : l) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == '|' && depth == 0 && fields.size() < 3) {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 4)
      throw RuleError("line " + std::to_string(line_no) +
                      ": expected 'priority | name | pattern | actions'");
    RewriteRule rule;
    try {
      rule.priority = std::stoi(trim(fields[0]));
    } catch (...) {
      throw RuleError("line " + std::to_string(line_no) + ": bad priority '" +
                      trim(fields[0]) + "'");
    }
    rule.name = trim(fields[1]);
    if (!names.insert(rule.name).second)
      throw RuleError("duplicate rule name '" + rule.name + "'");
    rule.pattern = parse_pattern(trim(fields[2]));
    rule.actions = parse_actions(fields[3]);
    rule.lexicalized = !rule.pattern.target.lemma.empty();
    for (const auto& cr : rule.pattern.child_requirements)
      if (!cr.constraint.lemma.empty()) rule.lexicalized = true;
    set.rules.push_back(std::move(rule));
  }
  std::stable_sort(set.rules.begin(), set.rules.end(),
                   [](const RewriteRule& a, const RewriteRule& b) {
                     return a.priority < b.priority;
                   });
  return set;
}

}  // namespace ud2lf
