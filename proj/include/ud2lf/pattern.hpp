// Tree-pattern matching and prioritized first-match rewriting over
// dependency trees: the transformation stage of the conversion pipeline
// (subcategorize POS tags, drop punctuation, merge particle verbs, ...).
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ud2lf/treebank.hpp"

namespace ud2lf {

struct NodeConstraint {
  // empty set = unconstrained; sets are alternatives (a|b); entries may end
  // in '*' for prefix matching (VERB* covers the subcategorized tags)
  std::set<std::string> upos;
  std::set<std::string> lemma;   // only the lexicalized question-word rules use this
  std::set<std::string> deprel;
  bool negate_upos = false;
  bool negate_deprel = false;

  bool empty() const { return upos.empty() && lemma.empty() && deprel.empty(); }
  bool matches(const Token& t) const;
};

struct ChildRequirement {
  NodeConstraint constraint;  // deprel set lives inside the constraint
  bool forbidden = false;
  bool adjacent = false;      // required child must be string-adjacent to target
};

struct ParentRequirement {
  NodeConstraint constraint;  // matched against the parent token itself
};

struct TreePattern {
  NodeConstraint target;
  std::vector<ChildRequirement> child_requirements;
  std::optional<ParentRequirement> parent_requirement;
  int pass = 0;  // 0 = active in every pass
};

struct RewriteAction {
  enum class Kind {
    SetUpos,
    SetDeprel,
    DeleteNode,      // children reattach to the deleted node's head
    DeleteSubtree,   // node and all descendants removed (repetitions)
    MergeIntoHead,   // bound child folds into the target, lemmas joined
    MergeIntoDependent  // target folds into the bound child, which takes its place
  };
  Kind kind;
  std::string argument;  // new label, or merge separator ("" keeps the survivor's lemma)
};

struct RewriteRule {
  std::string name;
  int priority = 0;  // lower fires first; file order breaks ties
  TreePattern pattern;
  std::vector<RewriteAction> actions;
  bool lexicalized = false;  // any lemma constraint present
};

struct RewriteRuleSet {
  std::vector<RewriteRule> rules;  // sorted by priority, stable
  int passes = 1;
};

struct MatchBindings {
  int target = 0;
  // one entry per required (non-forbidden) child requirement, in pattern order
  std::vector<int> children;
  std::optional<int> parent;
};

std::optional<MatchBindings> match(const TreePattern& pattern, const DepTree& tree,
                                   int node_id);

class RuleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApplyStats {
  int rules_fired = 0;
  int max_fired_per_node_per_pass = 0;
};

// Breadth-first from the root, siblings in surface order; at each node the
// highest-priority matching rule (and only it) fires.  Token ids are
// renumbered contiguously after every pass.  Throws RuleError when an
// action would orphan the root.
DepTree apply_rules(const RewriteRuleSet& rules, const DepTree& tree,
                    ApplyStats* stats = nullptr);

// Line format: `priority | name | pattern | actions`, '#' comments, and an
// optional `passes = N` header.  Pattern syntax:
//   (match [pass=N] [upos=A|B] [!upos=A|B] [lemma=a|b] [deprel=X|Y] [!deprel=X|Y]
//          (child deprel=X [upos=..] [lemma=..] [adjacent])
//          (no-child deprel=X [upos=..])
//          (parent [deprel=X] [upos=..]))
// Actions: set_upos(TAG); set_deprel(LABEL); delete_node; delete_subtree;
//          merge_into_head(SEP); merge_into_dependent(SEP)
RewriteRuleSet parse_rewrite_rules(const std::string& text);

}  // namespace ud2lf
