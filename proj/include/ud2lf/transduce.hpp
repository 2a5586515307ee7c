// The end-to-end dependency-tree -> logical-form converter: LF templates
// keyed by node/edge selectors, binarization by dependency priority,
// stepwise composition, and corpus-level conversion.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ud2lf/lambda.hpp"
#include "ud2lf/pattern.hpp"
#include "ud2lf/treebank.hpp"

namespace ud2lf {

struct LfSelector {
  // node rules: upos / deprel / parent_upos; edge rules: deprel / head
  // (upos) / dep (upos) / head_deprel (the head's incoming label).
  // Entries may use the '*' suffix glob; empty set = unconstrained.
  std::set<std::string> upos;
  std::set<std::string> deprel;
  std::set<std::string> parent_upos;
  std::set<std::string> head_upos;
  std::set<std::string> dep_upos;
  std::set<std::string> head_deprel;
};

struct LfAssignmentRule {
  enum class Kind { Node, Edge, Close };
  enum class Template {
    Term,        // explicit lambda template with @lemma/@e/@edep/@ex slots
    Apply,       // h(d)
    RApply,      // d(h)
    ApplyUnder1, // \o. h(o)(d)
    Ignore,      // h
    Replace,     // d
    WhVar        // node LF is a free question variable of the given type
  };
  std::string name;
  int priority = 0;
  Kind kind = Kind::Node;
  LfSelector selector;
  Template tmpl = Template::Term;
  TermPtr term;              // for Template::Term (slots as @-constants)
  std::optional<SemType> whvar_type;
};

struct LfRuleSet {
  std::vector<LfAssignmentRule> rules;  // sorted by priority, stable
};

// Line format: `kind | priority | name | selector | template` where kind is
// node/edge/close, selector is space-separated key=a|b pairs, and template
// is `term <lambda text>`, a builtin name, or `whvar <type>`.
LfRuleSet parse_lf_rules(const std::string& text);

struct PriorityList {
  std::vector<std::string> labels;  // composition order within a head

  // listed labels rank by position; unlisted sort last, alphabetically
  std::pair<int, std::string> rank(const std::string& deprel) const;
};

// One label per line, '#' comments.
PriorityList parse_priorities(const std::string& text);

struct Step {
  enum class Kind { Edge, Close, Finalize };
  Kind kind = Kind::Edge;
  int head = 0;
  int dep = 0;            // Edge only
  std::string deprel;     // Edge only
};

// Post-order plan: every edge exactly once; a node's dependents compose in
// priority order (auxiliary-like labels right-to-left among themselves).
std::vector<Step> binarize(const DepTree& tree, const PriorityList& priorities);

struct DerivationStep {
  Step step;
  TermPtr edge_lf;   // the term applied at this step (edge/close/finalize)
  TermPtr result;    // reduced value after the step
  std::string rule;  // assignment rule name
};

struct Derivation {
  DepTree transformed;
  std::map<int, TermPtr> node_lfs;
  std::map<int, std::string> node_rules;
  std::map<int, std::string> node_events;  // minted clause event variables
  std::map<int, std::string> edge_rules;   // keyed by dependent token id
  std::vector<int> wh_nodes;               // nodes assigned a question variable
  std::vector<DerivationStep> steps;
  TermPtr final_lf;
};

enum class FailureReason {
  InvalidTree,
  NoRuleForNode,
  NoRuleForEdge,
  TypingFailure,
  UnsupportedConstruction,
  ResidualXDep,
};

std::string failure_code(FailureReason reason);

struct ConversionOutcome {
  std::string sentence_id;
  TermPtr lf;  // null on failure
  std::string lf_text;
  std::optional<FailureReason> failure;
  std::vector<int> offending_tokens;
  std::string detail;
  bool ok() const { return lf != nullptr; }
};

struct ConvertConfig {
  std::set<std::string> wh_lexicon;  // informational; the lexicalized rules live
                                     // in the rewrite rule set
  int max_steps = kDefaultMaxSteps;
};

// Duplicates core arguments (nsubj/dobj/iobj) across verb-verb conj edges
// in both directions, so each conjunct carries a full argument frame.
DepTree share_arguments(const DepTree& tree);

// Assigns node LFs and resolves edge rules on an already-transformed tree.
// Fills transformed/node_lfs/node_rules/node_events; throws nothing —
// problems are reported through the returned outcome of convert().
struct AssignResult {
  Derivation derivation;
  std::optional<FailureReason> failure;
  std::vector<int> offending_tokens;
  std::string detail;
};
AssignResult assign_lfs(const DepTree& tree, const LfRuleSet& rules);

ConversionOutcome convert(const DepTree& tree, const RewriteRuleSet& rewrite_rules,
                          const LfRuleSet& lf_rules, const PriorityList& priorities,
                          const ConvertConfig& config = {},
                          Derivation* derivation_out = nullptr);

struct CorpusSummary {
  int total = 0;
  int converted = 0;
  bool has_rate() const { return total > 0; }
  double rate() const { return total ? static_cast<double>(converted) / total : 0; }
};

struct CorpusResult {
  std::vector<ConversionOutcome> outcomes;  // input order
  CorpusSummary summary;
};

CorpusResult convert_corpus(const std::vector<Session>& sessions,
                            const RewriteRuleSet& rewrite_rules,
                            const LfRuleSet& lf_rules, const PriorityList& priorities,
                            const ConvertConfig& config = {}, int jobs = 1);

}  // namespace ud2lf
