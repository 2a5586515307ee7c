#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ud2lf/defaults.hpp"
#include "ud2lf/pattern.hpp"

using namespace ud2lf;

static std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static DepTree tree_of(const std::string& conllu) {
  ParseResult r = parse_conllu(conllu);
  REQUIRE(r.trees.size() == 1);
  return r.trees[0];
}

// the transitive-imperative pattern: VERB with a dobj child but neither
// nsubj nor iobj
static TreePattern verb_do_pattern() {
  RewriteRuleSet rs = parse_rewrite_rules(
      "1 | v-do | (match upos=VERB (child deprel=dobj) (no-child deprel=nsubj) "
      "(no-child deprel=iobj)) | set_upos(VERB-DO)\n");
  REQUIRE(rs.rules.size() == 1);
  return rs.rules[0].pattern;
}

TEST_CASE("match: required child, forbidden child, parent requirement") {
  TreePattern p = verb_do_pattern();

  DepTree imperative = tree_of(
      "1\tDrink\tdrink\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tjuice\tjuice\tNOUN\t_\t_\t1\tdobj\t_\t_\n");
  auto m = match(p, imperative, 1);
  REQUIRE(m.has_value());
  CHECK(m->target == 1);
  REQUIRE(m->children.size() == 1);
  CHECK(m->children[0] == 2);

  DepTree with_subject = tree_of(
      "1\tYou\tyou\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tdrink\tdrink\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tjuice\tjuice\tNOUN\t_\t_\t2\tdobj\t_\t_\n");
  CHECK(!match(p, with_subject, 2).has_value());

  RewriteRuleSet parent_rule = parse_rewrite_rules(
      "1 | under-conj | (match upos=VERB (parent deprel=conj)) | set_upos(VERB-X)\n");
  // parent requirement can never hold at the root
  CHECK(!match(parent_rule.rules[0].pattern, imperative, 1).has_value());
}

TEST_CASE("apply_rules: full transformation of the running example") {
  DepTree t = tree_of(
      "1\tPick\tpick\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tup\tup\tPART\t_\t_\t1\tcompound:prt\t_\t_\n"
      "3\tthat\tthat\tDET\t_\t_\t5\tdet\t_\t_\n"
      "4\tblue\tblue\tADJ\t_\t_\t5\tamod\t_\t_\n"
      "5\tpencil\tpencil\tNOUN\t_\t_\t1\tdobj\t_\t_\n"
      "6\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_\n");
  RewriteRuleSet rules = parse_rewrite_rules(defaults::rewrite_rules_text("en"));
  DepTree out = apply_rules(rules, t);

  REQUIRE(out.tokens.size() == 4);  // punctuation and particle gone
  CHECK(out.tokens[0].lemma == "pick_up");  // particle merged into the verb
  CHECK(out.tokens[0].upos == "VERB-DO");   // subcategorized
  CHECK(out.tokens[3].form == "pencil");
  CHECK(out.tokens[3].head == 1);
  CHECK(validate_tree(out).ok());
}

TEST_CASE("apply_rules: empty rule set is the identity") {
  DepTree t = tree_of(
      "1\tYou\tyou\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tfound\tfound\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tit\tit\tPRON\t_\t_\t2\tdobj\t_\t_\n");
  RewriteRuleSet empty;
  CHECK(serialize_conllu(apply_rules(empty, t)) == serialize_conllu(t));

  RewriteRuleSet no_match = parse_rewrite_rules(
      "1 | never | (match upos=SYM) | set_upos(X)\n");
  CHECK(serialize_conllu(apply_rules(no_match, t)) == serialize_conllu(t));
}

TEST_CASE("apply_rules: priority picks exactly one rule per node") {
  // two rules match the same single node; hand-simulated oracle: the rule
  // with the lower priority number rewrites the tag, the other never fires
  DepTree t = tree_of("1\trun\trun\tVERB\t_\t_\t0\troot\t_\t_\n");
  RewriteRuleSet rules = parse_rewrite_rules(
      "20 | second | (match upos=VERB*) | set_upos(LOSER)\n"
      "10 | first | (match upos=VERB) | set_upos(WINNER)\n");
  ApplyStats stats;
  DepTree out = apply_rules(rules, t, &stats);
  CHECK(out.tokens[0].upos == "WINNER");
  CHECK(stats.rules_fired == 1);
  CHECK(stats.max_fired_per_node_per_pass == 1);

  // tie broken by file order
  RewriteRuleSet tied = parse_rewrite_rules(
      "10 | a | (match upos=VERB) | set_upos(FIRST-IN-FILE)\n"
      "10 | b | (match upos=VERB) | set_upos(SECOND-IN-FILE)\n");
  CHECK(apply_rules(tied, t).tokens[0].upos == "FIRST-IN-FILE");
}

TEST_CASE("apply_rules: at most one rule per node per pass on the golden corpus") {
  RewriteRuleSet rules = parse_rewrite_rules(defaults::rewrite_rules_text("en"));
  ParseResult r = parse_conllu(slurp(std::string(TEST_DATA_DIR) + "/golden.conllu"));
  for (const auto& t : r.trees) {
    ApplyStats stats;
    DepTree out = apply_rules(rules, t, &stats);
    CHECK(stats.max_fired_per_node_per_pass <= 1);
    // output validity
    ValidationReport rep = validate_tree(out);
    for (const auto& v : rep.violations) CAPTURE(v);
    CHECK(rep.ok());
    // determinism
    CHECK(serialize_conllu(apply_rules(rules, t)) == serialize_conllu(out));
  }
}

TEST_CASE("delete_node reattaches children; orphaning the root errors") {
  RewriteRuleSet del = parse_rewrite_rules(
      "1 | drop-mid | (match deprel=mid) | delete_node\n");
  DepTree chain = tree_of(
      "1\ttop\ttop\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "2\tmid\tmid\tNOUN\t_\t_\t1\tmid\t_\t_\n"
      "3\tleaf\tleaf\tNOUN\t_\t_\t2\tdep\t_\t_\n");
  DepTree out = apply_rules(del, chain);
  REQUIRE(out.tokens.size() == 2);
  CHECK(out.tokens[1].form == "leaf");
  CHECK(out.tokens[1].head == 1);  // reattached to the deleted node's head

  RewriteRuleSet kill_root = parse_rewrite_rules(
      "1 | drop-root | (match deprel=root) | delete_node\n");
  DepTree two_kids = tree_of(
      "1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
      "2\troot\troot\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "3\tb\tb\tNOUN\t_\t_\t2\tdep\t_\t_\n");
  CHECK_THROWS_AS(apply_rules(kill_root, two_kids), RuleError);
}

TEST_CASE("delete_subtree removes the node and its descendants") {
  RewriteRuleSet del = parse_rewrite_rules(
      "1 | drop-rep | (match deprel=parataxis:repeat) | delete_subtree\n");
  DepTree t = tree_of(
      "1\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tgo\tgo\tVERB\t_\t_\t1\tparataxis:repeat\t_\t_\n"
      "3\tnow\tnow\tADV\t_\t_\t2\tadvmod\t_\t_\n");
  DepTree out = apply_rules(del, t);
  REQUIRE(out.tokens.size() == 1);
  CHECK(out.tokens[0].form == "go");
}

TEST_CASE("merge actions join lemma and morph atoms with underscores") {
  RewriteRuleSet prt = parse_rewrite_rules(
      "1 | prt | (match upos=VERB (child deprel=compound:prt adjacent)) | "
      "merge_into_head(_)\n");
  DepTree t = tree_of(
      "1\tcame\tcame\tVERB\t_\tv|came\t0\troot\t_\t_\n"
      "2\toff\toff\tPART\t_\tprt|off\t1\tcompound:prt\t_\t_\n");
  DepTree out = apply_rules(prt, t);
  REQUIRE(out.tokens.size() == 1);
  CHECK(out.tokens[0].lemma == "came_off");
  CHECK(out.tokens[0].morph == "v|came_prt|off");

  // non-adjacent particle is left alone by the adjacency-guarded rule
  DepTree gap = tree_of(
      "1\tpicks\tpicks\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tit\tit\tPRON\t_\t_\t1\tdobj\t_\t_\n"
      "3\tup\tup\tPART\t_\t_\t1\tcompound:prt\t_\t_\n");
  CHECK(apply_rules(prt, gap).tokens.size() == 3);
}

TEST_CASE("merge_into_dependent: serial verb reduces to the second verb") {
  RewriteRuleSet svc = parse_rewrite_rules(
      "1 | svc | (match upos=VERB (child deprel=compound:svc upos=VERB)) | "
      "merge_into_dependent()\n");
  DepTree t = tree_of(
      "1\tGo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tget\tget\tVERB\t_\t_\t1\tcompound:svc\t_\t_\n"
      "3\tpennies\tpennies\tNOUN\t_\t_\t1\tdobj\t_\t_\n");
  DepTree out = apply_rules(svc, t);
  REQUIRE(out.tokens.size() == 2);
  CHECK(out.tokens[0].lemma == "get");  // empty separator keeps the survivor's lemma
  CHECK(out.tokens[0].head == 0);
  CHECK(out.tokens[1].deprel == "dobj");
  CHECK(out.tokens[1].head == 1);  // the first verb's arguments move over
}

TEST_CASE("rule file parsing: passes header, comments, errors") {
  RewriteRuleSet rs = parse_rewrite_rules(
      "# comment\n"
      "passes = 2\n"
      "\n"
      "5 | one | (match pass=1 upos=PUNCT) | delete_node\n"
      "4 | two | (match pass=2 upos=VERB) | set_upos(VERB-S)\n");
  CHECK(rs.passes == 2);
  REQUIRE(rs.rules.size() == 2);
  CHECK(rs.rules[0].name == "two");  // sorted by priority
  CHECK(rs.rules[0].pattern.pass == 2);
  CHECK(!rs.rules[0].lexicalized);

  RewriteRuleSet lex = parse_rewrite_rules(
      "1 | wh | (match upos=PRON lemma=what|who) | set_upos(PRON-WH)\n");
  CHECK(lex.rules[0].lexicalized);

  CHECK_THROWS(parse_rewrite_rules("1 | dup | (match upos=X) | delete_node\n"
                                   "2 | dup | (match upos=X) | delete_node\n"));
  CHECK_THROWS(parse_rewrite_rules("1 | broken | (match | delete_node\n"));
  CHECK_THROWS(parse_rewrite_rules("1 | noact | (match upos=X) | explode\n"));
}
