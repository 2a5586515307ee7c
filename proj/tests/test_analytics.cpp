#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ols_oracle.hpp"
#include "ud2lf/analytics.hpp"
#include "ud2lf/defaults.hpp"

using namespace ud2lf;

static std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static DepTree mini_tree(const std::string& id, const std::vector<std::string>& deprels) {
  DepTree t;
  t.sentence_id = id;
  for (size_t i = 0; i < deprels.size(); ++i) {
    Token tok;
    tok.id = static_cast<int>(i) + 1;
    tok.form = "w" + std::to_string(i + 1);
    tok.lemma = tok.form;
    tok.upos = deprels[i] == "root" ? "VERB" : "NOUN";
    tok.head = deprels[i] == "root" ? 0 : 1;
    tok.deprel = deprels[i];
    t.tokens.push_back(tok);
  }
  return t;
}

TEST_CASE("label_counts: arithmetic examples and empty corpus") {
  std::vector<DepTree> trees = {mini_tree("a", {"root", "dobj", "nsubj"}),
                                mini_tree("b", {"root", "dobj", "advmod"})};
  LabelStats s = label_counts(trees);
  CHECK(s.counts.at("dobj") == 2);
  CHECK(s.total_tokens == 6);
  CHECK(s.per_token("dobj") == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
  CHECK(s.total_sentences == 2);
  CHECK(s.mean_tokens_per_sentence() == 3.0);
  CHECK(s.presence_proportion("dobj") == 1.0);
  CHECK(s.presence_proportion("advmod") == 0.5);

  LabelStats empty = label_counts(std::vector<DepTree>{});
  CHECK(empty.total_tokens == 0);
  CHECK(empty.total_sentences == 0);
  CHECK(empty.counts.empty());
}

TEST_CASE("label_counts: golden corpus matches a brute-force recount") {
  ParseResult r = parse_conllu(slurp(std::string(TEST_DATA_DIR) + "/golden.conllu"));
  LabelStats s = label_counts(r.trees);

  // independent linear scan
  std::map<std::string, long> recount;
  long tokens = 0;
  for (const auto& t : r.trees)
    for (const auto& tok : t.tokens) {
      recount[tok.deprel] += 1;
      tokens += 1;
    }
  CHECK(s.total_tokens == tokens);
  CHECK(s.counts == recount);
  long sum = 0;
  for (const auto& [l, c] : s.counts) sum += c;
  CHECK(sum == s.total_tokens);  // counts partition the edges
}

TEST_CASE("conversion_rates: attribution, totals, consistency errors") {
  std::vector<DepTree> trees = {mini_tree("ok", {"root", "dobj"}),
                                mini_tree("bad", {"root", "dobj"})};
  LabelStats s = label_counts(trees);
  std::vector<ConversionOutcome> outcomes(2);
  outcomes[0].sentence_id = "ok";
  outcomes[0].lf = mk_const("x", SemType::individual());
  outcomes[1].sentence_id = "bad";
  outcomes[1].failure = FailureReason::NoRuleForEdge;

  auto rates = conversion_rates(s, outcomes);
  CHECK(rates.at("dobj").occurrences == 2);
  CHECK(rates.at("dobj").converted == 1);
  CHECK(rates.at("dobj").rate() == 0.5);

  // all converted -> 100% everywhere
  outcomes[1].lf = outcomes[0].lf;
  outcomes[1].failure.reset();
  for (const auto& [label, lc] : conversion_rates(s, outcomes))
    CHECK(lc.rate() == 1.0);

  // missing outcome -> consistency error
  outcomes.pop_back();
  CHECK_THROWS_AS(conversion_rates(s, outcomes), AnalyticsError);
}

TEST_CASE("conversion_rates: count-weighted mean reproduces the overall rate") {
  // equal-length sentences, each with >= 1 edge: token-weighted label rates
  // aggregate exactly to the sentence conversion rate
  std::vector<DepTree> trees;
  std::vector<ConversionOutcome> outcomes;
  for (int i = 0; i < 10; ++i) {
    std::string id = "s" + std::to_string(i);
    trees.push_back(mini_tree(id, {"root", i % 2 ? "dobj" : "nsubj", "advmod"}));
    ConversionOutcome o;
    o.sentence_id = id;
    if (i < 7)
      o.lf = mk_const("x", SemType::individual());
    else
      o.failure = FailureReason::TypingFailure;
    outcomes.push_back(o);
  }
  LabelStats s = label_counts(trees);
  auto rates = conversion_rates(s, outcomes);
  double weighted = 0;
  long total = 0;
  for (const auto& [label, lc] : rates) {
    weighted += static_cast<double>(lc.converted);
    total += lc.occurrences;
  }
  CHECK(weighted / total == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("attachment_agreement: identity, single flip, symmetry") {
  ParseResult r = parse_conllu(slurp(std::string(TEST_DATA_DIR) + "/golden.conllu"));
  AgreementReport self = attachment_agreement(r.trees, r.trees);
  CHECK(self.las() == 1.0);
  CHECK(self.uas() == 1.0);
  CHECK(self.sentences_compared == 50);

  // 4-token pair differing in one deprel only
  DepTree a = mini_tree("p", {"root", "dobj", "nsubj", "advmod"});
  DepTree b = a;
  b.tokens[1].deprel = "iobj";
  AgreementReport flip = attachment_agreement({a}, {b});
  CHECK(flip.tokens_compared == 4);
  CHECK(flip.las() == 0.75);
  CHECK(flip.uas() == 1.0);
  CHECK(flip.confusion.at({"dobj", "iobj"}) == 1);

  AgreementReport forward = attachment_agreement(r.trees, {r.trees[0]});
  AgreementReport backward = attachment_agreement({r.trees[0]}, r.trees);
  CHECK(forward.las() == backward.las());
  CHECK(forward.uas() == backward.uas());
  CHECK(forward.las() <= forward.uas());
}

TEST_CASE("attachment_agreement: tokenization mismatch skips, none comparable errors") {
  DepTree a = mini_tree("p", {"root", "dobj"});
  DepTree b = a;
  b.tokens[1].form = "different";
  AgreementReport rep = attachment_agreement({a, mini_tree("q", {"root"})},
                                             {b, mini_tree("q", {"root"})});
  CHECK(rep.sentences_skipped == 1);
  CHECK(rep.sentences_compared == 1);
  CHECK(!rep.warnings.empty());

  CHECK_THROWS_AS(attachment_agreement({a}, {b}), AnalyticsError);
}

TEST_CASE("attachment_agreement: punctuation exclusion flag") {
  DepTree a = mini_tree("p", {"root", "dobj", "punct"});
  a.tokens[2].upos = "PUNCT";
  DepTree b = a;
  b.tokens[2].head = 2;  // disagree on the punctuation head only
  AgreementReport incl = attachment_agreement({a}, {b});
  CHECK(incl.tokens_compared == 3);
  CHECK(incl.uas() == doctest::Approx(2.0 / 3.0));
  AgreementReport excl = attachment_agreement({a}, {b}, true);
  CHECK(excl.tokens_compared == 2);
  CHECK(excl.uas() == 1.0);
}

TEST_CASE("attachment_agreement: k-of-n head perturbation oracle") {
  ParseResult r = parse_conllu(slurp(std::string(TEST_DATA_DIR) + "/golden.conllu"));
  std::vector<DepTree> perturbed = r.trees;
  std::mt19937 rng(99);
  long n = 0;
  for (const auto& t : r.trees) n += t.tokens.size();
  long k = 0;
  for (auto& t : perturbed) {
    for (auto& tok : t.tokens) {
      if (t.tokens.size() < 2) continue;
      if (std::uniform_int_distribution<int>(0, 3)(rng) != 0) continue;
      // move the head to a different valid value (never its own id)
      int new_head = tok.head;
      while (new_head == tok.head || new_head == tok.id)
        new_head = std::uniform_int_distribution<int>(0, (int)t.tokens.size())(rng);
      tok.head = new_head;
      ++k;
    }
  }
  AgreementReport rep = attachment_agreement(r.trees, perturbed);
  CHECK(rep.tokens_compared == n);
  CHECK(rep.uas() == doctest::Approx((double)(n - k) / n).epsilon(1e-12));
}

static std::vector<Session> synthetic_sessions(const std::vector<double>& ages,
                                               const std::vector<double>& props) {
  // each session holds 10 single-edge sentences; props[i]*10 of them contain
  // a dobj edge
  std::vector<Session> sessions;
  for (size_t i = 0; i < ages.size(); ++i) {
    Session s;
    s.session_id = "sess" + std::to_string(i);
    s.child_age_months = ages[i];
    int with = static_cast<int>(std::lround(props[i] * 10));
    for (int j = 0; j < 10; ++j) {
      DepTree t = j < with ? mini_tree("t" + std::to_string(i) + "_" + std::to_string(j),
                                       {"root", "dobj"})
                           : mini_tree("t" + std::to_string(i) + "_" + std::to_string(j),
                                       {"root", "nsubj"});
      s.trees.push_back(t);
    }
    sessions.push_back(s);
  }
  return sessions;
}

TEST_CASE("longitudinal_trends: exact line, constant series, insufficient data") {
  auto sessions = synthetic_sessions({20, 21, 22}, {0.1, 0.2, 0.3});
  TrendReport rep = longitudinal_trends(sessions);
  const TrendLine* dobj = nullptr;
  const TrendLine* root = nullptr;
  for (const auto& l : rep.lines) {
    if (l.label == "dobj") dobj = &l;
    if (l.label == "root") root = &l;
  }
  REQUIRE(dobj);
  REQUIRE(root);
  CHECK(dobj->slope == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dobj->p_value < 1e-6);
  CHECK(dobj->significant);
  CHECK(dobj->points.size() == 3);
  CHECK(dobj->points[0].proportion == doctest::Approx(0.1));

  // every sentence has a root: constant series, flat, not significant
  CHECK(root->slope == 0.0);
  CHECK(!root->significant);
  CHECK(root->p_value == 1.0);

  TrendReport two = longitudinal_trends(synthetic_sessions({20, 21}, {0.1, 0.2}));
  for (const auto& l : two.lines) CHECK(l.insufficient_data);
  TrendReport flat_age = longitudinal_trends(synthetic_sessions({20, 20, 20}, {0.1, 0.2, 0.3}));
  for (const auto& l : flat_age.lines) CHECK(l.insufficient_data);
}

TEST_CASE("longitudinal_trends: smoothing is a 5-session centered average") {
  auto sessions = synthetic_sessions({10, 11, 12, 13, 14, 15, 16},
                                     {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  TrendReport rep = longitudinal_trends(sessions);
  const TrendLine* dobj = nullptr;
  for (const auto& l : rep.lines)
    if (l.label == "dobj") dobj = &l;
  REQUIRE(dobj);
  REQUIRE(dobj->points.size() == 7);
  // interior point: full window
  CHECK(dobj->points[3].smoothed ==
        doctest::Approx((0.1 + 0.2 + 0.3 + 0.4 + 0.5) / 5).epsilon(1e-12));
  // edge point: clipped window
  CHECK(dobj->points[0].smoothed == doctest::Approx((0.0 + 0.1 + 0.2) / 3).epsilon(1e-12));
}

TEST_CASE("trend invariance under age shift and proportion scaling") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(18 + i);
    y.push_back(0.2 + 0.01 * i + noise(rng));
  }
  OlsFit base = ols_fit(x, y);

  std::vector<double> shifted = x;
  for (auto& v : shifted) v += 7.0;
  OlsFit shift = ols_fit(shifted, y);
  CHECK(shift.slope == doctest::Approx(base.slope).epsilon(1e-9));
  CHECK(shift.p_value == doctest::Approx(base.p_value).epsilon(1e-9));

  std::vector<double> scaled = y;
  for (auto& v : scaled) v *= 3.0;
  OlsFit scale = ols_fit(x, scaled);
  CHECK(scale.slope == doctest::Approx(3.0 * base.slope).epsilon(1e-9));
  CHECK(scale.t_stat == doctest::Approx(base.t_stat).epsilon(1e-9));
}

TEST_CASE("ols_fit matches the independent closed-form oracle on 200 series") {
  std::mt19937 rng(20252025);
  std::uniform_real_distribution<double> slope_d(-0.05, 0.05);
  std::uniform_real_distribution<double> noise(-0.1, 0.1);
  std::uniform_int_distribution<int> len(5, 40);
  for (int series = 0; series < 200; ++series) {
    int n = len(rng);
    double m = slope_d(rng), b = 0.3;
    std::vector<double> x, y;
    for (int i = 0; i < n; ++i) {
      x.push_back(12 + i);
      y.push_back(b + m * i + noise(rng));
    }
    OlsFit got = ols_fit(x, y);
    olsoracle::Fit want = olsoracle::fit(x, y);
    CHECK(got.slope == doctest::Approx(want.slope).epsilon(1e-9));
    CHECK(got.t_stat == doctest::Approx(want.t_stat).epsilon(1e-9));
    CHECK(std::fabs(got.p_value - want.p_value) < 1e-9);
    CHECK((got.p_value < 0.01) == (want.p_value < 0.01));
  }
}

TEST_CASE("compare_corpora: examples and threshold-zero partition") {
  std::vector<DepTree> a_trees = {mini_tree("a", {"root", "dobj", "nsubj"})};
  LabelStats a = label_counts(a_trees);
  CHECK(compare_corpora(a, a).empty());  // identical stats

  // 0.010 vs 0.004 with default threshold -> included, higher in a
  LabelStats fa, fb;
  fa.total_tokens = 1000;
  fa.counts["dobj"] = 10;  // 0.010
  fb.total_tokens = 1000;
  fb.counts["dobj"] = 4;  // 0.004
  auto diff = compare_corpora(fa, fb);
  REQUIRE(diff.size() == 1);
  CHECK(diff[0].label == "dobj");
  CHECK(diff[0].higher_in == "a");
  CHECK(diff[0].difference == doctest::Approx(0.006).epsilon(1e-12));

  // threshold 0: exact partition into higher-a / higher-b / equal
  std::vector<DepTree> b_trees = {mini_tree("b", {"root", "dobj", "dobj", "advmod"})};
  LabelStats sb = label_counts(b_trees);
  auto all = compare_corpora(a, sb, 0.0);
  std::set<std::string> listed;
  for (const auto& d : all) {
    listed.insert(d.label);
    CHECK(d.difference != 0.0);
    CHECK(d.higher_in == (d.difference > 0 ? "a" : "b"));
  }
  std::set<std::string> every = {"root", "dobj", "nsubj", "advmod"};
  for (const auto& label : every) {
    bool equal = a.per_token(label) == sb.per_token(label);
    CHECK(listed.count(label) == (equal ? 0u : 1u));
  }
  // sorted by signed difference, descending
  for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].difference >= all[i].difference);
}
