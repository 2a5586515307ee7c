#include "ud2lf/analytics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace ud2lf {

double LabelStats::per_token(const std::string& label) const {
  auto it = counts.find(label);
  if (it == counts.end() || total_tokens == 0) return 0.0;
  return static_cast<double>(it->second) / total_tokens;
}

double LabelStats::presence_proportion(const std::string& label) const {
  auto it = sentence_presence.find(label);
  if (it == sentence_presence.end() || total_sentences == 0) return 0.0;
  return static_cast<double>(it->second) / total_sentences;
}

double LabelStats::mean_tokens_per_sentence() const {
  return total_sentences ? static_cast<double>(total_tokens) / total_sentences : 0.0;
}

LabelStats label_counts(const std::vector<DepTree>& trees) {
  LabelStats stats;
  for (const auto& tree : trees) {
    stats.total_sentences += 1;
    auto& per_sent = stats.per_sentence[tree.sentence_id];
    std::set<std::string> seen;
    for (const auto& tok : tree.tokens) {
      stats.total_tokens += 1;
      stats.counts[tok.deprel] += 1;
      per_sent[tok.deprel] += 1;
      if (seen.insert(tok.deprel).second) stats.sentence_presence[tok.deprel] += 1;
    }
  }
  return stats;
}

LabelStats label_counts(const std::vector<Session>& sessions) {
  std::vector<DepTree> trees;
  for (const auto& s : sessions) trees.insert(trees.end(), s.trees.begin(), s.trees.end());
  return label_counts(trees);
}

std::map<std::string, LabelConversion> conversion_rates(
    const LabelStats& stats, const std::vector<ConversionOutcome>& outcomes) {
  std::map<std::string, bool> converted_by_id;
  for (const auto& o : outcomes) {
    if (!converted_by_id.emplace(o.sentence_id, o.ok()).second)
      throw AnalyticsError("duplicate outcome for sentence '" + o.sentence_id + "'");
  }
  std::map<std::string, LabelConversion> rates;
  for (const auto& [sid, labels] : stats.per_sentence) {
    auto it = converted_by_id.find(sid);
    if (it == converted_by_id.end())
      throw AnalyticsError("no conversion outcome for sentence '" + sid + "'");
    for (const auto& [label, n] : labels) {
      auto& lc = rates[label];
      lc.occurrences += n;
      if (it->second) lc.converted += n;
    }
  }
  return rates;
}

AgreementReport attachment_agreement(const std::vector<DepTree>& a,
                                     const std::vector<DepTree>& b,
                                     bool exclude_punct) {
  std::map<std::string, const DepTree*> by_id;
  for (const auto& t : b) by_id[t.sentence_id] = &t;

  AgreementReport report;
  for (const auto& ta : a) {
    auto it = by_id.find(ta.sentence_id);
    if (it == by_id.end()) {
      report.sentences_skipped += 1;
      report.warnings.push_back("sentence '" + ta.sentence_id + "' missing from second treebank");
      continue;
    }
    const DepTree& tb = *it->second;
    bool same_tokens = ta.tokens.size() == tb.tokens.size();
    for (size_t i = 0; same_tokens && i < ta.tokens.size(); ++i)
      same_tokens = ta.tokens[i].form == tb.tokens[i].form;
    if (!same_tokens) {
      report.sentences_skipped += 1;
      report.warnings.push_back("sentence '" + ta.sentence_id + "' skipped: tokenization differs");
      continue;
    }
    report.sentences_compared += 1;
    for (size_t i = 0; i < ta.tokens.size(); ++i) {
      const Token& x = ta.tokens[i];
      const Token& y = tb.tokens[i];
      if (exclude_punct && (x.upos == "PUNCT" || y.upos == "PUNCT")) continue;
      report.tokens_compared += 1;
      if (x.head == y.head) {
        report.head_matches += 1;
        report.confusion[{x.deprel, y.deprel}] += 1;
        if (x.deprel == y.deprel) report.labeled_matches += 1;
      }
    }
  }
  if (report.sentences_compared == 0)
    throw AnalyticsError("no comparable sentences between the two treebanks");
  return report;
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  if (n != y.size() || n < 3) throw AnalyticsError("ols_fit needs >= 3 paired points");
  double xbar = 0, ybar = 0;
  for (size_t i = 0; i < n; ++i) { xbar += x[i]; ybar += y[i]; }
  xbar /= n; ybar /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0) throw AnalyticsError("ols_fit: zero variance in x");

  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ssr = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  double df = static_cast<double>(n - 2);
  double se2 = ssr / df / sxx;
  if (se2 <= 0) {
    // exact fit: infinitely confident unless the line is flat
    fit.t_stat = fit.slope == 0 ? 0.0 : (fit.slope > 0 ? INFINITY : -INFINITY);
    fit.p_value = fit.slope == 0 ? 1.0 : 0.0;
    return fit;
  }
  fit.t_stat = fit.slope / std::sqrt(se2);
  boost::math::students_t dist(df);
  fit.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(fit.t_stat)));
  return fit;
}

static void smooth_points(std::vector<TrendPoint>& points) {
  // 5-session centered moving average, window clipped at the edges
  int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - 2), hi = std::min(n - 1, i + 2);
    double sum = 0;
    for (int j = lo; j <= hi; ++j) sum += points[j].proportion;
    points[i].smoothed = sum / (hi - lo + 1);
  }
}

TrendReport longitudinal_trends(const std::vector<Session>& sessions) {
  std::set<std::string> labels;
  for (const auto& s : sessions)
    for (const auto& t : s.trees)
      for (const auto& tok : t.tokens) labels.insert(tok.deprel);

  std::set<double> ages;
  for (const auto& s : sessions)
    if (!s.trees.empty()) ages.insert(s.child_age_months);
  bool enough = sessions.size() >= 3 && ages.size() >= 2;

  TrendReport report;
  for (const auto& label : labels) {
    TrendLine line;
    line.label = label;
    std::vector<double> x, y;
    for (const auto& s : sessions) {
      if (s.trees.empty()) continue;
      long with = 0;
      for (const auto& t : s.trees) {
        for (const auto& tok : t.tokens)
          if (tok.deprel == label) { with += 1; break; }
      }
      TrendPoint pt;
      pt.age_months = s.child_age_months;
      pt.proportion = static_cast<double>(with) / s.trees.size();
      line.points.push_back(pt);
      x.push_back(pt.age_months);
      y.push_back(pt.proportion);
    }
    std::stable_sort(line.points.begin(), line.points.end(),
                     [](const TrendPoint& p, const TrendPoint& q) {
                       return p.age_months < q.age_months;
                     });
    smooth_points(line.points);
    if (!enough || x.size() < 3) {
      line.insufficient_data = true;
    } else {
      OlsFit fit = ols_fit(x, y);
      line.slope = fit.slope;
      line.intercept = fit.intercept;
      line.t_stat = fit.t_stat;
      line.p_value = fit.p_value;
      line.significant = fit.p_value < 0.01;
    }
    report.lines.push_back(std::move(line));
  }
  return report;
}

std::vector<CorpusDiff> compare_corpora(const LabelStats& a, const LabelStats& b,
                                        double threshold) {
  std::set<std::string> labels;
  for (const auto& [l, _] : a.counts) labels.insert(l);
  for (const auto& [l, _] : b.counts) labels.insert(l);

  std::vector<CorpusDiff> diffs;
  for (const auto& label : labels) {
    CorpusDiff d;
    d.label = label;
    d.freq_a = a.per_token(label);
    d.freq_b = b.per_token(label);
    d.difference = d.freq_a - d.freq_b;
    if (std::fabs(d.difference) <= threshold) continue;
    d.higher_in = d.difference > 0 ? "a" : "b";
    diffs.push_back(std::move(d));
  }
  std::stable_sort(diffs.begin(), diffs.end(), [](const CorpusDiff& p, const CorpusDiff& q) {
    return p.difference > q.difference;
  });
  return diffs;
}

}  // namespace ud2lf
