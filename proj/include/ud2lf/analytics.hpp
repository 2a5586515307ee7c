// Corpus-level statistics: dependency label counts and frequencies,
// per-label conversion rates, pairwise attachment agreement (LAS/UAS),
// longitudinal trend regression, and cross-corpus frequency comparison.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ud2lf/transduce.hpp"
#include "ud2lf/treebank.hpp"

namespace ud2lf {

struct AnalyticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LabelStats {
  std::map<std::string, long> counts;  // per deprel, subtypes kept distinct
  long total_tokens = 0;
  long total_sentences = 0;
  // deprel -> number of sentences containing it at least once
  std::map<std::string, long> sentence_presence;
  // sentence_id -> deprel -> count within that sentence (conversion-rate input)
  std::map<std::string, std::map<std::string, long>> per_sentence;

  double per_token(const std::string& label) const;
  double presence_proportion(const std::string& label) const;
  double mean_tokens_per_sentence() const;
};

LabelStats label_counts(const std::vector<Session>& sessions);
LabelStats label_counts(const std::vector<DepTree>& trees);

struct LabelConversion {
  long occurrences = 0;
  long converted = 0;  // occurrences in successfully converted sentences
  double rate() const {
    return occurrences ? static_cast<double>(converted) / occurrences : 0.0;
  }
};

// An occurrence of a label counts as not converted when its sentence failed.
// Throws AnalyticsError when outcomes do not cover the sentences in stats.
std::map<std::string, LabelConversion> conversion_rates(
    const LabelStats& stats, const std::vector<ConversionOutcome>& outcomes);

struct AgreementReport {
  long tokens_compared = 0;
  long head_matches = 0;
  long labeled_matches = 0;
  long sentences_compared = 0;
  long sentences_skipped = 0;  // tokenization mismatches
  // (label in a, label in b) -> token count, over tokens with matching heads
  std::map<std::pair<std::string, std::string>, long> confusion;
  std::vector<std::string> warnings;

  double las() const {
    return tokens_compared ? static_cast<double>(labeled_matches) / tokens_compared : 0.0;
  }
  double uas() const {
    return tokens_compared ? static_cast<double>(head_matches) / tokens_compared : 0.0;
  }
};

// Pairs sentences by sentence_id; sentences with differing token forms are
// skipped with a warning.  Throws AnalyticsError if nothing is comparable.
AgreementReport attachment_agreement(const std::vector<DepTree>& a,
                                     const std::vector<DepTree>& b,
                                     bool exclude_punct = false);

struct TrendPoint {
  double age_months = 0;
  double proportion = 0.0;  // sentences containing the label / sentences
  double smoothed = 0.0;    // 5-session centered moving average
};

struct TrendLine {
  std::string label;
  double slope = 0.0;      // proportion change per month
  double intercept = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p < 0.01
  bool insufficient_data = false;
  std::vector<TrendPoint> points;  // per session, in age order
};

struct TrendReport {
  std::vector<TrendLine> lines;  // sorted by label
  int smoothing_window = 5;
  bool multiple_comparison_correction = false;  // raw p-values, as reported
};

// OLS of per-session presence proportion on age; two-sided t-test on the
// slope with n-2 degrees of freedom.  Labels are marked insufficient_data
// when there are fewer than 3 sessions or no age variance.
TrendReport longitudinal_trends(const std::vector<Session>& sessions);

// Plain OLS on (x, y) pairs; exposed for the regression fixtures.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};
OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

struct CorpusDiff {
  std::string label;
  double freq_a = 0.0;  // per-token frequency in corpus a
  double freq_b = 0.0;
  double difference = 0.0;    // freq_a - freq_b
  std::string higher_in;      // "a" or "b"
};

// Labels whose per-token frequency differs by more than threshold,
// sorted by signed difference (most a-heavy first).
std::vector<CorpusDiff> compare_corpora(const LabelStats& a, const LabelStats& b,
                                        double threshold = 0.005);

}  // namespace ud2lf
