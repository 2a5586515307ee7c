// Command-line front end: convert trees to logical forms, compute corpus
// statistics, agreement scores, longitudinal trends, corpus comparisons,
// and dump single-sentence derivations.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ud2lf/analytics.hpp"
#include "ud2lf/defaults.hpp"
#include "ud2lf/transduce.hpp"

using nlohmann::json;
using namespace ud2lf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;   // bad flags, config, or rule files
constexpr int kExitIo = 2;      // unreadable/malformed input data
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Options {
  std::string config;  // flat key=value file; command-line flags win
  std::string lang = "en";
  std::string rules_rewrite;  // empty = built-in defaults
  std::string rules_lf;
  std::string priorities;
  std::string input;
  std::string against;  // second treebank (agree/compare)
  std::string out;      // output base path; empty = stdout
  std::string sent_id;  // derive
  double threshold = 0.005;
  bool smooth = false;
  int jobs = 1;
  bool drop_incomplete = false;
  bool exclude_punct = false;
  int max_steps = kDefaultMaxSteps;
};

void add_rule_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lang", o.lang, "language key for the built-in rules")->capture_default_str();
  cmd->add_option("--rules-rewrite", o.rules_rewrite, "tree transformation rule file");
  cmd->add_option("--rules-lf", o.rules_lf, "LF assignment rule file");
  cmd->add_option("--priorities", o.priorities, "composition priority list file");
  cmd->add_option("--max-steps", o.max_steps, "beta-reduction step budget")->capture_default_str();
}

// Flat key=value configuration: keys mirror the long option names (with '-'
// or '_'), '#' starts a comment.  Values never override flags given on the
// command line, so precedence is flags > file > defaults.
void apply_config(CLI::App* cmd, Options& o) {
  if (o.config.empty()) return;
  std::string text;
  try {
    text = slurp(o.config);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  std::istringstream in(text);

  auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
  auto to_int = [](const std::string& k, const std::string& v) {
    try {
      size_t used = 0;
      int n = std::stoi(v, &used);
      if (used == v.size()) return n;
    } catch (...) {
    }
    throw UsageError("config key '" + k + "': expected an integer, got '" + v + "'");
  };
  auto to_double = [](const std::string& k, const std::string& v) {
    try {
      size_t used = 0;
      double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (...) {
    }
    throw UsageError("config key '" + k + "': expected a number, got '" + v + "'");
  };
  auto to_bool = [](const std::string& k, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("config key '" + k + "': expected a boolean, got '" + v + "'");
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config '" + o.config + "' line " + std::to_string(lineno) +
                       ": expected key=value");
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    for (auto& c : key)
      if (c == '_') c = '-';

    if (key == "lang") {
      if (unset("--lang")) o.lang = value;
    } else if (key == "rules-rewrite") {
      if (unset("--rules-rewrite")) o.rules_rewrite = value;
    } else if (key == "rules-lf") {
      if (unset("--rules-lf")) o.rules_lf = value;
    } else if (key == "priorities") {
      if (unset("--priorities")) o.priorities = value;
    } else if (key == "max-steps") {
      int v = to_int(key, value);
      if (cmd->get_option_no_throw("--max-steps") && unset("--max-steps")) o.max_steps = v;
    } else if (key == "jobs") {
      int v = to_int(key, value);
      if (cmd->get_option_no_throw("--jobs") && unset("--jobs")) o.jobs = v;
    } else if (key == "threshold") {
      double v = to_double(key, value);
      if (cmd->get_option_no_throw("--threshold") && unset("--threshold")) o.threshold = v;
    } else if (key == "drop-incomplete") {
      bool v = to_bool(key, value);
      if (cmd->get_option_no_throw("--drop-incomplete") && unset("--drop-incomplete"))
        o.drop_incomplete = v;
    } else if (key == "exclude-punct") {
      bool v = to_bool(key, value);
      if (cmd->get_option_no_throw("--exclude-punct") && unset("--exclude-punct"))
        o.exclude_punct = v;
    } else if (key == "smooth") {
      bool v = to_bool(key, value);
      if (cmd->get_option_no_throw("--smooth") && unset("--smooth")) o.smooth = v;
    } else if (key == "out") {
      if (unset("--out")) o.out = value;
    } else {
      throw UsageError("config '" + o.config + "': unknown key '" + key + "'");
    }
  }
}

struct Rules {
  RewriteRuleSet rewrite;
  LfRuleSet lf;
  PriorityList priorities;
  std::set<std::string> wh;
};

Rules load_rules(const Options& o) {
  Rules r;
  try {
    r.wh = defaults::wh_lexicon(o.lang);
    std::string rw = o.rules_rewrite.empty() ? defaults::rewrite_rules_text(o.lang)
                                             : slurp(o.rules_rewrite);
    std::string lf = o.rules_lf.empty() ? defaults::lf_rules_text() : slurp(o.rules_lf);
    std::string pr = o.priorities.empty() ? defaults::priorities_text() : slurp(o.priorities);
    r.rewrite = parse_rewrite_rules(rw);
    r.lf = parse_lf_rules(lf);
    r.priorities = parse_priorities(pr);
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("rule configuration: ") + e.what());
  }
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (o.max_steps < 1) throw UsageError("--max-steps must be >= 1");
  if (o.threshold < 0) throw UsageError("--threshold must be >= 0");
  return r;
}

SessionLoad load_input_sessions(const Options& o) {
  std::string text = slurp(o.input);
  try {
    return load_sessions(text, o.drop_incomplete);
  } catch (const std::exception& e) {
    throw IoError("input '" + o.input + "': " + e.what());
  }
}

std::vector<DepTree> load_input_trees(const std::string& path,
                                      std::vector<std::string>* warnings) {
  std::string text = slurp(path);
  try {
    ParseResult pr = parse_conllu(text);
    if (warnings)
      warnings->insert(warnings->end(), pr.warnings.begin(), pr.warnings.end());
    return std::move(pr.trees);
  } catch (const std::exception& e) {
    throw IoError("input '" + path + "': " + e.what());
  }
}

// Reports go to <out>.tsv and <out>.json, or the TSV to stdout when no
// output base is configured.  Files are only opened once all inputs parsed.
void emit(const Options& o, const std::string& tsv, const json& doc) {
  if (o.out.empty()) {
    std::cout << tsv;
    return;
  }
  std::ofstream t(o.out + ".tsv", std::ios::binary);
  if (!t) throw IoError("cannot write '" + o.out + ".tsv'");
  t << tsv;
  std::ofstream j(o.out + ".json", std::ios::binary);
  if (!j) throw IoError("cannot write '" + o.out + ".json'");
  j << doc.dump(2) << "\n";
}

ConvertConfig convert_config(const Options& o, const Rules& r) {
  ConvertConfig cfg;
  cfg.wh_lexicon = r.wh;
  cfg.max_steps = o.max_steps;
  return cfg;
}

int cmd_convert(const Options& o) {
  Rules rules = load_rules(o);
  SessionLoad input = load_input_sessions(o);
  CorpusResult result = convert_corpus(input.sessions, rules.rewrite, rules.lf,
                                       rules.priorities, convert_config(o, rules), o.jobs);

  std::ostringstream tsv;
  json sentences = json::array();
  tsv << "sentence_id\tstatus\tlf\tfailure\tdetail\ttokens\n";
  for (const auto& out : result.outcomes) {
    std::string failure = out.ok() ? "" : failure_code(*out.failure);
    std::string toks;
    for (size_t i = 0; i < out.offending_tokens.size(); ++i) {
      if (i) toks += ",";
      toks += std::to_string(out.offending_tokens[i]);
    }
    tsv << out.sentence_id << "\t" << (out.ok() ? "converted" : "failed") << "\t"
        << out.lf_text << "\t" << failure << "\t" << out.detail << "\t" << toks << "\n";
    sentences.push_back({{"sentence_id", out.sentence_id},
                         {"status", out.ok() ? "converted" : "failed"},
                         {"lf", out.lf_text},
                         {"failure", failure},
                         {"detail", out.detail},
                         {"tokens", out.offending_tokens}});
  }
  tsv << "# sentences\t" << result.summary.total << "\n";
  tsv << "# converted\t" << result.summary.converted << "\n";
  tsv << "# rate\t" << fmt(result.summary.rate()) << "\n";

  json doc = {{"sentences", sentences},
              {"summary",
               {{"total", result.summary.total},
                {"converted", result.summary.converted},
                {"rate", result.summary.rate()}}},
              {"dropped_incomplete", input.dropped_incomplete},
              {"warnings", input.warnings}};
  emit(o, tsv.str(), doc);
  return kExitOk;
}

int cmd_stats(const Options& o) {
  Rules rules = load_rules(o);
  SessionLoad input = load_input_sessions(o);
  LabelStats stats = label_counts(input.sessions);
  CorpusResult result = convert_corpus(input.sessions, rules.rewrite, rules.lf,
                                       rules.priorities, convert_config(o, rules), o.jobs);
  auto rates = conversion_rates(stats, result.outcomes);

  std::ostringstream tsv;
  json labels = json::array();
  tsv << "label\tcount\tper_token\tpresence\tconverted_rate\n";
  for (const auto& [label, count] : stats.counts) {
    const auto& lc = rates.at(label);
    tsv << label << "\t" << count << "\t" << fmt(stats.per_token(label)) << "\t"
        << fmt(stats.presence_proportion(label)) << "\t" << fmt(lc.rate()) << "\n";
    labels.push_back({{"label", label},
                      {"count", count},
                      {"per_token", stats.per_token(label)},
                      {"presence", stats.presence_proportion(label)},
                      {"occurrences_converted", lc.converted},
                      {"converted_rate", lc.rate()}});
  }
  tsv << "# tokens\t" << stats.total_tokens << "\n";
  tsv << "# sentences\t" << stats.total_sentences << "\n";
  tsv << "# mean_tokens_per_sentence\t" << fmt(stats.mean_tokens_per_sentence()) << "\n";
  tsv << "# conversion_rate\t" << fmt(result.summary.rate()) << "\n";

  json doc = {{"labels", labels},
              {"totals",
               {{"tokens", stats.total_tokens},
                {"sentences", stats.total_sentences},
                {"mean_tokens_per_sentence", stats.mean_tokens_per_sentence()},
                {"conversion_rate", result.summary.rate()}}}};
  emit(o, tsv.str(), doc);
  return kExitOk;
}

int cmd_agree(const Options& o) {
  std::vector<std::string> warnings;
  auto a = load_input_trees(o.input, &warnings);
  auto b = load_input_trees(o.against, &warnings);
  AgreementReport report;
  try {
    report = attachment_agreement(a, b, o.exclude_punct);
  } catch (const AnalyticsError& e) {
    throw IoError(e.what());
  }

  std::ostringstream tsv;
  tsv << "metric\tvalue\n";
  tsv << "tokens_compared\t" << report.tokens_compared << "\n";
  tsv << "las\t" << fmt(report.las()) << "\n";
  tsv << "uas\t" << fmt(report.uas()) << "\n";
  tsv << "sentences_compared\t" << report.sentences_compared << "\n";
  tsv << "sentences_skipped\t" << report.sentences_skipped << "\n";
  json confusion = json::array();
  for (const auto& [pair, count] : report.confusion) {
    tsv << "confusion\t" << pair.first << "\t" << pair.second << "\t" << count << "\n";
    confusion.push_back({{"a", pair.first}, {"b", pair.second}, {"count", count}});
  }
  json doc = {{"tokens_compared", report.tokens_compared},
              {"las", report.las()},
              {"uas", report.uas()},
              {"sentences_compared", report.sentences_compared},
              {"sentences_skipped", report.sentences_skipped},
              {"exclude_punct", o.exclude_punct},
              {"confusion", confusion},
              {"warnings", report.warnings}};
  emit(o, tsv.str(), doc);
  return kExitOk;
}

int cmd_trends(const Options& o) {
  SessionLoad input = load_input_sessions(o);
  TrendReport report = longitudinal_trends(input.sessions);

  std::ostringstream tsv, points;
  json lines = json::array();
  tsv << "label\tslope\tintercept\tt\tp\tsignificant\tinsufficient_data\n";
  points << "label\tage_months\tproportion\tsmoothed\n";
  for (const auto& line : report.lines) {
    tsv << line.label << "\t" << fmt(line.slope) << "\t" << fmt(line.intercept)
        << "\t" << fmt(line.t_stat) << "\t" << fmt(line.p_value) << "\t"
        << (line.significant ? 1 : 0) << "\t" << (line.insufficient_data ? 1 : 0)
        << "\n";
    json pts = json::array();
    for (const auto& pt : line.points) {
      double smoothed = o.smooth ? pt.smoothed : pt.proportion;
      points << line.label << "\t" << fmt(pt.age_months) << "\t"
             << fmt(pt.proportion) << "\t" << fmt(smoothed) << "\n";
      pts.push_back({{"age_months", pt.age_months},
                     {"proportion", pt.proportion},
                     {"smoothed", smoothed}});
    }
    lines.push_back({{"label", line.label},
                     {"slope", line.slope},
                     {"intercept", line.intercept},
                     {"t", line.t_stat},
                     {"p", line.p_value},
                     {"significant", line.significant},
                     {"insufficient_data", line.insufficient_data},
                     {"points", pts}});
  }
  json doc = {{"lines", lines},
              {"smoothing_window", report.smoothing_window},
              {"smoothing_applied", o.smooth},
              {"multiple_comparison_correction", false}};
  emit(o, tsv.str(), doc);
  if (!o.out.empty()) {
    std::ofstream p(o.out + ".points.tsv", std::ios::binary);
    if (!p) throw IoError("cannot write '" + o.out + ".points.tsv'");
    p << points.str();
  }
  return kExitOk;
}

int cmd_compare(const Options& o) {
  auto a = load_input_trees(o.input, nullptr);
  auto b = load_input_trees(o.against, nullptr);
  LabelStats sa = label_counts(a), sb = label_counts(b);
  auto diffs = compare_corpora(sa, sb, o.threshold);

  std::ostringstream tsv;
  json rows = json::array();
  tsv << "label\tfreq_a\tfreq_b\tdifference\thigher_in\n";
  for (const auto& d : diffs) {
    tsv << d.label << "\t" << fmt(d.freq_a) << "\t" << fmt(d.freq_b) << "\t"
        << fmt(d.difference) << "\t" << d.higher_in << "\n";
    rows.push_back({{"label", d.label},
                    {"freq_a", d.freq_a},
                    {"freq_b", d.freq_b},
                    {"difference", d.difference},
                    {"higher_in", d.higher_in}});
  }
  json doc = {{"threshold", o.threshold}, {"labels", rows}};
  emit(o, tsv.str(), doc);
  return kExitOk;
}

int cmd_derive(const Options& o) {
  Rules rules = load_rules(o);
  auto trees = load_input_trees(o.input, nullptr);
  const DepTree* target = nullptr;
  for (const auto& t : trees)
    if (o.sent_id.empty() || t.sentence_id == o.sent_id) { target = &t; break; }
  if (!target)
    throw IoError("sentence '" + o.sent_id + "' not found in '" + o.input + "'");

  Derivation d;
  ConversionOutcome out = convert(*target, rules.rewrite, rules.lf, rules.priorities,
                                  convert_config(o, rules), &d);

  std::ostringstream rep;
  rep << "sentence " << out.sentence_id << "\n\n";
  rep << "transformed tree:\n" << serialize_conllu(d.transformed) << "\n";
  rep << "node logical forms:\n";
  for (const auto& [id, lf] : d.node_lfs) {
    rep << "  " << id << "\t" << d.node_rules.at(id) << "\t" << to_text(lf, {});
    auto ev = d.node_events.find(id);
    if (ev != d.node_events.end()) rep << "\t[event " << ev->second << "]";
    rep << "\n";
  }
  rep << "\ncomposition steps:\n";
  for (const auto& step : d.steps) {
    switch (step.step.kind) {
      case Step::Kind::Edge:
        rep << "  edge " << step.step.deprel << " " << step.step.head << " <- "
            << step.step.dep << " [" << step.rule << "]";
        break;
      case Step::Kind::Close:
        rep << "  close " << step.step.head << " [" << step.rule << "]";
        break;
      case Step::Kind::Finalize:
        rep << "  finalize [" << step.rule << "]";
        break;
    }
    rep << "\n    = " << to_text(step.result, {}) << "\n";
  }
  rep << "\n";
  if (out.ok()) {
    rep << "final: " << out.lf_text << "\n";
  } else {
    rep << "failed: " << failure_code(*out.failure) << " (" << out.detail << ")\n";
  }

  if (o.out.empty()) {
    std::cout << rep.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot write '" + o.out + "'");
    f << rep.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency-tree to logical-form converter and corpus analytics"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* cmd, bool needs_against) {
    cmd->add_option("--config", o.config, "flat key=value config file (flags take precedence)");
    cmd->add_option("--in", o.input, "input CoNLL-U file")->required();
    if (needs_against)
      cmd->add_option("--against", o.against, "second CoNLL-U file")->required();
    cmd->add_option("--out", o.out, "output base path (writes <out>.tsv and <out>.json)");
    return cmd;
  };

  CLI::App* convert = add_common(app.add_subcommand("convert", "convert trees to logical forms"), false);
  add_rule_flags(convert, o);
  convert->add_option("--jobs", o.jobs, "parallel conversion workers")->capture_default_str();
  convert->add_flag("--drop-incomplete", o.drop_incomplete, "drop broken-off utterances");

  CLI::App* stats = add_common(app.add_subcommand("stats", "label counts and conversion rates"), false);
  add_rule_flags(stats, o);
  stats->add_option("--jobs", o.jobs, "parallel conversion workers")->capture_default_str();
  stats->add_flag("--drop-incomplete", o.drop_incomplete, "drop broken-off utterances");

  CLI::App* agree = add_common(app.add_subcommand("agree", "pairwise attachment agreement"), true);
  agree->add_flag("--exclude-punct", o.exclude_punct, "exclude punctuation tokens");

  CLI::App* trends = add_common(app.add_subcommand("trends", "longitudinal label trends"), false);
  trends->add_flag("--smooth", o.smooth, "5-session moving average in plot points");
  trends->add_flag("--drop-incomplete", o.drop_incomplete, "drop broken-off utterances");

  CLI::App* compare = add_common(app.add_subcommand("compare", "cross-corpus frequency comparison"), true);
  compare->add_option("--threshold", o.threshold, "minimum per-token frequency difference")
      ->capture_default_str();

  CLI::App* derive = add_common(app.add_subcommand("derive", "dump one sentence's derivation"), false);
  add_rule_flags(derive, o);
  derive->add_option("--sent-id", o.sent_id, "sentence id to derive (default: first)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (convert->parsed()) return apply_config(convert, o), cmd_convert(o);
    if (stats->parsed()) return apply_config(stats, o), cmd_stats(o);
    if (agree->parsed()) return apply_config(agree, o), cmd_agree(o);
    if (trends->parsed()) return apply_config(trends, o), cmd_trends(o);
    if (compare->parsed()) return apply_config(compare, o), cmd_compare(o);
    if (derive->parsed()) return apply_config(derive, o), cmd_derive(o);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
