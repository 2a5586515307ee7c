// CoNLL-U treebank reading, validation and writing, with the subtyped
// dependency labels used by the converter and per-session age metadata.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ud2lf {

struct Token {
  int id = 0;            // 1-based position
  std::string form;
  std::string lemma;
  std::string upos;
  std::string morph;     // opaque annotation atom (FEATS column), never parsed
  int head = 0;          // 0 = root
  std::string deprel;
  // unmapped columns, preserved verbatim for round-tripping
  std::string xpos = "_";
  std::string deps = "_";
  std::string misc = "_";
};

struct DepTree {
  std::vector<Token> tokens;
  std::string sentence_id;
  std::optional<std::string> text;
  // session metadata attached to the sentence block, if any
  std::optional<std::string> session_id;
  std::optional<double> child_age_months;
  // comment lines other than the mapped keys, preserved verbatim
  std::vector<std::string> extra_comments;

  const Token* find(int id) const;
  int root_id() const;  // 0 if absent/ambiguous
  std::vector<int> children_of(int id) const;  // surface order
};

struct Session {
  std::string session_id;
  double child_age_months = 0;
  std::vector<DepTree> trees;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

class StructuralError : public std::runtime_error {
 public:
  StructuralError(const std::string& msg, std::string sentence_id)
      : std::runtime_error("sentence " + sentence_id + ": " + msg),
        sentence_id(std::move(sentence_id)) {}
  std::string sentence_id;
};

struct ParseResult {
  std::vector<DepTree> trees;
  std::vector<std::string> warnings;
};

// Parses sentence blocks separated by blank lines.  Multiword ranges
// ("3-4") and empty nodes ("3.1") are skipped with a warning.  Underscore
// subtype spellings of the relative-clause labels are normalized to colons.
ParseResult parse_conllu(const std::string& text);

std::string serialize_conllu(const DepTree& tree);
std::string serialize_conllu(const std::vector<DepTree>& trees);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_tree(const DepTree& tree);

bool is_known_upos(const std::string& upos);
bool is_known_deprel_base(const std::string& deprel);
// "acl:relcl:obj" -> "acl"
std::string deprel_base(const std::string& deprel);

// True for utterances the corpus marks as broken off (trailing "+...").
bool is_incomplete_utterance(const DepTree& tree);

struct SessionLoad {
  std::vector<Session> sessions;  // ordered by age
  std::vector<std::string> warnings;
  int dropped_incomplete = 0;
};

// Groups parsed trees into sessions keyed by their metadata comments.
// Trees without session metadata fall into one anonymous session at age 0
// (with a warning).  With drop_incomplete, trailing-"+..." utterances are
// discarded.
SessionLoad load_sessions(const std::string& text, bool drop_incomplete = false);

}  // namespace ud2lf
