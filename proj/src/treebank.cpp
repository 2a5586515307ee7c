#include "ud2lf/treebank.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ud2lf {

const Token* DepTree::find(int id) const {
  if (id >= 1 && id <= static_cast<int>(tokens.size()) && tokens[id - 1].id == id)
    return &tokens[id - 1];
  for (const auto& t : tokens)
    if (t.id == id) return &t;
  return nullptr;
}

int DepTree::root_id() const {
  int root = 0;
  for (const auto& t : tokens) {
    if (t.head == 0) {
      if (root != 0) return 0;
      root = t.id;
    }
  }
  return root;
}

std::vector<int> DepTree::children_of(int id) const {
  std::vector<int> out;
  for (const auto& t : tokens)
    if (t.head == id) out.push_back(t.id);
  return out;
}

// ---------------------------------------------------------------------------
// Label vocabulary

namespace {

const std::set<std::string>& upos_set() {
  static const std::set<std::string> s = {
      "VERB", "NOUN", "PRON", "ADJ", "ADV",  "DET",  "ADP",  "AUX", "NUM",
      "PART", "PROPN", "INTJ", "CONJ", "CCONJ", "SCONJ", "PUNCT", "SYM", "X"};
  return s;
}

const std::set<std::string>& deprel_base_set() {
  // UD v1 relations plus labels appearing in the annotation scheme
  static const std::set<std::string> s = {
      "acl",      "advcl",    "advmod",   "amod",      "appos",   "aux",
      "auxpass",  "case",     "cc",       "ccomp",     "compound", "conj",
      "cop",      "csubj",    "csubjpass", "dep",      "det",     "discourse",
      "dislocated", "dobj",   "expl",     "foreign",   "goeswith", "iobj",
      "list",     "mark",     "mwe",      "name",      "neg",     "nmod",
      "nsubj",    "nsubjpass", "nummod",  "parataxis", "punct",   "remnant",
      "reparandum", "root",   "vocative", "xcomp",     "quant",   "fixed",
      "flat"};
  return s;
}

std::string normalize_deprel(std::string d) {
  // the relative-clause subtypes appear with either separator
  if (d == "acl:relcl_subj") return "acl:relcl:subj";
  if (d == "acl:relcl_obj") return "acl:relcl:obj";
  return d;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
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

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  try {
    out = std::stoi(s);
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

bool is_known_upos(const std::string& upos) {
  // rewriting subcategorizes tags as BASE-SUFFIX (e.g. VERB-DO); the base
  // must be part of the tag vocabulary
  size_t p = upos.find('-');
  return upos_set().count(p == std::string::npos ? upos : upos.substr(0, p)) > 0;
}

std::string deprel_base(const std::string& deprel) {
  size_t p = deprel.find(':');
  return p == std::string::npos ? deprel : deprel.substr(0, p);
}

bool is_known_deprel_base(const std::string& deprel) {
  return deprel_base_set().count(deprel_base(deprel)) > 0;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

void check_structure(const DepTree& tree, int first_line) {
  int n = static_cast<int>(tree.tokens.size());
  for (const auto& t : tree.tokens) {
    if (t.head < 0 || t.head > n)
      throw StructuralError("token " + std::to_string(t.id) + " head " +
                                std::to_string(t.head) + " out of range",
                            tree.sentence_id);
    if (t.head == t.id)
      throw StructuralError("token " + std::to_string(t.id) + " heads itself",
                            tree.sentence_id);
  }
  // reachability from a head-0 token detects cycles and rootless blocks
  int root = 0;
  for (const auto& t : tree.tokens)
    if (t.head == 0) root = t.id;
  if (n > 0 && root == 0)
    throw StructuralError("no root token (cyclic head references)", tree.sentence_id);
  (void)first_line;
}

}  // namespace

ParseResult parse_conllu(const std::string& text) {
  ParseResult result;
  DepTree cur;
  int expected_id = 1;
  int line_no = 0;
  int block_start = 0;
  bool in_block = false;

  auto flush = [&]() {
    if (!in_block) return;
    if (!cur.tokens.empty()) {
      if (cur.sentence_id.empty())
        cur.sentence_id = "s" + std::to_string(result.trees.size() + 1);
      check_structure(cur, block_start);
      result.trees.push_back(std::move(cur));
    }
    cur = DepTree{};
    expected_id = 1;
    in_block = false;
  };

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block_start = line_no;
    }
    if (raw[0] == '#') {
      std::string body = trim(raw.substr(1));
      size_t eq = body.find('=');
      std::string key = eq == std::string::npos ? body : trim(body.substr(0, eq));
      std::string val = eq == std::string::npos ? "" : trim(body.substr(eq + 1));
      if (key == "sent_id") cur.sentence_id = val;
      else if (key == "text") cur.text = val;
      else if (key == "session_id") cur.session_id = val;
      else if (key == "child_age_months") {
        try {
          cur.child_age_months = std::stod(val);
        } catch (...) {
          throw ParseError("bad child_age_months value '" + val + "'", line_no);
        }
      } else {
        cur.extra_comments.push_back(raw);
      }
      continue;
    }
    std::vector<std::string> cols = split(raw, '\t');
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, got " +
                           std::to_string(cols.size()),
                       line_no);
    if (cols[0].find('-') != std::string::npos) {
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": skipped multiword token range " + cols[0]);
      continue;
    }
    if (cols[0].find('.') != std::string::npos) {
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": skipped empty node " + cols[0]);
      continue;
    }
    Token t;
    if (!parse_int(cols[0], t.id)) throw ParseError("non-integer id '" + cols[0] + "'", line_no);
    if (!parse_int(cols[6], t.head))
      throw ParseError("non-integer head '" + cols[6] + "'", line_no);
    if (t.id != expected_id)
      throw ParseError("token id " + cols[0] + " out of sequence (expected " +
                           std::to_string(expected_id) + ")",
                       line_no);
    ++expected_id;
    t.form = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.xpos = cols[4];
    t.morph = cols[5];
    t.deprel = normalize_deprel(cols[7]);
    t.deps = cols[8];
    t.misc = cols[9];
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_conllu(const DepTree& tree) {
  std::string out;
  if (!tree.sentence_id.empty()) out += "# sent_id = " + tree.sentence_id + "\n";
  if (tree.session_id) out += "# session_id = " + *tree.session_id + "\n";
  if (tree.child_age_months) {
    std::ostringstream os;
    os << *tree.child_age_months;
    out += "# child_age_months = " + os.str() + "\n";
  }
  if (tree.text) out += "# text = " + *tree.text + "\n";
  for (const auto& c : tree.extra_comments) out += c + "\n";
  for (const auto& t : tree.tokens) {
    out += std::to_string(t.id) + "\t" + t.form + "\t" + t.lemma + "\t" + t.upos +
           "\t" + t.xpos + "\t" + t.morph + "\t" + std::to_string(t.head) + "\t" +
           t.deprel + "\t" + t.deps + "\t" + t.misc + "\n";
  }
  return out;
}

std::string serialize_conllu(const std::vector<DepTree>& trees) {
  std::string out;
  for (const auto& t : trees) {
    out += serialize_conllu(t);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_tree(const DepTree& tree) {
  ValidationReport report;
  int n = static_cast<int>(tree.tokens.size());
  if (n == 0) {
    report.violations.push_back("empty tree");
    return report;
  }
  int roots = 0;
  for (const auto& t : tree.tokens) {
    if (!is_known_upos(t.upos))
      report.violations.push_back("token " + std::to_string(t.id) + ": unknown upos " + t.upos);
    if (!is_known_deprel_base(t.deprel))
      report.violations.push_back("token " + std::to_string(t.id) + ": unknown deprel " +
                                  t.deprel);
    if (t.head == 0) ++roots;
    if (t.head < 0 || t.head > n || t.head == t.id)
      report.violations.push_back("token " + std::to_string(t.id) + ": bad head " +
                                  std::to_string(t.head));
  }
  if (roots != 1)
    report.violations.push_back(roots == 0 ? "no root token"
                                           : "multiple root tokens (" +
                                                 std::to_string(roots) + ")");
  // contiguity
  for (int i = 0; i < n; ++i) {
    if (tree.tokens[i].id != i + 1) {
      report.violations.push_back("token ids not contiguous at position " +
                                  std::to_string(i + 1));
      break;
    }
  }
  // reachability
  if (roots == 1) {
    std::vector<char> seen(n + 1, 0);
    std::vector<int> stack{tree.root_id()};
    seen[tree.root_id()] = 1;
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      for (int c : tree.children_of(id)) {
        if (c >= 1 && c <= n && !seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
    }
    for (const auto& t : tree.tokens)
      if (!seen[t.id])
        report.violations.push_back("token " + std::to_string(t.id) +
                                    " unreachable from root");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sessions

bool is_incomplete_utterance(const DepTree& tree) {
  auto ends_plus = [](const std::string& s) {
    return s.size() >= 4 && s.compare(s.size() - 4, 4, "+...") == 0;
  };
  if (tree.text && ends_plus(*tree.text)) return true;
  if (!tree.tokens.empty() && ends_plus(tree.tokens.back().form)) return true;
  return false;
}

SessionLoad load_sessions(const std::string& text, bool drop_incomplete) {
  SessionLoad out;
  ParseResult parsed = parse_conllu(text);
  out.warnings = parsed.warnings;

  std::vector<Session> sessions;
  std::map<std::string, size_t> index;
  bool warned_anonymous = false;

  // session metadata is sticky: a block without it belongs to the most
  // recent session seen in file order
  std::string cur_id;
  double cur_age = 0;
  bool have_session = false;

  for (auto& tree : parsed.trees) {
    if (drop_incomplete && is_incomplete_utterance(tree)) {
      ++out.dropped_incomplete;
      continue;
    }
    if (tree.session_id) {
      cur_id = *tree.session_id;
      cur_age = tree.child_age_months.value_or(cur_age);
      have_session = true;
    }
    std::string key = have_session ? cur_id : std::string("anonymous");
    if (!have_session && !warned_anonymous) {
      out.warnings.push_back(
          "no session metadata; grouping into one anonymous session at age 0");
      warned_anonymous = true;
    }
    auto it = index.find(key);
    if (it == index.end()) {
      index[key] = sessions.size();
      Session s;
      s.session_id = key;
      s.child_age_months = have_session ? cur_age : 0;
      sessions.push_back(std::move(s));
      it = index.find(key);
    }
    sessions[it->second].trees.push_back(std::move(tree));
  }
  std::stable_sort(sessions.begin(), sessions.end(),
                   [](const Session& a, const Session& b) {
                     return a.child_age_months < b.child_age_months;
                   });
  out.sessions = std::move(sessions);
  return out;
}

}  // namespace ud2lf
