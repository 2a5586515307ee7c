// Built-in rule sets: tree transformation rules, LF assignment templates,
// the composition priority list, and per-language question-word lexicons.
// All are plain rule-file texts fed through the regular parsers, so users
// can dump, edit, and reload them.
#pragma once

#include <set>
#include <string>

namespace ud2lf::defaults {

// lang selects the question-word lexicon spliced into the lexicalized rule
std::string rewrite_rules_text(const std::string& lang = "en");
std::string lf_rules_text();
std::string priorities_text();
std::set<std::string> wh_lexicon(const std::string& lang);

}  // namespace ud2lf::defaults
