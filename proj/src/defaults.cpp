#include "ud2lf/defaults.hpp"

#include <stdexcept>

namespace ud2lf::defaults {

std::set<std::string> wh_lexicon(const std::string& lang) {
  if (lang == "en")
    return {"what", "who", "whose", "where", "when", "why", "how", "which"};
  if (lang == "he")
    return {"ma", "mi", "eifo", "matai", "lama", "eich", "eize"};
  throw std::runtime_error("no question-word lexicon for language '" + lang + "'");
}

// ---------------------------------------------------------------------------
// Transformation rules.  Pass 1 cleans up and normalizes the tree; pass 2
// subcategorizes POS tags with the valence/predication context the LF
// templates need.

std::string rewrite_rules_text(const std::string& lang) {
  std::string wh_list;
  for (const auto& w : wh_lexicon(lang)) {
    if (!wh_list.empty()) wh_list += "|";
    wh_list += w;
  }

  std::string text = R"RULES(# default transformation rules
passes = 2

# --- pass 1: cleanup and label normalization ---
5  | punct-del      | (match pass=1 upos=PUNCT) | delete_node
8  | repeat-del     | (match pass=1 deprel=parataxis:repeat) | delete_subtree
10 | prt-merge      | (match pass=1 upos=VERB (child deprel=compound:prt adjacent)) | merge_into_head(_)
12 | prt-strand     | (match pass=1 upos=PART deprel=compound:prt) | set_deprel(advmod)
14 | svc-merge      | (match pass=1 upos=VERB (child deprel=compound:svc upos=VERB)) | merge_into_dependent()
16 | mwe-merge      | (match pass=1 upos=* (child deprel=mwe|name|goeswith)) | merge_into_head(_)
18 | wh-mark        | (match pass=1 upos=PRON lemma=@WHLIST@) | set_upos(PRON-WH)
20 | relpron-obj    | (match pass=1 upos=PRON deprel=dobj (parent deprel=acl:relcl:obj)) | delete_node
22 | relpron-subj   | (match pass=1 upos=PRON deprel=nsubj (parent deprel=acl:relcl:subj)) | delete_node
24 | nmod-att       | (match pass=1 deprel=nmod (parent upos=NOUN|PROPN|PRON)) | set_deprel(nmod:att)
26 | acl-inf        | (match pass=1 deprel=acl (child deprel=mark upos=PART)) | set_deprel(acl:inf)
28 | ccomp-frel     | (match pass=1 deprel=ccomp (child deprel=dobj:comp|nsubj:comp)) | set_deprel(ccomp:frel)

# --- pass 2: verb valence subcategorization ---
40 | v-relobj       | (match pass=2 upos=VERB deprel=acl:relcl:obj) | set_upos(VERB-RELO)
42 | v-raise        | (match pass=2 upos=VERB (child deprel=xcomp) (child deprel=dobj)) | set_upos(VERB-RAISE)
43 | v-subj-xcomp   | (match pass=2 upos=VERB (child deprel=xcomp) (child deprel=nsubj)) | set_upos(VERB-SXC)
44 | v-subj-ccomp   | (match pass=2 upos=VERB (child deprel=ccomp) (child deprel=nsubj)) | set_upos(VERB-SC)
45 | v-ditrans      | (match pass=2 upos=VERB (child deprel=iobj) (child deprel=nsubj)) | set_upos(VERB-SOI)
46 | v-imp-ditrans  | (match pass=2 upos=VERB !deprel=xcomp|acl|acl:inf|acl:relcl:subj|csubj (child deprel=iobj) (no-child deprel=nsubj)) | set_upos(VERB-DOI)
47 | v-trans        | (match pass=2 upos=VERB (child deprel=dobj|dobj:comp|ccomp:frel) (child deprel=nsubj)) | set_upos(VERB-SO)
48 | v-trans-ext    | (match pass=2 upos=VERB deprel=xcomp|acl|acl:inf|acl:relcl:subj (child deprel=dobj|dobj:comp|ccomp:frel) (no-child deprel=nsubj)) | set_upos(VERB-SO)
49 | v-imp-trans    | (match pass=2 upos=VERB !deprel=xcomp|acl|acl:inf|acl:relcl:subj|csubj (child deprel=dobj) (no-child deprel=nsubj)) | set_upos(VERB-DO)
50 | v-intrans      | (match pass=2 upos=VERB (child deprel=nsubj)) | set_upos(VERB-S)
51 | v-intrans-ext  | (match pass=2 upos=VERB deprel=xcomp|acl|acl:inf|acl:relcl:subj|csubj) | set_upos(VERB-S)
52 | v-imp          | (match pass=2 upos=VERB) | set_upos(VERB-IMP)

# --- pass 2: predication and adposition subcategorization ---
55 | pred-pp        | (match pass=2 upos=NOUN|PROPN|PRON (child deprel=cop) (child deprel=case)) | set_upos(NOUN-PREDPP)
56 | adj-pred-xcomp | (match pass=2 upos=ADJ (child deprel=cop) (child deprel=xcomp)) | set_upos(ADJ-PRED-XC)
57 | adj-pred       | (match pass=2 upos=ADJ (child deprel=cop|nsubj)) | set_upos(ADJ-PRED)
58 | noun-pred      | (match pass=2 upos=NOUN|PROPN (child deprel=cop)) | set_upos(NOUN-PRED)
60 | adp-cop        | (match pass=2 upos=ADP deprel=case (parent upos=NOUN-PREDPP)) | set_upos(ADP-COP)
61 | adp-nominal    | (match pass=2 upos=ADP deprel=case (parent deprel=nmod:att)) | set_upos(ADP-N)
65 | noun-bare      | (match pass=2 upos=NOUN !deprel=amod|compound|name|mwe|goeswith (no-child deprel=det|nummod|nmod:poss|neg)) | set_upos(NOUN-BARE)
)RULES";

  const std::string marker = "@WHLIST@";
  size_t pos = text.find(marker);
  if (pos != std::string::npos) text.replace(pos, marker.size(), wh_list);
  return text;
}

// ---------------------------------------------------------------------------
// LF assignment rules.  Node templates key on the subcategorized POS tags;
// edge templates key on the dependency label plus the head's tag where the
// head's remaining argument slots matter.  Verb predicates take subject,
// direct object, indirect object, event — in that order; '_' fills a
// missing medial slot and 'you' the subject of imperatives.

std::string lf_rules_text() {
  return R"RULES(# default LF assignment rules

# --- question words (the only wh-specific templates) ---
node | 10 | whvar-poss | upos=PRON-WH deprel=nmod:poss | whvar ((v->t)->v)
node | 11 | whvar | upos=PRON-WH deprel=dobj|nsubj|iobj | whvar v
node | 12 | whdet-frel | upos=PRON-WH deprel=dobj:comp|nsubj:comp | term @lemma:((v->t)->v)

# --- referring expressions, determiners, function words ---
node | 20 | poss-pron | upos=PRON deprel=nmod:poss | term @lemma:((v->t)->v)
node | 21 | pron | upos=PRON|PROPN | term @lemma:v
node | 22 | det-pred | upos=DET deprel=det parent_upos=NOUN-PRED | term @lemma:(v->t->t)
node | 23 | det | upos=DET deprel=det | term @lemma:((v->t)->v)
node | 24 | neg-pred | deprel=neg parent_upos=NOUN-PRED | term @lemma:(v->t->t)
node | 25 | neg | deprel=neg | term @lemma:(t->r->t)
node | 26 | num | upos=NUM deprel=nummod | term @lemma:((v->t)->v)
node | 27 | aux | upos=AUX deprel=aux|auxpass | term @lemma:(t->r->t)
node | 28 | cop | deprel=cop | term @lemma:v
node | 29 | mark | deprel=mark | term @lemma:(t->t->t)

# --- nominals, adjectives, predication ---
node | 30 | noun | upos=NOUN|NOUN-BARE | term \x:v. @lemma:(v->t)(x)
node | 31 | noun-pred | upos=NOUN-PRED | term \q:(v->t->t).\s:v.\e:r. q(s)(@lemma:(v->r->t)(s)(e))
node | 32 | noun-predpp | upos=NOUN-PREDPP | term @lemma:v
node | 33 | adj | upos=ADJ | term \x:v. @lemma:(v->t)(x)
node | 34 | adj-pred | upos=ADJ-PRED | term \s:v.\e:r. @lemma:(v->r->t)(s,e)
node | 35 | adj-pred-xc | upos=ADJ-PRED-XC | term \c:(v->r->t).\s:v.\e:r. @lemma:(v->t->r->t)(s, c(s)(@ex:r), e)

# --- verbs by valence frame ---
node | 40 | verb-s | upos=VERB-S | term \s:v.\e:r. @lemma:(v->r->t)(s,e)
node | 41 | verb-so | upos=VERB-SO|VERB-RELO | term \o:v.\s:v.\e:r. @lemma:(v->v->r->t)(s,o,e)
node | 42 | verb-soi | upos=VERB-SOI | term \i:v.\o:v.\s:v.\e:r. @lemma:(v->v->v->r->t)(s,o,i,e)
node | 43 | verb-imp | upos=VERB-IMP | term \e:r. @lemma:(v->r->t)(you:v, e)
node | 44 | verb-do | upos=VERB-DO | term \o:v.\e:r. @lemma:(v->v->r->t)(you:v, o, e)
node | 45 | verb-doi | upos=VERB-DOI | term \i:v.\o:v.\e:r. @lemma:(v->v->v->r->t)(you:v, o, i, e)
node | 46 | verb-sc | upos=VERB-SC | term \c:t.\s:v.\e:r. @lemma:(v->t->r->t)(s, c, e)
node | 47 | verb-raise | upos=VERB-RAISE | term \o:v.\c:(v->r->t).\s:v.\e:r. @lemma:(v->t->r->t)(s, c(o)(@ex:r), e)
node | 48 | verb-sxc | upos=VERB-SXC | term \c:(v->r->t).\s:v.\e:r. @lemma:(v->t->r->t)(s, c(_:v)(@ex:r), e)

# --- adpositions, adverbs, conjunctions ---
node | 50 | adp-cop | upos=ADP-COP | term \x:v.\s:v.\e:r. @lemma:(v->v->r->t)(x,s,e)
node | 51 | adp-n | upos=ADP-N | term \x:v. @lemma:(v->t)(x)
node | 52 | adp | upos=ADP | term \x:v.\e:r. @lemma:(v->r->t)(x,e)
node | 53 | adv-adj | upos=ADV parent_upos=ADJ | term @lemma:(t->t)
node | 54 | adv | upos=ADV|PART|INTJ deprel=advmod|discourse | term \e:r. @lemma:(r->t)(e)
node | 55 | cc-clause | deprel=cc parent_upos=VERB*|ADJ-PRED* | term @lemma:(t->t->t)
node | 56 | cc-np | deprel=cc parent_upos=NOUN|NOUN-BARE|PROPN|PRON | term @lemma:(v->v->v)

# --- core argument edges ---
edge | 100 | nsubj-relobj | deprel=nsubj head=VERB-RELO | apply_under1
edge | 101 | core-apply | deprel=nsubj|dobj|iobj|xcomp|ccomp:frel | apply
edge | 102 | ccomp-clause | deprel=ccomp head=VERB-SC | term \h:(t->v->r->t).\d:(r->t). h(d(@edep:r))
edge | 103 | dobj-comp | deprel=dobj:comp | term \h:(v->v->r->t).\d:((v->t)->v).\s:v. d(\x:v. h(x)(s)(@e:r))

# --- determination ---
edge | 110 | det-pred-arg | deprel=det head=NOUN-PRED | apply
edge | 111 | det-flip | deprel=det|nummod|nmod:poss | rapply
edge | 112 | neg-pred-arg | deprel=neg head=NOUN-PRED | apply

# --- auxiliaries, modals, negation wrap the clause so far ---
edge | 113 | aux-imp | deprel=neg|aux|auxpass head=VERB-IMP | term \h:(r->t).\d:(t->r->t).\e:r. d(h(e))(e)
edge | 114 | aux-s1 | deprel=neg|aux|auxpass head=VERB-S|VERB-DO|ADJ-PRED | term \h:(v->r->t).\d:(t->r->t).\a:v.\e:r. d(h(a)(e))(e)
edge | 115 | aux-s2 | deprel=neg|aux|auxpass head=VERB-SO|VERB-RELO|VERB-DOI | term \h:(v->v->r->t).\d:(t->r->t).\a:v.\b:v.\e:r. d(h(a)(b)(e))(e)
edge | 116 | aux-s3 | deprel=neg|aux|auxpass head=VERB-SOI | term \h:(v->v->v->r->t).\d:(t->r->t).\a:v.\b:v.\c:v.\e:r. d(h(a)(b)(c)(e))(e)

# --- modifiers conjoin on the event ---
edge | 120 | advmod-adj | deprel=advmod head=ADJ | term \h:(v->t).\d:(t->t).\x:v. d(h(x))
edge | 121 | mod-imp | deprel=advmod|nmod|discourse head=VERB-IMP | term \h:(r->t).\d:(r->t).\e:r. and:(t->t->t)(h(e), d(e))
edge | 122 | mod-s1 | deprel=advmod|nmod|discourse head=VERB-S|VERB-DO|ADJ-PRED | term \h:(v->r->t).\d:(r->t).\a:v.\e:r. and:(t->t->t)(h(a)(e), d(e))
edge | 123 | mod-s2 | deprel=advmod|nmod|discourse head=VERB-SO|VERB-RELO|VERB-DOI | term \h:(v->v->r->t).\d:(r->t).\a:v.\b:v.\e:r. and:(t->t->t)(h(a)(b)(e), d(e))
edge | 124 | mod-s3 | deprel=advmod|nmod|discourse head=VERB-SOI | term \h:(v->v->v->r->t).\d:(r->t).\a:v.\b:v.\c:v.\e:r. and:(t->t->t)(h(a)(b)(c)(e), d(e))

# --- nominal modification ---
edge | 130 | amod | deprel=amod | term \h:(v->t).\d:(v->t).\x:v. and:(t->t->t)(d(x), h(x))
edge | 131 | compound | deprel=compound | term \h:(v->t).\d:(v->t).\x:v. and_comp:(t->t->t)(d(x), h(x))
edge | 132 | nmod-att | deprel=nmod:att | term \h:(v->t).\d:t.\x:v. att:(t->t->t)(h(x), d)
edge | 133 | case | deprel=case | rapply
edge | 134 | acl | deprel=acl|acl:relcl:subj|acl:relcl:obj | term \h:(v->t).\d:(v->r->t).\x:v. and:(t->t->t)(h(x), d(x)(@edep:r))
edge | 135 | acl-inf | deprel=acl:inf | term \h:(v->t).\d:(v->r->t).\x:v. rel:(t->t->t)(h(x), d(_:v)(@edep:r))

# --- subordination ---
edge | 140 | mark-advcl-s1 | deprel=mark head_deprel=advcl head=VERB-S|VERB-DO|ADJ-PRED | term \h:(v->r->t).\d:(t->t->t).\s:v.\e:r.\m:t. d(h(s)(e))(m)
edge | 141 | mark-advcl-imp | deprel=mark head_deprel=advcl head=VERB-IMP | term \h:(r->t).\d:(t->t->t).\e:r.\m:t. d(h(e))(m)
edge | 142 | mark-advcl-s2 | deprel=mark head_deprel=advcl head=VERB-SO|VERB-RELO|VERB-DOI | term \h:(v->v->r->t).\d:(t->t->t).\a:v.\b:v.\e:r.\m:t. d(h(a)(b)(e))(m)
edge | 143 | mark-ignore | deprel=mark | ignore
edge | 150 | advcl-s1 | deprel=advcl head=VERB-S|VERB-DO|ADJ-PRED | term \h:(v->r->t).\d:(r->t->t).\s:v.\e:r. d(e)(h(s)(e))
edge | 151 | advcl-imp | deprel=advcl head=VERB-IMP | term \h:(r->t).\d:(r->t->t).\e:r. d(e)(h(e))
edge | 152 | advcl-s2 | deprel=advcl head=VERB-SO|VERB-RELO|VERB-DOI | term \h:(v->v->r->t).\d:(r->t->t).\a:v.\b:v.\e:r. d(e)(h(a)(b)(e))

# --- coordination and parataxis ---
edge | 160 | conj | deprel=conj | rapply
edge | 161 | cc-clause-comp | deprel=cc head=VERB*|ADJ-PRED* | term \h:(r->t).\d:(t->t->t).\f:(r->t).\e:r. d(f(e))(h(e))
edge | 162 | cc-np-comp | deprel=cc head=NOUN|NOUN-BARE|PROPN|PRON | term \h:v.\d:(v->v->v).\f:v. d(f)(h)
edge | 163 | parataxis | deprel=parataxis | term \h:(r->t).\d:(r->t).\e:r. and:(t->t->t)(h(e), d(e))

# --- edges with no semantic contribution ---
edge | 170 | cop-ignore | deprel=cop | ignore
edge | 171 | vocative | deprel=vocative|dislocated | ignore

# --- determinerless nominals close with the BARE quantifier ---
close | 180 | bare-close | upos=NOUN-BARE | term \h:(v->t). BARE:((v->t)->v)(h)
)RULES";
}

// ---------------------------------------------------------------------------
// Composition priorities: modifiers compose closest to the head, then
// determination, then function words, then core arguments (subject last so
// verb templates stay uniform), then coordination and parataxis.

std::string priorities_text() {
  return R"LIST(# composition order of a head's dependents (first composes first)
mwe
name
goeswith
advmod
amod
compound
nmod:att
acl
acl:inf
acl:relcl:subj
acl:relcl:obj
nummod
nmod:poss
det
case
nmod
mark
aux
auxpass
neg
cop
iobj
dobj
ccomp
ccomp:frel
dobj:comp
xcomp
advcl
nsubj
conj
cc
parataxis
discourse
vocative
)LIST";
}

}  // namespace ud2lf::defaults
