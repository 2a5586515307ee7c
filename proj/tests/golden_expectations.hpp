// Hand-written expected logical forms for the bundled golden corpus and the
// known-limitation suite.  Comparison is up to alpha-equivalence; expected
// strings use the same surface syntax parse_lf accepts.
#pragma once

#include <string>
#include <vector>

struct ExpectedLf {
  std::string sentence_id;
  std::string lf;  // empty means the sentence must fail to convert
  std::string failure_code;  // non-empty: required failure code ("" = any)
};

inline const std::vector<ExpectedLf>& golden_expectations() {
  static const std::vector<ExpectedLf> table = {
      {"g01", "lambda e1:r. found(you:v, it:v, e1)", ""},
      {"g02", "lambda e1:r. a(it:v, raccoon(it:v, e1))", ""},
      {"g03",
       "lambda e1:r. a(my(lambda x:v. pet(x)), raccoon(my(lambda x:v. pet(x)), "
       "e1))",
       ""},
      {"g04",
       "lambda e1:r. show(you:v, a(lambda x:v. and_comp(space(x), boat(x))), "
       "me:v, e1)",
       ""},
      {"g05", "lambda e1:r. nice(this(lambda x:v. carpenter(x)), e1)", ""},
      {"g06", "lambda e1:r. sorry(I:v, go(I:v, e2:r), e1)", ""},
      {"g07", "lambda e1:r. gave(you:v, the(lambda x:v. box(x)), Ursula:v, e1)",
       ""},
      {"g08", "lambda e1:r. heard(Mommy:v, it:v, e1)", ""},
      {"g09",
       "lambda e1:r. said(Daddy:v, return(_:v, the(lambda x:v. pen(x)), e2:r), "
       "e1)",
       ""},
      {"g10", "lambda e1:r. drink(you:v, the(lambda x:v. juice(x)), e1)", ""},
      {"g11", "lambda e1:r. can(write(he:v, e1), e1)", ""},
      {"g12", "lambda e1:r. could(be(writing(he:v, e1), e1), e1)", ""},
      {"g13", "lambda e1:r. came_off(the(lambda x:v. paint(x)), e1)", ""},
      {"g14",
       "lambda e1:r. and(picks(it:v, the(lambda x:v. dirt(x)), e1), up(e1))",
       ""},
      {"g15", "lambda e1:r. get(you:v, two(lambda x:v. pennies(x)), e1)", ""},
      {"g16", "lambda e1:r. and(tried(she:v, e1), again(e1))", ""},
      {"g17", "a(lambda x:v. and(very(kind(x)), boy(x)))", ""},
      {"g18", "lambda e1:r. and(played(he:v, e1), with(Paul:v, e1))", ""},
      {"g19",
       "the(lambda x:v. att(juice(x), on(your(lambda y:v. shirt(y)))))", ""},
      {"g20", "lambda e1:r. from(Pinocchio:v, that:v, e1)", ""},
      {"g21",
       "lambda e1:r. saw(we:v, those(lambda x:v. and(mirrors(x), liked(you:v, "
       "x, e2:r))), e1)",
       ""},
      {"g22",
       "the(lambda x:v. and(drum(x), were(playing(you:v, x, e1:r), e1:r)))",
       ""},
      {"g23",
       "lambda e1:r. heard(you:v, what(lambda x:v. said(I:v, x, e2:r)), e1)",
       ""},
      {"g24", "lambda e1:r. think(I:v, can(talk(he:v, e2:r), e2:r), e1)", ""},
      {"g25",
       "lambda e1:r. wants(he:v, take(you:v, a(lambda x:v. nap(x)), e2:r), e1)",
       ""},
      {"g26", "lambda e1:r. when(happy(she:v, e1), sings(she:v, e1))", ""},
      {"g27",
       "lambda e1:r. saw(you:v, a(lambda x:v. and(tree(x), dancing(x, e2:r))), "
       "e1)",
       ""},
      {"g28",
       "lambda e1:r. showed(you:v, the(lambda x:v. rel(way(x), play(_:v, "
       "the(lambda y:v. game(y)), e2:r))), me:v, e1)",
       ""},
      {"g29",
       "lambda e1:r. not(do(have(I:v, any(lambda x:v. sugar(x)), e1), e1), e1)",
       ""},
      {"g30", "lambda e1:r. no(I:v, clown(I:v, e1))", ""},
      {"g31",
       "lambda e1:r. Q(do(have(you:v, a(lambda x:v. doll(x)), e1), e1))", ""},
      {"g32", "WH(lambda x:v. lambda e1:r. did(take(you:v, x, e1), e1))", ""},
      {"g33",
       "WH(lambda w:((v->t)->v). lambda e1:r. are(writing(you:v, w(lambda y:v. "
       "name(y)), e1), e1))",
       ""},
      {"g34",
       "lambda e1:r. had(he:v, or(a(lambda x:v. fever(x)), a(lambda y:v. "
       "cold(y))), e1)",
       ""},
      {"g35",
       "lambda e1:r. and(get(you:v, a(lambda x:v. kleenex(x)), e1), wipe(you:v, "
       "your(lambda y:v. mouth(y)), e1))",
       ""},
      {"g36", "lambda e1:r. and(find(you:v, it:v, e1), bring(you:v, it:v, e1))",
       ""},
      {"g37",
       "lambda e1:r. and(wait(you:v, e1), forgot(we:v, your(lambda x:v. "
       "snack(x)), e1))",
       ""},
      {"g38",
       "lambda e1:r. pick_up(you:v, that(lambda x:v. and(blue(x), pencil(x))), "
       "e1)",
       ""},
      {"x01", "lambda e1:r. runs(Adam:v, e1)", ""},
      {"x02", "lambda e1:r. sings(she:v, e1)", ""},
      {"f01", "", ""},
      {"f02", "", ""},
      {"f03", "", "residual-X/dep"},
      {"f04", "", "residual-X/dep"},
      {"f05", "", "residual-X/dep"},
      {"f06", "", "no-rule-for-edge"},
      {"f07", "", "no-rule-for-edge"},
      {"f08", "", "no-rule-for-edge"},
      {"f09", "", "no-rule-for-edge"},
      {"f10", "", "no-rule-for-edge"},
  };
  return table;
}

inline const std::vector<ExpectedLf>& limitation_expectations() {
  static const std::vector<ExpectedLf> table = {
      {"L1",
       "lambda e1:r. and(saw(you:v, a(lambda x:v. clown(x)), e1), ran(you:v, "
       "a(lambda y:v. clown(y)), e1))",
       ""},
      {"L2", "lambda e1:r. will(and(stop(somebody:v, e1), maybe(e1)), e1)", ""},
      {"L3",
       "lambda e1:r. got(you:v, and(BARE(lambda x:v. and(chocolate(x), "
       "eggs(x))), BARE(lambda y:v. bunnies(y))), e1)",
       ""},
      {"L4", "lambda e1:r. asked(Mommy:v, come(you:v, e2:r), e1)", ""},
      {"L5", "lambda e1:r. and(see(you:v, you:v, e1), later(e1))", ""},
      {"L6", "", ""},
  };
  return table;
}
