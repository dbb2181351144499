#include "curated.hpp"
#include "support.hpp"

#include "tapo/error.hpp"

#include <gtest/gtest.h>

using namespace tapo;
using namespace tapo::testing;

namespace {

Signature sig() { return make_signature({"A", "B", "C", "D"}, {"r", "s"}); }
Concept P(const std::string& t) { return parse_concept(t, sig()); }

TBox tbox(const std::vector<std::pair<std::string, std::string>>& incs) {
    TBox t;
    for (const auto& [l, r] : incs) t.add(P(l), P(r));
    return t;
}

} // namespace

TEST(Satisfiability, Examples) {
    EXPECT_FALSE(is_satisfiable({}, Concept::bot()));
    EXPECT_FALSE(is_satisfiable({}, P("A & !A")));
    EXPECT_FALSE(is_satisfiable(tbox({{"A", "B"}}), P("A & !B")));
    EXPECT_TRUE(is_satisfiable({}, P("A & !B")));
    EXPECT_TRUE(is_satisfiable({}, Concept::top()));
    EXPECT_TRUE(is_satisfiable({}, P("exists r.A & forall r.B & forall s.!A")));
}

TEST(Satisfiability, CuratedUnsatSuite) {
    const auto& cases = curated_unsat();
    ASSERT_GE(cases.size(), 15u);
    for (const auto& c : cases) {
        SatResult r = check_satisfiability(tbox(c.tbox), P(c.concept_text));
        EXPECT_EQ(r.status, SatStatus::Unsatisfiable) << c.concept_text << " (" << c.why << ")";
    }
}

TEST(Satisfiability, CyclicTBoxNeedsBlocking) {
    // every A has an A-successor: only infinite unravellings, finite models by cycles
    TBox t = tbox({{"A", "exists r.A"}});
    EXPECT_TRUE(is_satisfiable(t, P("A")));
    TBox t2 = tbox({{"top", "exists r.top"}, {"top", "exists s.B"}});
    EXPECT_TRUE(is_satisfiable(t2, P("A & !B")));
}

TEST(Satisfiability, BudgetExhaustionIsItsOwnOutcome) {
    TBox t = tbox({{"top", "exists r.(A | B) & exists s.(C | D)"}});
    ReasonerOptions tight;
    tight.node_budget = 3;
    SatResult r = check_satisfiability(t, P("A"), tight);
    EXPECT_EQ(r.status, SatStatus::ResourceLimit);
    EXPECT_THROW(is_satisfiable(t, P("A"), tight), ResourceLimitError);
    EXPECT_THROW(subsumes(t, P("A"), P("B"), tight), ResourceLimitError);
    EXPECT_TRUE(is_satisfiable(t, P("A")));
}

TEST(Subsumption, Examples) {
    Gen g(3);
    for (int i = 0; i < 50; ++i) {
        Concept c = g.concept_of(3, {"A", "B", "C", "D"}, {"r", "s"});
        EXPECT_TRUE(subsumes({}, c, Concept::top()));
        EXPECT_TRUE(subsumes({}, Concept::bot(), c));
        EXPECT_TRUE(subsumes({}, c, c));
    }
    EXPECT_TRUE(subsumes(tbox({{"A", "B"}, {"B", "C"}}), P("A"), P("C")));
    EXPECT_FALSE(subsumes(tbox({{"A", "B"}, {"B", "C"}}), P("C"), P("A")));
    EXPECT_TRUE(subsumes({}, P("forall r.(A & B)"), P("forall r.A")));
    EXPECT_FALSE(subsumes({}, P("exists r.A"), P("forall r.A")));
}

TEST(Subsumption, ReflexiveAndTransitiveOnSamples) {
    Gen g(5);
    std::vector<std::string> cs{"A", "B", "C"}, rs{"r"};
    for (int i = 0; i < 200; ++i) {
        TBox t = g.tbox_of(2, 2, cs, rs);
        Concept a = g.concept_of(2, cs, rs), b = g.concept_of(2, cs, rs), c = g.concept_of(2, cs, rs);
        EXPECT_TRUE(subsumes(t, a, a));
        if (subsumes(t, a, b) && subsumes(t, b, c)) {
            EXPECT_TRUE(subsumes(t, a, c)) << to_string(a) << " / " << to_string(b) << " / " << to_string(c);
        }
    }
}

TEST(Satisfiability, Deterministic) {
    Gen g(7);
    for (int i = 0; i < 100; ++i) {
        TBox t = g.tbox_of(2, 3, {"A", "B", "C"}, {"r", "s"});
        Concept c = g.concept_of(3, {"A", "B", "C"}, {"r", "s"});
        SatResult r1 = check_satisfiability(t, c), r2 = check_satisfiability(t, c);
        EXPECT_EQ(r1.status, r2.status);
        EXPECT_EQ(r1.nodes, r2.nodes);
    }
}

// The reference enumerator visits every interpretation over a tiny signature;
// any witness it finds must be matched by the tableau.
TEST(Satisfiability, SoundAgainstExhaustiveSmallModels) {
    std::vector<std::string> cs{"A", "B"}, rs{"r"};
    std::vector<FiniteModel> all;
    naive_interpretations(cs, rs, 2, [&](const FiniteModel& m) { all.push_back(m); });
    ASSERT_EQ(all.size(), 8u + 256u); // 2^(2+1) + 2^(4+4)
    Gen g(13);
    int witnessed = 0;
    for (int i = 0; i < 300; ++i) {
        TBox t = g.tbox_of(2, 2, cs, rs);
        Concept c = g.concept_of(3, cs, rs);
        bool found = false;
        for (const auto& m : all)
            if (naive_models(m, t) && !naive_ext(m, c).empty()) {
                found = true;
                break;
            }
        witnessed += found;
        if (found) {
            EXPECT_TRUE(is_satisfiable(t, c)) << to_string(c);
        }
    }
    EXPECT_GT(witnessed, 100);
}

TEST(TBox, SetSemanticsEquality) {
    TBox a = tbox({{"A", "B"}, {"B", "C"}}), b = tbox({{"B", "C"}, {"A", "B"}, {"A", "B"}});
    EXPECT_EQ(a, b);
    EXPECT_NE(a, tbox({{"A", "B"}}));
}
