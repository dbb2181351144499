#include "support.hpp"

#include "tapo/error.hpp"

#include <gtest/gtest.h>

using namespace tapo;
using namespace tapo::testing;

namespace {

Signature sig() { return make_signature({"C", "D"}, {"r"}, {"a", "b"}, {"U", "V", "W", "X"}); }

// W <= V <= U, X unrelated
ContextPoset poset() {
    return ContextPoset::Builder().context("U").context("V").context("W").context("X").leq("V", "U").leq("W", "V").build();
}

Assertion as(const std::string& t) { return parse_assertion(t, sig()); }
Guard G(const std::string& t) { return parse_guard(t, sig()); }

GuardOptions literal() { return {GuardMode::Literal, nullptr, {}}; }

} // namespace

TEST(Assertion, ParseAndPrint) {
    Assertion a = as("a : C & !D @ U");
    ASSERT_TRUE(std::holds_alternative<ConceptAssertion>(a));
    EXPECT_EQ(std::get<ConceptAssertion>(a).concept_expr, Concept::conj(A("C"), Concept::negation(A("D"))));
    EXPECT_EQ(to_string(a), "a : C & !D @ U");
    Assertion r = as("(a, b) : r @ V");
    EXPECT_EQ(r, Assertion(RoleAssertion{"a", "b", "r", "V"}));
    EXPECT_EQ(to_string(r), "(a, b) : r @ V");
    EXPECT_EQ(as(to_string(r)), r);
}

TEST(Assertion, Errors) {
    EXPECT_THROW(as("z : C @ U"), Error);
    EXPECT_THROW(as("a : C @ Q"), Error);
    EXPECT_THROW(as("a : C"), Error);
    EXPECT_THROW(as("(a, U) : r @ U"), Error);
    EXPECT_THROW(as("(a, b) : C @ U"), Error);
    EXPECT_THROW(as("a : C @ U extra"), Error);
}

TEST(Saturate, Examples) {
    EXPECT_TRUE(saturate({}, poset()).empty());
    ABox a{as("a : C @ V")};
    ABox want{as("a : C @ V"), as("a : C @ W")};
    EXPECT_EQ(saturate(a, poset()), want);
    ABox r{as("(a, b) : r @ U")};
    EXPECT_EQ(saturate(r, poset()).size(), 3u);
    ABox x{as("a : D @ X")};
    EXPECT_EQ(saturate(x, poset()), x);
}

TEST(Saturate, ClosedIdempotentAndMatchesReference) {
    Gen g(61);
    std::vector<std::string> ctx{"U", "V", "W", "X"};
    std::vector<std::string> inds{"a", "b"};
    for (int i = 0; i < 200; ++i) {
        auto edges = g.edges_of(ctx, 0.5);
        ContextPoset p = Gen::build_poset(ctx, edges);
        ABox a;
        std::size_t n = g.below(6);
        for (std::size_t k = 0; k < n; ++k) {
            if (g.coin())
                a.insert(ConceptAssertion{g.pick(inds), g.concept_of(1, {"C", "D"}, {"r"}), g.pick(ctx)});
            else
                a.insert(RoleAssertion{g.pick(inds), g.pick(inds), "r", g.pick(ctx)});
        }
        ABox s = saturate(a, p);
        EXPECT_EQ(saturate(s, p), s);
        EXPECT_EQ(s, naive_saturate(a, edges));
        EXPECT_TRUE(std::includes(s.begin(), s.end(), a.begin(), a.end()));
    }
}

TEST(Guard, ParseAndPrint) {
    EXPECT_EQ(G("true"), Guard::truth());
    EXPECT_EQ(G("!false"), Guard::negation(Guard::falsity()));
    EXPECT_EQ(G("a : C @ U & (a, b) : r @ V"),
              Guard::conj(Guard::atom(as("a : C @ U")), Guard::atom(as("(a, b) : r @ V"))));
    EXPECT_EQ(G("C <= D"), Guard::subsume(A("C"), A("D")));
    EXPECT_EQ(G("(C <= D)"), Guard::subsume(A("C"), A("D")));
    EXPECT_EQ(G("(C & D) <= D | C"), Guard::subsume(Concept::conj(A("C"), A("D")), Concept::disj(A("D"), A("C"))));
    EXPECT_EQ(G("true | false"), Guard::disj(Guard::truth(), Guard::falsity()));
    EXPECT_EQ(G("(true)"), Guard::truth());
    for (const char* text : {"a : C @ U & !(C <= D)", "!(a : C @ U | true) & (a, a) : r @ X", "(!C <= D) & false",
                             "!!true", "exists r.C <= forall r.D"}) {
        Guard g = G(text);
        EXPECT_EQ(G(to_string(g)), g) << text << " -> " << to_string(g);
    }
    EXPECT_THROW(G("a : C"), Error);
    EXPECT_THROW(G("C <="), Error);
    EXPECT_THROW(G("true &"), Error);
    EXPECT_THROW(G("(true"), Error);
}

TEST(GuardSat, Examples) {
    KnowledgeState s{{}, {as("a : C @ U")}};
    EXPECT_TRUE(guard_sat(s, Guard::truth()));
    EXPECT_FALSE(guard_sat(s, Guard::falsity()));
    EXPECT_TRUE(guard_sat(s, G("a : C @ U"), literal()));
    ContextPoset p = poset();
    GuardOptions sat{GuardMode::Saturated, &p, {}};
    EXPECT_FALSE(guard_sat(s, G("a : C @ V"), literal()));
    EXPECT_TRUE(guard_sat(s, G("a : C @ V"), sat));
    EXPECT_TRUE(guard_sat(s, G("a : C @ W"), sat));
    EXPECT_FALSE(guard_sat(s, G("a : C @ X"), sat));
    EXPECT_FALSE(guard_sat(s, G("a : D @ U"), sat));
}

TEST(GuardSat, SubsumptionAtoms) {
    TBox t{{A("C"), A("D")}};
    KnowledgeState s{t, {}};
    EXPECT_TRUE(guard_sat(s, G("C <= D")));
    EXPECT_FALSE(guard_sat(s, G("D <= C")));
    EXPECT_TRUE(guard_sat(s, G("!(D <= C) & (C & D <= C)")));
    // the A-Box plays no part
    KnowledgeState s2{t, {as("a : C @ U"), as("a : !D @ U")}};
    EXPECT_TRUE(guard_sat(s2, G("C <= D")));
}

TEST(GuardSat, SaturatedModeRequiresPoset) {
    KnowledgeState s{{}, {as("a : C @ U")}};
    GuardOptions bad{GuardMode::Saturated, nullptr, {}};
    EXPECT_THROW(guard_sat(s, G("a : C @ V"), bad), Error);
}

TEST(GuardSat, Properties) {
    Gen g(67);
    std::vector<std::string> ctx{"U", "V", "W", "X"};
    std::vector<Assertion> atoms{as("a : C @ U"), as("a : C @ V"), as("a : C @ W"), as("(a, b) : r @ U"),
                                 as("(a, b) : r @ W"), as("b : D @ X"), as("b : D @ V")};
    ContextPoset p = poset();
    GuardOptions sat{GuardMode::Saturated, &p, {}};
    for (int i = 0; i < 200; ++i) {
        KnowledgeState s;
        for (const auto& x : atoms)
            if (g.coin(0.3)) s.abox.insert(x);
        KnowledgeState closed{s.tbox, saturate(s.abox, p)};
        for (const auto& x : atoms) {
            Guard a = Guard::atom(x);
            // literal on the closure = saturated on the original
            EXPECT_EQ(guard_sat(closed, a, literal()), guard_sat(s, a, sat));
            EXPECT_EQ(guard_sat(s, Guard::negation(Guard::negation(a))), guard_sat(s, a));
            EXPECT_EQ(guard_sat(s, Guard::conj(a, Guard::truth())), guard_sat(s, a));
            Guard b = Guard::atom(g.pick(atoms));
            EXPECT_EQ(guard_sat(s, Guard::disj(a, b)), guard_sat(s, a) || guard_sat(s, b));
        }
    }
}

TEST(CanonicalAbox, SortedLines) {
    ABox a{as("b : D @ U"), as("(a, b) : r @ V"), as("a : C @ U")};
    EXPECT_EQ(canonical_abox(a), "(a, b) : r @ V\na : C @ U\nb : D @ U\n");
    EXPECT_EQ(canonical_abox({}), "");
}
