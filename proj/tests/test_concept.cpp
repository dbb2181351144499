#include "support.hpp"

#include "tapo/error.hpp"
#include "tapo/lexer.hpp"

#include <gtest/gtest.h>

using namespace tapo;
using namespace tapo::testing;

namespace {

Signature sig() { return make_signature({"A", "B", "C"}, {"r", "s"}, {"a", "b"}, {"U", "V"}); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Runtime;
}

} // namespace

TEST(Signature, NameSetsAreDisjoint) {
    Signature s;
    s.declare(NameKind::Concept, "A");
    EXPECT_THROW(s.declare(NameKind::Role, "A"), Error);
    EXPECT_THROW(s.declare(NameKind::Concept, "A"), Error);
    EXPECT_THROW(s.declare(NameKind::Individual, "9a"), Error);
    EXPECT_THROW(s.declare(NameKind::Individual, ""), Error);
    EXPECT_THROW(s.declare(NameKind::Concept, "exists"), Error);
    s.declare(NameKind::Individual, "a_1");
    NameKind k;
    ASSERT_TRUE(s.lookup("a_1", k));
    EXPECT_EQ(k, NameKind::Individual);
}

TEST(Signature, HashFollowsContent) {
    Signature a = sig(), b = sig();
    EXPECT_EQ(a.hash(), b.hash());
    b.declare(NameKind::Concept, "D");
    EXPECT_NE(a.hash(), b.hash());
}

TEST(ParseConcept, Top) { EXPECT_EQ(parse_concept("top", sig()), Concept::top()); }

TEST(ParseConcept, ExistsOverConjunction) {
    Concept want = Concept::exists("r", Concept::conj(A("A"), Concept::negation(A("B"))));
    EXPECT_EQ(parse_concept("exists r.(A & !B)", sig()), want);
}

TEST(ParseConcept, DanglingOperatorIsSyntaxErrorAtEnd) {
    try {
        parse_concept("A &", sig());
        FAIL() << "expected a syntax error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Syntax);
        EXPECT_EQ(e.pos().line, 1u);
        EXPECT_EQ(e.pos().column, 4u);
        EXPECT_NE(e.message().find("end of input"), std::string::npos) << e.message();
    }
}

TEST(ParseConcept, Precedence) {
    // ! > quantifiers > & > |
    EXPECT_EQ(parse_concept("A | B & C", sig()), Concept::disj(A("A"), Concept::conj(A("B"), A("C"))));
    EXPECT_EQ(parse_concept("!A & B", sig()), Concept::conj(Concept::negation(A("A")), A("B")));
    EXPECT_EQ(parse_concept("exists r.A & B", sig()), Concept::conj(Concept::exists("r", A("A")), A("B")));
    EXPECT_EQ(parse_concept("A & B & C", sig()), Concept::conj(Concept::conj(A("A"), A("B")), A("C")));
    EXPECT_EQ(parse_concept("forall s.!exists r.bot", sig()),
              Concept::forall("s", Concept::negation(Concept::exists("r", Concept::bot()))));
}

TEST(ParseConcept, Errors) {
    Signature s = sig();
    EXPECT_EQ(kind_of([&] { parse_concept("D", s); }), ErrorKind::UnknownName);
    EXPECT_EQ(kind_of([&] { parse_concept("exists A.B", s); }), ErrorKind::UnknownName);
    EXPECT_EQ(kind_of([&] { parse_concept("exists r.U", s); }), ErrorKind::UnknownName);
    EXPECT_EQ(kind_of([&] { parse_concept("A $ B", s); }), ErrorKind::Lexical);
    EXPECT_EQ(kind_of([&] { parse_concept("(A", s); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([&] { parse_concept("A B", s); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([&] { parse_concept("", s); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([&] { parse_concept("exists r A", s); }), ErrorKind::Syntax);
}

TEST(ParseConcept, ErrorPositionsCountLines) {
    try {
        parse_concept("A &\n  (B |\n   Q)", sig());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.pos().line, 3u);
        EXPECT_EQ(e.pos().column, 4u);
    }
}

TEST(ParseConcept, RoundTripOnRandomConcepts) {
    Gen g(11);
    Signature s = sig();
    for (int i = 0; i < 2000; ++i) {
        Concept c = g.concept_of(5, {"A", "B", "C"}, {"r", "s"});
        std::string text = to_string(c);
        EXPECT_EQ(parse_concept(text, s), c) << text;
    }
}

TEST(ParseConcept, PrinterUsesMinimalParens) {
    EXPECT_EQ(to_string(parse_concept("(A & B) | C", sig())), "A & B | C");
    EXPECT_EQ(to_string(parse_concept("A & (B | C)", sig())), "A & (B | C)");
    EXPECT_EQ(to_string(parse_concept("A | (B | C)", sig())), "A | (B | C)");
    EXPECT_EQ(to_string(parse_concept("!(exists r.A)", sig())), "!exists r.A");
}

TEST(Nnf, Examples) {
    EXPECT_EQ(nnf(Concept::negation(Concept::top())), Concept::bot());
    EXPECT_EQ(nnf(Concept::negation(Concept::conj(A("A"), A("B")))),
              Concept::disj(Concept::negation(A("A")), Concept::negation(A("B"))));
    Concept c = Concept::conj(A("A"), Concept::negation(A("B")));
    EXPECT_EQ(nnf(Concept::negation(Concept::exists("r", c))),
              Concept::forall("r", nnf(Concept::negation(c))));
}

namespace {

bool negations_only_on_atoms(const Concept& c) {
    switch (c.kind()) {
    case Concept::Kind::Not: return c.child().kind() == Concept::Kind::Atomic;
    case Concept::Kind::And:
    case Concept::Kind::Or: return negations_only_on_atoms(c.left()) && negations_only_on_atoms(c.right());
    case Concept::Kind::Exists:
    case Concept::Kind::Forall: return negations_only_on_atoms(c.child());
    default: return true;
    }
}

} // namespace

TEST(Nnf, ShapeIdempotenceAndEquivalence) {
    Gen g(23);
    std::vector<std::string> cs{"A", "B"}, rs{"r"};
    // models of a 2-element domain serve as the equivalence check
    std::vector<FiniteModel> models;
    naive_interpretations(cs, rs, 2, [&](const FiniteModel& m) { models.push_back(m); });
    for (int i = 0; i < 300; ++i) {
        Concept c = g.concept_of(4, cs, rs);
        Concept n = nnf(c);
        EXPECT_TRUE(negations_only_on_atoms(n)) << to_string(n);
        EXPECT_EQ(nnf(n), n);
        for (const auto& m : models) ASSERT_EQ(naive_ext(m, c), naive_ext(m, n)) << to_string(c);
    }
}

TEST(Nnf, PreservesSatisfiability) {
    Gen g(29);
    for (int i = 0; i < 300; ++i) {
        Concept c = g.concept_of(4, {"A", "B", "C"}, {"r", "s"});
        EXPECT_EQ(is_satisfiable({}, c), is_satisfiable({}, nnf(c))) << to_string(c);
    }
}

TEST(Subconcepts, Examples) {
    EXPECT_EQ(subconcepts(Concept::top()), std::set<Concept>{Concept::top()});
    Concept ab = Concept::conj(A("A"), A("B"));
    EXPECT_EQ(subconcepts(ab), (std::set<Concept>{ab, A("A"), A("B")}));
    Concept e = Concept::exists("r", Concept::negation(A("A")));
    EXPECT_EQ(subconcepts(e), (std::set<Concept>{e, Concept::negation(A("A")), A("A")}));
}

TEST(Subconcepts, BoundedByNodeCountAndClosed) {
    Gen g(31);
    for (int i = 0; i < 300; ++i) {
        Concept c = g.concept_of(5, {"A", "B"}, {"r"});
        auto subs = subconcepts(c);
        EXPECT_LE(subs.size(), c.node_count());
        EXPECT_TRUE(subs.count(c));
        for (const auto& d : subs) {
            if (d.is_binary()) {
                EXPECT_TRUE(subs.count(d.left()));
                EXPECT_TRUE(subs.count(d.right()));
            } else if (d.kind() == Concept::Kind::Not || d.is_quantifier()) {
                EXPECT_TRUE(subs.count(d.child()));
            }
        }
    }
}

TEST(Concept, StructuralEqualityIsNotCommutative) {
    EXPECT_NE(Concept::conj(A("A"), A("B")), Concept::conj(A("B"), A("A")));
    EXPECT_EQ(Concept::conj(A("A"), A("B")), parse_concept("A & B", sig()));
}

TEST(Lexer, CommentsAndPositions) {
    auto toks = tokenize("A # comment & !\n  & B");
    ASSERT_EQ(toks.size(), 4u);
    EXPECT_EQ(toks[1].kind, Tok::Amp);
    EXPECT_EQ(toks[1].pos.line, 2u);
    EXPECT_EQ(toks[1].pos.column, 3u);
    EXPECT_EQ(toks[3].kind, Tok::End);
}
