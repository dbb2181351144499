#include "support.hpp"

#include "tapo/error.hpp"

#include <gtest/gtest.h>

using namespace tapo;
using namespace tapo::testing;

namespace {

// W <= V <= U, X incomparable
ContextPoset chain() {
    return ContextPoset::Builder().context("U").context("V").context("W").context("X").leq("V", "U").leq("W", "V").build();
}

// L, R both above B1 and B2; B1, B2 incomparable
ContextPoset diamond() {
    return ContextPoset::Builder()
        .context("L").context("R").context("B1").context("B2")
        .leq("B1", "L").leq("B1", "R").leq("B2", "L").leq("B2", "R")
        .build();
}

} // namespace

TEST(ContextOrder, ReflexiveTransitive) {
    ContextPoset p = chain();
    EXPECT_TRUE(p.leq("U", "U"));
    EXPECT_TRUE(p.leq("W", "U"));
    EXPECT_FALSE(p.leq("U", "W"));
    EXPECT_FALSE(p.leq("X", "U"));
    EXPECT_FALSE(p.leq("U", "X"));
    EXPECT_THROW(p.leq("U", "Nope"), Error);
}

TEST(ContextOrder, CyclesAndUndeclaredNamesRejected) {
    EXPECT_THROW(ContextPoset::Builder().context("U").context("V").leq("U", "V").leq("V", "U").build(), Error);
    EXPECT_THROW(ContextPoset::Builder().context("U").leq("U", "V").build(), Error);
    EXPECT_THROW(ContextPoset::Builder().context("U").context("U").build(), Error);
    try {
        ContextPoset::Builder().context("A").context("B").context("C").leq("A", "B").leq("B", "C").leq("C", "A").build();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Validation);
        EXPECT_NE(e.message().find("cycle"), std::string::npos) << e.message();
    }
}

TEST(ContextMeet, Examples) {
    ContextPoset p = chain();
    EXPECT_EQ(p.meet("U", "U"), "U");
    EXPECT_EQ(p.meet("V", "U"), "V");
    EXPECT_EQ(p.meet("U", "W"), "W");
    EXPECT_EQ(p.meet("U", "X"), std::nullopt);
    EXPECT_EQ(diamond().meet("L", "R"), std::nullopt);
    EXPECT_EQ(diamond().meet("B1", "B2"), std::nullopt);
}

TEST(ContextMeet, DiamondWithBottomHasNoMeetAboveIt) {
    // adding a common bottom does not help: B1 and B2 are still both maximal
    ContextPoset p = ContextPoset::Builder()
                         .context("L").context("R").context("B1").context("B2").context("Z")
                         .leq("B1", "L").leq("B1", "R").leq("B2", "L").leq("B2", "R").leq("Z", "B1").leq("Z", "B2")
                         .build();
    EXPECT_EQ(p.meet("L", "R"), std::nullopt);
    EXPECT_EQ(p.meet("B1", "B2"), "Z");
}

TEST(ContextMeet, GreatestLowerBoundOnRandomPosets) {
    Gen g(51);
    std::vector<std::string> names{"C0", "C1", "C2", "C3", "C4", "C5"};
    for (int i = 0; i < 200; ++i) {
        ContextPoset p = g.poset_of(names, 0.4);
        for (const auto& u : names)
            for (const auto& v : names) {
                // reference: lower bounds by scan, greatest by scan
                std::vector<std::string> lower, greatest;
                for (const auto& w : names)
                    if (p.leq(w, u) && p.leq(w, v)) lower.push_back(w);
                for (const auto& w : lower) {
                    bool top = true;
                    for (const auto& z : lower) top = top && p.leq(z, w);
                    if (top) greatest.push_back(w);
                }
                auto m = p.meet(u, v);
                if (greatest.size() == 1) {
                    ASSERT_TRUE(m.has_value());
                    EXPECT_EQ(*m, greatest[0]);
                    EXPECT_TRUE(p.leq(*m, u) && p.leq(*m, v));
                } else {
                    EXPECT_FALSE(m.has_value());
                }
                EXPECT_EQ(p.meet(u, v), p.meet(v, u));
            }
    }
}

TEST(ContextOrder, ClosureMatchesPathSearchAndIsIdempotent) {
    Gen g(53);
    std::vector<std::string> names{"C0", "C1", "C2", "C3", "C4", "C5", "C6"};
    for (int i = 0; i < 100; ++i) {
        auto edges = g.edges_of(names, 0.3);
        ContextPoset p = Gen::build_poset(names, edges);
        for (const auto& from : names) {
            // depth-first reachability along declared edges
            std::set<std::string> seen{from};
            std::vector<std::string> stack{from};
            while (!stack.empty()) {
                std::string x = stack.back();
                stack.pop_back();
                for (const auto& [sub, super] : edges)
                    if (sub == x && seen.insert(super).second) stack.push_back(super);
            }
            for (const auto& to : names) EXPECT_EQ(p.leq(from, to), seen.count(to) != 0) << from << " " << to;
        }
        EXPECT_EQ(p.reclosed().strict_pairs(), p.strict_pairs());
    }
}

TEST(Covering, Validation) {
    ContextPoset p = chain();
    EXPECT_TRUE(validate_covering(p, {"U", {"U"}}).empty());
    EXPECT_TRUE(validate_covering(p, {"U", {"V", "W"}}).empty());

    auto bad = validate_covering(p, {"U", {"X"}});
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0].member, "X");

    auto empty = validate_covering(p, {"U", {}});
    ASSERT_EQ(empty.size(), 1u);
    EXPECT_EQ(empty[0].message, "empty covering");

    auto dup = validate_covering(p, {"U", {"V", "V"}});
    ASSERT_FALSE(dup.empty());
    EXPECT_EQ(dup[0].member, "V");

    EXPECT_FALSE(validate_covering(p, {"U", {"Q"}}).empty());
    EXPECT_FALSE(validate_covering(p, {"Q", {"U"}}).empty());
    EXPECT_EQ(to_string(Covering{"U", {"V", "W"}}), "cover U by V, W");
}
