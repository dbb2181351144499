#pragma once

// Test helpers: signatures, random generators, and reference oracles that
// recompute results from the definitions without going through the engine
// code they check.

#include "tapo/concept.hpp"
#include "tapo/context.hpp"
#include "tapo/kb.hpp"
#include "tapo/models.hpp"
#include "tapo/pbox.hpp"
#include "tapo/reasoner.hpp"
#include "tapo/sheaf.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tapo::testing {

inline Signature make_signature(const std::vector<std::string>& concepts,
                                const std::vector<std::string>& roles = {},
                                const std::vector<std::string>& individuals = {},
                                const std::vector<std::string>& contexts = {}) {
    Signature s;
    for (const auto& n : concepts) s.declare(NameKind::Concept, n);
    for (const auto& n : roles) s.declare(NameKind::Role, n);
    for (const auto& n : individuals) s.declare(NameKind::Individual, n);
    for (const auto& n : contexts) s.declare(NameKind::Context, n);
    return s;
}

inline Concept A(const std::string& n) { return Concept::atomic(n); }

inline std::vector<std::string> names_of(const std::set<std::string, std::less<>>& s) {
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// random generation

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

    /// Concept of depth <= `depth` (a leaf has depth 0).
    Concept concept_of(std::size_t depth, const std::vector<std::string>& cs, const std::vector<std::string>& rs) {
        if (depth == 0 || coin(0.25)) {
            switch (below(6)) {
            case 0: return Concept::top();
            case 1: return Concept::bot();
            default: return Concept::atomic(pick(cs));
            }
        }
        std::size_t k = below(rs.empty() ? 3 : 5);
        switch (k) {
        case 0: return Concept::conj(concept_of(depth - 1, cs, rs), concept_of(depth - 1, cs, rs));
        case 1: return Concept::disj(concept_of(depth - 1, cs, rs), concept_of(depth - 1, cs, rs));
        case 2: return Concept::negation(concept_of(depth - 1, cs, rs));
        case 3: return Concept::exists(pick(rs), concept_of(depth - 1, cs, rs));
        default: return Concept::forall(pick(rs), concept_of(depth - 1, cs, rs));
        }
    }

    TBox tbox_of(std::size_t max_inclusions, std::size_t depth, const std::vector<std::string>& cs,
                 const std::vector<std::string>& rs) {
        TBox t;
        std::size_t n = below(max_inclusions + 1);
        for (std::size_t i = 0; i < n; ++i)
            t.add(concept_of(depth, cs, rs), concept_of(depth, cs, rs));
        return t;
    }

    /// Random DAG over `names`: declared (sub, super) edges only run from
    /// later to earlier names, so the order is acyclic by construction.
    std::vector<std::pair<std::string, std::string>> edges_of(const std::vector<std::string>& names,
                                                              double edge_p = 0.35) {
        std::vector<std::pair<std::string, std::string>> e;
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (coin(edge_p)) e.emplace_back(names[i], names[j]);
        return e;
    }

    ContextPoset poset_of(const std::vector<std::string>& names, double edge_p = 0.35) {
        return build_poset(names, edges_of(names, edge_p));
    }

    static ContextPoset build_poset(const std::vector<std::string>& names,
                                    const std::vector<std::pair<std::string, std::string>>& edges) {
        ContextPoset::Builder b;
        for (const auto& n : names) b.context(n);
        for (const auto& [sub, super] : edges) b.leq(sub, super);
        return b.build();
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// reference semantics for concepts

using Ext = std::set<int>;

inline Ext naive_ext(const FiniteModel& m, const Concept& c) {
    Ext out;
    for (int x : m.domain) {
        bool in = false;
        switch (c.kind()) {
        case Concept::Kind::Top: in = true; break;
        case Concept::Kind::Bot: in = false; break;
        case Concept::Kind::Atomic: {
            auto it = m.concept_ext.find(c.name());
            in = it != m.concept_ext.end() && it->second.count(x);
            break;
        }
        case Concept::Kind::And: in = naive_ext(m, c.left()).count(x) && naive_ext(m, c.right()).count(x); break;
        case Concept::Kind::Or: in = naive_ext(m, c.left()).count(x) || naive_ext(m, c.right()).count(x); break;
        case Concept::Kind::Not: in = !naive_ext(m, c.child()).count(x); break;
        case Concept::Kind::Exists:
        case Concept::Kind::Forall: {
            Ext filler = naive_ext(m, c.child());
            bool exists = false, all = true;
            auto r = m.role_ext.find(c.name());
            if (r != m.role_ext.end())
                for (auto [a, b] : r->second)
                    if (a == x) {
                        exists = exists || filler.count(b);
                        all = all && filler.count(b);
                    }
            in = c.kind() == Concept::Kind::Exists ? exists : all;
            break;
        }
        }
        if (in) out.insert(x);
    }
    return out;
}

inline bool naive_models(const FiniteModel& m, const TBox& t) {
    for (const auto& inc : t.inclusions()) {
        Ext l = naive_ext(m, inc.lhs), r = naive_ext(m, inc.rhs);
        if (!std::includes(r.begin(), r.end(), l.begin(), l.end())) return false;
    }
    return true;
}

/// Every interpretation over domains {1..k}, k <= max_size, in no particular
/// order. Only for tiny signatures.
inline void naive_interpretations(const std::vector<std::string>& cs, const std::vector<std::string>& rs,
                                  int max_size, const std::function<void(const FiniteModel&)>& visit) {
    for (int k = 1; k <= max_size; ++k) {
        std::vector<std::pair<int, int>> pairs;
        for (int x = 1; x <= k; ++x)
            for (int y = 1; y <= k; ++y) pairs.emplace_back(x, y);
        std::size_t cbits = cs.size() * k, rbits = rs.size() * pairs.size();
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << (cbits + rbits)); ++code) {
            FiniteModel m;
            for (int x = 1; x <= k; ++x) m.domain.insert(x);
            std::size_t bit = 0;
            for (const auto& c : cs) {
                auto& e = m.concept_ext[c];
                for (int x = 1; x <= k; ++x, ++bit)
                    if (code >> bit & 1) e.insert(x);
            }
            for (const auto& r : rs) {
                auto& e = m.role_ext[r];
                for (auto p : pairs) {
                    if (code >> bit & 1) e.insert(p);
                    ++bit;
                }
            }
            visit(m);
        }
    }
}

// ---------------------------------------------------------------------------
// reference saturation: push assertions down declared edges one step at a
// time until nothing changes

inline ABox naive_saturate(const ABox& a, const std::vector<std::pair<std::string, std::string>>& edges) {
    ABox cur = a;
    for (bool changed = true; changed;) {
        changed = false;
        ABox next = cur;
        for (const auto& x : cur)
            for (const auto& [sub, super] : edges)
                if (context_of(x) == super) changed |= next.insert(with_context(x, sub)).second;
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// reference gluing: try all 2^n subsets of the target universe

struct BruteGlue {
    bool compatible = true;
    std::vector<FactSet> candidates;
};

inline FactSet intersect(const FactSet& a, const FactSet& b) {
    FactSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline BruteGlue brute_glue(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov) {
    BruteGlue out;
    const auto& P = ps.poset();
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            // unique greatest lower bound, recomputed by scanning
            std::vector<std::string> lower;
            for (const auto& w : P.contexts())
                if (P.leq(w, family[i].context) && P.leq(w, family[j].context)) lower.push_back(w);
            std::vector<std::string> greatest;
            for (const auto& w : lower)
                if (std::all_of(lower.begin(), lower.end(), [&](const std::string& z) { return P.leq(z, w); }))
                    greatest.push_back(w);
            if (greatest.size() != 1) continue;
            const FactSet& u = ps.universe(greatest[0]);
            if (intersect(family[i].facts, u) != intersect(family[j].facts, u)) out.compatible = false;
        }
    if (!out.compatible) return out;
    std::vector<Fact> universe(ps.universe(cov.target).begin(), ps.universe(cov.target).end());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
        FactSet t;
        for (std::size_t b = 0; b < universe.size(); ++b)
            if (mask >> b & 1) t.insert(universe[b]);
        bool ok = true;
        for (const auto& s : family)
            ok = ok && intersect(t, ps.universe(s.context)) == s.facts;
        if (ok) out.candidates.push_back(t);
    }
    std::sort(out.candidates.begin(), out.candidates.end());
    return out;
}

// ---------------------------------------------------------------------------
// random gluing problems: up to 5 contexts, target universe up to 12 facts

inline std::vector<Fact> fact_pool() {
    std::vector<Fact> pool;
    for (const char* i : {"a", "b", "c"})
        for (const char* c : {"P", "Q"}) pool.push_back(ConceptFact{i, c});
    for (auto [x, y] : std::vector<std::pair<const char*, const char*>>{
             {"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "a"}, {"b", "a"}, {"a", "a"}})
        pool.push_back(RoleFact{x, y, "r"});
    return pool;
}

struct GluingInstance {
    Presheaf ps;
    Covering cov;
    std::vector<Section> family;
};

inline FactSet random_subset(Gen& g, const std::vector<Fact>& from, double p) {
    FactSet out;
    for (const auto& f : from)
        if (g.coin(p)) out.insert(f);
    return out;
}

/// With `monotone`, universe(W) is a subset of universe(V) whenever W <= V,
/// which is what restriction by intersection needs to be functorial.
inline GluingInstance random_gluing_instance(Gen& g, bool monotone = false) {
    std::size_t n = 2 + g.below(4); // 2..5 contexts, C0 is the target
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("C" + std::to_string(i));
    auto edges = g.edges_of(names, 0.4);
    std::vector<std::string> members;
    for (std::size_t i = 1; i < n; ++i)
        if (g.coin(0.7)) {
            members.push_back(names[i]);
            edges.emplace_back(names[i], "C0");
        }
    if (members.empty()) members.push_back(g.coin(0.2) ? "C0" : names[1]);
    if (members[0] != "C0") edges.emplace_back(members[0], "C0");

    GluingInstance inst{Presheaf(Gen::build_poset(names, edges)), {"C0", members}, {}};
    auto pool = fact_pool();
    std::vector<Fact> top_pool;
    for (const auto& f : pool)
        if (g.coin(0.6)) top_pool.push_back(f);
    inst.ps.set_universe("C0", FactSet(top_pool.begin(), top_pool.end()));
    const auto& P = inst.ps.poset();
    for (std::size_t i = 1; i < n; ++i) {
        // mostly drawn from the target's universe, sometimes beyond it
        FactSet u = random_subset(g, top_pool, 0.6);
        if (!monotone && g.coin(0.2)) u.insert(g.pick(pool));
        if (monotone) // every context above has a smaller index
            for (std::size_t j = 0; j < i; ++j)
                if (P.leq(names[i], names[j])) u = intersect(u, inst.ps.universe(names[j]));
        inst.ps.set_universe(names[i], u);
    }
    // half the time the family comes from one global section
    FactSet global = random_subset(g, top_pool, 0.5);
    bool coherent = g.coin(0.5);
    for (const auto& m : members) {
        std::vector<Fact> u(inst.ps.universe(m).begin(), inst.ps.universe(m).end());
        FactSet facts = coherent ? intersect(global, inst.ps.universe(m)) : random_subset(g, u, 0.5);
        inst.family.push_back({m, facts});
    }
    return inst;
}

// ---------------------------------------------------------------------------
// reference big-step semantics: search for derivations instead of running
// the program. Returns every (final A-Box, rule count) with at most `budget`
// rule applications, over A-Boxes drawn from subsets of `universe`.

struct Derivation {
    ABox result;
    std::size_t rules;
    auto operator<=>(const Derivation&) const = default;
};

inline bool ref_guard(const ABox& a, const Guard& g, const TBox& t) {
    switch (g.kind()) {
    case Guard::Kind::True: return true;
    case Guard::Kind::False: return false;
    case Guard::Kind::Atom: return a.count(g.assertion()) != 0;
    case Guard::Kind::Subsume: return subsumes(t, g.sub(), g.super());
    case Guard::Kind::Not: return !ref_guard(a, g.child(), t);
    case Guard::Kind::And: return ref_guard(a, g.left(), t) && ref_guard(a, g.right(), t);
    }
    return false;
}

inline std::set<Derivation> derivations(const Program& p, const ABox& a, const TBox& t, std::size_t budget) {
    std::set<Derivation> out;
    if (budget == 0) return out;
    switch (p.kind()) {
    case Program::Kind::Skip: out.insert({a, 1}); break;
    case Program::Kind::Add: {
        ABox b = a;
        b.insert(p.assertion());
        out.insert({b, 1});
        break;
    }
    case Program::Kind::Del: {
        ABox b = a;
        b.erase(p.assertion());
        out.insert({b, 1});
        break;
    }
    case Program::Kind::Seq:
        for (const auto& d1 : derivations(p.first(), a, t, budget - 1))
            for (const auto& d2 : derivations(p.second(), d1.result, t, budget - 1 - d1.rules))
                out.insert({d2.result, 1 + d1.rules + d2.rules});
        break;
    case Program::Kind::If: {
        const Program& branch = ref_guard(a, p.guard(), t) ? p.first() : p.second();
        for (const auto& d : derivations(branch, a, t, budget - 1)) out.insert({d.result, 1 + d.rules});
        break;
    }
    case Program::Kind::While:
        if (!ref_guard(a, p.guard(), t)) {
            out.insert({a, 1});
            break;
        }
        for (const auto& d1 : derivations(p.body(), a, t, budget - 1))
            for (const auto& d2 : derivations(p, d1.result, t, budget - 1 - d1.rules))
                out.insert({d2.result, 1 + d1.rules + d2.rules});
        break;
    }
    return out;
}

/// Random program of at most `size` nodes over the given assertions.
inline Program random_program(Gen& g, std::size_t size, const std::vector<Assertion>& atoms, bool allow_loops = true) {
    auto guard = [&]() -> Guard {
        switch (g.below(5)) {
        case 0: return Guard::truth();
        case 1: return Guard::falsity();
        case 2: return Guard::negation(Guard::atom(g.pick(atoms)));
        default: return Guard::atom(g.pick(atoms));
        }
    };
    if (size < 2 || g.coin(0.3)) {
        switch (g.below(3)) {
        case 0: return Program::skip();
        case 1: return Program::add(g.pick(atoms));
        default: return Program::del(g.pick(atoms));
        }
    }
    std::size_t rest = size - 1;
    if (rest < 2)
        return allow_loops ? Program::while_do(guard(), random_program(g, rest, atoms, allow_loops)) : Program::skip();
    switch (g.below(allow_loops ? 3 : 2)) {
    case 0: {
        std::size_t l = 1 + g.below(rest - 1);
        return Program::seq(random_program(g, l, atoms, allow_loops), random_program(g, rest - l, atoms, allow_loops));
    }
    case 1: {
        std::size_t l = 1 + g.below(rest - 1);
        return Program::if_then_else(guard(), random_program(g, l, atoms, allow_loops),
                                     random_program(g, rest - l, atoms, allow_loops));
    }
    default: return Program::while_do(guard(), random_program(g, rest, atoms, allow_loops));
    }
}

} // namespace tapo::testing
