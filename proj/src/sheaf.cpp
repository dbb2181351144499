#include "tapo/sheaf.hpp"

#include "tapo/error.hpp"
#include "tapo/models.hpp"

#include <algorithm>
#include <iterator>

namespace tapo {

std::string to_string(const Fact& f) {
    if (const auto* c = std::get_if<ConceptFact>(&f))
        return c->individual + ":" + c->concept_name;
    const auto& r = std::get<RoleFact>(f);
    return "(" + r.subject + "," + r.object + "):" + r.role;
}

std::string to_string(const FactSet& s) {
    if (s.empty())
        return "{}";
    std::string out = "{ ";
    bool first = true;
    for (const auto& f : s) {
        if (!first)
            out += ", ";
        out += to_string(f);
        first = false;
    }
    return out + " }";
}

std::string to_string(const Section& s) { return s.context + " " + to_string(s.facts); }

namespace {

const Token& declared(TokenStream& ts, const Signature& sig, NameKind kind) {
    const Token& tok = ts.expect_name(std::string(to_string(kind)) + " name");
    if (!sig.has(kind, tok.text))
        throw Error(ErrorKind::UnknownName,
                    std::string("undeclared ") + to_string(kind) + " '" + tok.text + "'", tok.pos);
    return tok;
}

} // namespace

Fact parse_fact(TokenStream& ts, const Signature& sig) {
    if (ts.accept(Tok::LParen)) {
        RoleFact r;
        r.subject = declared(ts, sig, NameKind::Individual).text;
        ts.expect(Tok::Comma, "','");
        r.object = declared(ts, sig, NameKind::Individual).text;
        ts.expect(Tok::RParen, "')'");
        ts.expect(Tok::Colon, "':'");
        r.role = declared(ts, sig, NameKind::Role).text;
        return r;
    }
    ConceptFact c;
    c.individual = declared(ts, sig, NameKind::Individual).text;
    ts.expect(Tok::Colon, "':'");
    c.concept_name = declared(ts, sig, NameKind::Concept).text;
    return c;
}

FactSet parse_fact_set(TokenStream& ts, const Signature& sig) {
    ts.expect(Tok::LBrace, "'{'");
    FactSet out;
    if (ts.accept(Tok::RBrace))
        return out;
    do {
        out.insert(parse_fact(ts, sig));
    } while (ts.accept(Tok::Comma));
    ts.expect(Tok::RBrace, "'}' or ','");
    return out;
}

FactSet parse_fact_set(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    FactSet out = parse_fact_set(ts, sig);
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after fact set");
    return out;
}

void Presheaf::set_universe(const std::string& context, FactSet facts) {
    if (!poset_.contains(context))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + context + "'");
    universes_[context] = std::move(facts);
}

const FactSet& Presheaf::universe(const std::string& context) const {
    static const FactSet empty;
    auto it = universes_.find(context);
    return it == universes_.end() ? empty : it->second;
}

std::vector<MonotonicityGap> monotonicity_gaps(const Presheaf& ps) {
    std::vector<MonotonicityGap> out;
    const auto& p = ps.poset();
    for (const auto& w : p.contexts())
        for (const auto& v : p.contexts()) {
            if (w == v || !p.leq(w, v))
                continue;
            const FactSet& upper = ps.universe(v);
            for (const auto& f : ps.universe(w))
                if (!upper.count(f))
                    out.push_back({w, v, f});
        }
    return out;
}

Section make_section(const Presheaf& ps, std::string context, FactSet facts) {
    if (!ps.poset().contains(context))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + context + "'");
    const FactSet& u = ps.universe(context);
    for (const auto& f : facts)
        if (!u.count(f))
            throw Error(ErrorKind::Validation,
                        "fact " + to_string(f) + " is not in the universe of '" + context + "'");
    return {std::move(context), std::move(facts)};
}

namespace {

FactSet intersect(const FactSet& a, const FactSet& b) {
    FactSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

FactSet minus(const FactSet& a, const FactSet& b) {
    FactSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

void check_family(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov) {
    auto violations = validate_covering(ps.poset(), cov);
    if (!violations.empty())
        throw Error(ErrorKind::Validation, "invalid covering (" + to_string(cov) +
                                               "): " + violations.front().message);
    if (family.size() != cov.members.size())
        throw Error(ErrorKind::Validation,
                    "family has " + std::to_string(family.size()) + " sections but the covering has " +
                        std::to_string(cov.members.size()) + " members");
    std::set<std::string> members(cov.members.begin(), cov.members.end());
    std::set<std::string> seen;
    for (const auto& s : family) {
        if (!members.count(s.context) || !seen.insert(s.context).second)
            throw Error(ErrorKind::Validation, "family section over '" + s.context +
                                                   "' does not match the covering members");
        make_section(ps, s.context, s.facts);
    }
}

} // namespace

Section restrict(const Presheaf& ps, const Section& s, const std::string& v) {
    if (!ps.poset().leq(v, s.context))
        throw Error(ErrorKind::Validation,
                    "cannot restrict from '" + s.context + "' to '" + v + "': not a subcontext");
    return {v, intersect(s.facts, ps.universe(v))};
}

Compatibility compatible(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov) {
    check_family(ps, family, cov);
    Compatibility out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            auto m = ps.poset().meet(family[i].context, family[j].context);
            if (!m)
                continue;
            FactSet a = restrict(ps, family[i], *m).facts;
            FactSet b = restrict(ps, family[j], *m).facts;
            if (a != b) {
                out.ok = false;
                out.conflicts.push_back({i, j, *m, minus(a, b), minus(b, a)});
            }
        }
    }
    return out;
}

const char* to_string(GluingResult::Kind k) noexcept {
    switch (k) {
    case GluingResult::Kind::Glued: return "glued";
    case GluingResult::Kind::Incompatible: return "incompatible";
    case GluingResult::Kind::NonUnique: return "non-unique";
    }
    return "?";
}

GluingResult glue(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov,
                  const GlueOptions& opts) {
    Compatibility compat = compatible(ps, family, cov);
    GluingResult out;
    if (!compat.ok) {
        out.kind = GluingResult::Kind::Incompatible;
        out.conflicts = std::move(compat.conflicts);
        return out;
    }

    const FactSet& target = ps.universe(cov.target);
    if (target.size() > opts.max_universe)
        throw SearchSpaceError("universe of '" + cov.target + "' has " +
                               std::to_string(target.size()) + " facts; the gluing check allows " +
                               std::to_string(opts.max_universe));
    std::vector<Fact> facts(target.begin(), target.end());
    auto bit_of = [&](const Fact& f) -> std::optional<std::size_t> {
        auto it = std::lower_bound(facts.begin(), facts.end(), f);
        if (it == facts.end() || *it != f)
            return std::nullopt;
        return static_cast<std::size_t>(it - facts.begin());
    };

    // A candidate t must satisfy t ∩ universe(U_i) = s_i for every member:
    // bits covered by some member universe are forced, the rest are free.
    std::uint64_t covered = 0;
    std::uint64_t forced = 0;
    bool feasible = true;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> constraints;
    for (const auto& s : family) {
        std::uint64_t mask = 0;
        std::uint64_t value = 0;
        for (const auto& f : ps.universe(s.context))
            if (auto b = bit_of(f))
                mask |= std::uint64_t{1} << *b;
        for (const auto& f : s.facts) {
            auto b = bit_of(f);
            if (!b) {
                feasible = false; // no section over the target can contain f
                continue;
            }
            value |= std::uint64_t{1} << *b;
        }
        covered |= mask;
        forced |= value;
        constraints.emplace_back(mask, value);
    }
    for (const auto& [mask, value] : constraints)
        if ((forced & mask) != value)
            feasible = false;

    if (feasible) {
        std::uint64_t all = facts.size() == 64 ? ~std::uint64_t{0}
                                               : (std::uint64_t{1} << facts.size()) - 1;
        std::uint64_t free = all & ~covered;
        std::uint64_t sub = 0;
        do {
            Section c{cov.target, {}};
            std::uint64_t bits = forced | sub;
            for (std::size_t b = 0; b < facts.size(); ++b)
                if ((bits >> b) & 1U)
                    c.facts.insert(facts[b]);
            out.candidates.push_back(std::move(c));
            sub = (sub - free) & free;
        } while (sub != 0);
    }

    if (out.candidates.empty()) {
        out.kind = GluingResult::Kind::Incompatible;
    } else if (out.candidates.size() == 1) {
        out.kind = GluingResult::Kind::Glued;
        out.glued = std::move(out.candidates.front());
        out.candidates.clear();
    } else {
        out.kind = GluingResult::Kind::NonUnique;
    }
    return out;
}

RefinementVerdict stable_under_refinement(const Presheaf& ps, const Section& s,
                                          const std::vector<Covering>& refinements,
                                          const GlueOptions& opts) {
    std::set<std::string> reachable{s.context};
    for (const auto& cov : refinements) {
        if (!reachable.count(cov.target))
            throw Error(ErrorKind::Validation,
                        "malformed refinement chain: '" + cov.target +
                            "' is neither the section's context nor a member of an earlier covering");
        auto violations = validate_covering(ps.poset(), cov);
        if (!violations.empty())
            throw Error(ErrorKind::Validation, "invalid covering (" + to_string(cov) +
                                                   "): " + violations.front().message);
        Section base = restrict(ps, s, cov.target);
        std::vector<Section> family;
        for (const auto& m : cov.members)
            family.push_back(restrict(ps, base, m));
        GluingResult r = glue(ps, family, cov, opts);
        if (r.kind != GluingResult::Kind::Glued || *r.glued != base)
            return {false, cov, std::move(r)};
        reachable.insert(cov.members.begin(), cov.members.end());
    }
    return {};
}

std::vector<Covering> refinement_chain(const ContextPoset& p, const std::string& top,
                                       const std::vector<Covering>& all) {
    if (!p.contains(top))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + top + "'");
    std::set<std::string> reachable{top};
    std::vector<bool> used(all.size(), false);
    std::vector<Covering> out;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (used[i] || !reachable.count(all[i].target))
                continue;
            used[i] = true;
            out.push_back(all[i]);
            reachable.insert(all[i].members.begin(), all[i].members.end());
            grew = true;
        }
    }
    return out;
}

std::vector<Section> global_sections(const Presheaf& ps, const std::string& top,
                                     const std::vector<Covering>& covs, const GlueOptions& opts) {
    if (!ps.poset().contains(top))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + top + "'");
    const FactSet& u = ps.universe(top);
    if (u.size() > opts.max_universe)
        throw SearchSpaceError("universe of '" + top + "' has " + std::to_string(u.size()) +
                               " facts; enumeration allows " + std::to_string(opts.max_universe));
    std::vector<Fact> facts(u.begin(), u.end());
    std::vector<Section> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << facts.size()); ++bits) {
        Section s{top, {}};
        for (std::size_t b = 0; b < facts.size(); ++b)
            if ((bits >> b) & 1U)
                s.facts.insert(facts[b]);
        if (stable_under_refinement(ps, s, covs, opts).stable)
            out.push_back(std::move(s));
    }
    return out;
}

} // namespace tapo
