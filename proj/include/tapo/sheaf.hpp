#pragma once

#include "tapo/context.hpp"
#include "tapo/lexer.hpp"
#include "tapo/signature.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace tapo {

/// a:C with C a concept name.
struct ConceptFact {
    std::string individual;
    std::string concept_name;

    auto operator<=>(const ConceptFact&) const = default;
    bool operator==(const ConceptFact&) const = default;
};

/// (a,b):r
struct RoleFact {
    std::string subject;
    std::string object;
    std::string role;

    auto operator<=>(const RoleFact&) const = default;
    bool operator==(const RoleFact&) const = default;
};

using Fact = std::variant<ConceptFact, RoleFact>;
using FactSet = std::set<Fact>;

std::string to_string(const Fact& f);
/// "{ a:C, (a,b):r }" in sorted order; "{}" when empty.
std::string to_string(const FactSet& s);

Fact parse_fact(TokenStream& ts, const Signature& sig);
/// Braced, comma separated list.
FactSet parse_fact_set(TokenStream& ts, const Signature& sig);
FactSet parse_fact_set(std::string_view text, const Signature& sig);

/// Per-context fact universes over a context poset. Restriction to a
/// subcontext intersects with that subcontext's universe.
class Presheaf {
public:
    Presheaf() = default;
    explicit Presheaf(ContextPoset poset) : poset_(std::move(poset)) {}

    /// Throws Error(UnknownName) if the context is undeclared.
    void set_universe(const std::string& context, FactSet facts);
    /// Empty for contexts without a declared universe.
    const FactSet& universe(const std::string& context) const;
    const ContextPoset& poset() const noexcept { return poset_; }

private:
    ContextPoset poset_;
    std::map<std::string, FactSet> universes_;
};

/// W <= V with a fact in universe(W) but not in universe(V). Restriction by
/// intersection composes correctly only when there are none.
struct MonotonicityGap {
    std::string lower;
    std::string upper;
    Fact fact;
};

/// Every gap, ordered by (lower, upper) in declaration order, then fact.
std::vector<MonotonicityGap> monotonicity_gaps(const Presheaf& ps);

struct Section {
    std::string context;
    FactSet facts;

    bool operator==(const Section&) const = default;
};

std::string to_string(const Section& s);

/// Builds a section, checking facts ⊆ universe(context).
Section make_section(const Presheaf& ps, std::string context, FactSet facts);

/// Section(v, s.facts ∩ universe(v)). Throws Error(Validation) unless v <= s.context.
Section restrict(const Presheaf& ps, const Section& s, const std::string& v);

/// Two family members that disagree on their overlap.
struct Conflict {
    std::size_t first = 0;
    std::size_t second = 0;
    std::string overlap;
    /// facts of the overlap present in `first`'s restriction only
    FactSet only_first;
    FactSet only_second;

    bool operator==(const Conflict&) const = default;
};

struct Compatibility {
    bool ok = true;
    std::vector<Conflict> conflicts;
};

/// Pairwise agreement on meets; pairs without a meet are unconstrained.
/// Throws Error(Validation) if the family does not match the covering.
Compatibility compatible(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov);

struct GlueOptions {
    /// Largest target universe for which candidates are enumerated.
    std::size_t max_universe = 20;
};

struct GluingResult {
    enum class Kind { Glued, Incompatible, NonUnique };

    Kind kind = Kind::Incompatible;
    /// The unique gluing when kind == Glued.
    std::optional<Section> glued;
    /// Overlap disagreements; empty for an Incompatible result caused only by
    /// the absence of any candidate.
    std::vector<Conflict> conflicts;
    /// Every candidate when kind == NonUnique, ascending.
    std::vector<Section> candidates;
};

const char* to_string(GluingResult::Kind k) noexcept;

/// Finds every section over cov.target restricting to each family member.
/// Throws SearchSpaceError when the target universe exceeds the limit.
GluingResult glue(const Presheaf& ps, const std::vector<Section>& family, const Covering& cov,
                  const GlueOptions& opts = {});

struct RefinementVerdict {
    bool stable = true;
    std::optional<Covering> failing;
    std::optional<GluingResult> failure;
};

/// Checks that `s` re-glues uniquely to itself under each covering. Each
/// covering must target s.context or a member of an earlier covering.
RefinementVerdict stable_under_refinement(const Presheaf& ps, const Section& s,
                                          const std::vector<Covering>& refinements,
                                          const GlueOptions& opts = {});

/// Coverings from `all` reachable from `top` (top itself, then members of
/// already selected coverings). Scans `all` in declaration order, repeating
/// until nothing new is reachable, so every covering follows the one that
/// made its target reachable.
std::vector<Covering> refinement_chain(const ContextPoset& p, const std::string& top,
                                       const std::vector<Covering>& all);

/// Every section over `top` that is stable under `covs`, ascending by fact
/// bit pattern over the sorted universe.
std::vector<Section> global_sections(const Presheaf& ps, const std::string& top,
                                     const std::vector<Covering>& covs,
                                     const GlueOptions& opts = {});

} // namespace tapo
