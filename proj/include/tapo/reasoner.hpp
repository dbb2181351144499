#pragma once

#include "tapo/concept.hpp"

#include <cstddef>
#include <vector>

namespace tapo {

struct Inclusion {
    Concept lhs;
    Concept rhs;

    auto operator<=>(const Inclusion&) const = default;
    bool operator==(const Inclusion&) const = default;
};

/// Finite set of general concept inclusions. Duplicates may be added; they
/// are ignored by every consumer.
class TBox {
public:
    TBox() = default;
    TBox(std::initializer_list<Inclusion> inclusions) : inclusions_(inclusions) {}

    void add(Concept lhs, Concept rhs) { inclusions_.push_back({std::move(lhs), std::move(rhs)}); }
    const std::vector<Inclusion>& inclusions() const noexcept { return inclusions_; }
    bool empty() const noexcept { return inclusions_.empty(); }

    /// Set-semantics equality.
    friend bool operator==(const TBox& a, const TBox& b);

private:
    std::vector<Inclusion> inclusions_;
};

void validate(const TBox& t, const Signature& sig);

struct ReasonerOptions {
    /// Maximum number of tableau nodes (one per created node and one per
    /// explored disjunction branch) before giving up.
    std::size_t node_budget = 100'000;
};

enum class SatStatus { Satisfiable, Unsatisfiable, ResourceLimit };

const char* to_string(SatStatus s) noexcept;

struct SatResult {
    SatStatus status = SatStatus::Unsatisfiable;
    std::size_t nodes = 0;
};

/// Tableau decision procedure for ALC concept satisfiability w.r.t. a
/// general TBox. Never throws on budget exhaustion; reports ResourceLimit.
SatResult check_satisfiability(const TBox& t, const Concept& c, const ReasonerOptions& opts = {});

/// As check_satisfiability, but throws ResourceLimitError when the budget
/// runs out.
bool is_satisfiable(const TBox& t, const Concept& c, const ReasonerOptions& opts = {});

/// t |= c <= d, decided as unsatisfiability of c & !d.
bool subsumes(const TBox& t, const Concept& c, const Concept& d, const ReasonerOptions& opts = {});

} // namespace tapo
