#pragma once

#include "tapo/concept.hpp"
#include "tapo/context.hpp"
#include "tapo/reasoner.hpp"

#include <memory>
#include <set>
#include <string>
#include <variant>

namespace tapo {

/// a : C @ U
struct ConceptAssertion {
    std::string individual;
    Concept concept_expr;
    std::string context;

    auto operator<=>(const ConceptAssertion&) const = default;
    bool operator==(const ConceptAssertion&) const = default;
};

/// (a, b) : r @ U
struct RoleAssertion {
    std::string subject;
    std::string object;
    std::string role;
    std::string context;

    auto operator<=>(const RoleAssertion&) const = default;
    bool operator==(const RoleAssertion&) const = default;
};

using Assertion = std::variant<ConceptAssertion, RoleAssertion>;
using ABox = std::set<Assertion>;

const std::string& context_of(const Assertion& a);
Assertion with_context(const Assertion& a, std::string context);
std::string to_string(const Assertion& a);

/// Parses `a : C @ U` or `(a, b) : r @ U` from the stream. Every name must
/// be declared in `sig` with the right kind.
Assertion parse_assertion(TokenStream& ts, const Signature& sig);
Assertion parse_assertion(std::string_view text, const Signature& sig);

void validate(const Assertion& a, const Signature& sig);

struct KnowledgeState {
    TBox tbox;
    ABox abox;

    bool operator==(const KnowledgeState&) const = default;
};

/// One assertion per line, sorted by rendered text. Doubles as the oracle
/// state digest.
std::string canonical_abox(const ABox& a);

/// Closure under contextual monotonicity: a:C@U in A and V <= U implies
/// a:C@V. Same for role assertions.
ABox saturate(const ABox& a, const ContextPoset& p);

// ---------------------------------------------------------------------------
// Guards

class Guard {
public:
    enum class Kind : std::uint8_t { True, False, Atom, Subsume, Not, And };

    static Guard truth();
    static Guard falsity();
    static Guard atom(Assertion a);
    static Guard subsume(Concept sub, Concept super);
    static Guard negation(Guard g);
    static Guard conj(Guard a, Guard b);
    /// Sugar: !( !a & !b ).
    static Guard disj(Guard a, Guard b);

    Kind kind() const noexcept;
    const Assertion& assertion() const;
    const Concept& sub() const;
    const Concept& super() const;
    const Guard& left() const;
    const Guard& right() const;
    const Guard& child() const { return left(); }

    friend bool operator==(const Guard& a, const Guard& b);

private:
    struct Node;
    explicit Guard(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Guard& g);

Guard parse_guard(TokenStream& ts, const Signature& sig);
Guard parse_guard(std::string_view text, const Signature& sig);

enum class GuardMode { Literal, Saturated };

const char* to_string(GuardMode m) noexcept;

struct GuardOptions {
    GuardMode mode = GuardMode::Literal;
    /// Required in saturated mode.
    const ContextPoset* poset = nullptr;
    ReasonerOptions reasoner;
};

/// Membership of an assertion atom under the chosen mode, without
/// materialising the saturation.
bool holds(const ABox& a, const Assertion& atom, const GuardOptions& opts);

/// Satisfaction of a guard by a state. Subsumption atoms go to the tableau;
/// ResourceLimitError propagates.
bool guard_sat(const KnowledgeState& s, const Guard& g, const GuardOptions& opts = {});

} // namespace tapo
