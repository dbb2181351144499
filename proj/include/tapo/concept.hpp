#pragma once

#include "tapo/lexer.hpp"
#include "tapo/signature.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace tapo {

/// Immutable ALC concept expression. Copies share structure; equality and
/// ordering are structural (no normalisation modulo commutativity).
class Concept {
public:
    enum class Kind : std::uint8_t { Top, Bot, Atomic, And, Or, Not, Exists, Forall };

    /// Top.
    Concept();

    static Concept top();
    static Concept bot();
    static Concept atomic(std::string name);
    static Concept conj(Concept left, Concept right);
    static Concept disj(Concept left, Concept right);
    static Concept negation(Concept child);
    static Concept exists(std::string role, Concept child);
    static Concept forall(std::string role, Concept child);

    Kind kind() const noexcept;
    /// Concept name for Atomic, role name for Exists/Forall, empty otherwise.
    const std::string& name() const noexcept;
    /// First operand of And/Or; the single operand of Not/Exists/Forall.
    const Concept& left() const;
    const Concept& right() const;
    const Concept& child() const { return left(); }

    bool is_binary() const noexcept { return kind() == Kind::And || kind() == Kind::Or; }
    bool is_quantifier() const noexcept {
        return kind() == Kind::Exists || kind() == Kind::Forall;
    }
    std::size_t node_count() const noexcept;
    std::size_t depth() const noexcept;

    friend bool operator==(const Concept& a, const Concept& b);
    friend std::strong_ordering operator<=>(const Concept& a, const Concept& b);

private:
    struct Node;
    explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses a complete concept. Precedence: prefix operators (!, exists,
/// forall) bind tighter than &, which binds tighter than |; binary operators
/// associate to the left.
Concept parse_concept(std::string_view text, const Signature& sig);

/// Parses one concept from the stream, stopping at the first token that
/// cannot continue it.
Concept parse_concept(TokenStream& ts, const Signature& sig);

/// Renders with the minimum parentheses needed to re-parse to an equal tree.
std::string to_string(const Concept& c);

/// Throws Error(UnknownName) if a name in `c` is not declared in `sig`.
void validate(const Concept& c, const Signature& sig);

/// Negation normal form: Not only above Atomic nodes.
Concept nnf(const Concept& c);

/// All subtrees of `c`, including `c`.
std::set<Concept> subconcepts(const Concept& c);

std::set<std::string> concept_names_in(const Concept& c);
std::set<std::string> role_names_in(const Concept& c);

} // namespace tapo
