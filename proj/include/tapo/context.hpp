#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tapo {

/// Finite partial order of named contexts. `leq(v, u)` reads "v is a
/// subcontext of u". Immutable once built.
class ContextPoset {
public:
    class Builder {
    public:
        Builder& context(std::string name);
        /// Declares sub <= super. Both must already be declared.
        Builder& leq(std::string sub, std::string super);
        /// Computes the reflexive-transitive closure. Throws Error(Validation)
        /// on an undeclared name or an order cycle.
        ContextPoset build() const;

    private:
        std::vector<std::string> names_;
        std::vector<std::pair<std::string, std::string>> pairs_;
    };

    ContextPoset() = default;

    bool contains(std::string_view name) const;
    const std::vector<std::string>& contexts() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }

    /// Throws Error(UnknownName) on undeclared contexts.
    bool leq(std::string_view v, std::string_view u) const;

    /// Greatest lower bound, if one exists.
    std::optional<std::string> meet(std::string_view u, std::string_view v) const;

    /// Every declared w with leq(w, u), in declaration order.
    std::vector<std::string> below(std::string_view u) const;

    /// The closed order as (v, u) pairs, v != u, sorted.
    std::vector<std::pair<std::string, std::string>> strict_pairs() const;

    /// Re-closing an already closed relation; used to check idempotence.
    ContextPoset reclosed() const;

private:
    std::size_t index(std::string_view name) const;

    std::vector<std::string> names_;
    std::vector<std::vector<bool>> leq_;
};

struct Covering {
    std::string target;
    std::vector<std::string> members;

    bool operator==(const Covering&) const = default;
};

std::string to_string(const Covering& c);

struct CoveringViolation {
    /// Offending member, or empty for whole-covering problems.
    std::string member;
    std::string message;

    bool operator==(const CoveringViolation&) const = default;
};

/// Empty result means the covering is valid.
std::vector<CoveringViolation> validate_covering(const ContextPoset& p, const Covering& c);

} // namespace tapo
