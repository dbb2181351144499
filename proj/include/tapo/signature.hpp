#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace tapo {

enum class NameKind { Concept, Role, Individual, Context };

const char* to_string(NameKind kind) noexcept;

/// The four finite name sets. Pairwise disjoint; every name is a valid,
/// non-reserved identifier.
class Signature {
public:
    /// Throws Error(Validation) on an invalid identifier or on a name that is
    /// already declared (in any of the four sets).
    void declare(NameKind kind, const std::string& name);

    bool has(NameKind kind, std::string_view name) const;
    const std::set<std::string, std::less<>>& names(NameKind kind) const;

    const auto& concept_names() const { return concepts_; }
    const auto& role_names() const { return roles_; }
    const auto& individual_names() const { return individuals_; }
    const auto& context_names() const { return contexts_; }

    /// Which set holds `name`, if any.
    bool lookup(std::string_view name, NameKind& kind) const;

    /// Canonical text rendering, stable across runs.
    std::string canonical() const;
    /// 64-bit FNV-1a of canonical().
    std::uint64_t hash() const;

    bool operator==(const Signature&) const = default;

private:
    std::set<std::string, std::less<>>& set_for(NameKind kind);

    std::set<std::string, std::less<>> concepts_;
    std::set<std::string, std::less<>> roles_;
    std::set<std::string, std::less<>> individuals_;
    std::set<std::string, std::less<>> contexts_;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

} // namespace tapo
