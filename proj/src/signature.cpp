#include "tapo/signature.hpp"

#include "tapo/error.hpp"
#include "tapo/lexer.hpp"

namespace tapo {

const char* to_string(NameKind kind) noexcept {
    switch (kind) {
    case NameKind::Concept: return "concept";
    case NameKind::Role: return "role";
    case NameKind::Individual: return "individual";
    case NameKind::Context: return "context";
    }
    return "name";
}

std::set<std::string, std::less<>>& Signature::set_for(NameKind kind) {
    switch (kind) {
    case NameKind::Concept: return concepts_;
    case NameKind::Role: return roles_;
    case NameKind::Individual: return individuals_;
    case NameKind::Context: return contexts_;
    }
    return concepts_;
}

const std::set<std::string, std::less<>>& Signature::names(NameKind kind) const {
    return const_cast<Signature*>(this)->set_for(kind);
}

void Signature::declare(NameKind kind, const std::string& name) {
    if (!is_valid_identifier(name))
        throw Error(ErrorKind::Validation, "invalid identifier '" + name + "'");
    if (is_reserved_word(name))
        throw Error(ErrorKind::Validation, "'" + name + "' is a reserved word");
    NameKind existing;
    if (lookup(name, existing))
        throw Error(ErrorKind::Validation, "'" + name + "' already declared as " +
                                               std::string(to_string(existing)));
    set_for(kind).insert(name);
}

bool Signature::has(NameKind kind, std::string_view name) const {
    const auto& s = names(kind);
    return s.find(name) != s.end();
}

bool Signature::lookup(std::string_view name, NameKind& kind) const {
    for (NameKind k : {NameKind::Concept, NameKind::Role, NameKind::Individual, NameKind::Context}) {
        if (has(k, name)) {
            kind = k;
            return true;
        }
    }
    return false;
}

std::string Signature::canonical() const {
    std::string out;
    auto emit = [&](const char* head, const auto& set) {
        out += head;
        for (const auto& n : set) {
            out += ' ';
            out += n;
        }
        out += '\n';
    };
    emit("concepts", concepts_);
    emit("roles", roles_);
    emit("individuals", individuals_);
    emit("contexts", contexts_);
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t Signature::hash() const { return fnv1a64(canonical()); }

} // namespace tapo
