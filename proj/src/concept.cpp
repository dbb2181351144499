#include "tapo/concept.hpp"

#include "tapo/error.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace tapo {

struct Concept::Node {
    Kind kind;
    std::string name;
    std::optional<Concept> left;
    std::optional<Concept> right;
    std::size_t size;
    std::size_t depth;
};

namespace {

const std::string kEmpty;

} // namespace

Concept::Concept() : node_(top().node_) {}

Concept Concept::top() {
    static const Concept c(std::make_shared<const Node>(Node{Kind::Top, "", {}, {}, 1, 0}));
    return c;
}

Concept Concept::bot() {
    static const Concept c(std::make_shared<const Node>(Node{Kind::Bot, "", {}, {}, 1, 0}));
    return c;
}

Concept Concept::atomic(std::string name) {
    return Concept(std::make_shared<const Node>(Node{Kind::Atomic, std::move(name), {}, {}, 1, 0}));
}

Concept Concept::conj(Concept left, Concept right) {
    std::size_t size = 1 + left.node_count() + right.node_count();
    std::size_t depth = 1 + std::max(left.depth(), right.depth());
    return Concept(std::make_shared<const Node>(
        Node{Kind::And, "", std::move(left), std::move(right), size, depth}));
}

Concept Concept::disj(Concept left, Concept right) {
    std::size_t size = 1 + left.node_count() + right.node_count();
    std::size_t depth = 1 + std::max(left.depth(), right.depth());
    return Concept(std::make_shared<const Node>(
        Node{Kind::Or, "", std::move(left), std::move(right), size, depth}));
}

Concept Concept::negation(Concept child) {
    std::size_t size = 1 + child.node_count();
    std::size_t depth = 1 + child.depth();
    return Concept(
        std::make_shared<const Node>(Node{Kind::Not, "", std::move(child), {}, size, depth}));
}

Concept Concept::exists(std::string role, Concept child) {
    std::size_t size = 1 + child.node_count();
    std::size_t depth = 1 + child.depth();
    return Concept(std::make_shared<const Node>(
        Node{Kind::Exists, std::move(role), std::move(child), {}, size, depth}));
}

Concept Concept::forall(std::string role, Concept child) {
    std::size_t size = 1 + child.node_count();
    std::size_t depth = 1 + child.depth();
    return Concept(std::make_shared<const Node>(
        Node{Kind::Forall, std::move(role), std::move(child), {}, size, depth}));
}

Concept::Kind Concept::kind() const noexcept { return node_->kind; }
const std::string& Concept::name() const noexcept { return node_->name; }
std::size_t Concept::node_count() const noexcept { return node_->size; }
std::size_t Concept::depth() const noexcept { return node_->depth; }

const Concept& Concept::left() const {
    if (!node_->left)
        throw std::logic_error("concept node has no operand");
    return *node_->left;
}

const Concept& Concept::right() const {
    if (!node_->right)
        throw std::logic_error("concept node has no second operand");
    return *node_->right;
}

bool operator==(const Concept& a, const Concept& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind() || a.node_count() != b.node_count() || a.name() != b.name())
        return false;
    if (a.node_->left && !(*a.node_->left == *b.node_->left))
        return false;
    if (a.node_->right && !(*a.node_->right == *b.node_->right))
        return false;
    return true;
}

std::strong_ordering operator<=>(const Concept& a, const Concept& b) {
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0)
        return c;
    if (auto c = a.name().compare(b.name()); c != 0)
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.node_->left) {
        if (auto c = *a.node_->left <=> *b.node_->left; c != 0)
            return c;
    }
    if (a.node_->right) {
        if (auto c = *a.node_->right <=> *b.node_->right; c != 0)
            return c;
    }
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ConceptParser {
public:
    ConceptParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

    Concept parse_or() {
        Concept lhs = parse_and();
        std::size_t n = 1;
        while (ts_.accept(Tok::Bar)) {
            ts_.chain_step(n);
            lhs = Concept::disj(std::move(lhs), parse_and());
        }
        return lhs;
    }

private:
    Concept parse_and() {
        Concept lhs = parse_prefix();
        std::size_t n = 1;
        while (ts_.accept(Tok::Amp)) {
            ts_.chain_step(n);
            lhs = Concept::conj(std::move(lhs), parse_prefix());
        }
        return lhs;
    }

    Concept parse_prefix() {
        TokenStream::Nesting level(ts_);
        if (ts_.accept(Tok::Bang))
            return Concept::negation(parse_prefix());
        if (ts_.at_word("exists") || ts_.at_word("forall")) {
            bool is_exists = ts_.next().text == "exists";
            const Token& role = ts_.expect_name("role name");
            if (!sig_.has(NameKind::Role, role.text))
                throw Error(ErrorKind::UnknownName, "undeclared role '" + role.text + "'", role.pos);
            ts_.expect(Tok::Dot, "'.' after role name");
            Concept body = parse_prefix();
            return is_exists ? Concept::exists(role.text, std::move(body))
                             : Concept::forall(role.text, std::move(body));
        }
        return parse_primary();
    }

    Concept parse_primary() {
        if (ts_.accept_word("top"))
            return Concept::top();
        if (ts_.accept_word("bot"))
            return Concept::bot();
        if (ts_.accept(Tok::LParen)) {
            Concept inner = parse_or();
            ts_.expect(Tok::RParen, "')'");
            return inner;
        }
        if (ts_.at(Tok::Ident) && !is_reserved_word(ts_.peek().text)) {
            const Token& tok = ts_.next();
            if (!sig_.has(NameKind::Concept, tok.text)) {
                NameKind other;
                std::string extra;
                if (sig_.lookup(tok.text, other))
                    extra = std::string(" (declared as ") + to_string(other) + ")";
                throw Error(ErrorKind::UnknownName,
                            "undeclared concept '" + tok.text + "'" + extra, tok.pos);
            }
            return Concept::atomic(tok.text);
        }
        ts_.fail("expected concept, found " + describe_token(ts_.peek()));
    }

    TokenStream& ts_;
    const Signature& sig_;
};

int precedence(const Concept& c) {
    switch (c.kind()) {
    case Concept::Kind::Or: return 1;
    case Concept::Kind::And: return 2;
    case Concept::Kind::Not:
    case Concept::Kind::Exists:
    case Concept::Kind::Forall: return 3;
    default: return 4;
    }
}

void print(const Concept& c, std::string& out);

void print_operand(const Concept& c, int min_prec, std::string& out) {
    if (precedence(c) < min_prec) {
        out += '(';
        print(c, out);
        out += ')';
    } else {
        print(c, out);
    }
}

void print(const Concept& c, std::string& out) {
    switch (c.kind()) {
    case Concept::Kind::Top: out += "top"; break;
    case Concept::Kind::Bot: out += "bot"; break;
    case Concept::Kind::Atomic: out += c.name(); break;
    case Concept::Kind::And:
        print_operand(c.left(), 2, out);
        out += " & ";
        print_operand(c.right(), 3, out);
        break;
    case Concept::Kind::Or:
        print_operand(c.left(), 1, out);
        out += " | ";
        print_operand(c.right(), 2, out);
        break;
    case Concept::Kind::Not:
        out += '!';
        print_operand(c.child(), 3, out);
        break;
    case Concept::Kind::Exists:
    case Concept::Kind::Forall:
        out += c.kind() == Concept::Kind::Exists ? "exists " : "forall ";
        out += c.name();
        out += '.';
        print_operand(c.child(), 3, out);
        break;
    }
}

} // namespace

Concept parse_concept(TokenStream& ts, const Signature& sig) {
    return ConceptParser(ts, sig).parse_or();
}

Concept parse_concept(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    Concept c = parse_concept(ts, sig);
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after concept");
    return c;
}

std::string to_string(const Concept& c) {
    std::string out;
    print(c, out);
    return out;
}

void validate(const Concept& c, const Signature& sig) {
    switch (c.kind()) {
    case Concept::Kind::Atomic:
        if (!sig.has(NameKind::Concept, c.name()))
            throw Error(ErrorKind::UnknownName, "undeclared concept '" + c.name() + "'");
        break;
    case Concept::Kind::Exists:
    case Concept::Kind::Forall:
        if (!sig.has(NameKind::Role, c.name()))
            throw Error(ErrorKind::UnknownName, "undeclared role '" + c.name() + "'");
        validate(c.child(), sig);
        break;
    case Concept::Kind::Not: validate(c.child(), sig); break;
    case Concept::Kind::And:
    case Concept::Kind::Or:
        validate(c.left(), sig);
        validate(c.right(), sig);
        break;
    default: break;
    }
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

Concept nnf_of(const Concept& c, bool negated) {
    using K = Concept::Kind;
    switch (c.kind()) {
    case K::Top: return negated ? Concept::bot() : c;
    case K::Bot: return negated ? Concept::top() : c;
    case K::Atomic: return negated ? Concept::negation(c) : c;
    case K::Not: return nnf_of(c.child(), !negated);
    case K::And:
        return negated ? Concept::disj(nnf_of(c.left(), true), nnf_of(c.right(), true))
                       : Concept::conj(nnf_of(c.left(), false), nnf_of(c.right(), false));
    case K::Or:
        return negated ? Concept::conj(nnf_of(c.left(), true), nnf_of(c.right(), true))
                       : Concept::disj(nnf_of(c.left(), false), nnf_of(c.right(), false));
    case K::Exists:
        return negated ? Concept::forall(c.name(), nnf_of(c.child(), true))
                       : Concept::exists(c.name(), nnf_of(c.child(), false));
    case K::Forall:
        return negated ? Concept::exists(c.name(), nnf_of(c.child(), true))
                       : Concept::forall(c.name(), nnf_of(c.child(), false));
    }
    return c;
}

void collect(const Concept& c, std::set<Concept>& out) {
    if (!out.insert(c).second)
        return;
    switch (c.kind()) {
    case Concept::Kind::And:
    case Concept::Kind::Or:
        collect(c.left(), out);
        collect(c.right(), out);
        break;
    case Concept::Kind::Not:
    case Concept::Kind::Exists:
    case Concept::Kind::Forall: collect(c.child(), out); break;
    default: break;
    }
}

void walk(const Concept& c, const std::function<void(const Concept&)>& f) {
    f(c);
    if (c.is_binary()) {
        walk(c.left(), f);
        walk(c.right(), f);
    } else if (c.kind() == Concept::Kind::Not || c.is_quantifier()) {
        walk(c.child(), f);
    }
}

} // namespace

Concept nnf(const Concept& c) { return nnf_of(c, false); }

std::set<Concept> subconcepts(const Concept& c) {
    std::set<Concept> out;
    collect(c, out);
    return out;
}

std::set<std::string> concept_names_in(const Concept& c) {
    std::set<std::string> out;
    walk(c, [&](const Concept& n) {
        if (n.kind() == Concept::Kind::Atomic)
            out.insert(n.name());
    });
    return out;
}

std::set<std::string> role_names_in(const Concept& c) {
    std::set<std::string> out;
    walk(c, [&](const Concept& n) {
        if (n.is_quantifier())
            out.insert(n.name());
    });
    return out;
}

} // namespace tapo
