#include "tapo/kb.hpp"

#include "tapo/error.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tapo {

const std::string& context_of(const Assertion& a) {
    return std::visit([](const auto& x) -> const std::string& { return x.context; }, a);
}

Assertion with_context(const Assertion& a, std::string context) {
    return std::visit(
        [&](auto x) -> Assertion {
            x.context = std::move(context);
            return x;
        },
        a);
}

std::string to_string(const Assertion& a) {
    if (const auto* c = std::get_if<ConceptAssertion>(&a))
        return c->individual + " : " + to_string(c->concept_expr) + " @ " + c->context;
    const auto& r = std::get<RoleAssertion>(a);
    return "(" + r.subject + ", " + r.object + ") : " + r.role + " @ " + r.context;
}

namespace {

const Token& expect_declared(TokenStream& ts, const Signature& sig, NameKind kind) {
    const Token& tok = ts.expect_name(std::string(to_string(kind)) + " name");
    if (!sig.has(kind, tok.text)) {
        NameKind other;
        std::string extra;
        if (sig.lookup(tok.text, other))
            extra = std::string(" (declared as ") + to_string(other) + ")";
        throw Error(ErrorKind::UnknownName,
                    std::string("undeclared ") + to_string(kind) + " '" + tok.text + "'" + extra,
                    tok.pos);
    }
    return tok;
}

bool later(const SourcePos& a, const SourcePos& b) {
    return a.line != b.line ? a.line > b.line : a.column > b.column;
}

} // namespace

Assertion parse_assertion(TokenStream& ts, const Signature& sig) {
    if (ts.accept(Tok::LParen)) {
        RoleAssertion r;
        r.subject = expect_declared(ts, sig, NameKind::Individual).text;
        ts.expect(Tok::Comma, "','");
        r.object = expect_declared(ts, sig, NameKind::Individual).text;
        ts.expect(Tok::RParen, "')'");
        ts.expect(Tok::Colon, "':'");
        r.role = expect_declared(ts, sig, NameKind::Role).text;
        ts.expect(Tok::At, "'@'");
        r.context = expect_declared(ts, sig, NameKind::Context).text;
        return r;
    }
    ConceptAssertion c;
    c.individual = expect_declared(ts, sig, NameKind::Individual).text;
    ts.expect(Tok::Colon, "':'");
    c.concept_expr = parse_concept(ts, sig);
    ts.expect(Tok::At, "'@'");
    c.context = expect_declared(ts, sig, NameKind::Context).text;
    return c;
}

Assertion parse_assertion(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    Assertion a = parse_assertion(ts, sig);
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after assertion");
    return a;
}

void validate(const Assertion& a, const Signature& sig) {
    auto need = [&](NameKind kind, const std::string& name) {
        if (!sig.has(kind, name))
            throw Error(ErrorKind::UnknownName,
                        std::string("undeclared ") + to_string(kind) + " '" + name + "'");
    };
    if (const auto* c = std::get_if<ConceptAssertion>(&a)) {
        need(NameKind::Individual, c->individual);
        validate(c->concept_expr, sig);
        need(NameKind::Context, c->context);
    } else {
        const auto& r = std::get<RoleAssertion>(a);
        need(NameKind::Individual, r.subject);
        need(NameKind::Individual, r.object);
        need(NameKind::Role, r.role);
        need(NameKind::Context, r.context);
    }
}

std::string canonical_abox(const ABox& a) {
    std::vector<std::string> lines;
    lines.reserve(a.size());
    for (const auto& x : a)
        lines.push_back(to_string(x));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

ABox saturate(const ABox& a, const ContextPoset& p) {
    ABox out;
    for (const auto& x : a)
        for (const auto& v : p.below(context_of(x)))
            out.insert(with_context(x, v));
    return out;
}

// ---------------------------------------------------------------------------
// Guards

struct Guard::Node {
    Kind kind;
    std::optional<Assertion> assertion;
    std::optional<Concept> sub;
    std::optional<Concept> super;
    std::optional<Guard> left;
    std::optional<Guard> right;
};

Guard Guard::truth() {
    static const Guard g(std::make_shared<const Node>(Node{Kind::True}));
    return g;
}

Guard Guard::falsity() {
    static const Guard g(std::make_shared<const Node>(Node{Kind::False}));
    return g;
}

Guard Guard::atom(Assertion a) {
    return Guard(std::make_shared<const Node>(Node{Kind::Atom, std::move(a)}));
}

Guard Guard::subsume(Concept sub, Concept super) {
    return Guard(
        std::make_shared<const Node>(Node{Kind::Subsume, {}, std::move(sub), std::move(super)}));
}

Guard Guard::negation(Guard g) {
    return Guard(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {}, std::move(g)}));
}

Guard Guard::conj(Guard a, Guard b) {
    return Guard(
        std::make_shared<const Node>(Node{Kind::And, {}, {}, {}, std::move(a), std::move(b)}));
}

Guard Guard::disj(Guard a, Guard b) {
    return negation(conj(negation(std::move(a)), negation(std::move(b))));
}

Guard::Kind Guard::kind() const noexcept { return node_->kind; }

const Assertion& Guard::assertion() const {
    if (!node_->assertion)
        throw std::logic_error("guard is not an assertion atom");
    return *node_->assertion;
}

const Concept& Guard::sub() const {
    if (!node_->sub)
        throw std::logic_error("guard is not a subsumption atom");
    return *node_->sub;
}

const Concept& Guard::super() const {
    if (!node_->super)
        throw std::logic_error("guard is not a subsumption atom");
    return *node_->super;
}

const Guard& Guard::left() const {
    if (!node_->left)
        throw std::logic_error("guard has no operand");
    return *node_->left;
}

const Guard& Guard::right() const {
    if (!node_->right)
        throw std::logic_error("guard has no second operand");
    return *node_->right;
}

bool operator==(const Guard& a, const Guard& b) {
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.assertion == y.assertion && x.sub == y.sub &&
           x.super == y.super && x.left == y.left && x.right == y.right;
}

namespace {

int guard_precedence(const Guard& g) {
    switch (g.kind()) {
    case Guard::Kind::And: return 1;
    case Guard::Kind::Not: return 2;
    default: return 3;
    }
}

void print_guard(const Guard& g, std::string& out);

void print_guard_operand(const Guard& g, int min_prec, std::string& out) {
    if (guard_precedence(g) < min_prec) {
        out += '(';
        print_guard(g, out);
        out += ')';
    } else {
        print_guard(g, out);
    }
}

void print_guard(const Guard& g, std::string& out) {
    switch (g.kind()) {
    case Guard::Kind::True: out += "true"; break;
    case Guard::Kind::False: out += "false"; break;
    case Guard::Kind::Atom: out += to_string(g.assertion()); break;
    case Guard::Kind::Subsume: {
        // A leading '!' would be read as guard negation, so wrap it.
        out += '(';
        bool wrap = g.sub().kind() == Concept::Kind::Not;
        out += wrap ? "(" + to_string(g.sub()) + ")" : to_string(g.sub());
        out += " <= ";
        out += to_string(g.super());
        out += ')';
        break;
    }
    case Guard::Kind::Not:
        out += '!';
        print_guard_operand(g.child(), 2, out);
        break;
    case Guard::Kind::And:
        print_guard_operand(g.left(), 1, out);
        out += " & ";
        print_guard_operand(g.right(), 2, out);
        break;
    }
}

class GuardParser {
public:
    GuardParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

    Guard parse_or() {
        Guard lhs = parse_and();
        std::size_t n = 1;
        while (ts_.accept(Tok::Bar)) {
            ts_.chain_step(n);
            lhs = Guard::disj(std::move(lhs), parse_and());
        }
        return lhs;
    }

private:
    Guard parse_and() {
        Guard lhs = parse_not();
        std::size_t n = 1;
        while (ts_.accept(Tok::Amp)) {
            ts_.chain_step(n);
            lhs = Guard::conj(std::move(lhs), parse_not());
        }
        return lhs;
    }

    Guard parse_not() {
        TokenStream::Nesting level(ts_);
        if (ts_.accept(Tok::Bang))
            return Guard::negation(parse_not());
        return parse_atom();
    }

    Guard parse_subsumption() {
        Concept sub = parse_concept(ts_, sig_);
        ts_.expect(Tok::Leq, "'<=' in subsumption guard");
        Concept super = parse_concept(ts_, sig_);
        return Guard::subsume(std::move(sub), std::move(super));
    }

    Guard parse_atom() {
        if (ts_.accept_word("true"))
            return Guard::truth();
        if (ts_.accept_word("false"))
            return Guard::falsity();
        if (ts_.at(Tok::Ident) && ts_.peek(1).kind == Tok::Colon)
            return Guard::atom(parse_assertion(ts_, sig_));
        if (ts_.at(Tok::LParen) && ts_.peek(1).kind == Tok::Ident &&
            ts_.peek(2).kind == Tok::Comma)
            return Guard::atom(parse_assertion(ts_, sig_));
        if (ts_.at(Tok::LParen)) {
            // Either a subsumption whose left side is parenthesised, or a
            // parenthesised guard. Keep whichever error got further.
            std::size_t start = ts_.mark();
            std::optional<Error> first;
            try {
                return parse_subsumption();
            } catch (const Error& e) {
                first = e;
            }
            ts_.reset(start);
            try {
                ts_.expect(Tok::LParen, "'('");
                Guard inner = parse_or();
                ts_.expect(Tok::RParen, "')'");
                return inner;
            } catch (const Error& e) {
                if (later(first->pos(), e.pos()))
                    throw *first;
                throw;
            }
        }
        if (ts_.at(Tok::Ident) || ts_.at(Tok::Bang))
            return parse_subsumption();
        ts_.fail("expected guard, found " + describe_token(ts_.peek()));
    }

    TokenStream& ts_;
    const Signature& sig_;
};

} // namespace

std::string to_string(const Guard& g) {
    std::string out;
    print_guard(g, out);
    return out;
}

Guard parse_guard(TokenStream& ts, const Signature& sig) { return GuardParser(ts, sig).parse_or(); }

Guard parse_guard(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    Guard g = parse_guard(ts, sig);
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after guard");
    return g;
}

const char* to_string(GuardMode m) noexcept {
    return m == GuardMode::Literal ? "literal" : "saturated";
}

bool holds(const ABox& a, const Assertion& atom, const GuardOptions& opts) {
    if (opts.mode == GuardMode::Literal)
        return a.count(atom) != 0;
    if (opts.poset == nullptr)
        throw Error(ErrorKind::Runtime, "saturated guard mode needs a context poset");
    const std::string& v = context_of(atom);
    for (const auto& u : opts.poset->contexts())
        if (opts.poset->leq(v, u) && a.count(with_context(atom, u)))
            return true;
    return false;
}

bool guard_sat(const KnowledgeState& s, const Guard& g, const GuardOptions& opts) {
    switch (g.kind()) {
    case Guard::Kind::True: return true;
    case Guard::Kind::False: return false;
    case Guard::Kind::Atom: return holds(s.abox, g.assertion(), opts);
    case Guard::Kind::Subsume: return subsumes(s.tbox, g.sub(), g.super(), opts.reasoner);
    case Guard::Kind::Not: return !guard_sat(s, g.child(), opts);
    case Guard::Kind::And: return guard_sat(s, g.left(), opts) && guard_sat(s, g.right(), opts);
    }
    return false;
}

} // namespace tapo
