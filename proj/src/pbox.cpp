#include "tapo/pbox.hpp"

#include "tapo/error.hpp"

#include <stdexcept>

namespace tapo {

struct Program::Node {
    Kind kind;
    std::optional<Assertion> assertion;
    std::optional<Guard> guard;
    std::optional<Program> first;
    std::optional<Program> second;
    std::size_t size = 1;
};

Program Program::skip() {
    static const Program p(std::make_shared<const Node>(Node{Kind::Skip}));
    return p;
}

Program Program::add(Assertion a) {
    return Program(std::make_shared<const Node>(Node{Kind::Add, std::move(a)}));
}

Program Program::del(Assertion a) {
    return Program(std::make_shared<const Node>(Node{Kind::Del, std::move(a)}));
}

Program Program::seq(Program first, Program second) {
    std::size_t n = 1 + first.size() + second.size();
    return Program(std::make_shared<const Node>(
        Node{Kind::Seq, {}, {}, std::move(first), std::move(second), n}));
}

Program Program::if_then_else(Guard cond, Program then_branch, Program else_branch) {
    std::size_t n = 1 + then_branch.size() + else_branch.size();
    return Program(std::make_shared<const Node>(Node{
        Kind::If, {}, std::move(cond), std::move(then_branch), std::move(else_branch), n}));
}

Program Program::while_do(Guard cond, Program body) {
    std::size_t n = 1 + body.size();
    return Program(
        std::make_shared<const Node>(Node{Kind::While, {}, std::move(cond), std::move(body), {}, n}));
}

Program::Kind Program::kind() const noexcept { return node_->kind; }
std::size_t Program::size() const noexcept { return node_->size; }

const Assertion& Program::assertion() const {
    if (!node_->assertion)
        throw std::logic_error("program node has no assertion");
    return *node_->assertion;
}

const Guard& Program::guard() const {
    if (!node_->guard)
        throw std::logic_error("program node has no guard");
    return *node_->guard;
}

const Program& Program::first() const {
    if (!node_->first)
        throw std::logic_error("program node has no sub-program");
    return *node_->first;
}

const Program& Program::second() const {
    if (!node_->second)
        throw std::logic_error("program node has no second sub-program");
    return *node_->second;
}

bool operator==(const Program& a, const Program& b) {
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.size == y.size && x.assertion == y.assertion &&
           x.guard == y.guard && x.first == y.first && x.second == y.second;
}

// ---------------------------------------------------------------------------
// Syntax

namespace {

void print(const Program& p, std::string& out) {
    switch (p.kind()) {
    case Program::Kind::Skip: out += "skip"; break;
    case Program::Kind::Add: out += "add " + to_string(p.assertion()); break;
    case Program::Kind::Del: out += "del " + to_string(p.assertion()); break;
    case Program::Kind::Seq:
        print(p.first(), out);
        out += " ; ";
        if (p.second().kind() == Program::Kind::Seq) {
            out += '(';
            print(p.second(), out);
            out += ')';
        } else {
            print(p.second(), out);
        }
        break;
    case Program::Kind::If:
        out += "if " + to_string(p.guard()) + " then ";
        print(p.first(), out);
        out += " else ";
        print(p.second(), out);
        out += " fi";
        break;
    case Program::Kind::While:
        out += "while " + to_string(p.guard()) + " do ";
        print(p.body(), out);
        out += " od";
        break;
    }
}

class ProgramParser {
public:
    ProgramParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

    Program parse_seq() {
        Program lhs = parse_statement();
        std::size_t n = 1;
        while (ts_.accept(Tok::Semi)) {
            ts_.chain_step(n);
            lhs = Program::seq(std::move(lhs), parse_statement());
        }
        return lhs;
    }

private:
    Program parse_statement() {
        TokenStream::Nesting level(ts_);
        if (ts_.accept_word("skip"))
            return Program::skip();
        if (ts_.accept_word("add"))
            return Program::add(parse_assertion(ts_, sig_));
        if (ts_.accept_word("del"))
            return Program::del(parse_assertion(ts_, sig_));
        if (ts_.accept_word("if")) {
            Guard g = parse_guard(ts_, sig_);
            ts_.expect_word("then");
            Program then_branch = parse_seq();
            ts_.expect_word("else");
            Program else_branch = parse_seq();
            ts_.expect_word("fi");
            return Program::if_then_else(std::move(g), std::move(then_branch), std::move(else_branch));
        }
        if (ts_.accept_word("while")) {
            Guard g = parse_guard(ts_, sig_);
            ts_.expect_word("do");
            Program body = parse_seq();
            ts_.expect_word("od");
            return Program::while_do(std::move(g), std::move(body));
        }
        if (ts_.accept(Tok::LParen)) {
            Program inner = parse_seq();
            ts_.expect(Tok::RParen, "')'");
            return inner;
        }
        ts_.fail("expected statement, found " + describe_token(ts_.peek()));
    }

    TokenStream& ts_;
    const Signature& sig_;
};

} // namespace

std::string to_string(const Program& p) {
    std::string out;
    print(p, out);
    return out;
}

Program parse_program(TokenStream& ts, const Signature& sig) { return ProgramParser(ts, sig).parse_seq(); }

Program parse_program(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    Program p = parse_program(ts, sig);
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after program");
    return p;
}

// ---------------------------------------------------------------------------
// Evaluation

EvalAborted::EvalAborted(const Error& cause, KnowledgeState state, std::size_t steps,
                         std::vector<TraceEntry> trace)
    : Error(ErrorKind::Runtime,
            "evaluation aborted after " + std::to_string(steps) + " steps: " + cause.message()),
      cause_(cause.kind()), state_(std::move(state)), steps_(steps), trace_(std::move(trace)) {}

namespace {

class Evaluator {
public:
    Evaluator(const EvalOptions& opts, std::vector<TraceEntry>* trace)
        : opts_(opts), trace_(trace) {}

    /// False once fuel is exhausted; `s` then holds the state reached.
    bool run(const Program& p, KnowledgeState& s) {
        switch (p.kind()) {
        case Program::Kind::Skip:
            if (!consume())
                return false;
            record("skip", std::nullopt, {}, {});
            return true;
        case Program::Kind::Add: {
            if (!consume())
                return false;
            bool fresh = s.abox.insert(p.assertion()).second;
            record("add", std::nullopt, fresh ? ABox{p.assertion()} : ABox{}, {});
            return true;
        }
        case Program::Kind::Del: {
            if (!consume())
                return false;
            bool present = s.abox.erase(p.assertion()) != 0;
            record("del", std::nullopt, {}, present ? ABox{p.assertion()} : ABox{});
            return true;
        }
        case Program::Kind::Seq:
            if (!consume())
                return false;
            return run(p.first(), s) && run(p.second(), s);
        case Program::Kind::If: {
            if (!consume())
                return false;
            bool g = check(p.guard(), s);
            record(g ? "if-true" : "if-false", g, {}, {});
            return run(g ? p.first() : p.second(), s);
        }
        case Program::Kind::While:
            // Each unfolding is one rule instance; iterating keeps the native
            // stack flat for long-running loops.
            for (;;) {
                if (!consume())
                    return false;
                bool g = check(p.guard(), s);
                record(g ? "while-true" : "while-false", g, {}, {});
                if (!g)
                    return true;
                if (!run(p.body(), s))
                    return false;
            }
        }
        return true;
    }

    std::size_t steps() const { return steps_; }

private:
    bool consume() {
        if (steps_ >= opts_.fuel)
            return false;
        ++steps_;
        return true;
    }

    bool check(const Guard& g, KnowledgeState& s) {
        try {
            return guard_sat(s, g, opts_.guards);
        } catch (const EvalAborted&) {
            throw;
        } catch (const Error& e) {
            throw EvalAborted(e, s, steps_, trace_ ? *trace_ : std::vector<TraceEntry>{});
        }
    }

    void record(const char* rule, std::optional<bool> guard, ABox added, ABox removed) {
        if (trace_)
            trace_->push_back({rule, guard, std::move(added), std::move(removed)});
    }

    const EvalOptions& opts_;
    std::vector<TraceEntry>* trace_;
    std::size_t steps_ = 0;
};

EvalOutcome finish(bool done, KnowledgeState s, std::size_t steps) {
    EvalOutcome out;
    out.kind = done ? EvalOutcome::Kind::Terminated : EvalOutcome::Kind::FuelExhausted;
    out.state = std::move(s);
    out.steps = steps;
    return out;
}

} // namespace

EvalOutcome eval(const Program& p, const KnowledgeState& s, const EvalOptions& opts) {
    if (opts.fuel == 0)
        throw Error(ErrorKind::Validation, "fuel must be at least 1");
    Evaluator ev(opts, nullptr);
    KnowledgeState state = s;
    bool done = ev.run(p, state);
    return finish(done, std::move(state), ev.steps());
}

TracedOutcome eval_trace(const Program& p, const KnowledgeState& s, const EvalOptions& opts) {
    if (opts.fuel == 0)
        throw Error(ErrorKind::Validation, "fuel must be at least 1");
    TracedOutcome out;
    Evaluator ev(opts, &out.trace);
    KnowledgeState state = s;
    bool done = ev.run(p, state);
    out.outcome = finish(done, std::move(state), ev.steps());
    return out;
}

} // namespace tapo
