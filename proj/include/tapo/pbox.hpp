#pragma once

#include "tapo/kb.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tapo {

/// Program of the procedural layer: skip, add, del, sequencing,
/// conditionals and loops over knowledge states.
class Program {
public:
    enum class Kind : std::uint8_t { Skip, Add, Del, Seq, If, While };

    static Program skip();
    static Program add(Assertion a);
    static Program del(Assertion a);
    static Program seq(Program first, Program second);
    static Program if_then_else(Guard cond, Program then_branch, Program else_branch);
    static Program while_do(Guard cond, Program body);

    Kind kind() const noexcept;
    const Assertion& assertion() const;
    const Guard& guard() const;
    /// Seq: first; If: then-branch; While: body.
    const Program& first() const;
    /// Seq: second; If: else-branch.
    const Program& second() const;
    const Program& body() const { return first(); }

    /// Number of program nodes (guards and assertions count as part of
    /// their enclosing node).
    std::size_t size() const noexcept;

    friend bool operator==(const Program& a, const Program& b);

private:
    struct Node;
    explicit Program(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Program& p);

Program parse_program(TokenStream& ts, const Signature& sig);
Program parse_program(std::string_view text, const Signature& sig);

struct EvalOptions {
    /// Rule applications allowed before giving up.
    std::size_t fuel = 10'000;
    GuardOptions guards;
};

struct EvalOutcome {
    enum class Kind { Terminated, FuelExhausted };

    Kind kind = Kind::Terminated;
    /// Final state when terminated, state at the point fuel ran out otherwise.
    KnowledgeState state;
    std::size_t steps = 0;

    bool terminated() const noexcept { return kind == Kind::Terminated; }
    bool operator==(const EvalOutcome&) const = default;
};

struct TraceEntry {
    /// skip, add, del, if-true, if-false, while-true, while-false
    std::string rule;
    std::optional<bool> guard;
    ABox added;
    ABox removed;

    bool operator==(const TraceEntry&) const = default;
};

struct TracedOutcome {
    EvalOutcome outcome;
    std::vector<TraceEntry> trace;
};

/// Raised when guard evaluation fails mid-run (for instance the tableau
/// budget runs out). Carries the state and trace up to that point.
class EvalAborted : public Error {
public:
    EvalAborted(const Error& cause, KnowledgeState state, std::size_t steps,
                std::vector<TraceEntry> trace);

    const KnowledgeState& state() const noexcept { return state_; }
    std::size_t steps() const noexcept { return steps_; }
    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
    ErrorKind cause() const noexcept { return cause_; }

private:
    ErrorKind cause_;
    KnowledgeState state_;
    std::size_t steps_;
    std::vector<TraceEntry> trace_;
};

/// Big-step evaluation. One unit of fuel per rule application (skip, add,
/// del, seq, each if decision, each while unfolding); guard checks are free.
/// The TBox is never modified.
EvalOutcome eval(const Program& p, const KnowledgeState& s, const EvalOptions& opts = {});

/// As eval, also recording every rule application except sequencing, in
/// execution order.
TracedOutcome eval_trace(const Program& p, const KnowledgeState& s, const EvalOptions& opts = {});

} // namespace tapo
