#pragma once

#include "tapo/kb.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tapo {

struct OracleQuery {
    std::string oracle;
    std::string payload;
};

struct OracleResponse {
    ABox additions;
    ABox deletions;

    bool operator==(const OracleResponse&) const = default;
};

/// Throws Error(Oracle) if additions and deletions overlap, Error(UnknownName)
/// for undeclared names.
void validate(const OracleResponse& r, const Signature& sig);

/// Source of externally justified transitions. Implementations must be
/// functions of (state, query) for record/replay to be meaningful.
class OracleBehavior {
public:
    virtual ~OracleBehavior() = default;
    virtual OracleResponse respond(const KnowledgeState& s, const OracleQuery& q) = 0;
    virtual bool allow_deletions() const { return false; }
};

/// Table-driven oracle. Keys are (state digest or wildcard, payload or "*").
/// Lookup prefers a state-specific entry, then an exact payload.
class ScriptedOracle : public OracleBehavior {
public:
    explicit ScriptedOracle(bool allow_deletions = false) : allow_deletions_(allow_deletions) {}

    /// Throws Error(Validation) if the key is already present.
    void add_entry(std::string payload, std::optional<std::string> state_digest,
                   OracleResponse response);

    OracleResponse respond(const KnowledgeState& s, const OracleQuery& q) override;
    bool allow_deletions() const override { return allow_deletions_; }
    void set_allow_deletions(bool v) { allow_deletions_ = v; }
    std::size_t entry_count() const { return table_.size(); }

private:
    using Key = std::pair<std::optional<std::string>, std::string>;
    std::map<Key, OracleResponse> table_;
    bool allow_deletions_;
};

struct OracleSpec {
    std::string name;
    std::shared_ptr<OracleBehavior> behavior;
};

/// One transition of a session, as written to and read from a session log.
struct SessionRecord {
    std::size_t seq = 0;
    std::string oracle;
    std::string payload;
    /// canonical_abox of the state the query was asked in
    std::string state;
    OracleResponse response;

    bool operator==(const SessionRecord&) const = default;
};

/// Append-only log of oracle transitions.
class SessionLog {
public:
    void append(const OracleQuery& q, const KnowledgeState& before, const OracleResponse& r);
    const std::vector<SessionRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

    /// One JSON record per line.
    void write(std::ostream& out) const;
    std::string to_text() const;
    /// Throws Error(Syntax/Validation) with line positions.
    static SessionLog read(std::string_view text, const Signature& sig);

private:
    std::vector<SessionRecord> records_;
};

/// The loaded O-Box: oracle name -> behaviour.
class OBox {
public:
    void add(OracleSpec spec);
    bool has(const std::string& name) const { return oracles_.count(name) != 0; }
    /// Throws Error(Oracle, "unknown oracle ...").
    const OracleSpec& get(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, OracleSpec> oracles_;
};

struct OracleStep {
    KnowledgeState state;
    OracleResponse response;
};

/// (T, A) -> (T, (A ∪ additions) \ deletions). Records the transition in
/// `log` when given.
OracleStep oracle_step(const KnowledgeState& s, const OracleSpec& spec, const OracleQuery& q,
                       const Signature& sig, SessionLog* log = nullptr);
OracleStep oracle_step(const KnowledgeState& s, const OBox& obox, const OracleQuery& q,
                       const Signature& sig, SessionLog* log = nullptr);

/// Parses an oracle script: JSON lines with fields oracle, match, state
/// (optional list of assertions), add, del; a record without `match` is an
/// oracle header and may set allow_deletions.
OBox load_oracle_script(std::string_view text, const Signature& sig);

/// Writes the oracle log (same shape as record_session output).
void record_session(const SessionLog& log, std::ostream& sink);

/// An O-Box that answers by replaying `log` in order. Every oracle named in
/// the log shares one cursor; a divergent query or running past the end is an
/// Error(Oracle) naming the position.
OBox replay_session(const SessionLog& log);

} // namespace tapo
