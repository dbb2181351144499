#include "tapo/obox.hpp"

#include "tapo/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <ostream>
#include <sstream>

namespace tapo {

using nlohmann::json;

void validate(const OracleResponse& r, const Signature& sig) {
    for (const auto& a : r.additions) {
        validate(a, sig);
        if (r.deletions.count(a))
            throw Error(ErrorKind::Oracle,
                        "response both adds and deletes '" + to_string(a) + "'");
    }
    for (const auto& a : r.deletions)
        validate(a, sig);
}

void ScriptedOracle::add_entry(std::string payload, std::optional<std::string> state_digest,
                               OracleResponse response) {
    Key key{std::move(state_digest), std::move(payload)};
    if (table_.count(key))
        throw Error(ErrorKind::Validation, "duplicate script entry for payload '" + key.second + "'");
    table_.emplace(std::move(key), std::move(response));
}

OracleResponse ScriptedOracle::respond(const KnowledgeState& s, const OracleQuery& q) {
    std::string digest = canonical_abox(s.abox);
    for (const Key& key : {Key{digest, q.payload}, Key{digest, "*"}, Key{std::nullopt, q.payload},
                           Key{std::nullopt, "*"}}) {
        if (auto it = table_.find(key); it != table_.end())
            return it->second;
    }
    throw Error(ErrorKind::Oracle,
                "oracle '" + q.oracle + "' has no entry for payload '" + q.payload + "'");
}

// ---------------------------------------------------------------------------
// Records

namespace {

json assertions_json(const ABox& a) {
    json arr = json::array();
    std::vector<std::string> lines;
    for (const auto& x : a)
        lines.push_back(to_string(x));
    std::sort(lines.begin(), lines.end());
    for (auto& l : lines)
        arr.push_back(std::move(l));
    return arr;
}

json state_json(const std::string& digest) {
    json arr = json::array();
    std::istringstream in(digest);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            arr.push_back(line);
    return arr;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& message,
                            ErrorKind kind = ErrorKind::Validation) {
    throw Error(kind, message, {line, 1});
}

/// Re-raises parse errors of embedded assertion text at the record's line.
ABox parse_assertion_list(const json& arr, const Signature& sig, std::size_t line,
                          const char* field) {
    if (!arr.is_array())
        fail_line(line, std::string("field '") + field + "' must be a list of assertions");
    ABox out;
    for (const auto& item : arr) {
        if (!item.is_string())
            fail_line(line, std::string("field '") + field + "' must contain strings");
        try {
            out.insert(parse_assertion(item.get<std::string>(), sig));
        } catch (const Error& e) {
            fail_line(line,
                      std::string("in '") + field + "': " + e.message() + " (in \"" +
                          item.get<std::string>() + "\")",
                      e.kind());
        }
    }
    return out;
}

std::string field_string(const json& rec, const char* field, std::size_t line) {
    auto it = rec.find(field);
    if (it == rec.end())
        fail_line(line, std::string("missing field '") + field + "'", ErrorKind::Syntax);
    if (!it->is_string())
        fail_line(line, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

template <class F>
void for_each_json_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] != '#') {
            json rec;
            try {
                rec = json::parse(line);
            } catch (const json::parse_error& e) {
                std::string msg = e.what();
                if (auto p = msg.find("parse error"); p != std::string::npos)
                    msg = msg.substr(p);
                throw Error(ErrorKind::Syntax, "malformed record: " + msg,
                            {line_no, e.byte == 0 ? 1 : e.byte});
            }
            if (!rec.is_object())
                fail_line(line_no, "record must be a JSON object", ErrorKind::Syntax);
            f(rec, line_no);
        }
        if (end == text.size())
            break;
        start = end + 1;
    }
}

} // namespace

void SessionLog::append(const OracleQuery& q, const KnowledgeState& before,
                        const OracleResponse& r) {
    records_.push_back({records_.size(), q.oracle, q.payload, canonical_abox(before.abox), r});
}

void SessionLog::write(std::ostream& out) const {
    for (const auto& r : records_) {
        json rec;
        rec["seq"] = r.seq;
        rec["oracle"] = r.oracle;
        rec["match"] = r.payload;
        rec["state"] = state_json(r.state);
        rec["add"] = assertions_json(r.response.additions);
        rec["del"] = assertions_json(r.response.deletions);
        out << rec.dump() << '\n';
    }
}

std::string SessionLog::to_text() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

SessionLog SessionLog::read(std::string_view text, const Signature& sig) {
    SessionLog log;
    for_each_json_line(text, [&](const json& rec, std::size_t line) {
        SessionRecord r;
        auto seq = rec.find("seq");
        if (seq == rec.end() || !seq->is_number_unsigned())
            fail_line(line, "missing or invalid field 'seq'", ErrorKind::Syntax);
        r.seq = seq->get<std::size_t>();
        if (r.seq != log.records_.size())
            fail_line(line, "sequence number " + std::to_string(r.seq) + " out of order (expected " +
                                std::to_string(log.records_.size()) + ")");
        r.oracle = field_string(rec, "oracle", line);
        r.payload = field_string(rec, "match", line);
        ABox state = parse_assertion_list(rec.value("state", json::array()), sig, line, "state");
        r.state = canonical_abox(state);
        r.response.additions = parse_assertion_list(rec.value("add", json::array()), sig, line, "add");
        r.response.deletions = parse_assertion_list(rec.value("del", json::array()), sig, line, "del");
        try {
            validate(r.response, sig);
        } catch (const Error& e) {
            // a bad log is an input problem, whatever the check that caught it
            fail_line(line, e.message(), e.kind() == ErrorKind::Oracle ? ErrorKind::Validation : e.kind());
        }
        log.records_.push_back(std::move(r));
    });
    return log;
}

// ---------------------------------------------------------------------------
// O-Box

void OBox::add(OracleSpec spec) {
    std::string name = spec.name;
    oracles_[name] = std::move(spec);
}

const OracleSpec& OBox::get(const std::string& name) const {
    auto it = oracles_.find(name);
    if (it == oracles_.end())
        throw Error(ErrorKind::Oracle, "unknown oracle '" + name + "'");
    return it->second;
}

std::vector<std::string> OBox::names() const {
    std::vector<std::string> out;
    for (const auto& [n, _] : oracles_)
        out.push_back(n);
    return out;
}

OracleStep oracle_step(const KnowledgeState& s, const OracleSpec& spec, const OracleQuery& q,
                       const Signature& sig, SessionLog* log) {
    if (q.oracle != spec.name || !spec.behavior)
        throw Error(ErrorKind::Oracle, "unknown oracle '" + q.oracle + "'");
    OracleResponse r = spec.behavior->respond(s, q);
    validate(r, sig);
    if (!r.deletions.empty() && !spec.behavior->allow_deletions())
        throw Error(ErrorKind::Oracle,
                    "oracle '" + spec.name + "' returned deletions but allow_deletions is off");
    OracleStep out{s, r};
    for (const auto& a : r.additions)
        out.state.abox.insert(a);
    for (const auto& a : r.deletions)
        out.state.abox.erase(a);
    if (log)
        log->append(q, s, r);
    return out;
}

OracleStep oracle_step(const KnowledgeState& s, const OBox& obox, const OracleQuery& q,
                       const Signature& sig, SessionLog* log) {
    return oracle_step(s, obox.get(q.oracle), q, sig, log);
}

OBox load_oracle_script(std::string_view text, const Signature& sig) {
    std::map<std::string, std::shared_ptr<ScriptedOracle>> oracles;
    std::vector<std::pair<std::string, std::size_t>> deletion_lines;
    auto oracle_named = [&](const std::string& name, std::size_t line) {
        if (!is_valid_identifier(name))
            fail_line(line, "invalid oracle name '" + name + "'");
        auto& slot = oracles[name];
        if (!slot)
            slot = std::make_shared<ScriptedOracle>();
        return slot;
    };
    for_each_json_line(text, [&](const json& rec, std::size_t line) {
        static const std::set<std::string> known{"oracle", "match", "state", "add", "del",
                                                 "allow_deletions"};
        for (const auto& [key, _] : rec.items())
            if (!known.count(key))
                fail_line(line, "unknown field '" + key + "'");
        std::string name = field_string(rec, "oracle", line);
        auto oracle = oracle_named(name, line);
        if (auto flag = rec.find("allow_deletions"); flag != rec.end()) {
            if (!flag->is_boolean())
                fail_line(line, "field 'allow_deletions' must be a boolean");
            if (rec.contains("match"))
                fail_line(line, "'allow_deletions' belongs on an oracle header record");
            oracle->set_allow_deletions(flag->get<bool>());
            return;
        }
        if (!rec.contains("match")) {
            if (rec.contains("state") || rec.contains("add") || rec.contains("del"))
                fail_line(line, "missing field 'match'");
            return; // bare header: declares the oracle
        }
        std::string payload = field_string(rec, "match", line);
        std::optional<std::string> digest;
        if (auto st = rec.find("state"); st != rec.end())
            digest = canonical_abox(parse_assertion_list(*st, sig, line, "state"));
        OracleResponse r;
        r.additions = parse_assertion_list(rec.value("add", json::array()), sig, line, "add");
        r.deletions = parse_assertion_list(rec.value("del", json::array()), sig, line, "del");
        try {
            validate(r, sig);
            oracle->add_entry(payload, digest, r);
        } catch (const Error& e) {
            // a bad script is an input problem, whatever the check that caught it
            fail_line(line, e.message(), e.kind() == ErrorKind::Oracle ? ErrorKind::Validation : e.kind());
        }
        if (!r.deletions.empty())
            deletion_lines.emplace_back(name, line);
    });
    for (const auto& [name, line] : deletion_lines)
        if (!oracles[name]->allow_deletions())
            fail_line(line, "oracle '" + name + "' deletes assertions but its header does not set allow_deletions");
    OBox out;
    for (auto& [name, o] : oracles)
        out.add({name, o});
    return out;
}

void record_session(const SessionLog& log, std::ostream& sink) { log.write(sink); }

namespace {

class ReplayCursor {
public:
    explicit ReplayCursor(SessionLog log) : log_(std::move(log)) {}

    OracleResponse next(const KnowledgeState& s, const OracleQuery& q) {
        const auto& recs = log_.records();
        if (pos_ >= recs.size())
            throw Error(ErrorKind::Oracle, "session log truncated: no record for query at position " +
                                               std::to_string(pos_));
        const SessionRecord& r = recs[pos_];
        if (r.oracle != q.oracle || r.payload != q.payload || r.state != canonical_abox(s.abox)) {
            std::string what = r.oracle != q.oracle     ? "oracle"
                               : r.payload != q.payload ? "payload"
                                                        : "state";
            throw Error(ErrorKind::Oracle, "replay mismatch at position " + std::to_string(pos_) +
                                               ": query " + what + " differs from the recorded one");
        }
        ++pos_;
        return r.response;
    }

private:
    SessionLog log_;
    std::size_t pos_ = 0;
};

class ReplayOracle : public OracleBehavior {
public:
    explicit ReplayOracle(std::shared_ptr<ReplayCursor> cursor) : cursor_(std::move(cursor)) {}
    OracleResponse respond(const KnowledgeState& s, const OracleQuery& q) override {
        return cursor_->next(s, q);
    }
    // Deletions in a log were already admitted when it was recorded.
    bool allow_deletions() const override { return true; }

private:
    std::shared_ptr<ReplayCursor> cursor_;
};

} // namespace

OBox replay_session(const SessionLog& log) {
    auto cursor = std::make_shared<ReplayCursor>(log);
    OBox out;
    for (const auto& r : log.records())
        if (!out.has(r.oracle))
            out.add({r.oracle, std::make_shared<ReplayOracle>(cursor)});
    return out;
}

} // namespace tapo
