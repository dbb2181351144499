#include "tapo/behavior.hpp"

#include "tapo/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace tapo {

using nlohmann::json;

bool FactPattern::matches(const Fact& f) const {
    if (any)
        return true;
    auto ok = [](const std::string& pat, const std::string& v) { return pat == "*" || pat == v; };
    if (const auto* c = std::get_if<ConceptFact>(&f))
        return !is_role && name == c->concept_name && ok(subject, c->individual);
    const auto& r = std::get<RoleFact>(f);
    return is_role && name == r.role && ok(subject, r.subject) && ok(object, r.object);
}

std::string to_string(const FactPattern& p) {
    if (p.any)
        return "*";
    if (p.is_role)
        return "(" + p.subject + "," + p.object + "):" + p.name;
    return p.subject + ":" + p.name;
}

FactPattern parse_fact_pattern(std::string_view text, const Signature& sig) {
    TokenStream ts(tokenize(text));
    auto individual = [&]() -> std::string {
        if (ts.accept(Tok::Star))
            return "*";
        const Token& tok = ts.expect_name("individual name or '*'");
        if (!sig.has(NameKind::Individual, tok.text))
            throw Error(ErrorKind::UnknownName, "undeclared individual '" + tok.text + "'", tok.pos);
        return tok.text;
    };
    FactPattern p;
    if (ts.peek().kind == Tok::Star && ts.peek(1).kind == Tok::End) {
        ts.next();
        p.any = true;
        return p;
    }
    if (ts.accept(Tok::LParen)) {
        p.is_role = true;
        p.subject = individual();
        ts.expect(Tok::Comma, "','");
        p.object = individual();
        ts.expect(Tok::RParen, "')'");
        ts.expect(Tok::Colon, "':'");
        const Token& r = ts.expect_name("role name");
        if (!sig.has(NameKind::Role, r.text))
            throw Error(ErrorKind::UnknownName, "undeclared role '" + r.text + "'", r.pos);
        p.name = r.text;
    } else {
        p.subject = individual();
        ts.expect(Tok::Colon, "':'");
        const Token& c = ts.expect_name("concept name");
        if (!sig.has(NameKind::Concept, c.text))
            throw Error(ErrorKind::UnknownName, "undeclared concept '" + c.text + "'", c.pos);
        p.name = c.text;
    }
    if (!ts.at_end())
        ts.fail("unexpected " + describe_token(ts.peek()) + " after fact pattern");
    return p;
}

std::vector<std::uint64_t> SeedPolicy::seeds(std::size_t runs) const {
    std::vector<std::uint64_t> out(runs, start);
    if (kind == Kind::Sequential)
        for (std::size_t i = 0; i < runs; ++i)
            out[i] = start + i;
    return out;
}

std::string to_string(const SeedPolicy& p) {
    return (p.kind == SeedPolicy::Kind::Constant ? "constant:" : "sequential:") +
           std::to_string(p.start);
}

void Agent::validate() const {
    if (!kb)
        throw Error(ErrorKind::Validation, "agent '" + name + "' has no knowledge base");
    for (const auto* ctx : {&input_context, &output_context})
        if (!kb->poset.contains(*ctx))
            throw Error(ErrorKind::UnknownName, "agent '" + name + "' uses undeclared context '" + *ctx + "'");
    if (projections.empty())
        throw Error(ErrorKind::Validation, "agent '" + name + "' has no projection");
    if (!queries.empty() && !obox)
        throw Error(ErrorKind::Validation, "agent '" + name + "' issues queries but has no oracle script");
    for (const auto& q : queries)
        obox->get(q.oracle);
    if (fuel == 0)
        throw Error(ErrorKind::Validation, "agent fuel must be at least 1");
}

namespace {

Assertion as_assertion(const Fact& f, const std::string& context) {
    if (const auto* c = std::get_if<ConceptFact>(&f))
        return ConceptAssertion{c->individual, Concept::atomic(c->concept_name), context};
    const auto& r = std::get<RoleFact>(f);
    return RoleAssertion{r.subject, r.object, r.role, context};
}

std::optional<Fact> as_fact(const Assertion& a) {
    if (const auto* c = std::get_if<ConceptAssertion>(&a)) {
        if (c->concept_expr.kind() != Concept::Kind::Atomic)
            return std::nullopt;
        return ConceptFact{c->individual, c->concept_expr.name()};
    }
    const auto& r = std::get<RoleAssertion>(a);
    return RoleFact{r.subject, r.object, r.role};
}

std::string substitute_seed(std::string text, std::uint64_t seed) {
    const std::string key = "{seed}";
    const std::string value = std::to_string(seed);
    for (std::size_t p = text.find(key); p != std::string::npos; p = text.find(key, p + value.size()))
        text.replace(p, key.size(), value);
    return text;
}

} // namespace

Manifested interact(const Agent& e, const LatentStructure& i, std::optional<std::uint64_t> seed) {
    e.validate();
    const std::uint64_t s = seed.value_or(0);
    const Signature& sig = e.kb->signature;
    KnowledgeState state = e.kb->state();
    for (const auto& f : i.payload) {
        Assertion a = as_assertion(f, e.input_context);
        validate(a, sig);
        state.abox.insert(std::move(a));
    }
    for (const auto& q : e.queries) {
        OracleQuery query{q.oracle, substitute_seed(q.payload, s)};
        state = oracle_step(state, *e.obox, query, sig).state;
    }
    if (e.program) {
        EvalOptions opts;
        opts.fuel = e.fuel;
        opts.guards.mode = e.guards;
        opts.guards.poset = &e.kb->poset;
        EvalOutcome out = eval(*e.program, state, opts);
        if (!out.terminated())
            throw Error(ErrorKind::Runtime, "agent '" + e.name + "' program exhausted its fuel after " +
                                                std::to_string(out.steps) + " steps");
        state = std::move(out.state);
    }
    const auto& projection = e.projections[s % e.projections.size()];
    Manifested m;
    for (const auto& a : state.abox) {
        if (context_of(a) != e.output_context)
            continue;
        auto f = as_fact(a);
        if (!f)
            continue;
        if (std::any_of(projection.begin(), projection.end(),
                        [&](const FactPattern& p) { return p.matches(*f); }))
            m.facts.insert(*f);
    }
    return m;
}

StabilityReport stability_check(const Agent& e, const LatentStructure& i, std::size_t runs,
                                const SeedPolicy& policy) {
    if (runs < 2)
        throw Error(ErrorKind::Validation, "stability check needs at least 2 runs, got " + std::to_string(runs));
    StabilityReport rep;
    rep.policy = policy;
    for (std::uint64_t seed : policy.seeds(runs)) {
        RunRecord run{seed, std::nullopt, {}};
        try {
            run.value = interact(e, i, seed);
        } catch (const Error& err) {
            run.error = err.message();
        }
        auto same = [&](const StabilityReport::Outcome& o) {
            return o.value == run.value && o.error == run.error;
        };
        auto it = std::find_if(rep.outcomes.begin(), rep.outcomes.end(), same);
        if (it == rep.outcomes.end())
            rep.outcomes.push_back({run.value, run.error, 1});
        else
            ++it->count;
        rep.runs.push_back(std::move(run));
    }
    rep.stable = rep.outcomes.size() == 1 && rep.outcomes.front().value.has_value();
    if (rep.stable)
        rep.value = rep.outcomes.front().value;
    return rep;
}

// ---------------------------------------------------------------------------
// Agent files

namespace {

[[noreturn]] void agent_error(const std::string& message) {
    throw Error(ErrorKind::Validation, message, {1, 1});
}

std::string string_field(const json& j, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required)
            agent_error(std::string("agent definition is missing '") + key + "'");
        return {};
    }
    if (!it->is_string())
        agent_error(std::string("agent field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <class F>
auto load_referenced(const std::filesystem::path& path, F&& f) {
    try {
        return f(read_file(path));
    } catch (const Error& e) {
        if (!e.source().empty())
            throw;
        throw e.in_source(path.string());
    }
}

} // namespace

Agent parse_agent(std::string_view json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (auto p = msg.find("parse error"); p != std::string::npos)
            msg = msg.substr(p);
        // nlohmann reports a byte offset; translate to line:col
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < json_text.size(); ++k) {
            if (json_text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorKind::Syntax, "malformed agent definition: " + msg, {line, col});
    }
    if (!j.is_object())
        agent_error("agent definition must be a JSON object");
    static const std::set<std::string> known{"name",  "kb",     "program",     "oracle_script",
                                             "queries", "input_context", "output_context", "projection",
                                             "projections", "fuel", "guards", "seeds"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            agent_error("unknown agent field '" + key + "'");

    Agent a;
    a.name = string_field(j, "name", true);
    auto kb_path = resolve(base_dir, string_field(j, "kb", true));
    a.kb = std::make_shared<const KBDocument>(load_kb(kb_path));
    const Signature& sig = a.kb->signature;

    if (auto p = string_field(j, "program", false); !p.empty()) {
        auto path = resolve(base_dir, p);
        a.program = load_referenced(path, [&](const std::string& text) { return parse_program(text, sig); });
    }
    if (auto s = string_field(j, "oracle_script", false); !s.empty()) {
        auto path = resolve(base_dir, s);
        a.obox = std::make_shared<const OBox>(
            load_referenced(path, [&](const std::string& text) { return load_oracle_script(text, sig); }));
    }
    if (auto q = j.find("queries"); q != j.end()) {
        if (!q->is_array())
            agent_error("agent field 'queries' must be a list");
        for (const auto& item : *q) {
            if (!item.is_object())
                agent_error("each query must be an object with 'oracle' and 'payload'");
            a.queries.push_back({string_field(item, "oracle", true), string_field(item, "payload", true)});
        }
    }
    a.input_context = string_field(j, "input_context", true);
    a.output_context = string_field(j, "output_context", true);

    auto parse_projection = [&](const json& arr) {
        if (!arr.is_array())
            agent_error("a projection must be a list of fact patterns");
        std::vector<FactPattern> out;
        for (const auto& item : arr) {
            if (!item.is_string())
                agent_error("fact patterns must be strings");
            try {
                out.push_back(parse_fact_pattern(item.get<std::string>(), sig));
            } catch (const Error& e) {
                agent_error("in projection pattern '" + item.get<std::string>() + "': " + e.message());
            }
        }
        return out;
    };
    if (auto p = j.find("projection"); p != j.end())
        a.projections.push_back(parse_projection(*p));
    if (auto p = j.find("projections"); p != j.end()) {
        if (!p->is_array())
            agent_error("agent field 'projections' must be a list of projections");
        for (const auto& item : *p)
            a.projections.push_back(parse_projection(item));
    }

    if (auto f = j.find("fuel"); f != j.end()) {
        if (!f->is_number_unsigned())
            agent_error("agent field 'fuel' must be a positive integer");
        a.fuel = f->get<std::size_t>();
    }
    if (auto g = string_field(j, "guards", false); !g.empty()) {
        if (g == "literal")
            a.guards = GuardMode::Literal;
        else if (g == "saturated")
            a.guards = GuardMode::Saturated;
        else
            agent_error("agent field 'guards' must be 'literal' or 'saturated'");
    }
    if (auto s = j.find("seeds"); s != j.end()) {
        if (!s->is_object())
            agent_error("agent field 'seeds' must be an object");
        std::string policy = string_field(*s, "policy", true);
        if (policy == "sequential") {
            a.seeds.kind = SeedPolicy::Kind::Sequential;
            if (auto st = s->find("start"); st != s->end()) {
                if (!st->is_number_unsigned())
                    agent_error("seed 'start' must be a non-negative integer");
                a.seeds.start = st->get<std::uint64_t>();
            }
        } else if (policy == "constant") {
            a.seeds.kind = SeedPolicy::Kind::Constant;
            auto sd = s->find("seed");
            if (sd == s->end() || !sd->is_number_unsigned())
                agent_error("constant seed policy needs a non-negative integer 'seed'");
            a.seeds.start = sd->get<std::uint64_t>();
        } else {
            agent_error("seed policy must be 'sequential' or 'constant'");
        }
    }
    try {
        a.validate();
    } catch (const Error& e) {
        // an agent naming a missing oracle is a bad file, not a failed query
        agent_error(e.message());
    }
    return a;
}

Agent load_agent(const std::filesystem::path& path) {
    std::string text = read_file(path);
    try {
        return parse_agent(text, path.parent_path());
    } catch (const Error& e) {
        if (!e.source().empty())
            throw;
        throw e.in_source(path.string());
    }
}

} // namespace tapo
