// tapo: command-line driver for the knowledge-base engine.

#include "tapo/behavior.hpp"
#include "tapo/error.hpp"
#include "tapo/kbfile.hpp"
#include "tapo/models.hpp"
#include "tapo/obox.hpp"
#include "tapo/pbox.hpp"
#include "tapo/reasoner.hpp"
#include "tapo/sheaf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace tapo;

namespace {

enum class Format { Text, Records };

struct Common {
    Format format = Format::Text;
    std::string guards = "literal";
    std::size_t fuel = 10'000;
    std::string state_in;
    std::string state_out;
};

// Emits either a human report or JSON lines. Keys are sorted by json's
// default object type, so records are byte-stable.
class Report {
public:
    explicit Report(Format f) : format_(f) {}

    bool records() const { return format_ == Format::Records; }
    void record(const json& j) { std::cout << j.dump() << '\n'; }
    void line(const std::string& s) { std::cout << s << '\n'; }

private:
    Format format_;
};

json facts_json(const FactSet& s) {
    json arr = json::array();
    for (const auto& f : s)
        arr.push_back(to_string(f));
    return arr;
}

json abox_json(const ABox& a) {
    json arr = json::array();
    for (const auto& x : a)
        arr.push_back(to_string(x));
    return arr;
}

void print_abox(Report& out, const ABox& a) {
    std::istringstream lines(canonical_abox(a));
    for (std::string l; std::getline(lines, l);)
        out.line("  " + l);
}

GuardMode guard_mode(const std::string& s) {
    if (s == "literal")
        return GuardMode::Literal;
    if (s == "saturated")
        return GuardMode::Saturated;
    throw Error(ErrorKind::Validation, "--guards must be 'literal' or 'saturated'");
}

template <class F>
auto parse_arg(const std::string& what, const std::string& text, F&& f) {
    try {
        return f(text);
    } catch (const Error& e) {
        if (e.is_input_error())
            throw e.in_source(what);
        throw;
    }
}

template <class F>
auto parse_file(const std::string& path, F&& f) {
    std::string text = read_file(path);
    try {
        return f(text);
    } catch (const Error& e) {
        if (!e.source().empty())
            throw;
        throw e.in_source(path);
    }
}

// Initial A-Box: the KB's, or a state dump when --state is given.
ABox initial_abox(const KBDocument& kb, const Common& c) {
    if (c.state_in.empty())
        return kb.abox;
    return parse_file(c.state_in, [&](const std::string& t) { return read_state(t, kb.signature); });
}

void dump_state(const Common& c, const ABox& a, const Signature& sig) {
    if (c.state_out.empty())
        return;
    std::ofstream out(c.state_out, std::ios::binary);
    out << write_state(a, sig);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write '" + c.state_out + "'");
}

// "CTX={ a:C, ... }"
Section parse_section_arg(const KBDocument& kb, const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorKind::Syntax, "section must be written CONTEXT={facts}", {1, 1}).in_source("--section");
    std::string ctx = text.substr(0, eq);
    while (!ctx.empty() && ctx.back() == ' ')
        ctx.pop_back();
    if (!kb.poset.contains(ctx))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + ctx + "'", {1, 1}).in_source("--section");
    std::string body = text.substr(eq + 1);
    FactSet facts;
    try {
        facts = parse_fact_set(body, kb.signature);
    } catch (const Error& e) {
        SourcePos p = e.pos();
        if (p.line == 1)
            p.column += eq + 1;
        throw Error(e.kind(), e.message(), p).in_source("--section");
    }
    try {
        return make_section(kb.presheaf, ctx, std::move(facts));
    } catch (const Error& e) {
        throw Error(e.kind(), e.message(), {1, eq + 2}).in_source("--section");
    }
}

json conflict_json(const Conflict& c, const std::vector<Section>& fam) {
    return {{"first", fam[c.first].context},
            {"second", fam[c.second].context},
            {"overlap", c.overlap},
            {"only_first", facts_json(c.only_first)},
            {"only_second", facts_json(c.only_second)}};
}

void print_conflicts(Report& out, const std::vector<Conflict>& cs, const std::vector<Section>& fam) {
    for (const auto& c : cs) {
        out.line("  conflict " + fam[c.first].context + " / " + fam[c.second].context + " on " + c.overlap +
                 ": only " + fam[c.first].context + " " + to_string(c.only_first) + ", only " +
                 fam[c.second].context + " " + to_string(c.only_second));
    }
}

// ---------------------------------------------------------------------------
// commands

int cmd_check(const std::string& kb_path, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    Report out(c.format);
    std::size_t universes = 0;
    for (const auto& u : kb.poset.contexts())
        universes += kb.presheaf.universe(u).empty() ? 0 : 1;
    // not an error, but restriction only composes along monotone universes
    auto gaps = monotonicity_gaps(kb.presheaf);
    if (out.records()) {
        json g = json::array();
        for (const auto& x : gaps)
            g.push_back({{"lower", x.lower}, {"upper", x.upper}, {"fact", to_string(x.fact)}});
        out.record({{"command", "check"},
                    {"status", "ok"},
                    {"signature", kb.signature.canonical()},
                    {"contexts", kb.poset.size()},
                    {"coverings", kb.coverings.size()},
                    {"inclusions", kb.tbox.inclusions().size()},
                    {"assertions", kb.abox.size()},
                    {"universes", universes},
                    {"monotonicity_gaps", g}});
    } else {
        out.line("ok");
        out.line("  contexts:   " + std::to_string(kb.poset.size()));
        out.line("  coverings:  " + std::to_string(kb.coverings.size()));
        out.line("  inclusions: " + std::to_string(kb.tbox.inclusions().size()));
        out.line("  assertions: " + std::to_string(kb.abox.size()));
        out.line("  universes:  " + std::to_string(universes) + (gaps.empty() ? " (monotone)" : ""));
        for (const auto& x : gaps)
            out.line("  note: " + to_string(x.fact) + " is in universe(" + x.lower + ") but not in universe(" +
                     x.upper + ")");
    }
    return 0;
}

int cmd_sat(const std::string& kb_path, const std::string& expr, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    Concept concept_ = parse_arg("<concept>", expr, [&](const std::string& t) { return parse_concept(t, kb.signature); });
    bool sat = is_satisfiable(kb.tbox, concept_);
    Report out(c.format);
    if (out.records())
        out.record({{"command", "sat"}, {"concept", to_string(concept_)}, {"satisfiable", sat}});
    else
        out.line(to_string(concept_) + (sat ? " is satisfiable" : " is unsatisfiable"));
    return 0;
}

int cmd_subsumes(const std::string& kb_path, const std::string& lhs, const std::string& rhs, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    Concept a = parse_arg("<sub>", lhs, [&](const std::string& t) { return parse_concept(t, kb.signature); });
    Concept b = parse_arg("<super>", rhs, [&](const std::string& t) { return parse_concept(t, kb.signature); });
    bool v = subsumes(kb.tbox, a, b);
    Report out(c.format);
    if (out.records())
        out.record({{"command", "subsumes"}, {"sub", to_string(a)}, {"super", to_string(b)}, {"verdict", v}});
    else
        out.line(std::string(v ? "true" : "false") + ": " + to_string(a) + (v ? " <= " : " is not <= ") + to_string(b));
    return 0;
}

int cmd_saturate(const std::string& kb_path, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    ABox sat = saturate(initial_abox(kb, c), kb.poset);
    Report out(c.format);
    if (out.records()) {
        out.record({{"command", "saturate"}, {"assertions", abox_json(sat)}});
    } else {
        out.line("saturated: " + std::to_string(sat.size()) + " assertions");
        print_abox(out, sat);
    }
    dump_state(c, sat, kb.signature);
    return 0;
}

int cmd_run(const std::string& prog_path, const std::string& kb_path, bool trace, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    Program p = parse_file(prog_path, [&](const std::string& t) { return parse_program(t, kb.signature); });
    KnowledgeState s{kb.tbox, initial_abox(kb, c)};
    EvalOptions opts;
    opts.fuel = c.fuel;
    opts.guards.mode = guard_mode(c.guards);
    opts.guards.poset = &kb.poset;
    if (c.fuel == 0)
        throw Error(ErrorKind::Validation, "--fuel must be at least 1");

    TracedOutcome r;
    if (trace)
        r = eval_trace(p, s, opts);
    else
        r.outcome = eval(p, s, opts);

    Report out(c.format);
    const EvalOutcome& o = r.outcome;
    if (out.records()) {
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& t = r.trace[i];
            json j{{"step", i + 1}, {"rule", t.rule}, {"added", abox_json(t.added)}, {"removed", abox_json(t.removed)}};
            if (t.guard)
                j["guard"] = *t.guard;
            out.record(j);
        }
        out.record({{"command", "run"},
                    {"outcome", o.terminated() ? "terminated" : "fuel-exhausted"},
                    {"steps", o.steps},
                    {"state", abox_json(o.state.abox)}});
    } else {
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& t = r.trace[i];
            std::string l = std::to_string(i + 1) + ". " + t.rule;
            for (const auto& a : t.added)
                l += " +[" + to_string(a) + "]";
            for (const auto& a : t.removed)
                l += " -[" + to_string(a) + "]";
            out.line(l);
        }
        if (o.terminated())
            out.line("terminated after " + std::to_string(o.steps) + " steps");
        else
            out.line("fuel exhausted after " + std::to_string(o.steps) + " steps");
        out.line("state:");
        print_abox(out, o.state.abox);
    }
    dump_state(c, o.state.abox, kb.signature);
    return 0;
}

int cmd_apply_oracle(const std::string& kb_path, const std::string& script, const std::string& replay,
                     const std::string& oracle, const std::vector<std::string>& payloads,
                     const std::string& log_path, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    if (script.empty() == replay.empty())
        throw Error(ErrorKind::Validation, "give exactly one of --script or --replay");
    OBox obox;
    if (!script.empty()) {
        obox = parse_file(script, [&](const std::string& t) { return load_oracle_script(t, kb.signature); });
    } else {
        SessionLog recorded = parse_file(replay, [&](const std::string& t) { return SessionLog::read(t, kb.signature); });
        obox = replay_session(recorded);
    }
    KnowledgeState s{kb.tbox, initial_abox(kb, c)};
    SessionLog log;
    Report out(c.format);
    for (const auto& payload : payloads) {
        OracleStep step = oracle_step(s, obox, {oracle, payload}, kb.signature, &log);
        if (out.records()) {
            out.record({{"command", "apply-oracle"},
                        {"oracle", oracle},
                        {"payload", payload},
                        {"added", abox_json(step.response.additions)},
                        {"removed", abox_json(step.response.deletions)}});
        } else {
            out.line(oracle + " \"" + payload + "\": +" + std::to_string(step.response.additions.size()) + " -" +
                     std::to_string(step.response.deletions.size()));
            for (const auto& a : step.response.additions)
                out.line("  + " + to_string(a));
            for (const auto& a : step.response.deletions)
                out.line("  - " + to_string(a));
        }
        s = std::move(step.state);
    }
    if (out.records()) {
        out.record({{"command", "apply-oracle"}, {"state", abox_json(s.abox)}});
    } else {
        out.line("state:");
        print_abox(out, s.abox);
    }
    if (!log_path.empty()) {
        std::ofstream f(log_path, std::ios::binary);
        record_session(log, f);
        if (!f)
            throw Error(ErrorKind::Io, "cannot write '" + log_path + "'");
    }
    dump_state(c, s.abox, kb.signature);
    return 0;
}

int cmd_glue(const std::string& kb_path, const std::string& target, const std::vector<std::string>& sections,
             const Common& c) {
    KBDocument kb = load_kb(kb_path);
    if (!kb.poset.contains(target))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + target + "'", {1, 1}).in_source("--cover");
    std::vector<Section> family;
    Covering cov{target, {}};
    for (const auto& s : sections) {
        family.push_back(parse_section_arg(kb, s));
        cov.members.push_back(family.back().context);
    }
    auto violations = validate_covering(kb.poset, cov);
    if (!violations.empty())
        throw Error(ErrorKind::Validation, violations.front().message, {1, 1}).in_source("--section");

    GluingResult r = glue(kb.presheaf, family, cov);
    Report out(c.format);
    if (out.records()) {
        json j{{"command", "glue"}, {"cover", to_string(cov)}, {"verdict", to_string(r.kind)}};
        if (r.glued)
            j["section"] = facts_json(r.glued->facts);
        json conflicts = json::array();
        for (const auto& x : r.conflicts)
            conflicts.push_back(conflict_json(x, family));
        j["conflicts"] = conflicts;
        json candidates = json::array();
        for (const auto& x : r.candidates)
            candidates.push_back(facts_json(x.facts));
        j["candidates"] = candidates;
        out.record(j);
    } else {
        out.line(std::string(to_string(r.kind)) + ": " + to_string(cov));
        if (r.glued)
            out.line("  " + to_string(*r.glued));
        print_conflicts(out, r.conflicts, family);
        for (const auto& x : r.candidates)
            out.line("  candidate " + to_string(x.facts));
    }
    return 0;
}

int cmd_stable(const std::string& kb_path, const std::string& section, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    Section s = parse_section_arg(kb, section);
    auto chain = refinement_chain(kb.poset, s.context, kb.coverings);
    RefinementVerdict v = stable_under_refinement(kb.presheaf, s, chain);
    Report out(c.format);
    if (out.records()) {
        json j{{"command", "stable"}, {"section", facts_json(s.facts)}, {"context", s.context},
               {"coverings", chain.size()}, {"stable", v.stable}};
        if (v.failing) {
            j["failing"] = to_string(*v.failing);
            j["verdict"] = to_string(v.failure->kind);
        }
        out.record(j);
    } else {
        out.line(std::string(v.stable ? "stable" : "unstable") + ": " + to_string(s) + " under " +
                 std::to_string(chain.size()) + " coverings");
        if (v.failing)
            out.line("  fails at " + to_string(*v.failing) + " (" + to_string(v.failure->kind) + ")");
    }
    return 0;
}

int cmd_global_sections(const std::string& kb_path, std::string top, const Common& c) {
    KBDocument kb = load_kb(kb_path);
    if (top.empty()) {
        if (kb.coverings.empty())
            throw Error(ErrorKind::Validation, "no coverings declared; pass --top");
        top = kb.coverings.front().target;
    }
    if (!kb.poset.contains(top))
        throw Error(ErrorKind::UnknownName, "undeclared context '" + top + "'", {1, 1}).in_source("--top");
    auto chain = refinement_chain(kb.poset, top, kb.coverings);
    auto secs = global_sections(kb.presheaf, top, chain);
    Report out(c.format);
    if (out.records()) {
        for (const auto& s : secs)
            out.record({{"command", "global-sections"}, {"context", top}, {"section", facts_json(s.facts)}});
        out.record({{"command", "global-sections"}, {"context", top}, {"count", secs.size()},
                    {"coverings", chain.size()}});
    } else {
        out.line(std::to_string(secs.size()) + " global sections over " + top + " (" +
                 std::to_string(chain.size()) + " coverings)");
        for (const auto& s : secs)
            out.line("  " + to_string(s.facts));
    }
    return 0;
}

SeedPolicy parse_seed_policy(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    SeedPolicy p;
    if (kind == "sequential")
        p.kind = SeedPolicy::Kind::Sequential;
    else if (kind == "constant")
        p.kind = SeedPolicy::Kind::Constant;
    else
        throw Error(ErrorKind::Validation, "seed policy must be sequential[:N] or constant:N", {1, 1}).in_source("--seeds");
    if (colon != std::string::npos) {
        std::string num = text.substr(colon + 1);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 18)
            throw Error(ErrorKind::Validation, "seed must be a non-negative integer", {1, colon + 2}).in_source("--seeds");
        p.start = std::stoull(num);
    } else if (p.kind == SeedPolicy::Kind::Constant) {
        throw Error(ErrorKind::Validation, "constant seed policy needs a seed", {1, 1}).in_source("--seeds");
    }
    return p;
}

int cmd_stability(const std::string& agent_path, const std::string& latent, std::size_t runs,
                  const std::string& seeds, const Common& c) {
    Agent agent = load_agent(agent_path);
    LatentStructure i{"latent", {}};
    if (!latent.empty())
        i.payload = parse_arg("--latent", latent, [&](const std::string& t) { return parse_fact_set(t, agent.kb->signature); });
    SeedPolicy policy = seeds.empty() ? agent.seeds : parse_seed_policy(seeds);
    StabilityReport rep = stability_check(agent, i, runs, policy);
    Report out(c.format);
    if (out.records()) {
        for (const auto& r : rep.runs) {
            json j{{"command", "stability"}, {"seed", r.seed}};
            if (r.value)
                j["value"] = facts_json(r.value->facts);
            else
                j["error"] = r.error;
            out.record(j);
        }
        json j{{"command", "stability"}, {"agent", agent.name}, {"runs", rep.runs.size()},
               {"policy", to_string(rep.policy)}, {"verdict", rep.stable ? "stable" : "unstable"},
               {"outcomes", rep.outcomes.size()}};
        if (rep.value)
            j["value"] = facts_json(rep.value->facts);
        out.record(j);
    } else {
        out.line(std::string(rep.stable ? "Stable" : "Unstable") + ": agent " + agent.name + ", " +
                 std::to_string(rep.runs.size()) + " runs, seeds " + to_string(rep.policy));
        for (const auto& o : rep.outcomes) {
            std::string what = o.value ? to_string(o.value->facts) : "error: " + o.error;
            out.line("  " + std::to_string(o.count) + "x " + what);
        }
    }
    return 0;
}

int report_error(const Error& e) {
    std::cerr << e.describe() << '\n';
    return e.is_input_error() ? 2 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextual knowledge bases: reasoning, programs, oracles and gluing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "tapo 0.1.0");

    Common c;
    std::string format = "text";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));
    };
    auto add_state = [&](CLI::App* sub) {
        sub->add_option("--state", c.state_in, "start from a state dump instead of the KB's A-Box");
        sub->add_option("--dump-state", c.state_out, "write the resulting state dump here");
    };

    std::string kb, expr, expr2, program, script, replay, oracle, log, target, section, top, agent, latent, seeds;
    std::vector<std::string> payloads, sections;
    bool trace = false;
    std::size_t runs = 4;

    auto* check = app.add_subcommand("check", "load and validate a KB file");
    check->add_option("kb", kb)->required();
    add_common(check);

    auto* sat = app.add_subcommand("sat", "decide satisfiability of a concept w.r.t. the KB's T-Box");
    sat->add_option("kb", kb)->required();
    sat->add_option("concept", expr)->required();
    add_common(sat);

    auto* sub = app.add_subcommand("subsumes", "decide C <= D w.r.t. the KB's T-Box");
    sub->add_option("kb", kb)->required();
    sub->add_option("sub", expr)->required();
    sub->add_option("super", expr2)->required();
    add_common(sub);

    auto* saturate_cmd = app.add_subcommand("saturate", "close the A-Box under the context order");
    saturate_cmd->add_option("kb", kb)->required();
    add_common(saturate_cmd);
    add_state(saturate_cmd);

    auto* run = app.add_subcommand("run", "evaluate a program");
    run->add_option("program", program)->required();
    run->add_option("--kb", kb)->required();
    run->add_option("--fuel", c.fuel, "rule applications allowed");
    run->add_option("--guards", c.guards, "literal or saturated")->check(CLI::IsMember({"literal", "saturated"}));
    run->add_flag("--trace", trace, "print every rule application");
    add_common(run);
    add_state(run);

    auto* apply = app.add_subcommand("apply-oracle", "apply oracle transitions");
    apply->add_option("kb", kb)->required();
    apply->add_option("--script", script, "oracle script (JSON lines)");
    apply->add_option("--replay", replay, "answer from a recorded session log instead");
    apply->add_option("--oracle", oracle)->required();
    apply->add_option("--payload", payloads, "query payload; repeat for a session")->required();
    apply->add_option("--log", log, "record the session here");
    add_common(apply);
    add_state(apply);

    auto* glue_cmd = app.add_subcommand("glue", "glue a family of sections over a covering");
    glue_cmd->add_option("kb", kb)->required();
    glue_cmd->add_option("--cover", target, "covered context")->required();
    glue_cmd->add_option("--section", sections, "CONTEXT={facts}, one per covering member")->required();
    add_common(glue_cmd);

    auto* stable = app.add_subcommand("stable", "check a section against every covering refining its context");
    stable->add_option("kb", kb)->required();
    stable->add_option("--section", section, "CONTEXT={facts}")->required();
    add_common(stable);

    auto* global = app.add_subcommand("global-sections", "list refinement-stable sections over a context");
    global->add_option("kb", kb)->required();
    global->add_option("--top", top, "context (default: target of the first covering)");
    add_common(global);

    auto* stability = app.add_subcommand("stability", "repeat an agent interaction and compare outcomes");
    stability->add_option("agent", agent)->required();
    stability->add_option("--latent", latent, "latent fact set, e.g. \"{ s:Reading }\"");
    stability->add_option("--runs", runs, "number of interactions")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    stability->add_option("--seeds", seeds, "sequential[:N] or constant:N (default: the agent's policy)");
    add_common(stability);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    c.format = format == "records" ? Format::Records : Format::Text;

    try {
        if (*check) return cmd_check(kb, c);
        if (*sat) return cmd_sat(kb, expr, c);
        if (*sub) return cmd_subsumes(kb, expr, expr2, c);
        if (*saturate_cmd) return cmd_saturate(kb, c);
        if (*run) return cmd_run(program, kb, trace, c);
        if (*apply) return cmd_apply_oracle(kb, script, replay, oracle, payloads, log, c);
        if (*glue_cmd) return cmd_glue(kb, target, sections, c);
        if (*stable) return cmd_stable(kb, section, c);
        if (*global) return cmd_global_sections(kb, top, c);
        if (*stability) return cmd_stability(agent, latent, runs, seeds, c);
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "tapo: internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
