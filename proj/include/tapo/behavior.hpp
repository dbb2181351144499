#pragma once

#include "tapo/kbfile.hpp"
#include "tapo/obox.hpp"
#include "tapo/pbox.hpp"
#include "tapo/sheaf.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tapo {

/// Raw material an agent interprets: an uninterpreted fact set.
struct LatentStructure {
    std::string name;
    FactSet payload;
};

/// Facts an interaction produced. Empty means nothing manifested for the agent.
struct Manifested {
    FactSet facts;

    bool empty() const noexcept { return facts.empty(); }
    auto operator<=>(const Manifested&) const = default;
    bool operator==(const Manifested&) const = default;
};

/// Fact template; "*" matches any individual. The bare pattern `*` matches
/// every fact.
struct FactPattern {
    bool any = false;
    bool is_role = false;
    std::string subject;   // or "*"
    std::string object;    // role patterns only; or "*"
    std::string name;      // concept or role name

    bool matches(const Fact& f) const;
    bool operator==(const FactPattern&) const = default;
};

std::string to_string(const FactPattern& p);
/// `*`, `a:C`, `*:C`, `(a,*):r`, ...; names must be declared.
FactPattern parse_fact_pattern(std::string_view text, const Signature& sig);

struct SeedPolicy {
    enum class Kind { Constant, Sequential };

    Kind kind = Kind::Sequential;
    /// Constant: the seed used for every run. Sequential: the first seed.
    std::uint64_t start = 1;

    std::vector<std::uint64_t> seeds(std::size_t runs) const;
};

std::string to_string(const SeedPolicy& p);

struct AgentQuery {
    std::string oracle;
    /// "{seed}" is replaced by the run's seed.
    std::string payload;
};

/// An agent: a starting knowledge state, an optional oracle session and
/// program, and a projection selecting the manifested facts.
struct Agent {
    std::string name;
    std::shared_ptr<const KBDocument> kb;
    std::optional<Program> program;
    std::shared_ptr<const OBox> obox;
    std::vector<AgentQuery> queries;
    /// Context the latent payload is asserted at.
    std::string input_context;
    /// Context the projection reads.
    std::string output_context;
    /// Projection used for a run is projections[seed % projections.size()].
    std::vector<std::vector<FactPattern>> projections;
    std::size_t fuel = 10'000;
    GuardMode guards = GuardMode::Literal;
    SeedPolicy seeds;

    /// Throws Error(Validation) on missing pieces or undeclared contexts.
    void validate() const;
};

/// Loads an agent definition (JSON). Relative paths inside resolve against
/// the agent file's directory.
Agent load_agent(const std::filesystem::path& path);
Agent parse_agent(std::string_view json_text, const std::filesystem::path& base_dir);

/// (agent, latent) -> manifested. Deterministic for a given seed.
/// Throws on fuel exhaustion or oracle errors.
Manifested interact(const Agent& e, const LatentStructure& i, std::optional<std::uint64_t> seed = {});

struct RunRecord {
    std::uint64_t seed = 0;
    std::optional<Manifested> value;
    /// Set when the run failed.
    std::string error;
};

struct StabilityReport {
    bool stable = false;
    /// The regenerated value when stable.
    std::optional<Manifested> value;
    /// Distinct outcomes in order of first appearance with their counts;
    /// failed runs are grouped by error message.
    struct Outcome {
        std::optional<Manifested> value;
        std::string error;
        std::size_t count = 0;
    };
    std::vector<Outcome> outcomes;
    std::vector<RunRecord> runs;
    SeedPolicy policy;
};

/// Runs `interact` `runs` times under `policy`. Stable iff every run
/// succeeded with the same manifested value. Throws Error(Validation) for
/// runs < 2.
StabilityReport stability_check(const Agent& e, const LatentStructure& i, std::size_t runs,
                                const SeedPolicy& policy);

} // namespace tapo
