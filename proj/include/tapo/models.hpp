#pragma once

#include "tapo/lane_kernels.hpp"
#include "tapo/reasoner.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tapo {

/// Finite interpretation used as a testing oracle for the tableau.
struct FiniteModel {
    std::set<int> domain;
    std::map<std::string, std::set<int>> concept_ext;
    std::map<std::string, std::set<std::pair<int, int>>> role_ext;

    /// Throws Error(Validation) if the domain is empty or an extension leaves it.
    void validate() const;

    bool operator==(const FiniteModel&) const = default;
};

std::string to_string(const FiniteModel& m);

/// Extension of `c` under the standard set semantics. Throws
/// Error(UnknownName) for a name the model does not interpret.
std::set<int> extension(const FiniteModel& m, const Concept& c);

struct InterpretationCheck {
    bool satisfies_tbox = false;
    std::set<int> extension;
};

InterpretationCheck check_interpretation(const FiniteModel& m, const TBox& t, const Concept& c);

struct EnumerationLimits {
    /// Bound on |N_C| * max_size + |N_R| * max_size^2.
    unsigned max_bits = 24;
    /// Lane kernels for the bit-sliced evaluator; nullptr picks the best
    /// available for this CPU.
    const simd::LaneKernels* kernels = nullptr;
};

/// Raised when the requested enumeration exceeds EnumerationLimits::max_bits.
class SearchSpaceError : public Error {
public:
    explicit SearchSpaceError(std::string message)
        : Error(ErrorKind::ResourceLimit, std::move(message)) {}
};

/// Streams every model of `t` over domains {1..k}, k = 1..max_size, in
/// canonical order: domain size ascending, then ascending value of the bit
/// encoding (concept bits low, role bits high). `visit` returns false to stop.
void for_each_model(const Signature& sig, const TBox& t, std::size_t max_size,
                    const std::function<bool(const FiniteModel&)>& visit,
                    const EnumerationLimits& limits = {});

std::vector<FiniteModel> enumerate_models(const Signature& sig, const TBox& t,
                                          std::size_t max_size,
                                          const EnumerationLimits& limits = {});

/// First model (canonical order) of `t` in which `c` has a nonempty extension.
std::optional<FiniteModel> find_witness(const Signature& sig, const TBox& t, const Concept& c,
                                        std::size_t max_size,
                                        const EnumerationLimits& limits = {});

} // namespace tapo
