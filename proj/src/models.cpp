#include "tapo/models.hpp"

#include "tapo/error.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace tapo {

void FiniteModel::validate() const {
    if (domain.empty())
        throw Error(ErrorKind::Validation, "model domain is empty");
    for (const auto& [name, ext] : concept_ext)
        for (int x : ext)
            if (!domain.count(x))
                throw Error(ErrorKind::Validation,
                            "extension of '" + name + "' leaves the domain");
    for (const auto& [name, ext] : role_ext)
        for (const auto& [x, y] : ext)
            if (!domain.count(x) || !domain.count(y))
                throw Error(ErrorKind::Validation,
                            "extension of role '" + name + "' leaves the domain");
}

std::string to_string(const FiniteModel& m) {
    std::ostringstream out;
    auto list = [&](const std::set<int>& s) {
        out << '{';
        bool first = true;
        for (int x : s) {
            out << (first ? "" : ",") << x;
            first = false;
        }
        out << '}';
    };
    out << "domain=";
    list(m.domain);
    for (const auto& [name, ext] : m.concept_ext) {
        out << ' ' << name << '=';
        list(ext);
    }
    for (const auto& [name, ext] : m.role_ext) {
        out << ' ' << name << "={";
        bool first = true;
        for (const auto& [x, y] : ext) {
            out << (first ? "" : ",") << '(' << x << ',' << y << ')';
            first = false;
        }
        out << '}';
    }
    return out.str();
}

std::set<int> extension(const FiniteModel& m, const Concept& c) {
    using K = Concept::Kind;
    switch (c.kind()) {
    case K::Top: return m.domain;
    case K::Bot: return {};
    case K::Atomic: {
        auto it = m.concept_ext.find(c.name());
        if (it == m.concept_ext.end())
            throw Error(ErrorKind::UnknownName, "model does not interpret concept '" + c.name() + "'");
        return it->second;
    }
    case K::Not: {
        std::set<int> inner = extension(m, c.child());
        std::set<int> out;
        std::set_difference(m.domain.begin(), m.domain.end(), inner.begin(), inner.end(),
                            std::inserter(out, out.end()));
        return out;
    }
    case K::And:
    case K::Or: {
        std::set<int> a = extension(m, c.left());
        std::set<int> b = extension(m, c.right());
        std::set<int> out;
        if (c.kind() == K::And)
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.end()));
        else
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
        return out;
    }
    case K::Exists:
    case K::Forall: {
        auto it = m.role_ext.find(c.name());
        if (it == m.role_ext.end())
            throw Error(ErrorKind::UnknownName, "model does not interpret role '" + c.name() + "'");
        std::set<int> filler = extension(m, c.child());
        std::set<int> out;
        for (int x : m.domain) {
            bool any = false;
            bool all = true;
            for (const auto& [from, to] : it->second) {
                if (from != x)
                    continue;
                if (filler.count(to))
                    any = true;
                else
                    all = false;
            }
            if (c.kind() == K::Exists ? any : all)
                out.insert(x);
        }
        return out;
    }
    }
    return {};
}

InterpretationCheck check_interpretation(const FiniteModel& m, const TBox& t, const Concept& c) {
    InterpretationCheck out;
    out.satisfies_tbox = std::all_of(t.inclusions().begin(), t.inclusions().end(),
                                     [&](const Inclusion& inc) {
                                         auto lhs = extension(m, inc.lhs);
                                         auto rhs = extension(m, inc.rhs);
                                         return std::includes(rhs.begin(), rhs.end(),
                                                              lhs.begin(), lhs.end());
                                     });
    out.extension = extension(m, c);
    return out;
}

// ---------------------------------------------------------------------------
// Bit-sliced enumeration
//
// For domain size k a candidate interpretation is a bit string: bit i*k+e
// says element e is in concept i, bit C*k + j*k*k + x*k + y says (x,y) is in
// role j (names in sorted order). The low `lane_bits` concept bits vary
// across the lanes of a word vector, the remaining bits are fixed per outer
// iteration, so each connective is evaluated for up to 4096 candidates with
// a handful of word operations.

namespace {

constexpr unsigned kMaxLaneBits = 12;

using simd::Word;

struct Step {
    Concept::Kind kind;
    int a = -1;     // operand step, or concept index for Atomic
    int b = -1;
    int role = -1;
};

class SlicedEvaluator {
public:
    SlicedEvaluator(const Signature& sig, std::size_t k, const simd::LaneKernels& ops)
        : k_(k), ops_(ops) {
        concepts_.assign(sig.concept_names().begin(), sig.concept_names().end());
        roles_.assign(sig.role_names().begin(), sig.role_names().end());
        concept_bits_ = static_cast<unsigned>(concepts_.size() * k_);
        total_bits_ = concept_bits_ + static_cast<unsigned>(roles_.size() * k_ * k_);
        lane_bits_ = std::min(concept_bits_, kMaxLaneBits);
        std::size_t lanes = std::size_t{1} << lane_bits_;
        words_ = std::max<std::size_t>(1, lanes / 64);
        valid_ = lanes >= 64 ? ~Word{0} : ((Word{1} << lanes) - 1);
        patterns_.assign(static_cast<std::size_t>(lane_bits_) * words_, 0);
        for (unsigned b = 0; b < lane_bits_; ++b)
            for (std::size_t l = 0; l < lanes; ++l)
                if ((l >> b) & 1U)
                    patterns_[b * words_ + l / 64] |= Word{1} << (l % 64);
    }

    int add(const Concept& c) {
        if (auto it = memo_.find(c); it != memo_.end())
            return it->second;
        Step s{c.kind()};
        switch (c.kind()) {
        case Concept::Kind::Atomic: {
            auto it = std::find(concepts_.begin(), concepts_.end(), c.name());
            if (it == concepts_.end())
                throw Error(ErrorKind::UnknownName, "undeclared concept '" + c.name() + "'");
            s.a = static_cast<int>(it - concepts_.begin());
            break;
        }
        case Concept::Kind::And:
        case Concept::Kind::Or:
            s.a = add(c.left());
            s.b = add(c.right());
            break;
        case Concept::Kind::Not: s.a = add(c.child()); break;
        case Concept::Kind::Exists:
        case Concept::Kind::Forall: {
            auto it = std::find(roles_.begin(), roles_.end(), c.name());
            if (it == roles_.end())
                throw Error(ErrorKind::UnknownName, "undeclared role '" + c.name() + "'");
            s.role = static_cast<int>(it - roles_.begin());
            s.a = add(c.child());
            break;
        }
        default: break;
        }
        steps_.push_back(s);
        int id = static_cast<int>(steps_.size()) - 1;
        memo_.emplace(c, id);
        return id;
    }

    unsigned total_bits() const { return total_bits_; }
    unsigned lane_bits() const { return lane_bits_; }
    std::size_t words() const { return words_; }

    /// Evaluate every step for the outer assignment `hi`.
    void evaluate(std::uint64_t hi) {
        values_.resize(steps_.size() * k_ * words_);
        for (std::size_t s = 0; s < steps_.size(); ++s) {
            const Step& st = steps_[s];
            for (std::size_t x = 0; x < k_; ++x) {
                Word* dst = slot(static_cast<int>(s), x);
                switch (st.kind) {
                case Concept::Kind::Top: ops_.fill(dst, words_, ~Word{0}); break;
                case Concept::Kind::Bot: ops_.fill(dst, words_, 0); break;
                case Concept::Kind::Atomic: {
                    unsigned bit = static_cast<unsigned>(st.a) * static_cast<unsigned>(k_) +
                                   static_cast<unsigned>(x);
                    if (bit < lane_bits_)
                        ops_.copy(dst, &patterns_[bit * words_], words_);
                    else
                        ops_.fill(dst, words_, ((hi >> (bit - lane_bits_)) & 1U) ? ~Word{0} : 0);
                    break;
                }
                case Concept::Kind::Not: ops_.bit_not(dst, slot(st.a, x), words_); break;
                case Concept::Kind::And:
                    ops_.bit_and(dst, slot(st.a, x), slot(st.b, x), words_);
                    break;
                case Concept::Kind::Or:
                    ops_.bit_or(dst, slot(st.a, x), slot(st.b, x), words_);
                    break;
                case Concept::Kind::Exists:
                case Concept::Kind::Forall: {
                    bool ex = st.kind == Concept::Kind::Exists;
                    ops_.fill(dst, words_, ex ? 0 : ~Word{0});
                    for (std::size_t y = 0; y < k_; ++y) {
                        if (!role_bit(hi, st.role, x, y))
                            continue;
                        if (ex)
                            ops_.or_into(dst, slot(st.a, y), words_);
                        else
                            ops_.and_into(dst, slot(st.a, y), words_);
                    }
                    break;
                }
                }
            }
        }
    }

    /// mask &= AND_x (lhs[x] -> rhs[x])
    void constrain(Word* mask, int lhs, int rhs) const {
        for (std::size_t x = 0; x < k_; ++x)
            ops_.implies_into(mask, slot(lhs, x), slot(rhs, x), words_);
    }

    /// out = OR_x step[x]
    void nonempty(Word* out, int step) const {
        ops_.fill(out, words_, 0);
        for (std::size_t x = 0; x < k_; ++x)
            ops_.or_into(out, slot(step, x), words_);
    }

    void reset_mask(Word* mask) const {
        ops_.fill(mask, words_, ~Word{0});
        mask[0] &= valid_;
    }

    const simd::LaneKernels& ops() const { return ops_; }

    FiniteModel decode(std::uint64_t code) const {
        FiniteModel m;
        int n = static_cast<int>(k_);
        for (int e = 1; e <= n; ++e)
            m.domain.insert(e);
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            auto& ext = m.concept_ext[concepts_[i]];
            for (std::size_t e = 0; e < k_; ++e)
                if ((code >> (i * k_ + e)) & 1U)
                    ext.insert(static_cast<int>(e) + 1);
        }
        for (std::size_t j = 0; j < roles_.size(); ++j) {
            auto& ext = m.role_ext[roles_[j]];
            for (std::size_t x = 0; x < k_; ++x)
                for (std::size_t y = 0; y < k_; ++y)
                    if ((code >> (concept_bits_ + j * k_ * k_ + x * k_ + y)) & 1U)
                        ext.insert({static_cast<int>(x) + 1, static_cast<int>(y) + 1});
        }
        return m;
    }

private:
    Word* slot(int step, std::size_t x) {
        return &values_[(static_cast<std::size_t>(step) * k_ + x) * words_];
    }
    const Word* slot(int step, std::size_t x) const {
        return &values_[(static_cast<std::size_t>(step) * k_ + x) * words_];
    }
    bool role_bit(std::uint64_t hi, int role, std::size_t x, std::size_t y) const {
        std::size_t bit = concept_bits_ + static_cast<std::size_t>(role) * k_ * k_ + x * k_ + y;
        return (hi >> (bit - lane_bits_)) & 1U;
    }

    std::size_t k_;
    const simd::LaneKernels& ops_;
    std::vector<std::string> concepts_;
    std::vector<std::string> roles_;
    unsigned concept_bits_ = 0;
    unsigned total_bits_ = 0;
    unsigned lane_bits_ = 0;
    std::size_t words_ = 1;
    Word valid_ = ~Word{0};
    std::vector<Word> patterns_;
    std::vector<Step> steps_;
    std::map<Concept, int> memo_;
    std::vector<Word> values_;
};

void check_guard(const Signature& sig, std::size_t max_size, const EnumerationLimits& limits) {
    if (max_size == 0)
        throw Error(ErrorKind::Validation, "max domain size must be at least 1");
    std::size_t bits = sig.concept_names().size() * max_size +
                       sig.role_names().size() * max_size * max_size;
    if (bits > limits.max_bits || bits >= 63)
        throw SearchSpaceError("search space of " + std::to_string(bits) +
                               " bits exceeds the limit of " + std::to_string(limits.max_bits));
}

/// Shared driver: calls `emit(code, evaluator)` for each lane whose bit is set
/// in the per-iteration mask produced by `mask_fn`.
template <class MaskFn, class Emit>
bool scan(const Signature& sig, std::size_t k, const EnumerationLimits& limits,
          const std::function<void(SlicedEvaluator&)>& setup, MaskFn&& mask_fn, Emit&& emit) {
    const simd::LaneKernels& ops = limits.kernels ? *limits.kernels : simd::active_kernels();
    SlicedEvaluator ev(sig, k, ops);
    setup(ev);
    std::vector<Word> mask(ev.words());
    std::uint64_t outer = std::uint64_t{1} << (ev.total_bits() - ev.lane_bits());
    for (std::uint64_t hi = 0; hi < outer; ++hi) {
        ev.evaluate(hi);
        mask_fn(ev, mask.data());
        if (!ops.any(mask.data(), mask.size()))
            continue;
        for (std::size_t w = 0; w < mask.size(); ++w) {
            Word bits = mask[w];
            while (bits != 0) {
                std::uint64_t lane = w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
                bits &= bits - 1;
                if (!emit((hi << ev.lane_bits()) | lane, ev))
                    return false;
            }
        }
    }
    return true;
}

} // namespace

void for_each_model(const Signature& sig, const TBox& t, std::size_t max_size,
                    const std::function<bool(const FiniteModel&)>& visit,
                    const EnumerationLimits& limits) {
    check_guard(sig, max_size, limits);
    for (std::size_t k = 1; k <= max_size; ++k) {
        std::vector<std::pair<int, int>> axioms;
        bool go = scan(
            sig, k, limits,
            [&](SlicedEvaluator& ev) {
                for (const auto& inc : t.inclusions())
                    axioms.emplace_back(ev.add(inc.lhs), ev.add(inc.rhs));
            },
            [&](SlicedEvaluator& ev, Word* mask) {
                ev.reset_mask(mask);
                for (auto [l, r] : axioms)
                    ev.constrain(mask, l, r);
            },
            [&](std::uint64_t code, SlicedEvaluator& ev) { return visit(ev.decode(code)); });
        if (!go)
            return;
    }
}

std::vector<FiniteModel> enumerate_models(const Signature& sig, const TBox& t,
                                          std::size_t max_size, const EnumerationLimits& limits) {
    std::vector<FiniteModel> out;
    for_each_model(sig, t, max_size, [&](const FiniteModel& m) {
        out.push_back(m);
        return true;
    }, limits);
    return out;
}

std::optional<FiniteModel> find_witness(const Signature& sig, const TBox& t, const Concept& c,
                                        std::size_t max_size, const EnumerationLimits& limits) {
    check_guard(sig, max_size, limits);
    std::optional<FiniteModel> found;
    for (std::size_t k = 1; k <= max_size && !found; ++k) {
        std::vector<std::pair<int, int>> axioms;
        int target = -1;
        std::vector<Word> reach;
        scan(
            sig, k, limits,
            [&](SlicedEvaluator& ev) {
                for (const auto& inc : t.inclusions())
                    axioms.emplace_back(ev.add(inc.lhs), ev.add(inc.rhs));
                target = ev.add(c);
                reach.resize(ev.words());
            },
            [&](SlicedEvaluator& ev, Word* mask) {
                ev.reset_mask(mask);
                for (auto [l, r] : axioms)
                    ev.constrain(mask, l, r);
                ev.nonempty(reach.data(), target);
                ev.ops().and_into(mask, reach.data(), reach.size());
            },
            [&](std::uint64_t code, SlicedEvaluator& ev) {
                found = ev.decode(code);
                return false;
            });
    }
    return found;
}

} // namespace tapo
