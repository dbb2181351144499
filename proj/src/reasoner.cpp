#include "tapo/reasoner.hpp"

#include "tapo/error.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace tapo {

bool operator==(const TBox& a, const TBox& b) {
    std::set<Inclusion> sa(a.inclusions_.begin(), a.inclusions_.end());
    std::set<Inclusion> sb(b.inclusions_.begin(), b.inclusions_.end());
    return sa == sb;
}

void validate(const TBox& t, const Signature& sig) {
    for (const auto& inc : t.inclusions()) {
        validate(inc.lhs, sig);
        validate(inc.rhs, sig);
    }
}

const char* to_string(SatStatus s) noexcept {
    switch (s) {
    case SatStatus::Satisfiable: return "satisfiable";
    case SatStatus::Unsatisfiable: return "unsatisfiable";
    case SatStatus::ResourceLimit: return "resource-limit";
    }
    return "?";
}

namespace {

/// Fixed-width bitset over closure ids.
class Label {
public:
    explicit Label(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    bool set(std::size_t i) {
        auto& w = words_[i >> 6];
        std::uint64_t m = std::uint64_t{1} << (i & 63);
        bool fresh = (w & m) == 0;
        w |= m;
        return fresh;
    }
    bool subset_of(const Label& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~o.words_[i]) != 0)
                return false;
        return true;
    }
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

struct BudgetExceeded {};

/// Closure entry for one NNF concept.
struct Entry {
    Concept::Kind kind;
    int left = -1;
    int right = -1;
    int role = -1;
};

class Tableau {
public:
    Tableau(const TBox& t, const Concept& c, std::size_t budget) : budget_(budget) {
        std::vector<Concept> roots{nnf(c)};
        for (const auto& inc : t.inclusions())
            roots.push_back(nnf(Concept::disj(Concept::negation(inc.lhs), inc.rhs)));
        std::set<Concept> closure;
        for (const auto& r : roots)
            closure.merge(subconcepts(r));
        std::map<Concept, int> ids;
        for (const auto& x : closure) {
            ids.emplace(x, static_cast<int>(concepts_.size()));
            concepts_.push_back(x);
        }
        std::map<std::string, int> roles;
        entries_.resize(concepts_.size());
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const Concept& x = concepts_[i];
            Entry& e = entries_[i];
            e.kind = x.kind();
            if (x.is_binary()) {
                e.left = ids.at(x.left());
                e.right = ids.at(x.right());
            } else if (x.kind() == Concept::Kind::Not || x.is_quantifier()) {
                e.left = ids.at(x.child());
            }
            if (x.is_quantifier())
                e.role = roles.emplace(x.name(), static_cast<int>(roles.size())).first->second;
        }
        root_ = ids.at(roots.front());
        for (std::size_t k = 1; k < roots.size(); ++k)
            global_.push_back(ids.at(roots[k]));
    }

    SatResult run() {
        SatResult out;
        try {
            Label init = fresh_label();
            init.set(static_cast<std::size_t>(root_));
            out.status = satisfiable_node(std::move(init)) ? SatStatus::Satisfiable
                                                            : SatStatus::Unsatisfiable;
        } catch (const BudgetExceeded&) {
            out.status = SatStatus::ResourceLimit;
        }
        out.nodes = used_;
        return out;
    }

private:
    Label fresh_label() const {
        Label l(concepts_.size());
        for (int g : global_)
            l.set(static_cast<std::size_t>(g));
        return l;
    }

    void charge() {
        if (++used_ > budget_)
            throw BudgetExceeded{};
    }

    bool blocked(const Label& l) const {
        return std::any_of(ancestors_.begin(), ancestors_.end(),
                           [&](const Label& a) { return l.subset_of(a); });
    }

    bool satisfiable_node(Label init) {
        charge();
        // A node whose label is contained in an ancestor's can reuse the
        // ancestor's successors (subset blocking).
        if (blocked(init))
            return true;
        return expand(std::move(init));
    }

    /// Saturate under the conjunction rule; false on clash.
    bool close_conjunctions(Label& l) const {
        bool changed = true;
        while (changed) {
            changed = false;
            l.for_each([&](std::size_t i) {
                const Entry& e = entries_[i];
                if (e.kind == Concept::Kind::And) {
                    changed |= l.set(static_cast<std::size_t>(e.left));
                    changed |= l.set(static_cast<std::size_t>(e.right));
                }
            });
        }
        bool clash = false;
        l.for_each([&](std::size_t i) {
            const Entry& e = entries_[i];
            if (e.kind == Concept::Kind::Bot)
                clash = true;
            else if (e.kind == Concept::Kind::Not && l.test(static_cast<std::size_t>(e.left)))
                clash = true;
        });
        return !clash;
    }

    bool expand(Label l) {
        if (!close_conjunctions(l))
            return false;

        int pending_or = -1;
        l.for_each([&](std::size_t i) {
            const Entry& e = entries_[i];
            if (pending_or < 0 && e.kind == Concept::Kind::Or &&
                !l.test(static_cast<std::size_t>(e.left)) &&
                !l.test(static_cast<std::size_t>(e.right)))
                pending_or = static_cast<int>(i);
        });
        if (pending_or >= 0) {
            const Entry& e = entries_[static_cast<std::size_t>(pending_or)];
            for (int branch : {e.left, e.right}) {
                charge();
                Label next = l;
                next.set(static_cast<std::size_t>(branch));
                if (expand(std::move(next)))
                    return true;
            }
            return false;
        }

        if (blocked(l))
            return true;

        std::vector<int> demands;
        l.for_each([&](std::size_t i) {
            if (entries_[i].kind == Concept::Kind::Exists)
                demands.push_back(static_cast<int>(i));
        });
        ancestors_.push_back(l);
        bool ok = true;
        for (int d : demands) {
            const Entry& ex = entries_[static_cast<std::size_t>(d)];
            Label child = fresh_label();
            child.set(static_cast<std::size_t>(ex.left));
            l.for_each([&](std::size_t i) {
                const Entry& e = entries_[i];
                if (e.kind == Concept::Kind::Forall && e.role == ex.role)
                    child.set(static_cast<std::size_t>(e.left));
            });
            if (!satisfiable_node(std::move(child))) {
                ok = false;
                break;
            }
        }
        ancestors_.pop_back();
        return ok;
    }

    std::vector<Concept> concepts_;
    std::vector<Entry> entries_;
    std::vector<int> global_;
    int root_ = 0;
    std::vector<Label> ancestors_;
    std::size_t budget_;
    std::size_t used_ = 0;
};

} // namespace

SatResult check_satisfiability(const TBox& t, const Concept& c, const ReasonerOptions& opts) {
    return Tableau(t, c, opts.node_budget).run();
}

bool is_satisfiable(const TBox& t, const Concept& c, const ReasonerOptions& opts) {
    SatResult r = check_satisfiability(t, c, opts);
    if (r.status == SatStatus::ResourceLimit)
        throw ResourceLimitError("tableau node budget of " + std::to_string(opts.node_budget) +
                                 " exhausted while checking " + to_string(c));
    return r.status == SatStatus::Satisfiable;
}

bool subsumes(const TBox& t, const Concept& c, const Concept& d, const ReasonerOptions& opts) {
    return !is_satisfiable(t, Concept::conj(c, Concept::negation(d)), opts);
}

} // namespace tapo
