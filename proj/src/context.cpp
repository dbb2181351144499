#include "tapo/context.hpp"

#include "tapo/error.hpp"

#include <algorithm>
#include <set>

namespace tapo {

ContextPoset::Builder& ContextPoset::Builder::context(std::string name) {
    names_.push_back(std::move(name));
    return *this;
}

ContextPoset::Builder& ContextPoset::Builder::leq(std::string sub, std::string super) {
    pairs_.emplace_back(std::move(sub), std::move(super));
    return *this;
}

ContextPoset ContextPoset::Builder::build() const {
    ContextPoset p;
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second)
            throw Error(ErrorKind::Validation, "context '" + n + "' declared twice");
        p.names_.push_back(n);
    }
    std::size_t n = p.names_.size();
    p.leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        p.leq_[i][i] = true;
    for (const auto& [sub, super] : pairs_)
        p.leq_[p.index(sub)][p.index(super)] = true;
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (p.leq_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (p.leq_[k][j])
                        p.leq_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (p.leq_[i][j] && p.leq_[j][i])
                throw Error(ErrorKind::Validation, "context order has a cycle through '" +
                                                       p.names_[i] + "' and '" + p.names_[j] + "'");
    return p;
}

std::size_t ContextPoset::index(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        throw Error(ErrorKind::UnknownName, "undeclared context '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool ContextPoset::contains(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool ContextPoset::leq(std::string_view v, std::string_view u) const {
    return leq_[index(v)][index(u)];
}

std::optional<std::string> ContextPoset::meet(std::string_view u, std::string_view v) const {
    std::size_t iu = index(u);
    std::size_t iv = index(v);
    std::vector<std::size_t> lower;
    for (std::size_t w = 0; w < names_.size(); ++w)
        if (leq_[w][iu] && leq_[w][iv])
            lower.push_back(w);
    std::vector<std::size_t> maximal;
    for (std::size_t w : lower) {
        bool dominated = std::any_of(lower.begin(), lower.end(),
                                     [&](std::size_t z) { return z != w && leq_[w][z]; });
        if (!dominated)
            maximal.push_back(w);
    }
    // In a finite poset a unique maximal lower bound is above every lower bound.
    if (maximal.size() != 1)
        return std::nullopt;
    return names_[maximal.front()];
}

std::vector<std::string> ContextPoset::below(std::string_view u) const {
    std::size_t iu = index(u);
    std::vector<std::string> out;
    for (std::size_t w = 0; w < names_.size(); ++w)
        if (leq_[w][iu])
            out.push_back(names_[w]);
    return out;
}

std::vector<std::pair<std::string, std::string>> ContextPoset::strict_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = 0; j < names_.size(); ++j)
            if (i != j && leq_[i][j])
                out.emplace_back(names_[i], names_[j]);
    std::sort(out.begin(), out.end());
    return out;
}

ContextPoset ContextPoset::reclosed() const {
    Builder b;
    for (const auto& n : names_)
        b.context(n);
    for (const auto& [v, u] : strict_pairs())
        b.leq(v, u);
    return b.build();
}

std::string to_string(const Covering& c) {
    std::string out = "cover " + c.target + " by ";
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        if (i)
            out += ", ";
        out += c.members[i];
    }
    return out;
}

std::vector<CoveringViolation> validate_covering(const ContextPoset& p, const Covering& c) {
    std::vector<CoveringViolation> out;
    if (!p.contains(c.target))
        out.push_back({"", "undeclared target context '" + c.target + "'"});
    if (c.members.empty())
        out.push_back({"", "empty covering"});
    std::set<std::string> seen;
    for (const auto& m : c.members) {
        if (!seen.insert(m).second) {
            out.push_back({m, "member '" + m + "' listed twice"});
            continue;
        }
        if (!p.contains(m)) {
            out.push_back({m, "undeclared context '" + m + "'"});
            continue;
        }
        if (p.contains(c.target) && !p.leq(m, c.target))
            out.push_back({m, "'" + m + "' is not a subcontext of '" + c.target + "'"});
    }
    return out;
}

} // namespace tapo
