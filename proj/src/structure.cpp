#include "relsys/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "relsys/errors.hpp"

namespace relsys {

StructureExpr StructureExpr::component(std::string id) {
    if (id.empty()) {
        throw ValidationError("structure.component.id: must be nonempty");
    }
    StructureExpr e;
    e.kind_ = StructureKind::Component;
    e.id_ = std::move(id);
    return e;
}

StructureExpr StructureExpr::series(std::vector<StructureExpr> children) {
    if (children.empty()) {
        throw ValidationError("structure.series.children: must be nonempty");
    }
    StructureExpr e;
    e.kind_ = StructureKind::Series;
    e.children_ = std::move(children);
    return e;
}

StructureExpr StructureExpr::parallel(std::vector<StructureExpr> children) {
    if (children.empty()) {
        throw ValidationError("structure.parallel.children: must be nonempty");
    }
    StructureExpr e;
    e.kind_ = StructureKind::Parallel;
    e.children_ = std::move(children);
    return e;
}

StructureExpr StructureExpr::k_of_n(int k, std::vector<StructureExpr> children) {
    if (k < 1) {
        throw ValidationError("structure.kofn.k: must be a positive integer");
    }
    if (children.size() < static_cast<std::size_t>(k)) {
        throw ValidationError("structure.kofn.children: need at least k children");
    }
    StructureExpr e;
    e.kind_ = StructureKind::KOfN;
    e.k_ = k;
    e.children_ = std::move(children);
    return e;
}

StructureExpr StructureExpr::bridge(std::vector<std::string> ids) {
    if (ids.size() != 5) {
        throw ValidationError("structure.bridge.ids: must list exactly 5 component ids");
    }
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("structure.bridge.ids: component ids must be distinct");
    }
    for (const auto& id : ids) {
        if (id.empty()) {
            throw ValidationError("structure.bridge.ids: ids must be nonempty");
        }
    }
    StructureExpr e;
    e.kind_ = StructureKind::Bridge;
    e.sets_ = {{ids[0], ids[2], ids[4]}, {ids[0], ids[3]}, {ids[1], ids[2], ids[3]},
               {ids[1], ids[4]}};
    e.bridge_ids_ = std::move(ids);
    return e;
}

StructureExpr StructureExpr::paths(std::vector<std::vector<std::string>> sets) {
    if (sets.empty()) {
        throw ValidationError("structure.paths.sets: must be nonempty");
    }
    for (const auto& s : sets) {
        if (s.empty()) {
            throw ValidationError("structure.paths.sets: every path set must be nonempty");
        }
        for (const auto& id : s) {
            if (id.empty()) {
                throw ValidationError("structure.paths.sets: ids must be nonempty");
            }
        }
    }
    StructureExpr e;
    e.kind_ = StructureKind::Paths;
    e.sets_ = std::move(sets);
    return e;
}

namespace {

void collect_ids(const StructureExpr& expr, std::set<std::string>& out) {
    switch (expr.kind()) {
        case StructureKind::Component:
            out.insert(expr.id());
            break;
        case StructureKind::Bridge:
        case StructureKind::Paths:
            for (const auto& s : expr.sets()) out.insert(s.begin(), s.end());
            break;
        default:
            for (const auto& c : expr.children()) collect_ids(c, out);
    }
}

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

using PathSets = std::vector<std::vector<std::string>>;

/// Union of one set from each operand, over all combinations.
PathSets cross_union(const PathSets& lhs, const PathSets& rhs) {
    PathSets out;
    out.reserve(lhs.size() * rhs.size());
    for (const auto& a : lhs) {
        for (const auto& b : rhs) {
            std::vector<std::string> merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            out.push_back(sorted_unique(std::move(merged)));
        }
    }
    return out;
}

PathSets raw_path_sets(const StructureExpr& expr) {
    switch (expr.kind()) {
        case StructureKind::Component:
            return {{expr.id()}};
        case StructureKind::Series: {
            PathSets acc = raw_path_sets(expr.children().front());
            for (std::size_t i = 1; i < expr.children().size(); ++i) {
                acc = cross_union(acc, raw_path_sets(expr.children()[i]));
            }
            return acc;
        }
        case StructureKind::Parallel: {
            PathSets acc;
            for (const auto& c : expr.children()) {
                PathSets part = raw_path_sets(c);
                acc.insert(acc.end(), part.begin(), part.end());
            }
            return acc;
        }
        case StructureKind::KOfN: {
            const auto& children = expr.children();
            const std::size_t n = children.size();
            const std::size_t k = static_cast<std::size_t>(expr.k());
            std::vector<PathSets> child_sets;
            child_sets.reserve(n);
            for (const auto& c : children) child_sets.push_back(raw_path_sets(c));
            PathSets acc;
            std::vector<std::size_t> pick(k);
            // Enumerate k-subsets of children; each subset acts in series.
            auto recurse = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
                if (depth == k) {
                    PathSets combo = child_sets[pick[0]];
                    for (std::size_t d = 1; d < k; ++d) {
                        combo = cross_union(combo, child_sets[pick[d]]);
                    }
                    acc.insert(acc.end(), combo.begin(), combo.end());
                    return;
                }
                for (std::size_t i = start; i + (k - depth) <= n; ++i) {
                    pick[depth] = i;
                    self(self, i + 1, depth + 1);
                }
            };
            recurse(recurse, 0, 0);
            return acc;
        }
        case StructureKind::Bridge:
        case StructureKind::Paths: {
            PathSets out;
            out.reserve(expr.sets().size());
            for (const auto& s : expr.sets()) out.push_back(sorted_unique(s));
            return out;
        }
    }
    throw ValidationError("structure: malformed tree");
}

bool is_subset(const std::vector<std::string>& small, const std::vector<std::string>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::vector<std::string> StructureExpr::component_ids() const {
    std::set<std::string> out;
    collect_ids(*this, out);
    return {out.begin(), out.end()};
}

std::vector<std::vector<std::string>> min_path_sets(const StructureExpr& expr) {
    PathSets raw = raw_path_sets(expr);
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });
    PathSets minimal;
    for (const auto& candidate : raw) {
        bool dominated = false;
        for (const auto& kept : minimal) {
            if (is_subset(kept, candidate)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(candidate);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0x9E3779B97F4A7C15ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace

MonomialExpansion expand(const std::vector<std::vector<std::string>>& path_sets,
                         ExpansionMode mode) {
    if (path_sets.empty()) {
        throw ValidationError("path_sets: must be nonempty");
    }
    if (path_sets.size() > 24) {
        throw CapacityError("path_sets: inclusion-exclusion expansion limited to 24 path sets");
    }

    std::vector<std::string> ids;
    for (const auto& s : path_sets) ids.insert(ids.end(), s.begin(), s.end());
    ids = sorted_unique(std::move(ids));
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));

    std::vector<std::vector<int>> set_indices(path_sets.size());
    for (std::size_t i = 0; i < path_sets.size(); ++i) {
        for (const auto& id : path_sets[i]) {
            if (id.empty()) throw ValidationError("path_sets: ids must be nonempty");
            set_indices[i].push_back(index.at(id));
        }
        std::sort(set_indices[i].begin(), set_indices[i].end());
        set_indices[i].erase(std::unique(set_indices[i].begin(), set_indices[i].end()),
                             set_indices[i].end());
        if (set_indices[i].empty()) {
            throw ValidationError("path_sets: every path set must be nonempty");
        }
    }

    const std::uint32_t n_sets = static_cast<std::uint32_t>(path_sets.size());
    std::unordered_map<std::vector<int>, long long, VecHash> combined;
    std::vector<int> exponents(ids.size());
    for (std::uint64_t mask = 1; mask < (1ull << n_sets); ++mask) {
        std::fill(exponents.begin(), exponents.end(), 0);
        int picked = 0;
        for (std::uint32_t s = 0; s < n_sets; ++s) {
            if (!(mask & (1ull << s))) continue;
            ++picked;
            for (int idx : set_indices[s]) ++exponents[static_cast<std::size_t>(idx)];
        }
        if (mode == ExpansionMode::Idempotent) {
            for (int& e : exponents) e = std::min(e, 1);
        }
        combined[exponents] += (picked % 2 == 1) ? 1 : -1;
    }

    MonomialExpansion out;
    out.mode = mode;
    long long coeff_sum = 0;
    for (const auto& [exps, coeff] : combined) {
        if (coeff == 0) continue;
        MonomialTerm term;
        term.coeff = coeff;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] > 0) term.exponents.emplace(ids[i], exps[i]);
        }
        coeff_sum += coeff;
        out.terms.push_back(std::move(term));
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const MonomialTerm& a, const MonomialTerm& b) {
                  return a.exponents < b.exponents;
              });
    if (coeff_sum != 1) {
        throw NumericalError("expansion: coefficient sum invariant violated", 0.0, 0.0);
    }
    return out;
}

double evaluate(const MonomialExpansion& expansion,
                const std::map<std::string, double>& assignment) {
    double total = 0.0;
    for (const auto& term : expansion.terms) {
        double prod = static_cast<double>(term.coeff);
        for (const auto& [id, exp] : term.exponents) {
            auto it = assignment.find(id);
            if (it == assignment.end()) {
                throw ValidationError("assignment: missing component id '" + id + "'");
            }
            prod *= std::pow(it->second, exp);
        }
        total += prod;
    }
    return total;
}

bool boolean_state(const StructureExpr& expr, const std::set<std::string>& up) {
    switch (expr.kind()) {
        case StructureKind::Component:
            return up.count(expr.id()) > 0;
        case StructureKind::Series: {
            for (const auto& c : expr.children()) {
                if (!boolean_state(c, up)) return false;
            }
            return true;
        }
        case StructureKind::Parallel: {
            for (const auto& c : expr.children()) {
                if (boolean_state(c, up)) return true;
            }
            return false;
        }
        case StructureKind::KOfN: {
            int alive = 0;
            for (const auto& c : expr.children()) {
                if (boolean_state(c, up)) ++alive;
            }
            return alive >= expr.k();
        }
        case StructureKind::Bridge:
        case StructureKind::Paths: {
            for (const auto& s : expr.sets()) {
                bool all = true;
                for (const auto& id : s) {
                    if (up.count(id) == 0) {
                        all = false;
                        break;
                    }
                }
                if (all) return true;
            }
            return false;
        }
    }
    throw ValidationError("structure: malformed tree");
}

}  // namespace relsys
