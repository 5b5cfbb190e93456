#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace relsys {

enum class StructureKind { Component, Series, Parallel, KOfN, Bridge, Paths };

/// Logical topology tree. Leaves are components; internal nodes combine
/// children in series/parallel/k-of-n; bridge and paths are direct path-set
/// forms.
class StructureExpr {
public:
    static StructureExpr component(std::string id);
    static StructureExpr series(std::vector<StructureExpr> children);
    static StructureExpr parallel(std::vector<StructureExpr> children);
    static StructureExpr k_of_n(int k, std::vector<StructureExpr> children);
    /// `ids` in diagram order: 1,2 source side; 3 the crossing link; 4,5 sink
    /// side. Path sets are {1,3,5},{1,4},{2,3,4},{2,5}.
    static StructureExpr bridge(std::vector<std::string> ids);
    static StructureExpr paths(std::vector<std::vector<std::string>> sets);

    StructureKind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    const std::vector<StructureExpr>& children() const { return children_; }
    int k() const { return k_; }
    const std::vector<std::vector<std::string>>& sets() const { return sets_; }
    const std::vector<std::string>& bridge_ids() const { return bridge_ids_; }

    /// Sorted unique ids referenced anywhere in the tree.
    std::vector<std::string> component_ids() const;

private:
    StructureExpr() = default;

    StructureKind kind_ = StructureKind::Component;
    std::string id_;
    std::vector<StructureExpr> children_;
    int k_ = 0;
    std::vector<std::vector<std::string>> sets_;
    std::vector<std::string> bridge_ids_;  // diagram order, serialization
};

/// Minimal path sets: each set sorted, list sorted lexicographically,
/// duplicates and supersets discarded.
std::vector<std::vector<std::string>> min_path_sets(const StructureExpr& expr);

enum class ExpansionMode { Idempotent, Paper };

struct MonomialTerm {
    long long coeff = 0;
    std::map<std::string, int> exponents;
};

/// Signed monomial form of the structure function. Terms are like-combined,
/// nonzero, and canonically ordered by exponent map.
struct MonomialExpansion {
    ExpansionMode mode = ExpansionMode::Idempotent;
    std::vector<MonomialTerm> terms;
};

/// Inclusion-exclusion over all nonempty subsets of path sets. Paper mode
/// sums exponents of repeated components; idempotent mode caps them at 1.
/// At most 24 path sets.
MonomialExpansion expand(const std::vector<std::vector<std::string>>& path_sets,
                         ExpansionMode mode);

/// Sum of coeff * prod value^exponent over terms. Every id in the expansion
/// must be assigned.
double evaluate(const MonomialExpansion& expansion,
                const std::map<std::string, double>& assignment);

/// 1 iff some minimal path set is contained in `up`.
bool boolean_state(const StructureExpr& expr, const std::set<std::string>& up);

}  // namespace relsys
