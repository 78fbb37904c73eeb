#ifndef ABSW_ABSTRACTION_HPP
#define ABSW_ABSTRACTION_HPP

#include <memory>
#include <string>
#include <vector>

#include "absw/core.hpp"
#include "absw/equivalence.hpp"
#include "absw/formula.hpp"

#include "json.hpp"

namespace absw {

/// Domain + validated relation + its partition, shared by every model built
/// over them so the quotient is computed once per sweep.
class ModelFamily {
public:
    static std::shared_ptr<const ModelFamily> create(Domain d, EquivalenceSpec e) {
        auto f = std::shared_ptr<ModelFamily>(new ModelFamily(std::move(d), std::move(e)));
        return f;
    }

    const Domain& domain() const { return domain_; }
    const EquivalenceSpec& spec() const { return spec_; }
    const Partition& partition() const { return partition_; }
    int classCount() const { return partition_.classCount(); }
    /// An injection of the classes into the objects exists iff k <= n (and the
    /// domain is non-empty, since models are non-empty structures).
    bool operatorExists() const { return domain_.size() >= 1 && classCount() <= domain_.size(); }

private:
    ModelFamily(Domain d, EquivalenceSpec e)
        : domain_(std::move(d)), spec_(std::move(e)),
          partition_(compute_classes(spec_, domain_)) {}

    Domain domain_;
    EquivalenceSpec spec_;
    Partition partition_;
};

using FamilyPtr = std::shared_ptr<const ModelFamily>;

/// An injective assignment of class ids to objects; ∂(X) = assignment[class(X)].
class AbstractionOperator {
public:
    AbstractionOperator(std::vector<int> assignment, int n)
        : assignment_(std::move(assignment)), n_(n) {
        std::uint32_t seen = 0;
        for (int v : assignment_) {
            if (v < 0 || v >= n)
                throw std::invalid_argument("operator value out of range");
            if (seen & (1u << v))
                throw std::invalid_argument("operator assignment is not injective");
            seen |= 1u << v;
        }
        range_ = seen;
    }

    const std::vector<int>& assignment() const { return assignment_; }
    int valueOfClass(int c) const { return assignment_.at(static_cast<size_t>(c)); }
    std::uint32_t rangeMask() const { return range_; }
    bool isSurjective(const Domain& d) const { return range_ == d.universeMask(); }
    bool operator==(const AbstractionOperator& o) const { return assignment_ == o.assignment_; }

private:
    std::vector<int> assignment_;
    int n_;
    std::uint32_t range_;
};

/// All injective assignments of the k classes into n objects, lexicographic in
/// the assignment arrays (n!/(n-k)! of them); empty when no operator exists.
std::vector<AbstractionOperator> enumerate_operators(const ModelFamily& fam,
                                                     bool surjectiveOnly = false);

/// One standard model of the abstraction principle.
class AbstractionModel {
public:
    AbstractionModel(FamilyPtr fam, AbstractionOperator op);

    const ModelFamily& family() const { return *family_; }
    const FamilyPtr& familyPtr() const { return family_; }
    const Domain& domain() const { return family_->domain(); }
    const EquivalenceSpec& spec() const { return family_->spec(); }
    const AbstractionOperator& op() const { return op_; }

    int abstractOf(std::uint32_t conceptMask) const {
        return op_.valueOfClass(family_->partition().classOf[conceptMask]);
    }
    int abstractOf(const Concept& x) const { return abstractOf(x.mask()); }

    /// Exhaustive check of the defining biconditional ∂(X)=∂(Y) <-> E(X,Y).
    bool satisfiesPrinciple() const;

    /// Full semantics: quantifiers over the whole domain, abs total, E active.
    EvalContext evalContext() const;

private:
    FamilyPtr family_;
    AbstractionOperator op_;
};

std::vector<AbstractionModel> enumerate_models(const FamilyPtr& fam,
                                               bool surjectiveOnly = false);

/// One structure carrying two operators for the same relation.
class DualModel {
public:
    DualModel(FamilyPtr fam, AbstractionOperator op1, AbstractionOperator op2)
        : m1_(fam, std::move(op1)), m2_(std::move(fam), std::move(op2)) {}
    DualModel(AbstractionModel m1, AbstractionModel m2)
        : m1_(std::move(m1)), m2_(std::move(m2)) {
        if (!(m1_.domain() == m2_.domain()))
            throw std::invalid_argument("dual model operators live on different domains");
    }

    const ModelFamily& family() const { return m1_.family(); }
    const Domain& domain() const { return m1_.domain(); }
    const EquivalenceSpec& spec() const { return m1_.spec(); }
    const AbstractionModel& side(int i) const { return i == 1 ? m1_ : m2_; }
    const AbstractionOperator& op1() const { return m1_.op(); }
    const AbstractionOperator& op2() const { return m2_.op(); }

    DualModel swapped() const { return DualModel(m2_, m1_); }

private:
    AbstractionModel m1_, m2_;
};

/// The map Γ with Γ(∂₁(X)) = ∂₂(X): a partial object map defined exactly on
/// rng(∂₁), injective, with range exactly rng(∂₂).
class NaturalBijection {
public:
    NaturalBijection(std::vector<int> table, int n);

    int size() const { return static_cast<int>(table_.size()); }
    bool definedAt(int i) const { return table_[static_cast<size_t>(i)] >= 0; }
    int apply(int i) const;
    std::uint32_t domainMask() const { return domainMask_; }
    std::uint32_t rangeMask() const { return rangeMask_; }

    /// Pointwise image; x must lie inside the domain mask.
    Concept image(const Concept& x) const;
    NaturalBijection inverse() const;

    bool operator==(const NaturalBijection& o) const { return table_ == o.table_; }

    std::string toString(const Domain& d) const;

private:
    std::vector<int> table_; // -1 where undefined
    std::uint32_t domainMask_ = 0, rangeMask_ = 0;
};

NaturalBijection natural_bijection(const DualModel& dm);

/// The substructure on rng(∂ᵢ): quantifiers range over the carrier, abs is the
/// parent operator restricted to subsets of the carrier (undefined elsewhere),
/// and E stays the parent relation restricted.
struct InducedStructure {
    Concept carrier;
    EvalContext context;
};

InducedStructure induced_structure(const DualModel& dm, int i);

/// Natural-isomorphism verdict: iso iff E(X, Γ̄(X)) for every X ⊆ rng(∂₁),
/// which is the isomorphism condition specialized to Γ. On failure, the least
/// failing X in bit-vector order. The mirrored condition on the swapped dual
/// (via Γ⁻¹) is cross-checked and must agree.
struct NaturalIsoVerdict {
    bool iso = true;
    Concept failingConcept; // least X with !E(X, Γ̄(X)) when !iso
};

NaturalIsoVerdict is_natural_iso(const DualModel& dm);

/// Whether an arbitrary bijection H: rng(∂₁) -> rng(∂₂) is an isomorphism of
/// the induced structures: H(∂₁(X)) = ∂₂(H̄(X)) for every X ⊆ rng(∂₁).
bool is_induced_iso(const DualModel& dm, const NaturalBijection& h);

// ---------------------------------------------------------------------------
// JSON model files

/// {"n": int, "names": [...]?, "rel": name-or-{"dsl": text},
///  "operator": {"<representative bitmask>": objectIndex, ...}}
/// Dual files carry "operator1"/"operator2". Unknown keys are rejected.
AbstractionModel model_from_json(const nlohmann::json& j, int cap = Domain::kDefaultCap);
DualModel dual_from_json(const nlohmann::json& j, int cap = Domain::kDefaultCap);
nlohmann::json model_to_json(const AbstractionModel& m);
nlohmann::json dual_to_json(const DualModel& dm);

} // namespace absw

#endif
