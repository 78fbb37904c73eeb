#ifndef ABSW_PROPERTIES_HPP
#define ABSW_PROPERTIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "absw/abstraction.hpp"
#include "absw/core.hpp"
#include "absw/equivalence.hpp"

#include "json.hpp"

namespace absw {

/// Outcome of one condition check. When holds is false a witness is present
/// and re-checkable; it is the least one under the checker's deterministic
/// ordering. vacuous marks family-level conditions with no (surjective)
/// models to quantify over.
struct ConditionVerdict {
    std::string condition;
    bool holds = true;
    bool vacuous = false;
    std::string note;
    std::optional<AbstractionOperator> witnessOp1, witnessOp2;
    std::optional<Concept> witnessX, witnessY;
    std::optional<ObjectMap> witnessMap;
};

nlohmann::json verdict_to_json(const ConditionVerdict& v, const ModelFamily& fam);

// --- per-model conditions ---------------------------------------------------

/// For all X ⊆ rng(∂) and all Y with |Y| = |X|: E(X, Y). Witness order:
/// X outer, Y inner, ascending bit-vectors.
ConditionVerdict check_cc_on_abstracts(const AbstractionModel& m);

/// For every X ⊆ rng(∂) and permutation π: E(X, π̄(X)). Witness order:
/// X outer, π inner (lexicographic tables). On finite domains injections
/// coincide with permutations.
ConditionVerdict check_perm_inv_on_abstracts(const AbstractionModel& m);

/// Conjunction of the per-model checks over every model of the family, with
/// the least failing model's witness; vacuous when there are no models.
ConditionVerdict check_cc_on_abstracts_all(const FamilyPtr& fam);
ConditionVerdict check_perm_inv_on_abstracts_all(const FamilyPtr& fam);

// --- relation-level conditions ----------------------------------------------

/// The E-level condition battery; "small" means |X| <= class count, the
/// largest size that still injects into the quotient.
struct EConditionSet {
    ConditionVerdict perm_inv; // E(X, π̄(X)) for all X, π
    ConditionVerdict cc;       // |X|=|Y| → E(X,Y)
    ConditionVerdict bcc;      // |X|=|Y| and |V∖X|=|V∖Y| → E(X,Y)
    ConditionVerdict cc_small; // cc restricted to |X| <= k
    ConditionVerdict inv_small;// perm_inv restricted to |X| <= k
    int classCount = 0;
    std::string note; // records the finite-scale injection/permutation collapse
};

EConditionSet check_E_conditions(const FamilyPtr& fam);

// --- model-family sweeps ----------------------------------------------------

/// Natural relative categoricity at this scale: every dual model's natural
/// bijection is an isomorphism of the induced structures. Witness: least
/// failing dual in enumeration order plus its least failing concept.
ConditionVerdict check_nrc(const FamilyPtr& fam, int jobs = 1);

/// The same restricted to duals whose operators are both surjective.
ConditionVerdict check_src(const FamilyPtr& fam, int jobs = 1);

struct TheoremItem {
    std::string name;
    ConditionVerdict verdict;
};

/// Joint report for one of the two equivalence theorems; agreement means all
/// item verdicts carry the same truth value.
struct TheoremReport {
    int theorem = 0;
    std::vector<TheoremItem> items;
    bool agreement = false;
    bool vacuous = false;
};

/// Theorem 1 triple: NRC; permutation invariance on abstracts over all
/// models; cardinality coarsening on abstracts over all models.
TheoremReport verify_theorem1(const FamilyPtr& fam, int jobs = 1);

/// Theorem 2 triple over the surjective fragment: SRC; E(X, π̄(X)) in every
/// surjective model; bicardinality coarsening in every surjective model.
TheoremReport verify_theorem2(const FamilyPtr& fam, int jobs = 1);

nlohmann::json theorem_report_to_json(const TheoremReport& r, const ModelFamily& fam);

// --- per-dual analyses --------------------------------------------------------

/// All bijections rng(∂₁) -> rng(∂₂) that are isomorphisms of the induced
/// structures (direct operator-preservation test), and whether that set is
/// exactly {Γ}.
struct IsoUniquenessVerdict {
    NaturalBijection gamma;
    bool gammaIsIso = false;
    std::vector<NaturalBijection> isomorphisms; // ascending table order
    bool exactlyGamma = false;
};

IsoUniquenessVerdict check_iso_uniqueness(const DualModel& dm);

/// Search for a full-structure isomorphism Δ: M -> M with
/// Δ(∂₁(X)) = ∂₂(Δ̄(X)) for every concept X; least Δ in lexicographic order.
std::optional<ObjectMap> find_full_iso(const AbstractionModel& m1, const AbstractionModel& m2);

/// Finite analogue of the coarsening isomorphism theorem: when E is
/// cardinality coarsening, a full-structure isomorphism between the two
/// sides must exist. exhaustive failure under ccHolds is a hard failure.
struct FineVerdict {
    bool ccHolds = false;
    bool found = false;
    std::optional<ObjectMap> delta;
};

FineVerdict check_fine_iso(const DualModel& dm);

/// All size-n models pairwise isomorphic as full structures; witness is the
/// least non-isomorphic pair of operator indices.
struct BivalenceVerdict {
    bool holds = true;
    bool vacuous = false; // no models at this size
    std::optional<AbstractionOperator> witnessOp1, witnessOp2;
};

BivalenceVerdict check_bivalence(const FamilyPtr& fam, int jobs = 1);

// --- implication battery -------------------------------------------------------

/// Arrows of the condition lattice evaluated at one size; any violated arrow
/// is an implementation bug (or a DSL anomaly) and must be treated as a hard
/// failure by callers.
struct ImplicationReport {
    struct Arrow {
        std::string from, to;
        bool fromHolds = false, toHolds = false;
        bool violated = false; // fromHolds and not toHolds
    };
    std::vector<Arrow> arrows;
    bool anyViolated = false;
    bool modelLevelVacuous = false; // no models: model-level consequents vacuous
};

ImplicationReport implication_battery(const FamilyPtr& fam, int jobs = 1);

} // namespace absw

#endif
