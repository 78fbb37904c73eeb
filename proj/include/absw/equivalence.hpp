#ifndef ABSW_EQUIVALENCE_HPP
#define ABSW_EQUIVALENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "absw/core.hpp"
#include "absw/formula.hpp"

namespace absw {

/// Built-in equivalence relations on concepts, in their finite-scale form.
/// Each is evaluated relative to a universe U (the carrier), which matters for
/// the relations that mention complements or the size of the universe.
enum class Builtin {
    Blv,              // X = Y
    Hume,             // |X| = |Y|
    NewV,             // both "big" (= U, at finite scale) or X = Y
    Bicardinality,    // |X| = |Y| and |U\X| = |U\Y|
    Nuisance,         // always true at finite scale (no infinite symmetric differences)
    Complementation,  // self-complementary concepts pair up with their complements
    Parity,           // |X| = |Y| when |U| is even, trivial when |U| is odd
    FiniteSwitch,     // X = Y at finite scale (no infinite switch sets)
    Trivial,          // always true
    EmptyVsNonempty,  // X and Y both empty or both non-empty
};

std::optional<Builtin> builtin_from_name(const std::string& name);
std::string builtin_name(Builtin b);
std::vector<Builtin> all_builtins();

/// An equivalence relation: either a built-in or a two-variable formula with
/// free concept variables exactly {X, Y} and no abs/E syntax inside.
class EquivalenceSpec {
public:
    static EquivalenceSpec fromBuiltin(Builtin b);
    /// Throws std::invalid_argument when the formula has the wrong interface.
    static EquivalenceSpec fromFormula(FormulaPtr f, std::string name = "dsl");

    const std::string& name() const { return name_; }
    std::optional<Builtin> builtin() const { return builtin_; }
    const FormulaPtr& formula() const { return formula_; }

    /// E(x, y) with the given universe; masks must lie inside the carrier.
    bool holds(std::uint32_t x, std::uint32_t y, int width, std::uint32_t carrier) const;
    bool holds(const Concept& x, const Concept& y, const Domain& d) const {
        return holds(x.mask(), y.mask(), d.size(), d.universeMask());
    }

private:
    EquivalenceSpec() = default;
    std::optional<Builtin> builtin_;
    FormulaPtr formula_;
    std::string name_;
};

/// Outcome of checking the three equivalence laws, with least witnesses in
/// bitmask order. failedLaw is empty when ok.
struct EquivalenceValidation {
    bool ok = true;
    std::string failedLaw;          // "reflexivity" | "symmetry" | "transitivity"
    std::vector<Concept> witnesses; // 1, 2 or 3 concepts
};

EquivalenceValidation validate_equivalence(const EquivalenceSpec& e, const Domain& d);

/// Quotient of the full concept space by E. Classes are ordered by their
/// least member, the representative; classOf is indexed by concept bitmask.
struct Partition {
    std::vector<std::vector<Concept>> classes;
    std::vector<Concept> representatives;
    std::vector<int> classOf;

    int classCount() const { return static_cast<int>(classes.size()); }
};

/// Throws std::invalid_argument when e is not an equivalence relation on d.
Partition compute_classes(const EquivalenceSpec& e, const Domain& d);

} // namespace absw

#endif
