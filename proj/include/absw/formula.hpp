#ifndef ABSW_FORMULA_HPP
#define ABSW_FORMULA_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "absw/core.hpp"

namespace absw {

// Monadic second-order formulas over the abstraction signature.
// Concept variables are capitalized identifiers, object variables lowercase.

struct ConceptTerm;
struct ObjectTerm;
struct Formula;

using ConceptTermPtr = std::shared_ptr<const ConceptTerm>;
using ObjectTermPtr = std::shared_ptr<const ObjectTerm>;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class ConceptTermKind { Var, Empty, Universe, Literal, Union, Inter, Minus };

struct ConceptTerm {
    ConceptTermKind kind;
    std::string var;            // Var
    std::vector<int> members;   // Literal, sorted ascending
    ConceptTermPtr lhs, rhs;    // Union/Inter/Minus
};

enum class ObjectTermKind { Var, Abs };

struct ObjectTerm {
    ObjectTermKind kind;
    std::string var;     // Var
    ConceptTermPtr arg;  // Abs
};

enum class CardRel { Eq, Le, Lt };
enum class CardRhsKind { Card, Int, Omega };

enum class FormulaKind {
    ObjEq, ConceptEq, Member, EAtom, CmpAtom, CardCmp,
    Not, And, Or, Implies, Iff,
    ForallObj, ExistsObj, ForallConcept, ExistsConcept,
};

struct Formula {
    FormulaKind kind;
    // atoms
    ObjectTermPtr o1, o2;        // ObjEq, Member (o1)
    ConceptTermPtr c1, c2;       // ConceptEq, Member (c1=set), EAtom, CmpAtom, CardCmp lhs/rhs
    CardRel cardRel{};           // CardCmp
    CardRhsKind cardRhs{};       // CardCmp
    int cardInt = 0;             // CardCmp with integer literal
    // connectives / quantifiers
    FormulaPtr f1, f2;
    std::string boundVar;        // quantifiers
};

bool structurally_equal(const Formula& a, const Formula& b);

/// Syntax or sort error, with 1-based position in the input.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string expected)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + expected),
          line_(line), column_(column), expected_(std::move(expected)) {}
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    int line_, column_;
    std::string expected_;
};

FormulaPtr parse_formula(const std::string& text);

/// Canonical concrete syntax; parse(print(f)) is structurally equal to f.
std::string print_formula(const Formula& f);
std::string print_concept_term(const ConceptTerm& t);
std::string print_object_term(const ObjectTerm& t);

/// Free variables, split by sort.
void collect_free_vars(const Formula& f, std::set<std::string>& conceptVars,
                       std::set<std::string>& objectVars);

class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Semantics of one structure: a carrier (subset of the ambient domain; the
/// full domain for ordinary models, rng(operator) for induced structures),
/// the active equivalence relation for E-atoms, and the operator for abs.
/// Either hook may be absent; using the corresponding syntax then raises
/// EvalError (e.g. abs inside an equivalence-relation definition).
struct EvalContext {
    int width = 0;                // bit width of concept masks
    std::uint32_t carrier = 0;    // quantifier range; also the value of "universe"
    std::function<bool(std::uint32_t, std::uint32_t)> equiv;       // E(X,Y)
    std::function<std::optional<int>(std::uint32_t)> abs;          // partial operator
};

/// Variable assignment for evaluating formulas with free variables.
struct Environment {
    std::vector<std::pair<std::string, int>> objects;
    std::vector<std::pair<std::string, std::uint32_t>> concepts;
};

bool evaluate(const Formula& f, const EvalContext& ctx, const Environment& env = {});

/// First template (by index) with different truth values in the two contexts.
/// side = 1 means true in the first context, 2 means true in the second.
/// Templates that raise EvalError in either context are skipped; their indices
/// are appended to skipped when provided.
struct Distinction {
    size_t index;
    int side;
};
std::optional<Distinction> distinguish(const std::vector<FormulaPtr>& templates,
                                       const EvalContext& ctx1, const EvalContext& ctx2,
                                       std::vector<size_t>* skipped = nullptr);

/// Truth-preserving randomized rewrite (De Morgan, quantifier duality,
/// implication expansion, double negation); used by the property tests.
FormulaPtr rewrite_equivalent(const Formula& f, std::uint64_t seed, int steps = 8);

} // namespace absw

#endif
