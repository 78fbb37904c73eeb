#include "absw/equivalence.hpp"

#include <bit>
#include <stdexcept>

namespace absw {

namespace {

const std::pair<const char*, Builtin> kNames[] = {
    {"blv", Builtin::Blv},
    {"hume", Builtin::Hume},
    {"newv", Builtin::NewV},
    {"bicardinality", Builtin::Bicardinality},
    {"nuisance", Builtin::Nuisance},
    {"complementation", Builtin::Complementation},
    {"parity", Builtin::Parity},
    {"finite-switch", Builtin::FiniteSwitch},
    {"trivial", Builtin::Trivial},
    {"empty-vs-nonempty", Builtin::EmptyVsNonempty},
};

bool evalBuiltin(Builtin b, std::uint32_t x, std::uint32_t y, std::uint32_t u) {
    const int cx = std::popcount(x), cy = std::popcount(y), cu = std::popcount(u);
    switch (b) {
    case Builtin::Blv:
        return x == y;
    case Builtin::Hume:
        return cx == cy;
    case Builtin::NewV:
        // "big" at finite scale means equinumerous with U, i.e. all of U
        return (cx < cu || cy < cu) ? x == y : true;
    case Builtin::Bicardinality:
        return cx == cy && std::popcount(u & ~x) == std::popcount(u & ~y);
    case Builtin::Nuisance:
        // symmetric differences are always finite here
        return true;
    case Builtin::Complementation: {
        auto cmp = [&](std::uint32_t z) { return std::popcount(z) == std::popcount(u & ~z); };
        if (!cmp(x) && !cmp(y)) return true;
        return x == y || (cx == cy && (x & y) == 0 && (x | y) == u);
    }
    case Builtin::Parity:
        return (cu % 2 == 0) ? cx == cy : true;
    case Builtin::FiniteSwitch:
        // no concept has an infinite complement here, so nothing may be switched
        return x == y;
    case Builtin::Trivial:
        return true;
    case Builtin::EmptyVsNonempty:
        return (x == 0) == (y == 0);
    }
    return false;
}

void checkFormulaInterface(const Formula& f) {
    std::set<std::string> cv, ov;
    collect_free_vars(f, cv, ov);
    if (!ov.empty())
        throw std::invalid_argument("relation formula has free object variable '" +
                                    *ov.begin() + "'");
    if (cv != std::set<std::string>{"X", "Y"})
        throw std::invalid_argument(
            "relation formula must have free concept variables exactly {X, Y}");
    // no abs / E inside a relation definition
    std::function<void(const ConceptTerm&)> walkC;
    std::function<void(const Formula&)> walkF;
    auto walkO = [&](const ObjectTerm& t) {
        if (t.kind == ObjectTermKind::Abs)
            throw std::invalid_argument("relation formula may not use abs");
    };
    walkC = [&](const ConceptTerm& t) {
        if (t.lhs) walkC(*t.lhs);
        if (t.rhs) walkC(*t.rhs);
    };
    walkF = [&](const Formula& g) {
        if (g.kind == FormulaKind::EAtom)
            throw std::invalid_argument("relation formula may not use E");
        if (g.o1) walkO(*g.o1);
        if (g.o2) walkO(*g.o2);
        if (g.c1) walkC(*g.c1);
        if (g.c2) walkC(*g.c2);
        if (g.f1) walkF(*g.f1);
        if (g.f2) walkF(*g.f2);
    };
    walkF(f);
}

} // namespace

std::optional<Builtin> builtin_from_name(const std::string& name) {
    for (const auto& [n, b] : kNames)
        if (name == n) return b;
    return std::nullopt;
}

std::string builtin_name(Builtin b) {
    for (const auto& [n, v] : kNames)
        if (v == b) return n;
    return "?";
}

std::vector<Builtin> all_builtins() {
    std::vector<Builtin> out;
    for (const auto& [n, b] : kNames) out.push_back(b);
    return out;
}

EquivalenceSpec EquivalenceSpec::fromBuiltin(Builtin b) {
    EquivalenceSpec e;
    e.builtin_ = b;
    e.name_ = builtin_name(b);
    return e;
}

EquivalenceSpec EquivalenceSpec::fromFormula(FormulaPtr f, std::string name) {
    if (!f) throw std::invalid_argument("null relation formula");
    checkFormulaInterface(*f);
    EquivalenceSpec e;
    e.formula_ = std::move(f);
    e.name_ = std::move(name);
    return e;
}

bool EquivalenceSpec::holds(std::uint32_t x, std::uint32_t y, int width,
                            std::uint32_t carrier) const {
    if (builtin_) return evalBuiltin(*builtin_, x, y, carrier);
    EvalContext ctx;
    ctx.width = width;
    ctx.carrier = carrier;
    Environment env;
    env.concepts = {{"X", x}, {"Y", y}};
    return evaluate(*formula_, ctx, env);
}

EquivalenceValidation validate_equivalence(const EquivalenceSpec& e, const Domain& d) {
    const auto cs = enumerate_concepts(d);
    EquivalenceValidation r;
    auto E = [&](const Concept& a, const Concept& b) { return e.holds(a, b, d); };
    for (const auto& x : cs) {
        if (!E(x, x)) {
            r.ok = false;
            r.failedLaw = "reflexivity";
            r.witnesses = {x};
            return r;
        }
    }
    for (const auto& x : cs)
        for (const auto& y : cs) {
            if (E(x, y) && !E(y, x)) {
                r.ok = false;
                r.failedLaw = "symmetry";
                r.witnesses = {x, y};
                return r;
            }
        }
    for (const auto& x : cs)
        for (const auto& y : cs) {
            if (!E(x, y)) continue;
            for (const auto& z : cs) {
                if (E(y, z) && !E(x, z)) {
                    r.ok = false;
                    r.failedLaw = "transitivity";
                    r.witnesses = {x, y, z};
                    return r;
                }
            }
        }
    return r;
}

Partition compute_classes(const EquivalenceSpec& e, const Domain& d) {
    EquivalenceValidation v = validate_equivalence(e, d);
    if (!v.ok)
        throw std::invalid_argument("relation '" + e.name() + "' violates " + v.failedLaw +
                                    " on a domain of size " + std::to_string(d.size()));
    Partition p;
    const auto cs = enumerate_concepts(d);
    p.classOf.assign(cs.size(), -1);
    for (const auto& x : cs) {
        int found = -1;
        for (size_t c = 0; c < p.representatives.size(); ++c)
            if (e.holds(p.representatives[c], x, d)) {
                found = static_cast<int>(c);
                break;
            }
        if (found < 0) {
            found = p.classCount();
            p.representatives.push_back(x); // ascending sweep => least member
            p.classes.emplace_back();
        }
        p.classes[static_cast<size_t>(found)].push_back(x);
        p.classOf[x.mask()] = found;
    }
    return p;
}

} // namespace absw
