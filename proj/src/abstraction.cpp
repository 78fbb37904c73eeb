#include "absw/abstraction.hpp"

#include <algorithm>

namespace absw {

std::vector<AbstractionOperator> enumerate_operators(const ModelFamily& fam,
                                                     bool surjectiveOnly) {
    std::vector<AbstractionOperator> out;
    if (!fam.operatorExists()) return out;
    const int n = fam.domain().size();
    const int k = fam.classCount();
    if (surjectiveOnly && k != n) return out;

    std::vector<int> cur(static_cast<size_t>(k), -1);
    std::uint32_t used = 0;
    // depth-first with ascending candidate values => lexicographic output
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            out.emplace_back(cur, n);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used & (1u << v)) continue;
            cur[static_cast<size_t>(depth)] = v;
            used |= 1u << v;
            self(self, depth + 1);
            used &= ~(1u << v);
        }
    };
    rec(rec, 0);
    return out;
}

AbstractionModel::AbstractionModel(FamilyPtr fam, AbstractionOperator op)
    : family_(std::move(fam)), op_(std::move(op)) {
    if (static_cast<int>(op_.assignment().size()) != family_->classCount())
        throw std::invalid_argument("operator assigns " +
                                    std::to_string(op_.assignment().size()) +
                                    " classes, family has " +
                                    std::to_string(family_->classCount()));
    if (family_->domain().size() < 1)
        throw std::invalid_argument("models require a non-empty domain");
}

bool AbstractionModel::satisfiesPrinciple() const {
    const Domain& d = domain();
    const std::uint32_t top = d.universeMask();
    for (std::uint32_t x = 0; x <= top; ++x)
        for (std::uint32_t y = 0; y <= top; ++y) {
            bool sameAbstract = abstractOf(x) == abstractOf(y);
            if (sameAbstract != spec().holds(x, y, d.size(), top))
                return false;
        }
    return true;
}

EvalContext AbstractionModel::evalContext() const {
    EvalContext ctx;
    ctx.width = domain().size();
    ctx.carrier = domain().universeMask();
    FamilyPtr fam = family_;
    ctx.equiv = [fam](std::uint32_t x, std::uint32_t y) {
        return fam->spec().holds(x, y, fam->domain().size(), fam->domain().universeMask());
    };
    AbstractionOperator op = op_;
    ctx.abs = [fam, op](std::uint32_t x) -> std::optional<int> {
        return op.valueOfClass(fam->partition().classOf[x]);
    };
    return ctx;
}

std::vector<AbstractionModel> enumerate_models(const FamilyPtr& fam, bool surjectiveOnly) {
    std::vector<AbstractionModel> out;
    for (auto& op : enumerate_operators(*fam, surjectiveOnly))
        out.emplace_back(fam, std::move(op));
    return out;
}

NaturalBijection::NaturalBijection(std::vector<int> table, int n)
    : table_(std::move(table)) {
    if (static_cast<int>(table_.size()) != n)
        throw std::invalid_argument("bijection table has wrong size");
    for (int i = 0; i < n; ++i) {
        int v = table_[static_cast<size_t>(i)];
        if (v < -1 || v >= n)
            throw std::invalid_argument("bijection entry out of range");
        if (v < 0) continue;
        if (rangeMask_ & (1u << v))
            throw std::invalid_argument("bijection is not injective");
        domainMask_ |= 1u << i;
        rangeMask_ |= 1u << v;
    }
}

int NaturalBijection::apply(int i) const {
    int v = table_.at(static_cast<size_t>(i));
    if (v < 0) throw std::logic_error("bijection applied outside its domain");
    return v;
}

Concept NaturalBijection::image(const Concept& x) const {
    if (x.mask() & ~domainMask_)
        throw std::logic_error("bijection image of a concept outside its domain");
    std::uint32_t out = 0;
    for (int i = 0; i < size(); ++i)
        if (x.contains(i)) out |= 1u << apply(i);
    return Concept(out, x.width());
}

NaturalBijection NaturalBijection::inverse() const {
    std::vector<int> t(table_.size(), -1);
    for (int i = 0; i < size(); ++i)
        if (definedAt(i)) t[static_cast<size_t>(apply(i))] = i;
    return NaturalBijection(std::move(t), size());
}

std::string NaturalBijection::toString(const Domain& d) const {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < size(); ++i) {
        if (!definedAt(i)) continue;
        if (!first) s += ", ";
        s += d.name(i) + "->" + d.name(apply(i));
        first = false;
    }
    return s + "}";
}

NaturalBijection natural_bijection(const DualModel& dm) {
    const int n = dm.domain().size();
    std::vector<int> t(static_cast<size_t>(n), -1);
    const auto& a1 = dm.op1().assignment();
    const auto& a2 = dm.op2().assignment();
    for (size_t c = 0; c < a1.size(); ++c) {
        int from = a1[c], to = a2[c];
        if (t[static_cast<size_t>(from)] != -1 && t[static_cast<size_t>(from)] != to)
            throw std::logic_error("natural bijection is not well-defined");
        t[static_cast<size_t>(from)] = to;
    }
    return NaturalBijection(std::move(t), n);
}

InducedStructure induced_structure(const DualModel& dm, int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("side must be 1 or 2");
    const AbstractionModel& m = dm.side(i);
    const int n = m.domain().size();
    const std::uint32_t carrier = m.op().rangeMask();
    InducedStructure s{Concept(carrier, n), {}};
    s.context.width = n;
    s.context.carrier = carrier;
    FamilyPtr fam = m.familyPtr();
    // E stays the parent relation, restricted to subsets of the carrier
    s.context.equiv = [fam](std::uint32_t x, std::uint32_t y) {
        return fam->spec().holds(x, y, fam->domain().size(), fam->domain().universeMask());
    };
    AbstractionOperator op = m.op();
    s.context.abs = [fam, op, carrier](std::uint32_t x) -> std::optional<int> {
        if (x & ~carrier) return std::nullopt;
        return op.valueOfClass(fam->partition().classOf[x]);
    };
    return s;
}

NaturalIsoVerdict is_natural_iso(const DualModel& dm) {
    const Domain& d = dm.domain();
    const std::uint32_t top = d.universeMask();
    auto check = [&](const DualModel& m, const NaturalBijection& g,
                     Concept* failing) -> bool {
        const std::uint32_t rng1 = m.op1().rangeMask();
        for (std::uint32_t x = 0; x <= top; ++x) {
            if (x & ~rng1) continue;
            Concept cx(x, d.size());
            if (!m.spec().holds(cx, g.image(cx), d)) {
                if (failing) *failing = cx;
                return false;
            }
        }
        return true;
    };
    NaturalBijection gamma = natural_bijection(dm);
    NaturalIsoVerdict v;
    v.iso = check(dm, gamma, &v.failingConcept);
    // mirrored condition through the inverse on the swapped dual must agree
    bool mirrored = check(dm.swapped(), gamma.inverse(), nullptr);
    if (mirrored != v.iso)
        throw std::logic_error("natural-isomorphism conditions disagree between sides");
    return v;
}

bool is_induced_iso(const DualModel& dm, const NaturalBijection& h) {
    const Domain& d = dm.domain();
    const std::uint32_t top = d.universeMask();
    const std::uint32_t rng1 = dm.op1().rangeMask();
    if (h.domainMask() != rng1 || h.rangeMask() != dm.op2().rangeMask())
        return false;
    for (std::uint32_t x = 0; x <= top; ++x) {
        if (x & ~rng1) continue;
        Concept cx(x, d.size());
        if (h.apply(dm.side(1).abstractOf(cx)) != dm.side(2).abstractOf(h.image(cx)))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

void rejectUnknownKeys(const json& j, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument("unknown key '" + it.key() + "' in model file");
    }
}

EquivalenceSpec relFromJson(const json& j) {
    if (j.is_string()) {
        auto b = builtin_from_name(j.get<std::string>());
        if (!b)
            throw std::invalid_argument("unknown relation '" + j.get<std::string>() + "'");
        return EquivalenceSpec::fromBuiltin(*b);
    }
    if (j.is_object() && j.size() == 1 && j.contains("dsl") && j["dsl"].is_string())
        return EquivalenceSpec::fromFormula(parse_formula(j["dsl"].get<std::string>()));
    throw std::invalid_argument("\"rel\" must be a relation name or {\"dsl\": ...}");
}

json relToJson(const EquivalenceSpec& e) {
    if (e.builtin()) return builtin_name(*e.builtin());
    return json{{"dsl", print_formula(*e.formula())}};
}

FamilyPtr familyFromJson(const json& j, int cap) {
    if (!j.is_object()) throw std::invalid_argument("model file must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("model file needs an integer \"n\"");
    const int n = j["n"].get<int>();
    std::vector<std::string> names;
    if (j.contains("names")) {
        if (!j["names"].is_array())
            throw std::invalid_argument("\"names\" must be an array of strings");
        for (const auto& s : j["names"]) {
            if (!s.is_string()) throw std::invalid_argument("\"names\" entries must be strings");
            names.push_back(s.get<std::string>());
        }
    }
    if (!j.contains("rel")) throw std::invalid_argument("model file needs \"rel\"");
    return ModelFamily::create(Domain(n, std::move(names), cap), relFromJson(j["rel"]));
}

AbstractionOperator operatorFromJson(const json& j, const ModelFamily& fam,
                                     const std::string& key) {
    if (!j.is_object())
        throw std::invalid_argument("\"" + key + "\" must map representatives to objects");
    const auto& reps = fam.partition().representatives;
    std::vector<int> assignment(reps.size(), -1);
    size_t matched = 0;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::uint32_t mask;
        try {
            size_t pos = 0;
            mask = static_cast<std::uint32_t>(std::stoul(it.key(), &pos));
            if (pos != it.key().size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("operator key '" + it.key() +
                                        "' is not a concept bitmask");
        }
        if (mask > fam.domain().universeMask())
            throw std::invalid_argument("operator key '" + it.key() +
                                        "' is outside the domain");
        int c = -1;
        for (size_t i = 0; i < reps.size(); ++i)
            if (reps[i].mask() == mask) { c = static_cast<int>(i); break; }
        if (c < 0)
            throw std::invalid_argument("operator key '" + it.key() +
                                        "' is not a class representative");
        if (!it.value().is_number_integer())
            throw std::invalid_argument("operator values must be object indices");
        assignment[static_cast<size_t>(c)] = it.value().get<int>();
        ++matched;
    }
    if (matched != reps.size())
        throw std::invalid_argument("\"" + key + "\" must assign every class exactly once (" +
                                    std::to_string(reps.size()) + " representatives)");
    return AbstractionOperator(std::move(assignment), fam.domain().size());
}

json operatorToJson(const AbstractionOperator& op, const ModelFamily& fam) {
    json j = json::object();
    const auto& reps = fam.partition().representatives;
    for (size_t c = 0; c < reps.size(); ++c)
        j[std::to_string(reps[c].mask())] = op.valueOfClass(static_cast<int>(c));
    return j;
}

} // namespace

AbstractionModel model_from_json(const nlohmann::json& j, int cap) {
    rejectUnknownKeys(j, {"n", "names", "rel", "operator"});
    FamilyPtr fam = familyFromJson(j, cap);
    if (!j.contains("operator"))
        throw std::invalid_argument("model file needs \"operator\"");
    return AbstractionModel(fam, operatorFromJson(j["operator"], *fam, "operator"));
}

DualModel dual_from_json(const nlohmann::json& j, int cap) {
    rejectUnknownKeys(j, {"n", "names", "rel", "operator1", "operator2"});
    FamilyPtr fam = familyFromJson(j, cap);
    if (!j.contains("operator1") || !j.contains("operator2"))
        throw std::invalid_argument("dual model file needs \"operator1\" and \"operator2\"");
    return DualModel(fam, operatorFromJson(j["operator1"], *fam, "operator1"),
                     operatorFromJson(j["operator2"], *fam, "operator2"));
}

nlohmann::json model_to_json(const AbstractionModel& m) {
    json j;
    j["n"] = m.domain().size();
    j["names"] = m.domain().names();
    j["rel"] = relToJson(m.spec());
    j["operator"] = operatorToJson(m.op(), m.family());
    return j;
}

nlohmann::json dual_to_json(const DualModel& dm) {
    json j;
    j["n"] = dm.domain().size();
    j["names"] = dm.domain().names();
    j["rel"] = relToJson(dm.spec());
    j["operator1"] = operatorToJson(dm.op1(), dm.family());
    j["operator2"] = operatorToJson(dm.op2(), dm.family());
    return j;
}

} // namespace absw
