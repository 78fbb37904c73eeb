#include "absw/properties.hpp"

#include <algorithm>

#include "absw/parallel.hpp"

namespace absw {

namespace {

using nlohmann::json;

bool holdsE(const ModelFamily& fam, std::uint32_t x, std::uint32_t y) {
    return fam.spec().holds(x, y, fam.domain().size(), fam.domain().universeMask());
}

json conceptToJson(const Concept& c, const Domain& d) {
    json a = json::array();
    for (int i = 0; i < d.size(); ++i)
        if (c.contains(i)) a.push_back(d.name(i));
    return a;
}

json mapToJson(const ObjectMap& m, const Domain& d) {
    json o = json::object();
    for (int i = 0; i < m.size(); ++i)
        o[d.name(i)] = d.name(m.apply(i));
    return o;
}

json operatorToJson(const AbstractionOperator& op, const ModelFamily& fam) {
    json o = json::object();
    const auto& reps = fam.partition().representatives;
    for (size_t c = 0; c < reps.size(); ++c)
        o[std::to_string(reps[c].mask())] = op.valueOfClass(static_cast<int>(c));
    return o;
}

} // namespace

json verdict_to_json(const ConditionVerdict& v, const ModelFamily& fam) {
    json j;
    j["condition"] = v.condition;
    j["holds"] = v.holds;
    j["vacuous"] = v.vacuous;
    if (!v.note.empty()) j["note"] = v.note;
    if (!v.holds) {
        json w = json::object();
        if (v.witnessOp1) w["operator1"] = operatorToJson(*v.witnessOp1, fam);
        if (v.witnessOp2) w["operator2"] = operatorToJson(*v.witnessOp2, fam);
        if (v.witnessX) w["X"] = conceptToJson(*v.witnessX, fam.domain());
        if (v.witnessY) w["Y"] = conceptToJson(*v.witnessY, fam.domain());
        if (v.witnessMap) w["map"] = mapToJson(*v.witnessMap, fam.domain());
        j["witness"] = w;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Per-model conditions

ConditionVerdict check_cc_on_abstracts(const AbstractionModel& m) {
    ConditionVerdict v;
    v.condition = "cc-abstracts";
    const Domain& d = m.domain();
    const std::uint32_t top = d.universeMask();
    const std::uint32_t rng = m.op().rangeMask();
    for (std::uint32_t x = 0; x <= top; ++x) {
        if (x & ~rng) continue;
        for (std::uint32_t y = 0; y <= top; ++y) {
            if (std::popcount(y) != std::popcount(x)) continue;
            if (!m.family().spec().holds(x, y, d.size(), top)) {
                v.holds = false;
                v.witnessOp1 = m.op();
                v.witnessX = Concept(x, d.size());
                v.witnessY = Concept(y, d.size());
                return v;
            }
        }
    }
    return v;
}

ConditionVerdict check_perm_inv_on_abstracts(const AbstractionModel& m) {
    ConditionVerdict v;
    v.condition = "perm-inv-abstracts";
    const Domain& d = m.domain();
    const std::uint32_t top = d.universeMask();
    const std::uint32_t rng = m.op().rangeMask();
    const auto perms = enumerate_permutations(d);
    for (std::uint32_t x = 0; x <= top; ++x) {
        if (x & ~rng) continue;
        Concept cx(x, d.size());
        for (const auto& pi : perms) {
            if (!m.family().spec().holds(cx, pi.image(cx), d)) {
                v.holds = false;
                v.witnessOp1 = m.op();
                v.witnessX = cx;
                v.witnessMap = pi;
                return v;
            }
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Relation-level conditions

EConditionSet check_E_conditions(const FamilyPtr& fam) {
    EConditionSet set;
    const Domain& d = fam->domain();
    const std::uint32_t top = d.universeMask();
    const int k = fam->classCount();
    set.classCount = k;
    set.note = "injection invariance coincides with permutation invariance on finite domains";

    const auto perms = enumerate_permutations(d);
    auto permInv = [&](ConditionVerdict& v, const char* name, bool small) {
        v.condition = name;
        for (std::uint32_t x = 0; x <= top; ++x) {
            if (small && std::popcount(x) > k) continue;
            Concept cx(x, d.size());
            for (const auto& pi : perms) {
                Concept img = pi.image(cx);
                if (!fam->spec().holds(cx, img, d)) {
                    v.holds = false;
                    v.witnessX = cx;
                    v.witnessY = img;
                    v.witnessMap = pi;
                    return;
                }
            }
        }
    };
    auto coarsen = [&](ConditionVerdict& v, const char* name, bool bi, bool small) {
        v.condition = name;
        for (std::uint32_t x = 0; x <= top; ++x) {
            if (small && std::popcount(x) > k) continue;
            for (std::uint32_t y = 0; y <= top; ++y) {
                if (std::popcount(y) != std::popcount(x)) continue;
                if (bi && std::popcount(top & ~y) != std::popcount(top & ~x)) continue;
                if (!holdsE(*fam, x, y)) {
                    v.holds = false;
                    v.witnessX = Concept(x, d.size());
                    v.witnessY = Concept(y, d.size());
                    return;
                }
            }
        }
    };

    permInv(set.perm_inv, "perm-inv", false);
    coarsen(set.cc, "cc", false, false);
    coarsen(set.bcc, "bcc", true, false);
    coarsen(set.cc_small, "cc-small", false, true);
    permInv(set.inv_small, "inv-small", true);
    return set;
}

// ---------------------------------------------------------------------------
// Dual-model sweeps

namespace {

struct DualSlot {
    bool iso = true;
    std::uint32_t failing = 0;
};

ConditionVerdict sweepDuals(const FamilyPtr& fam, bool surjectiveOnly, const char* name,
                            int jobs) {
    ConditionVerdict v;
    v.condition = name;
    const auto models = enumerate_models(fam, surjectiveOnly);
    if (models.empty()) {
        v.vacuous = true;
        v.note = surjectiveOnly ? "no surjective models at this size" : "no models at this size";
        return v;
    }
    const size_t m = models.size();
    std::vector<DualSlot> slots(m * m);
    parallel_for(m * m, jobs, [&](size_t idx) {
        DualModel dm(models[idx / m], models[idx % m]);
        NaturalIsoVerdict r = is_natural_iso(dm);
        slots[idx].iso = r.iso;
        if (!r.iso) slots[idx].failing = r.failingConcept.mask();
    });
    for (size_t idx = 0; idx < slots.size(); ++idx) {
        if (slots[idx].iso) continue;
        v.holds = false;
        v.witnessOp1 = models[idx / m].op();
        v.witnessOp2 = models[idx % m].op();
        v.witnessX = Concept(slots[idx].failing, fam->domain().size());
        return v;
    }
    return v;
}

} // namespace

ConditionVerdict check_nrc(const FamilyPtr& fam, int jobs) {
    return sweepDuals(fam, false, "nrc", jobs);
}

ConditionVerdict check_src(const FamilyPtr& fam, int jobs) {
    return sweepDuals(fam, true, "src", jobs);
}

// ---------------------------------------------------------------------------
// Theorems

namespace {

/// Conjunction of a per-model check over a model family, keeping the least
/// failing model's witness.
ConditionVerdict allModels(const FamilyPtr& fam, bool surjectiveOnly, const char* name,
                           ConditionVerdict (*check)(const AbstractionModel&)) {
    ConditionVerdict v;
    v.condition = name;
    const auto models = enumerate_models(fam, surjectiveOnly);
    if (models.empty()) {
        v.vacuous = true;
        v.note = surjectiveOnly ? "no surjective models at this size" : "no models at this size";
        return v;
    }
    for (const auto& m : models) {
        ConditionVerdict r = check(m);
        if (!r.holds) {
            r.condition = name;
            return r;
        }
    }
    return v;
}

ConditionVerdict checkBccOnModel(const AbstractionModel& m) {
    ConditionVerdict v;
    v.condition = "bcc-abstracts";
    const Domain& d = m.domain();
    const std::uint32_t top = d.universeMask();
    const std::uint32_t rng = m.op().rangeMask();
    for (std::uint32_t x = 0; x <= top; ++x) {
        if (x & ~rng) continue;
        for (std::uint32_t y = 0; y <= top; ++y) {
            if (std::popcount(y) != std::popcount(x)) continue;
            if (std::popcount(top & ~y) != std::popcount(top & ~x)) continue;
            if (!m.family().spec().holds(x, y, d.size(), top)) {
                v.holds = false;
                v.witnessOp1 = m.op();
                v.witnessX = Concept(x, d.size());
                v.witnessY = Concept(y, d.size());
                return v;
            }
        }
    }
    return v;
}

TheoremReport finishReport(TheoremReport r) {
    r.agreement = true;
    for (const auto& it : r.items)
        if (it.verdict.holds != r.items.front().verdict.holds) r.agreement = false;
    r.vacuous = true;
    for (const auto& it : r.items)
        if (!it.verdict.vacuous) r.vacuous = false;
    return r;
}

} // namespace

ConditionVerdict check_cc_on_abstracts_all(const FamilyPtr& fam) {
    return allModels(fam, false, "cc-abstracts", check_cc_on_abstracts);
}

ConditionVerdict check_perm_inv_on_abstracts_all(const FamilyPtr& fam) {
    return allModels(fam, false, "perm-inv-abstracts", check_perm_inv_on_abstracts);
}

TheoremReport verify_theorem1(const FamilyPtr& fam, int jobs) {
    TheoremReport r;
    r.theorem = 1;
    r.items.push_back({"naturally relatively categorical", check_nrc(fam, jobs)});
    r.items.push_back({"permutation invariant on abstracts (all models)",
                       allModels(fam, false, "perm-inv-abstracts", check_perm_inv_on_abstracts)});
    r.items.push_back({"cardinality coarsening on abstracts (all models)",
                       allModels(fam, false, "cc-abstracts", check_cc_on_abstracts)});
    return finishReport(std::move(r));
}

TheoremReport verify_theorem2(const FamilyPtr& fam, int jobs) {
    TheoremReport r;
    r.theorem = 2;
    r.items.push_back({"surjectively relatively categorical", check_src(fam, jobs)});
    r.items.push_back({"permutation invariant (surjective models)",
                       allModels(fam, true, "perm-inv-abstracts", check_perm_inv_on_abstracts)});
    r.items.push_back({"bicardinality coarsening (surjective models)",
                       allModels(fam, true, "bcc-abstracts", checkBccOnModel)});
    return finishReport(std::move(r));
}

json theorem_report_to_json(const TheoremReport& r, const ModelFamily& fam) {
    json j;
    j["theorem"] = r.theorem;
    j["agreement"] = r.agreement;
    j["vacuous"] = r.vacuous;
    j["items"] = json::array();
    for (const auto& it : r.items) {
        json e = verdict_to_json(it.verdict, fam);
        e["name"] = it.name;
        j["items"].push_back(e);
    }
    return j;
}

// ---------------------------------------------------------------------------
// Per-dual analyses

IsoUniquenessVerdict check_iso_uniqueness(const DualModel& dm) {
    const int n = dm.domain().size();
    IsoUniquenessVerdict v{natural_bijection(dm), false, {}, false};
    std::vector<int> from, to;
    for (int i = 0; i < n; ++i)
        if ((dm.op1().rangeMask() >> i) & 1u) from.push_back(i);
    for (int i = 0; i < n; ++i)
        if ((dm.op2().rangeMask() >> i) & 1u) to.push_back(i);
    // |rng(∂₁)| = |rng(∂₂)| = class count
    std::sort(to.begin(), to.end());
    do {
        std::vector<int> table(static_cast<size_t>(n), -1);
        for (size_t i = 0; i < from.size(); ++i)
            table[static_cast<size_t>(from[i])] = to[i];
        NaturalBijection h(std::move(table), n);
        if (is_induced_iso(dm, h)) v.isomorphisms.push_back(h);
    } while (std::next_permutation(to.begin(), to.end()));
    v.gammaIsIso = std::find(v.isomorphisms.begin(), v.isomorphisms.end(), v.gamma) !=
                   v.isomorphisms.end();
    v.exactlyGamma = v.isomorphisms.size() == 1 && v.gammaIsIso;
    return v;
}

std::optional<ObjectMap> find_full_iso(const AbstractionModel& m1, const AbstractionModel& m2) {
    const Domain& d = m1.domain();
    const std::uint32_t top = d.universeMask();
    for (const auto& delta : enumerate_permutations(d)) {
        bool ok = true;
        for (std::uint32_t x = 0; x <= top && ok; ++x) {
            Concept cx(x, d.size());
            ok = delta.apply(m1.abstractOf(cx)) == m2.abstractOf(delta.image(cx));
        }
        if (ok) return delta;
    }
    return std::nullopt;
}

FineVerdict check_fine_iso(const DualModel& dm) {
    FineVerdict v;
    const Domain& d = dm.domain();
    const std::uint32_t top = d.universeMask();
    v.ccHolds = true;
    for (std::uint32_t x = 0; x <= top && v.ccHolds; ++x)
        for (std::uint32_t y = 0; y <= top; ++y) {
            if (std::popcount(y) != std::popcount(x)) continue;
            if (!dm.spec().holds(x, y, d.size(), top)) {
                v.ccHolds = false;
                break;
            }
        }
    v.delta = find_full_iso(dm.side(1), dm.side(2));
    v.found = v.delta.has_value();
    return v;
}

BivalenceVerdict check_bivalence(const FamilyPtr& fam, int jobs) {
    BivalenceVerdict v;
    const auto models = enumerate_models(fam, false);
    if (models.empty()) {
        v.vacuous = true;
        return v;
    }
    const size_t m = models.size();
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    std::vector<char> iso(pairs.size(), 1);
    parallel_for(pairs.size(), jobs, [&](size_t p) {
        iso[p] = find_full_iso(models[pairs[p].first], models[pairs[p].second]).has_value();
    });
    for (size_t p = 0; p < pairs.size(); ++p) {
        if (iso[p]) continue;
        v.holds = false;
        v.witnessOp1 = models[pairs[p].first].op();
        v.witnessOp2 = models[pairs[p].second].op();
        return v;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Implication battery

ImplicationReport implication_battery(const FamilyPtr& fam, int jobs) {
    (void)jobs;
    ImplicationReport rep;
    EConditionSet ec = check_E_conditions(fam);
    ConditionVerdict ccA = allModels(fam, false, "cc-abstracts", check_cc_on_abstracts);
    ConditionVerdict piA =
        allModels(fam, false, "perm-inv-abstracts", check_perm_inv_on_abstracts);
    rep.modelLevelVacuous = ccA.vacuous;

    auto arrow = [&](const char* from, bool f, const char* to, bool t) {
        ImplicationReport::Arrow a;
        a.from = from;
        a.to = to;
        a.fromHolds = f;
        a.toHolds = t;
        a.violated = f && !t;
        if (a.violated) rep.anyViolated = true;
        rep.arrows.push_back(a);
    };
    // vacuous model-level conjunctions count as holding
    arrow("cc", ec.cc.holds, "bcc", ec.bcc.holds);
    arrow("cc", ec.cc.holds, "cc-small", ec.cc_small.holds);
    arrow("cc-small", ec.cc_small.holds, "cc-abstracts (all models)", ccA.holds);
    arrow("perm-inv", ec.perm_inv.holds, "perm-inv-abstracts (all models)", piA.holds);
    return rep;
}

} // namespace absw
