#include "doctest.h"

#include <fstream>

#include "absw/abstraction.hpp"

using namespace absw;
using nlohmann::json;

namespace {

FamilyPtr fam(Builtin b, int n) {
    return ModelFamily::create(Domain(n), EquivalenceSpec::fromBuiltin(b));
}

json loadJson(const std::string& name) {
    std::ifstream in(std::string(ABSW_DATA_DIR) + "/" + name);
    REQUIRE(in);
    return json::parse(in);
}

DualModel compCounter() { return dual_from_json(loadJson("comp_counter.json")); }

} // namespace

TEST_CASE("operator existence") {
    CHECK(fam(Builtin::Complementation, 4)->operatorExists());
    CHECK(!fam(Builtin::Complementation, 6)->operatorExists()); // k = 11 > 6
    CHECK(!fam(Builtin::Hume, 3)->operatorExists());            // k = n + 1
    CHECK(fam(Builtin::Parity, 3)->operatorExists());
    CHECK(!fam(Builtin::Parity, 4)->operatorExists());
    CHECK(fam(Builtin::Trivial, 1)->operatorExists());
    CHECK(!fam(Builtin::Trivial, 0)->operatorExists()); // models are non-empty
}

TEST_CASE("operator enumeration") {
    auto comp = enumerate_operators(*fam(Builtin::Complementation, 4));
    REQUIRE(comp.size() == 24);
    for (const auto& op : comp) CHECK(op.isSurjective(Domain(4)));
    CHECK(comp[0].assignment() == std::vector<int>{0, 1, 2, 3});
    CHECK(comp[1].assignment() == std::vector<int>{0, 1, 3, 2});
    for (size_t i = 1; i < comp.size(); ++i)
        CHECK(comp[i - 1].assignment() < comp[i].assignment());
    CHECK(enumerate_operators(*fam(Builtin::Complementation, 4), true).size() == 24);

    auto triv = enumerate_operators(*fam(Builtin::Trivial, 3));
    REQUIRE(triv.size() == 3);
    for (const auto& op : triv) CHECK(!op.isSurjective(Domain(3)));
    CHECK(enumerate_operators(*fam(Builtin::Trivial, 3), true).empty());

    CHECK(enumerate_operators(*fam(Builtin::Hume, 2)).empty());
    // n!/(n-k)!: empty-vs-nonempty at n=4 has k=2 -> 12
    CHECK(enumerate_operators(*fam(Builtin::EmptyVsNonempty, 4)).size() == 12);
}

TEST_CASE("models satisfy the principle") {
    for (Builtin b : {Builtin::Trivial, Builtin::EmptyVsNonempty, Builtin::Complementation})
        for (int n = 1; n <= 4; ++n) {
            FamilyPtr f = fam(b, n);
            for (const auto& m : enumerate_models(f))
                CHECK(m.satisfiesPrinciple());
        }
    CHECK_THROWS_AS(AbstractionModel(fam(Builtin::Trivial, 3),
                                     AbstractionOperator({0, 1}, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(AbstractionOperator({0, 0}, 3), std::invalid_argument);
}

TEST_CASE("natural bijection on the paper dual") {
    DualModel dm = compCounter();
    NaturalBijection g = natural_bijection(dm);
    // gamma = {a->c, b->b, c->a, d->d}
    CHECK(g.apply(0) == 2);
    CHECK(g.apply(1) == 1);
    CHECK(g.apply(2) == 0);
    CHECK(g.apply(3) == 3);
    CHECK(g.toString(dm.domain()) == "{a->c, b->b, c->a, d->d}");
    CHECK(g.domainMask() == 0b1111u);
    CHECK(g.rangeMask() == 0b1111u);
    // swap gives the inverse
    CHECK(natural_bijection(dm.swapped()) == g.inverse());
}

TEST_CASE("natural bijection basics") {
    FamilyPtr f = fam(Builtin::Trivial, 3);
    auto models = enumerate_models(f);
    DualModel same(models[1], models[1]);
    NaturalBijection g = natural_bijection(same);
    CHECK(g.domainMask() == 0b010u);
    CHECK(g.apply(1) == 1);
    CHECK(!g.definedAt(0));
    CHECK_THROWS_AS(g.apply(0), std::logic_error);
    CHECK_THROWS_AS(g.image(Concept(0b001, 3)), std::logic_error);
    CHECK(g.image(Concept(0b010, 3)).mask() == 0b010u);
}

TEST_CASE("induced structures") {
    FamilyPtr f = fam(Builtin::Trivial, 3);
    auto models = enumerate_models(f);
    DualModel dm(models[1], models[2]); // operators with values 1 and 2
    InducedStructure s1 = induced_structure(dm, 1);
    CHECK(s1.carrier.mask() == 0b010u);
    CHECK(s1.context.abs(0).has_value());
    CHECK(s1.context.abs(0b010).value() == 1);
    CHECK(!s1.context.abs(0b001).has_value()); // outside the carrier
    CHECK(s1.context.equiv(0b001, 0b110));     // parent E, trivial
    InducedStructure s2 = induced_structure(dm, 2);
    CHECK(s2.carrier.mask() == 0b100u);

    DualModel cc = compCounter();
    CHECK(induced_structure(cc, 1).carrier.mask() == 0b1111u);
    CHECK(induced_structure(cc, 2).carrier.mask() == 0b1111u);
}

TEST_CASE("is_natural_iso") {
    DualModel cc = compCounter();
    NaturalIsoVerdict v = is_natural_iso(cc);
    CHECK(!v.iso);
    CHECK(v.failingConcept.mask() == 0b0011u); // X = {a,b}
    CHECK(v.failingConcept.toString(cc.domain()) == "{a,b}");

    // independent oracle: the direct operator-preservation check for gamma
    for (Builtin b : {Builtin::Trivial, Builtin::EmptyVsNonempty, Builtin::Complementation,
                      Builtin::Parity, Builtin::Nuisance})
        for (int n = 1; n <= 3; ++n) {
            auto models = enumerate_models(fam(b, n));
            for (const auto& m1 : models)
                for (const auto& m2 : models) {
                    DualModel dm(m1, m2);
                    CHECK(is_natural_iso(dm).iso ==
                          is_induced_iso(dm, natural_bijection(dm)));
                }
        }

    // duals over a total relation are always iso
    for (const auto& m1 : enumerate_models(fam(Builtin::Nuisance, 4)))
        for (const auto& m2 : enumerate_models(fam(Builtin::Nuisance, 4)))
            CHECK(is_natural_iso(DualModel(m1, m2)).iso);
}

TEST_CASE("model JSON round trips") {
    DualModel cc = compCounter();
    json j = dual_to_json(cc);
    DualModel back = dual_from_json(j);
    CHECK(back.op1() == cc.op1());
    CHECK(back.op2() == cc.op2());
    CHECK(dual_to_json(back) == j);
    CHECK(back.domain().name(0) == "a");

    AbstractionModel m(fam(Builtin::Trivial, 2), AbstractionOperator({1}, 2));
    json mj = model_to_json(m);
    AbstractionModel mBack = model_from_json(mj);
    CHECK(mBack.op() == m.op());
    CHECK(model_to_json(mBack) == mj);
}

TEST_CASE("model JSON rejects malformed input") {
    json good = loadJson("comp_counter_m1.json");
    CHECK_NOTHROW(model_from_json(good));

    json j = good;
    j["extra"] = 1;
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument); // unknown key

    j = good;
    j["operator"].erase("0");
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument); // missing class

    j = good;
    j["operator"]["1"] = 0; // not a representative
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);

    j = good;
    j["operator"]["3"] = 3; // duplicate value, not injective
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);

    j = good;
    j["rel"] = "no-such-relation";
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);

    j = good;
    j.erase("operator");
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);

    // DSL relation in a model file
    j = good;
    j["rel"] = {{"dsl", "card(X) = card(Y)"}};
    j["n"] = 2;
    j["names"] = {"a", "b"};
    j["operator"] = {{"0", 0}, {"1", 1}, {"3", 0}};
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument); // 3 classes, value reuse
    j["operator"] = json::object();
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument); // hume has no model at n=2
}
