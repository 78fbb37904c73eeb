// Finite-model workbench for abstraction principles: command-line front end.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "absw/abstraction.hpp"
#include "absw/core.hpp"
#include "absw/equivalence.hpp"
#include "absw/formula.hpp"
#include "absw/parallel.hpp"
#include "absw/properties.hpp"

using namespace absw;
using nlohmann::json;

namespace {

/// Property/theorem verdict that indicates a broken build (exit 1).
struct HardFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EquivalenceSpec resolveRelation(const std::string& rel) {
    if (auto b = builtin_from_name(rel)) return EquivalenceSpec::fromBuiltin(*b);
    if (std::filesystem::exists(rel))
        return EquivalenceSpec::fromFormula(parse_formula(readFile(rel)),
                                            std::filesystem::path(rel).stem().string());
    throw std::invalid_argument("unknown relation '" + rel +
                                "' (not a built-in name or a readable DSL file)");
}

FamilyPtr makeFamily(const std::string& rel, int n) {
    return ModelFamily::create(Domain(n), resolveRelation(rel));
}

/// The paper-derived witness sentences plus simple variants; also shipped
/// under data/formulas as .sol files.
const std::vector<std::pair<std::string, std::string>>& templateLibrary() {
    static const std::vector<std::pair<std::string, std::string>> lib = {
        {"cp_witness",
         "forall X (card(X) = 2 implies exists Y (E(X,Y) and abs(X) in Y and abs(empty) in Y))"},
        {"cp_witness_neg",
         "not (forall X (card(X) = 2 implies exists Y (E(X,Y) and abs(X) in Y and abs(empty) "
         "in Y)))"},
        {"cp_witness_k1",
         "forall X (card(X) = 1 implies exists Y (E(X,Y) and abs(X) in Y and abs(empty) in Y))"},
        {"newv_witness",
         "exists X exists b (card(X) < card(universe) and abs(X) = b and b in X)"},
        {"newv_witness_neg",
         "not (exists X exists b (card(X) < card(universe) and abs(X) = b and b in X))"},
        {"empty_abstract_member", "exists X (abs(empty) in X and E(X, empty))"},
        {"identity_sanity", "forall x (x = x)"},
    };
    return lib;
}

std::vector<FormulaPtr> templateFormulas() {
    std::vector<FormulaPtr> out;
    for (const auto& [name, text] : templateLibrary()) out.push_back(parse_formula(text));
    return out;
}

void emit(const json& j, bool asJson, std::ostream& os) {
    if (asJson) {
        os << j.dump(2) << "\n";
        return;
    }
    // flat deterministic "key: value" lines for text mode
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_structured())
            os << it.key() << ": " << it.value().dump() << "\n";
        else if (it.value().is_string())
            os << it.key() << ": " << it.value().get<std::string>() << "\n";
        else
            os << it.key() << ": " << it.value().dump() << "\n";
    }
}

json familyHeader(const ModelFamily& fam) {
    json j;
    j["relation"] = fam.spec().name();
    j["n"] = fam.domain().size();
    j["classes"] = fam.classCount();
    return j;
}

int cmdClasses(const std::string& rel, int n, bool asJson) {
    FamilyPtr fam = makeFamily(rel, n);
    json j = familyHeader(*fam);
    json list = json::array();
    const auto& p = fam->partition();
    for (int c = 0; c < p.classCount(); ++c) {
        json e;
        e["representative"] = p.representatives[static_cast<size_t>(c)].toString(fam->domain());
        e["size"] = p.classes[static_cast<size_t>(c)].size();
        list.push_back(e);
    }
    j["class_list"] = list;
    emit(j, asJson, std::cout);
    return 0;
}

int cmdExists(const std::string& rel, int n, bool asJson) {
    FamilyPtr fam = makeFamily(rel, n);
    const int k = fam->classCount();
    if (asJson) {
        json j = familyHeader(*fam);
        j["exists"] = fam->operatorExists();
        emit(j, true, std::cout);
    } else if (fam->operatorExists()) {
        std::cout << "true (classes=" << k << " <= n=" << n << ")\n";
    } else {
        std::cout << "false (classes=" << k << " > n=" << n << ")\n";
    }
    return 0;
}

int cmdModels(const std::string& rel, int n, bool surjective) {
    FamilyPtr fam = makeFamily(rel, n);
    for (const auto& m : enumerate_models(fam, surjective))
        std::cout << model_to_json(m).dump() << "\n";
    return 0;
}

json fineIsoSweep(const FamilyPtr& fam, bool& hard) {
    json j = familyHeader(*fam);
    j["condition"] = "fine-iso";
    const auto models = enumerate_models(fam, false);
    if (models.empty()) {
        j["vacuous"] = true;
        j["holds"] = true;
        return j;
    }
    bool cc = check_E_conditions(fam).cc.holds;
    bool allFound = true;
    json failing;
    for (size_t i = 0; i < models.size() && allFound; ++i)
        for (size_t j2 = 0; j2 < models.size(); ++j2) {
            DualModel dm(models[i], models[j2]);
            FineVerdict v = check_fine_iso(dm);
            if (!v.found) {
                allFound = false;
                failing = dual_to_json(dm);
                break;
            }
        }
    j["vacuous"] = false;
    j["cc"] = cc;
    j["all_duals_isomorphic"] = allFound;
    j["holds"] = !cc || allFound;
    if (!allFound) j["witness"] = failing;
    if (cc && !allFound) hard = true;
    return j;
}

json batteryReport(const FamilyPtr& fam, int jobs, bool& hard) {
    ImplicationReport r = implication_battery(fam, jobs);
    json j = familyHeader(*fam);
    j["condition"] = "battery";
    json arrows = json::array();
    for (const auto& a : r.arrows) {
        json e;
        e["from"] = a.from;
        e["to"] = a.to;
        e["from_holds"] = a.fromHolds;
        e["to_holds"] = a.toHolds;
        e["violated"] = a.violated;
        arrows.push_back(e);
    }
    j["arrows"] = arrows;
    j["holds"] = !r.anyViolated;
    j["model_level_vacuous"] = r.modelLevelVacuous;
    if (r.anyViolated) hard = true;
    return j;
}

int cmdCheck(const std::string& rel, int n, const std::string& property, bool asJson,
             int jobs) {
    FamilyPtr fam = makeFamily(rel, n);
    const bool builtinRel = fam->spec().builtin().has_value();
    bool hard = false;
    json j;
    if (property == "nrc" || property == "src") {
        ConditionVerdict v = property == "nrc" ? check_nrc(fam, jobs) : check_src(fam, jobs);
        j = familyHeader(*fam);
        j.update(verdict_to_json(v, *fam));
    } else if (property == "cc-abstracts" || property == "perm-inv-abstracts") {
        ConditionVerdict v = property == "cc-abstracts"
                                 ? check_cc_on_abstracts_all(fam)
                                 : check_perm_inv_on_abstracts_all(fam);
        j = familyHeader(*fam);
        j.update(verdict_to_json(v, *fam));
    } else if (property == "cc" || property == "bcc" || property == "cc-small" ||
               property == "perm-inv" || property == "inv-small") {
        EConditionSet s = check_E_conditions(fam);
        const ConditionVerdict& v = property == "cc"         ? s.cc
                                    : property == "bcc"      ? s.bcc
                                    : property == "cc-small" ? s.cc_small
                                    : property == "perm-inv" ? s.perm_inv
                                                             : s.inv_small;
        j = familyHeader(*fam);
        j.update(verdict_to_json(v, *fam));
        j["note"] = s.note;
    } else if (property == "fine-iso") {
        j = fineIsoSweep(fam, hard);
    } else if (property == "bivalence") {
        BivalenceVerdict v = check_bivalence(fam, jobs);
        j = familyHeader(*fam);
        j["condition"] = "bivalence";
        j["holds"] = v.holds;
        j["vacuous"] = v.vacuous;
        if (!v.holds) {
            json w;
            w["operator1"] = model_to_json(AbstractionModel(fam, *v.witnessOp1))["operator"];
            w["operator2"] = model_to_json(AbstractionModel(fam, *v.witnessOp2))["operator"];
            j["witness"] = w;
        }
    } else if (property == "battery") {
        j = batteryReport(fam, jobs, hard);
    } else {
        throw CLI::ValidationError("--property", "unknown property '" + property + "'");
    }
    emit(j, asJson, std::cout);
    if (hard) {
        if (builtinRel) throw HardFailure("hard failure: " + property + " check violated");
        std::cout << "anomaly: finite-scale verdict violated for DSL relation\n";
    }
    return 0;
}

int cmdVerify(const std::string& rel, int n, int theorem, bool asJson, int jobs) {
    FamilyPtr fam = makeFamily(rel, n);
    TheoremReport r = theorem == 1 ? verify_theorem1(fam, jobs) : verify_theorem2(fam, jobs);
    emit(theorem_report_to_json(r, *fam), asJson, std::cout);
    if (!r.agreement) {
        if (fam->spec().builtin())
            throw HardFailure("theorem " + std::to_string(theorem) +
                              " conditions disagree on a built-in relation");
        std::cout << "anomaly: theorem conditions disagree for DSL relation\n";
    }
    return 0;
}

FormulaPtr formulaFromArg(const std::string& arg) {
    if (std::filesystem::exists(arg)) return parse_formula(readFile(arg));
    return parse_formula(arg);
}

int cmdEval(const std::string& modelPath, const std::string& formulaArg,
            std::optional<std::uint64_t> seed) {
    json mj = json::parse(readFile(modelPath));
    AbstractionModel m = model_from_json(mj);
    FormulaPtr f = formulaFromArg(formulaArg);
    std::set<std::string> cv, ov;
    collect_free_vars(*f, cv, ov);
    if (!cv.empty() || !ov.empty())
        throw std::invalid_argument("formula must be a sentence (no free variables)");
    bool value = evaluate(*f, m.evalContext());
    std::cout << (value ? "true" : "false") << "\n";
    if (seed) {
        FormulaPtr g = rewrite_equivalent(*f, *seed);
        if (evaluate(*g, m.evalContext()) != value)
            throw HardFailure("rewritten-equivalent sentence changed truth value");
    }
    return 0;
}

json distinctionToJson(const DualModel& dm, const std::optional<Distinction>& d,
                       const std::vector<size_t>& skipped) {
    json j;
    if (d) {
        j["found"] = true;
        j["template"] = templateLibrary()[d->index].first;
        j["true_in"] = d->side;
        j["false_in"] = d->side == 1 ? 2 : 1;
    } else {
        j["found"] = false;
    }
    if (!skipped.empty()) {
        json s = json::array();
        for (size_t i : skipped) s.push_back(templateLibrary()[i].first);
        j["skipped"] = s;
    }
    (void)dm;
    return j;
}

int cmdWitness(const std::string& rel, int n, const std::string& modelPath, bool asJson) {
    const auto templates = templateFormulas();
    if (!modelPath.empty()) {
        DualModel dm = dual_from_json(json::parse(readFile(modelPath)));
        std::vector<size_t> skipped;
        auto d = distinguish(templates, induced_structure(dm, 1).context,
                             induced_structure(dm, 2).context, &skipped);
        emit(distinctionToJson(dm, d, skipped), asJson, std::cout);
        return 0;
    }
    FamilyPtr fam = makeFamily(rel, n);
    const auto models = enumerate_models(fam, false);
    json j = familyHeader(*fam);
    j["found"] = false;
    for (size_t i = 0; i < models.size() && !j["found"].get<bool>(); ++i)
        for (size_t k = 0; k < models.size(); ++k) {
            DualModel dm(models[i], models[k]);
            std::vector<size_t> skipped;
            auto d = distinguish(templates, induced_structure(dm, 1).context,
                                 induced_structure(dm, 2).context, &skipped);
            if (d) {
                j["found"] = true;
                j["dual"] = dual_to_json(dm);
                j["template"] = templateLibrary()[d->index].first;
                j["true_in"] = d->side;
                break;
            }
        }
    emit(j, asJson, std::cout);
    return 0;
}

int cmdReport(int nMax, double budget, bool asJson, int jobs) {
    bool hard = false;
    json rows = json::array();
    for (Builtin b : all_builtins()) {
        for (int n = 1; n <= nMax; ++n) {
            FamilyPtr fam = ModelFamily::create(Domain(n), EquivalenceSpec::fromBuiltin(b));
            const int k = fam->classCount();
            json row;
            row["relation"] = builtin_name(b);
            row["n"] = n;
            row["classes"] = k;
            row["exists"] = fam->operatorExists();
            double mCount = 1;
            if (fam->operatorExists())
                for (int i = 0; i < k; ++i) mCount *= n - i;
            else
                mCount = 0;
            double fact = 1;
            for (int i = 2; i <= n; ++i) fact *= i;
            const double pow2 = static_cast<double>(1u << n);
            const double cost = mCount * mCount * pow2 * fact + pow2 * pow2 * fact;
            if (cost > budget) {
                row["nrc"] = "skipped";
                row["src"] = "skipped";
                row["theorem1"] = "skipped";
                row["theorem2"] = "skipped";
                row["bivalent"] = "skipped";
            } else {
                auto flag = [](const ConditionVerdict& v) -> std::string {
                    if (v.vacuous) return "vacuous";
                    return v.holds ? "true" : "false";
                };
                row["nrc"] = flag(check_nrc(fam, jobs));
                row["src"] = flag(check_src(fam, jobs));
                TheoremReport t1 = verify_theorem1(fam, jobs);
                TheoremReport t2 = verify_theorem2(fam, jobs);
                row["theorem1"] = t1.agreement ? (t1.vacuous ? "vacuous" : "agree") : "DISAGREE";
                row["theorem2"] = t2.agreement ? (t2.vacuous ? "vacuous" : "agree") : "DISAGREE";
                if (!t1.agreement || !t2.agreement) hard = true;
                BivalenceVerdict bv = check_bivalence(fam, jobs);
                row["bivalent"] = bv.vacuous ? "vacuous" : (bv.holds ? "true" : "false");
            }
            rows.push_back(row);
        }
    }
    if (asJson) {
        std::cout << rows.dump(2) << "\n";
    } else {
        std::cout << "| relation | n | classes | exists | nrc | src | theorem1 | theorem2 | "
                     "bivalent |\n";
        std::cout << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& row : rows) {
            std::cout << "| " << row["relation"].get<std::string>() << " | " << row["n"] << " | "
                      << row["classes"] << " | " << (row["exists"].get<bool>() ? "yes" : "no")
                      << " | " << row["nrc"].get<std::string>() << " | "
                      << row["src"].get<std::string>() << " | "
                      << row["theorem1"].get<std::string>() << " | "
                      << row["theorem2"].get<std::string>() << " | "
                      << row["bivalent"].get<std::string>() << " |\n";
        }
    }
    if (hard) throw HardFailure("theorem disagreement in report matrix");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-model workbench for abstraction principles"};
    app.require_subcommand(1);

    std::string rel = "trivial", format = "text", property, modelPath, formulaArg;
    int n = 3, theorem = 1, nMax = 4;
    int jobs = default_jobs();
    bool surjective = false;
    double budget = 1e9;
    std::optional<std::uint64_t> seed;
    std::uint64_t seedValue = 0;

    auto addCommon = [&](CLI::App* c, bool withRel = true) {
        if (withRel) {
            c->add_option("--rel", rel, "built-in relation name or DSL file");
            c->add_option("--n", n, "domain size")->check(CLI::Range(0, Domain::kDefaultCap));
        }
        c->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        c->add_option("--jobs", jobs, "parallelism degree (default: ABSW_JOBS or cores)")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* cClasses = app.add_subcommand("classes", "partition summary");
    addCommon(cClasses);
    CLI::App* cExists = app.add_subcommand("exists", "does a model exist at this size");
    addCommon(cExists);
    CLI::App* cModels = app.add_subcommand("models", "emit the model JSON stream");
    addCommon(cModels);
    cModels->add_flag("--surjective", surjective, "surjective operators only");
    CLI::App* cCheck = app.add_subcommand("check", "check one property");
    addCommon(cCheck);
    cCheck
        ->add_option("--property", property,
                     "cc-abstracts|perm-inv-abstracts|nrc|src|cc|bcc|cc-small|perm-inv|"
                     "inv-small|fine-iso|bivalence|battery")
        ->required();
    CLI::App* cVerify = app.add_subcommand("verify", "verify a theorem's condition agreement");
    addCommon(cVerify);
    cVerify->add_option("--theorem", theorem, "1 or 2")->check(CLI::Range(1, 2))->required();
    CLI::App* cEval = app.add_subcommand("eval", "evaluate a sentence in a model");
    addCommon(cEval, false);
    cEval->add_option("--model", modelPath, "model JSON file")->required();
    cEval->add_option("--formula", formulaArg, "sentence text or file")->required();
    cEval->add_option("--seed", seedValue, "also check a randomized equivalent rewrite");
    CLI::App* cWitness = app.add_subcommand("witness", "search the template library for a "
                                                       "distinguishing sentence");
    addCommon(cWitness);
    cWitness->add_option("--model", modelPath, "dual model JSON file (instead of a sweep)");
    CLI::App* cReport = app.add_subcommand("report", "full matrix over built-ins");
    addCommon(cReport, false);
    cReport->add_option("--n-max", nMax, "largest domain size")
        ->check(CLI::Range(1, Domain::kDefaultCap));
    cReport->add_option("--budget", budget, "cost budget before a cell is skipped");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }
    if (cEval->count("--seed")) seed = seedValue;
    const bool asJson = format == "json";

    try {
        if (*cClasses) return cmdClasses(rel, n, asJson);
        if (*cExists) return cmdExists(rel, n, asJson);
        if (*cModels) return cmdModels(rel, n, surjective);
        if (*cCheck) return cmdCheck(rel, n, property, asJson, jobs);
        if (*cVerify) return cmdVerify(rel, n, theorem, asJson, jobs);
        if (*cEval) return cmdEval(modelPath, formulaArg, seed);
        if (*cWitness) return cmdWitness(rel, n, modelPath, asJson);
        if (*cReport) return cmdReport(nMax, budget, asJson, jobs);
    } catch (const HardFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
