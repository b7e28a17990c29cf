#include "dynrisk/experiment.hpp"

#include <json.hpp>

namespace dynrisk {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ParseError("field '" + field + "': " + why);
}

double number_at(const Json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number()) bad(field, "expected a number");
    return j[field].get<double>();
}

ToleranceRule parse_rule(const Json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind")) bad(field, "expected a rule object with 'kind'");
    std::string k = j["kind"].get<std::string>();
    try {
        if (k == "constant") return ToleranceRule::constant(number_at(j, "eps"));
        if (k == "horizon") return ToleranceRule::horizon(number_at(j, "eps"));
        if (k == "var_scaled") return ToleranceRule::var_scaled(number_at(j, "eps"));
        if (k == "zero") return ToleranceRule::zero();
    } catch (const std::exception& e) {
        bad(field, e.what());
    }
    bad(field, "unknown rule kind '" + k + "'");
}

RiskKind parse_risk(const Json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind")) bad(field, "expected a risk object with 'kind'");
    std::string k = j["kind"].get<std::string>();
    try {
        if (k == "expectation") return RiskKind::expectation();
        if (k == "cvar") return RiskKind::cvar(number_at(j, "alpha"));
        if (k == "entropic") return RiskKind::entropic(number_at(j, "beta"));
        if (k == "worst_case") return RiskKind::worst_case();
    } catch (const std::exception& e) {
        bad(field, e.what());
    }
    bad(field, "unknown risk kind '" + k + "'");
}

UncertaintyKind parse_kind(const Json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind")) bad(field, "expected a set object with 'kind'");
    std::string k = j["kind"].get<std::string>();
    try {
        if (k == "identity") return UncertaintyKind::identity();
        if (k == "sup_norm_ball")
            return UncertaintyKind::sup_norm_ball(parse_rule(j.at("rule"), field + ".rule"));
        if (k == "wasserstein_ball")
            return UncertaintyKind::wasserstein_ball(number_at(j, "p"),
                                                     parse_rule(j.at("rule"), field + ".rule"));
        if (k == "kl_ball")
            return UncertaintyKind::kl_ball(parse_rule(j.at("rule"), field + ".rule"));
        if (k == "measure_family") {
            if (!j.contains("components") || !j["components"].is_array())
                bad(field + ".components", "expected an array of measure components");
            std::vector<MeasureComponent> family;
            std::size_t idx = 0;
            for (const Json& c : j["components"]) {
                MeasureComponent mc;
                if (!c.contains("density") || !c["density"].is_array())
                    bad(field + ".components[" + std::to_string(idx) + "].density",
                        "expected an array of terminal-atom densities");
                for (const Json& d : c["density"]) {
                    double v = d.get<double>();
                    if (v <= 0.0)
                        bad(field + ".components[" + std::to_string(idx) + "].density",
                            "measure not absolutely continuous w.r.t. base");
                    mc.density.push_back(v);
                }
                mc.penalty = c.value("penalty", 0.0);
                if (mc.penalty < 0.0)
                    bad(field + ".components[" + std::to_string(idx) + "].penalty",
                        "penalty must be nonnegative");
                family.push_back(std::move(mc));
                ++idx;
            }
            return UncertaintyKind::measure_family(std::move(family));
        }
        if (k == "mean_band") {
            if (!j.contains("band") || !j["band"].is_array())
                bad(field + ".band", "expected an array of band widths");
            std::vector<double> band;
            for (const Json& b : j["band"]) band.push_back(b.get<double>());
            return UncertaintyKind::mean_band(std::move(band));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        bad(field, e.what());
    }
    bad(field, "unknown set kind '" + k + "'");
}

Json rule_json(const ToleranceRule& r) {
    Json j;
    switch (r.tag) {
        case ToleranceRule::Tag::Constant: j["kind"] = "constant"; j["eps"] = r.eps; break;
        case ToleranceRule::Tag::Horizon: j["kind"] = "horizon"; j["eps"] = r.eps; break;
        case ToleranceRule::Tag::VarScaled: j["kind"] = "var_scaled"; j["eps"] = r.eps; break;
        case ToleranceRule::Tag::Zero: j["kind"] = "zero"; break;
    }
    return j;
}

Json risk_json(const RiskKind& r) {
    Json j;
    switch (r.tag) {
        case RiskKind::Tag::Expectation: j["kind"] = "expectation"; break;
        case RiskKind::Tag::CVaR: j["kind"] = "cvar"; j["alpha"] = r.alpha; break;
        case RiskKind::Tag::Entropic: j["kind"] = "entropic"; j["beta"] = r.beta; break;
        case RiskKind::Tag::WorstCase: j["kind"] = "worst_case"; break;
    }
    return j;
}

Json kind_json(const UncertaintyKind& k) {
    Json j;
    switch (k.tag) {
        case UncertaintyKind::Tag::Identity:
            j["kind"] = "identity";
            break;
        case UncertaintyKind::Tag::SupNormBall:
            j["kind"] = "sup_norm_ball";
            j["rule"] = rule_json(k.rule);
            break;
        case UncertaintyKind::Tag::WassersteinBall:
            j["kind"] = "wasserstein_ball";
            j["p"] = k.p;
            j["rule"] = rule_json(k.rule);
            break;
        case UncertaintyKind::Tag::KLBall:
            j["kind"] = "kl_ball";
            j["rule"] = rule_json(k.rule);
            break;
        case UncertaintyKind::Tag::MeasureFamily: {
            j["kind"] = "measure_family";
            Json comps = Json::array();
            for (const MeasureComponent& c : k.family) {
                Json cj;
                cj["density"] = c.density;
                cj["penalty"] = c.penalty;
                comps.push_back(cj);
            }
            j["components"] = comps;
            break;
        }
        case UncertaintyKind::Tag::MeanBand:
            j["kind"] = "mean_band";
            j["band"] = k.band_eps;
            break;
        default:
            throw ValidationError(
                "only the analytic set kinds can be written to a document; derived and "
                "wrapped sets are built by commands");
    }
    return j;
}

} // namespace

RobustRiskMeasure ExperimentDoc::measure() const {
    if (recursive) return construct_recursive(set, family, tree);
    return RobustRiskMeasure::make(tree, family, set);
}

ExperimentDoc parse_experiment(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document root must be an object");
    if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
        bad("schema", "expected the integer 1");

    ExperimentDoc doc;

    if (!j.contains("tree") || !j["tree"].is_object()) bad("tree", "expected an object");
    const Json& tj = j["tree"];
    if (!tj.contains("horizon") || !tj["horizon"].is_number_integer())
        bad("tree.horizon", "expected an integer");
    int T = tj["horizon"].get<int>();
    std::vector<AtomSpec> atoms;
    if (!tj.contains("atoms") || !tj["atoms"].is_array())
        bad("tree.atoms", "expected an array");
    for (const Json& a : tj["atoms"]) {
        AtomSpec spec;
        if (!a.contains("id") || !a["id"].is_string()) bad("tree.atoms[].id", "expected a string");
        spec.id = a["id"].get<std::string>();
        if (!a.contains("time") || !a["time"].is_number_integer())
            bad("tree.atoms[].time", "expected an integer");
        spec.time = a["time"].get<int>();
        spec.parent = a.value("parent", std::string());
        spec.cond_prob = a.value("prob", 1.0);
        if (spec.time >= 1 && spec.cond_prob <= 0.0)
            throw ParseError("atom '" + spec.id +
                             "': probability must be strictly positive; measure not absolutely "
                             "continuous w.r.t. base");
        atoms.push_back(std::move(spec));
    }
    try {
        doc.tree = ScenarioTree::build(T, std::move(atoms));
    } catch (const std::exception& e) {
        throw ParseError(std::string("tree: ") + e.what());
    }

    auto parse_process = [&](const Json& pj, const std::string& field) {
        if (!pj.is_array() || static_cast<int>(pj.size()) != T + 1)
            bad(field, "expected one value array per time 0..T");
        AdaptedProcess x = AdaptedProcess::zero(doc.tree);
        for (int t = 0; t <= T; ++t) {
            const Json& vt = pj[t];
            if (!vt.is_array() || vt.size() != doc.tree.count(t))
                bad(field + "[" + std::to_string(t) + "]",
                    "expected " + std::to_string(doc.tree.count(t)) + " values");
            for (std::size_t i = 0; i < vt.size(); ++i) x.at(t).values[i] = vt[i].get<double>();
        }
        return x;
    };
    if (j.contains("process")) doc.processes.push_back(parse_process(j["process"], "process"));
    if (j.contains("processes")) {
        if (!j["processes"].is_array()) bad("processes", "expected an array of processes");
        std::size_t idx = 0;
        for (const Json& pj : j["processes"])
            doc.processes.push_back(
                parse_process(pj, "processes[" + std::to_string(idx++) + "]"));
    }
    if (doc.processes.empty()) doc.processes.push_back(AdaptedProcess::zero(doc.tree));

    if (!j.contains("family")) bad("family", "missing");
    if (j["family"].is_array()) {
        if (static_cast<int>(j["family"].size()) != T)
            bad("family", "expected one risk kind per time 0..T-1");
        for (int t = 0; t < T; ++t)
            doc.family.kinds.push_back(
                parse_risk(j["family"][t], "family[" + std::to_string(t) + "]"));
    } else {
        doc.family = RiskFamily::uniform(doc.tree, parse_risk(j["family"], "family"));
    }

    if (!j.contains("set")) bad("set", "missing");
    try {
        if (j["set"].is_array()) {
            if (static_cast<int>(j["set"].size()) != T)
                bad("set", "expected one set kind per time 1..T");
            for (int t = 0; t < T; ++t)
                doc.set.kinds.push_back(parse_kind(j["set"][t], "set[" + std::to_string(t) + "]"));
        } else {
            doc.set = DynamicUncertaintySet::uniform(doc.tree, parse_kind(j["set"], "set"));
        }
        for (const UncertaintyKind& k : doc.set.kinds)
            if (k.tag == UncertaintyKind::Tag::MeasureFamily) validate_family(doc.tree, k);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("set: ") + e.what());
    }

    if (j.contains("seed")) doc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) doc.trials = j["trials"].get<int>();
    if (j.contains("tol")) doc.tol = j["tol"].get<double>();
    if (j.contains("time")) doc.time = j["time"].get<int>();
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) bad("checks", "expected an array of strings");
        for (const Json& c : j["checks"]) doc.checks.push_back(c.get<std::string>());
    }
    if (j.contains("level")) {
        doc.level = j["level"].get<std::string>();
        if (doc.level != "set" && doc.level != "measure" && doc.level != "consolidated")
            bad("level", "expected set, measure or consolidated");
    }
    if (j.contains("wrap")) doc.wrap = j["wrap"].get<std::string>();
    if (j.contains("mutant")) doc.mutant = j["mutant"].get<bool>();
    if (j.contains("recursive")) doc.recursive = j["recursive"].get<bool>();
    return doc;
}

std::string serialize_experiment(const ExperimentDoc& doc) {
    Json j;
    j["schema"] = doc.schema;
    Json tj;
    tj["horizon"] = doc.tree.horizon();
    Json atoms = Json::array();
    for (int t = 0; t <= doc.tree.horizon(); ++t)
        for (std::size_t i = 0; i < doc.tree.count(t); ++i) {
            Json a;
            a["id"] = doc.tree.atom_id(t, i);
            a["time"] = t;
            if (t >= 1) {
                a["parent"] = doc.tree.atom_id(t - 1, doc.tree.parent(t, i));
                a["prob"] = doc.tree.cond_prob(t, i);
            }
            atoms.push_back(a);
        }
    tj["atoms"] = atoms;
    j["tree"] = tj;

    Json procs = Json::array();
    for (const AdaptedProcess& x : doc.processes) {
        Json pj = Json::array();
        for (int t = 0; t <= doc.tree.horizon(); ++t) pj.push_back(x.at(t).values);
        procs.push_back(pj);
    }
    j["processes"] = procs;

    Json fam = Json::array();
    for (const RiskKind& k : doc.family.kinds) fam.push_back(risk_json(k));
    j["family"] = fam;

    Json set = Json::array();
    for (const UncertaintyKind& k : doc.set.kinds) set.push_back(kind_json(k));
    j["set"] = set;

    if (doc.seed) j["seed"] = *doc.seed;
    if (doc.trials) j["trials"] = *doc.trials;
    if (doc.tol) j["tol"] = *doc.tol;
    if (doc.time) j["time"] = *doc.time;
    if (!doc.checks.empty()) j["checks"] = doc.checks;
    j["level"] = doc.level;
    if (!doc.wrap.empty()) j["wrap"] = doc.wrap;
    if (doc.mutant) j["mutant"] = doc.mutant;
    if (doc.recursive) j["recursive"] = doc.recursive;
    return j.dump(2) + "\n";
}

} // namespace dynrisk
