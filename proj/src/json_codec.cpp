#include "json_codec.hpp"

namespace improver::codec {

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) throw ParseError(path + "." + key + ": expected string");
    return v.get<std::string>();
}

int require_int(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected integer");
    return v.get<int>();
}

namespace {

std::vector<std::string> string_array(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_array()) throw ParseError(path + "." + key + ": expected array");
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_string()) throw ParseError(path + "." + key + ": expected array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::set<std::string> string_set(const json& j, const char* key, const std::string& path) {
    auto v = string_array(j, key, path);
    return {v.begin(), v.end()};
}

json set_to_json(const std::set<std::string>& s) {
    json a = json::array();
    for (const auto& x : s) a.push_back(x);
    return a;
}

}  // namespace

json term_to_json(const TermPtr& t) {
    json j;
    switch (t->kind) {
        case Term::Kind::Const:
            j = {{"k", "const"}, {"name", t->name}};
            break;
        case Term::Kind::BoundVar:
            j = {{"k", "bvar"}, {"idx", t->index}};
            break;
        case Term::Kind::FreeVar:
            j = {{"k", "fvar"}, {"name", t->name}};
            break;
        case Term::Kind::Meta:
            j = {{"k", "meta"}, {"id", t->name}};
            break;
        case Term::Kind::Sort:
            j = {{"k", "sort"}, {"level", t->name}};
            break;
        case Term::Kind::App: {
            json args = json::array();
            for (const auto& a : t->args) args.push_back(term_to_json(a));
            j = {{"k", "app"}, {"fn", term_to_json(t->fn)}, {"args", std::move(args)}};
            break;
        }
        case Term::Kind::Lambda:
            j = {{"k", "lam"}, {"binder", t->name}, {"type", term_to_json(t->binderType)},
                 {"body", term_to_json(t->body)}};
            break;
        case Term::Kind::Forall:
            j = {{"k", "forall"}, {"binder", t->name}, {"type", term_to_json(t->binderType)},
                 {"body", term_to_json(t->body)}};
            break;
    }
    return j;
}

TermPtr term_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected term object");
    const std::string k = require_string(j, "k", path);
    if (k == "const") return Term::constant(require_string(j, "name", path));
    if (k == "bvar") {
        int idx = require_int(j, "idx", path);
        if (idx < 0) throw ParseError(path + ".idx: negative de Bruijn index");
        return Term::bvar(idx);
    }
    if (k == "fvar") return Term::fvar(require_string(j, "name", path));
    if (k == "meta") return Term::meta(require_string(j, "id", path));
    if (k == "sort") return Term::sort(require_string(j, "level", path));
    if (k == "app") {
        TermPtr fn = term_from_json(require(j, "fn", path), path + ".fn");
        const json& argsJ = require(j, "args", path);
        if (!argsJ.is_array() || argsJ.empty())
            throw ParseError(path + ".args: expected non-empty array");
        std::vector<TermPtr> args;
        args.reserve(argsJ.size());
        for (std::size_t i = 0; i < argsJ.size(); ++i)
            args.push_back(term_from_json(argsJ[i], path + ".args[" + std::to_string(i) + "]"));
        return Term::app(std::move(fn), std::move(args));
    }
    if (k == "lam" || k == "forall") {
        std::string binder = require_string(j, "binder", path);
        TermPtr type = term_from_json(require(j, "type", path), path + ".type");
        TermPtr body = term_from_json(require(j, "body", path), path + ".body");
        return k == "lam" ? Term::lambda(std::move(binder), std::move(type), std::move(body))
                          : Term::forall(std::move(binder), std::move(type), std::move(body));
    }
    throw ParseError(path + ".k: unknown term tag '" + k + "'");
}

json goal_to_json(const Goal& g) {
    json hyps = json::array();
    for (const auto& h : g.hypotheses)
        hyps.push_back({{"name", h.name}, {"type", term_to_json(h.type)}, {"proofRelevant", h.proofRelevant}});
    return {{"target", term_to_json(g.target)}, {"hyps", std::move(hyps)}};
}

Goal goal_from_json(const std::string& id, const json& j, const std::string& path) {
    Goal g;
    g.id = id;
    g.target = term_from_json(require(j, "target", path), path + ".target");
    const json& hyps = require(j, "hyps", path);
    if (!hyps.is_array()) throw ParseError(path + ".hyps: expected array");
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        const std::string hp = path + ".hyps[" + std::to_string(i) + "]";
        Hypothesis h;
        h.name = require_string(hyps[i], "name", hp);
        h.type = term_from_json(require(hyps[i], "type", hp), hp + ".type");
        const json& pr = require(hyps[i], "proofRelevant", hp);
        if (!pr.is_boolean()) throw ParseError(hp + ".proofRelevant: expected boolean");
        h.proofRelevant = pr.get<bool>();
        g.hypotheses.push_back(std::move(h));
    }
    return g;
}

json step_to_json(const TacticStep& s) {
    json j = {{"index", s.index},
              {"tactic", s.tacticText},
              {"focusedGoalId", s.focusedGoalId},
              {"goalsBefore", s.goalsBefore},
              {"goalsAfter", s.goalsAfter},
              {"childGoalIds", s.childGoalIds},
              {"newGoalIds", s.newGoalIds},
              {"referencedHypNames", set_to_json(s.referencedHypNames)},
              {"referencedDeclNames", set_to_json(s.referencedDeclNames)},
              {"introducedHypNames", set_to_json(s.introducedHypNames)}};
    if (s.span) j["span"] = {s.span->first, s.span->second};
    return j;
}

TacticStep step_from_json(const json& j, const std::string& path) {
    TacticStep s;
    s.index = require_int(j, "index", path);
    s.tacticText = require_string(j, "tactic", path);
    s.focusedGoalId = require_string(j, "focusedGoalId", path);
    s.goalsBefore = string_array(j, "goalsBefore", path);
    s.goalsAfter = string_array(j, "goalsAfter", path);
    s.childGoalIds = string_array(j, "childGoalIds", path);
    s.newGoalIds = string_array(j, "newGoalIds", path);
    s.referencedHypNames = string_set(j, "referencedHypNames", path);
    s.referencedDeclNames = string_set(j, "referencedDeclNames", path);
    s.introducedHypNames = string_set(j, "introducedHypNames", path);
    if (auto it = j.find("span"); it != j.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_unsigned() ||
            !(*it)[1].is_number_unsigned())
            throw ParseError(path + ".span: expected [begin, end]");
        s.span = {(*it)[0].get<std::size_t>(), (*it)[1].get<std::size_t>()};
    }
    return s;
}

json goals_to_json(const std::map<std::string, Goal>& goals) {
    json j = json::object();
    for (const auto& [id, g] : goals) j[id] = goal_to_json(g);
    return j;
}

std::map<std::string, Goal> goals_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected object of goals");
    std::map<std::string, Goal> out;
    for (const auto& [id, gj] : j.items()) out.emplace(id, goal_from_json(id, gj, path + "." + id));
    return out;
}

json record_to_json(const TheoremRecord& r) {
    json steps = json::array();
    for (const auto& s : r.steps) steps.push_back(step_to_json(s));
    json j = {{"schema", kTraceSchema},
              {"theoremName", r.theoremName},
              {"projectName", r.projectName},
              {"contextId", r.contextId},
              {"statementText", r.statementText},
              {"originalProofText", r.originalProofText},
              {"statementRefNames", set_to_json(r.statementRefNames)},
              {"goals", goals_to_json(r.goals)},
              {"steps", std::move(steps)}};
    if (r.informalStatement) j["informalStatement"] = *r.informalStatement;
    if (r.informalProof) j["informalProof"] = *r.informalProof;
    return j;
}

TheoremRecord record_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("record: expected object");
    const std::string schema = require_string(j, "schema", "record");
    if (schema != kTraceSchema)
        throw ParseError("record.schema: expected '" + std::string(kTraceSchema) + "', got '" + schema + "'");
    TheoremRecord r;
    r.theoremName = require_string(j, "theoremName", "record");
    r.projectName = require_string(j, "projectName", "record");
    r.contextId = require_string(j, "contextId", "record");
    r.statementText = require_string(j, "statementText", "record");
    r.originalProofText = require_string(j, "originalProofText", "record");
    r.statementRefNames = string_set(j, "statementRefNames", "record");
    r.goals = goals_from_json(require(j, "goals", "record"), "record.goals");
    const json& steps = require(j, "steps", "record");
    if (!steps.is_array()) throw ParseError("record.steps: expected array");
    for (std::size_t i = 0; i < steps.size(); ++i)
        r.steps.push_back(step_from_json(steps[i], "record.steps[" + std::to_string(i) + "]"));
    if (auto it = j.find("informalStatement"); it != j.end() && !it->is_null())
        r.informalStatement = it->get<std::string>();
    if (auto it = j.find("informalProof"); it != j.end() && !it->is_null())
        r.informalProof = it->get<std::string>();
    return r;
}

json candidate_to_json(const CandidateProof& c, bool withTrace) {
    json j = {{"candidateIndex", c.candidateIndex},
              {"proofText", c.proofText},
              {"verified", c.verified ? json(*c.verified) : json(nullptr)},
              {"metricValue", c.metricValue ? json(*c.metricValue) : json(nullptr)},
              {"improvementScore", c.improvementScore ? json(*c.improvementScore) : json(nullptr)},
              {"unscoreable", c.unscoreable}};
    if (withTrace && c.steps) {
        json steps = json::array();
        for (const auto& s : *c.steps) steps.push_back(step_to_json(s));
        j["steps"] = std::move(steps);
        if (c.goals) j["goals"] = goals_to_json(*c.goals);
    }
    return j;
}

CandidateProof candidate_from_json(const json& j, const std::string& path) {
    CandidateProof c;
    c.candidateIndex = require_int(j, "candidateIndex", path);
    c.proofText = require_string(j, "proofText", path);
    if (auto it = j.find("verified"); it != j.end() && !it->is_null()) c.verified = it->get<bool>();
    if (auto it = j.find("metricValue"); it != j.end() && !it->is_null()) c.metricValue = it->get<double>();
    if (auto it = j.find("improvementScore"); it != j.end() && !it->is_null())
        c.improvementScore = it->get<double>();
    if (auto it = j.find("unscoreable"); it != j.end() && !it->is_null()) c.unscoreable = it->get<bool>();
    if (auto it = j.find("steps"); it != j.end() && !it->is_null()) {
        std::vector<TacticStep> steps;
        for (std::size_t i = 0; i < it->size(); ++i)
            steps.push_back(step_from_json((*it)[i], path + ".steps[" + std::to_string(i) + "]"));
        c.steps = std::move(steps);
    }
    if (auto it = j.find("goals"); it != j.end() && !it->is_null())
        c.goals = goals_from_json(*it, path + ".goals");
    return c;
}

}  // namespace improver::codec
