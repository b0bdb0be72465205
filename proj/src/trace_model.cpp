#include "improver/trace_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "improver/textutil.hpp"
#include "json_codec.hpp"

namespace improver {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

// Checks de Bruijn validity and non-empty App arguments. Returns the first
// problem found, or empty.
std::string check_term(const Term& t, int depth) {
    switch (t.kind) {
        case Term::Kind::BoundVar:
            if (t.index >= depth)
                return "bvar index " + std::to_string(t.index) + " exceeds binder depth " +
                       std::to_string(depth);
            return {};
        case Term::Kind::App: {
            if (t.args.empty()) return "app with empty argument list";
            if (auto e = check_term(*t.fn, depth); !e.empty()) return e;
            for (const auto& a : t.args)
                if (auto e = check_term(*a, depth); !e.empty()) return e;
            return {};
        }
        case Term::Kind::Lambda:
        case Term::Kind::Forall: {
            if (auto e = check_term(*t.binderType, depth); !e.empty()) return e;
            return check_term(*t.body, depth + 1);
        }
        default:
            return {};
    }
}

template <typename Container>
bool is_subset(const Container& a, const Container& b) {
    for (const auto& x : a)
        if (std::find(b.begin(), b.end(), x) == b.end()) return false;
    return true;
}

}  // namespace

TermPtr Term::constant(std::string name) {
    Term t;
    t.kind = Kind::Const;
    t.name = std::move(name);
    return make(std::move(t));
}

TermPtr Term::bvar(int index) {
    Term t;
    t.kind = Kind::BoundVar;
    t.index = index;
    return make(std::move(t));
}

TermPtr Term::fvar(std::string name) {
    Term t;
    t.kind = Kind::FreeVar;
    t.name = std::move(name);
    return make(std::move(t));
}

TermPtr Term::meta(std::string id) {
    Term t;
    t.kind = Kind::Meta;
    t.name = std::move(id);
    return make(std::move(t));
}

TermPtr Term::sort(std::string level) {
    Term t;
    t.kind = Kind::Sort;
    t.name = std::move(level);
    return make(std::move(t));
}

TermPtr Term::app(TermPtr fn, std::vector<TermPtr> args) {
    Term t;
    t.kind = Kind::App;
    t.fn = std::move(fn);
    t.args = std::move(args);
    return make(std::move(t));
}

TermPtr Term::lambda(std::string binder, TermPtr type, TermPtr body) {
    Term t;
    t.kind = Kind::Lambda;
    t.name = std::move(binder);
    t.binderType = std::move(type);
    t.body = std::move(body);
    return make(std::move(t));
}

TermPtr Term::forall(std::string binder, TermPtr type, TermPtr body) {
    Term t;
    t.kind = Kind::Forall;
    t.name = std::move(binder);
    t.binderType = std::move(type);
    t.body = std::move(body);
    return make(std::move(t));
}

bool term_equal(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Const:
        case Term::Kind::FreeVar:
        case Term::Kind::Meta:
        case Term::Kind::Sort:
            return a.name == b.name;
        case Term::Kind::BoundVar:
            return a.index == b.index;
        case Term::Kind::App: {
            if (a.args.size() != b.args.size()) return false;
            if (!term_equal(*a.fn, *b.fn)) return false;
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (!term_equal(*a.args[i], *b.args[i])) return false;
            return true;
        }
        case Term::Kind::Lambda:
        case Term::Kind::Forall:
            return a.name == b.name && term_equal(*a.binderType, *b.binderType) &&
                   term_equal(*a.body, *b.body);
    }
    return false;
}

std::vector<std::string> validate_record(const TheoremRecord& record) {
    std::vector<std::string> out;
    auto add = [&out](std::string msg) { out.push_back(std::move(msg)); };

    if (record.steps.empty()) add("steps: empty (a proved theorem has at least one step)");

    for (const auto& [id, goal] : record.goals) {
        if (!goal.target) {
            add("goals." + id + ".target: missing");
            continue;
        }
        if (auto e = check_term(*goal.target, 0); !e.empty()) add("goals." + id + ".target: " + e);
        std::set<std::string> hypNames;
        for (const auto& h : goal.hypotheses) {
            if (!hypNames.insert(h.name).second)
                add("goals." + id + ": duplicate hypothesis name '" + h.name + "'");
            if (auto e = check_term(*h.type, 0); !e.empty())
                add("goals." + id + ".hyp " + h.name + ": " + e);
        }
    }

    auto goalExists = [&record](const std::string& id) { return record.goals.count(id) != 0; };
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
        const auto& s = record.steps[i];
        const std::string where = "step " + std::to_string(i + 1);
        if (s.index != static_cast<int>(i + 1))
            add(where + ".index: expected " + std::to_string(i + 1) + ", got " + std::to_string(s.index));
        if (std::find(s.goalsBefore.begin(), s.goalsBefore.end(), s.focusedGoalId) == s.goalsBefore.end())
            add(where + " focus: focusedGoalId '" + s.focusedGoalId + "' not in goalsBefore");
        if (!is_subset(s.childGoalIds, s.newGoalIds))
            add(where + ".childGoalIds: not a subset of newGoalIds");
        for (const auto* ids : {&s.goalsBefore, &s.goalsAfter, &s.childGoalIds, &s.newGoalIds})
            for (const auto& id : *ids)
                if (!goalExists(id)) add(where + ": goal id '" + id + "' not in goals table");
        if (!goalExists(s.focusedGoalId))
            add(where + ": goal id '" + s.focusedGoalId + "' not in goals table");
        if (s.span && s.span->first > s.span->second) add(where + ".span: begin > end");
    }
    return out;
}

std::vector<TheoremRecord> parse_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw DataError("cannot open trace file: " + path.string());

    std::vector<TheoremRecord> records;
    std::set<std::string> names;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string where = path.filename().string() + ":" + std::to_string(lineNo);
        if (line.empty()) throw ParseError(where + ": blank line");
        codec::json j;
        try {
            j = codec::json::parse(line);
        } catch (const codec::json::parse_error& e) {
            throw ParseError(where + ": invalid JSON: " + e.what());
        }
        TheoremRecord record;
        try {
            record = codec::record_from_json(j);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!names.insert(record.theoremName).second)
            throw ParseError(where + ": duplicate theoremName '" + record.theoremName + "'");
        auto violations = validate_record(record);
        if (!violations.empty())
            throw ParseError(where + ": invalid record '" + record.theoremName + "': " + violations.front());
        records.push_back(std::move(record));
    }
    return records;
}

std::string serialize_record(const TheoremRecord& record) {
    return codec::record_to_json(record).dump();
}

TheoremRecord record_from_json_line(const std::string& line) {
    return codec::record_from_json(codec::json::parse(line));
}

void write_trace_file(const std::filesystem::path& path, const std::vector<TheoremRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) out << serialize_record(r) << '\n';
    write_file_atomic(path, out.str());
}

std::string serialize_candidate(const CandidateProof& c, bool withTrace) {
    return codec::candidate_to_json(c, withTrace).dump();
}

CandidateProof candidate_from_json_line(const std::string& line) {
    return codec::candidate_from_json(codec::json::parse(line), "candidate");
}

}  // namespace improver
