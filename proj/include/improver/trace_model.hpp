#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "improver/errors.hpp"

namespace improver {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term tree. Producers supply terms βδι-normalized; nothing here
// reduces.
class Term {
public:
    enum class Kind { Const, BoundVar, FreeVar, Meta, Sort, App, Lambda, Forall };

    Kind kind;
    std::string name;        // const / fvar name, meta id, sort level, binder name
    int index = 0;           // de Bruijn index for BoundVar
    TermPtr fn;              // App
    std::vector<TermPtr> args;
    TermPtr binderType;      // Lambda / Forall
    TermPtr body;

    static TermPtr constant(std::string name);
    static TermPtr bvar(int index);
    static TermPtr fvar(std::string name);
    static TermPtr meta(std::string id);
    static TermPtr sort(std::string level);
    static TermPtr app(TermPtr fn, std::vector<TermPtr> args);
    static TermPtr lambda(std::string binder, TermPtr type, TermPtr body);
    static TermPtr forall(std::string binder, TermPtr type, TermPtr body);
};

// Structural equality (names, indices, shape).
bool term_equal(const Term& a, const Term& b);

struct Hypothesis {
    std::string name;
    TermPtr type;
    bool proofRelevant = true;
};

struct Goal {
    std::string id;
    TermPtr target;
    std::vector<Hypothesis> hypotheses;
};

struct TacticStep {
    int index = 0;  // 1-based elaboration order
    std::string tacticText;
    std::string focusedGoalId;
    std::vector<std::string> goalsBefore;
    std::vector<std::string> goalsAfter;
    std::vector<std::string> childGoalIds;  // metavars free in the assignment
    std::vector<std::string> newGoalIds;    // metavars first appearing here
    std::set<std::string> referencedHypNames;
    std::set<std::string> referencedDeclNames;
    std::set<std::string> introducedHypNames;
    std::optional<std::pair<std::size_t, std::size_t>> span;  // [begin,end) into proof text
};

struct TheoremRecord {
    std::string theoremName;
    std::string projectName;
    std::string contextId;
    std::string statementText;
    std::string originalProofText;
    std::set<std::string> statementRefNames;
    std::map<std::string, Goal> goals;
    std::vector<TacticStep> steps;
    std::optional<std::string> informalStatement;
    std::optional<std::string> informalProof;
};

struct CandidateProof {
    int candidateIndex = 0;
    std::string proofText;
    std::optional<bool> verified;
    std::optional<double> metricValue;
    std::optional<double> improvementScore;
    bool unscoreable = false;  // loser with no trace: never a float score
    std::optional<std::vector<TacticStep>> steps;
    std::optional<std::map<std::string, Goal>> goals;  // goal table for the trace
};

inline constexpr const char* kTraceSchema = "improver2-trace/1";

// Parse one line-delimited trace file. Invariants are enforced: a record
// that fails validate_record is a ParseError naming the line and field.
std::vector<TheoremRecord> parse_trace_file(const std::filesystem::path& path);

// Violations are data, not failures: each string names the field and step.
std::vector<std::string> validate_record(const TheoremRecord& record);

std::string serialize_record(const TheoremRecord& record);  // one JSON line, no newline
TheoremRecord record_from_json_line(const std::string& line);
void write_trace_file(const std::filesystem::path& path, const std::vector<TheoremRecord>& records);

// JSON sub-object helpers shared with adapters and the pipeline formats.
std::string serialize_candidate(const CandidateProof& c, bool withTrace);
CandidateProof candidate_from_json_line(const std::string& line);

}  // namespace improver
