#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "improver/context_slice.hpp"
#include "improver/proof_tree.hpp"
#include "improver/trace_model.hpp"

namespace improver {

enum class MetricKind { Length, Dependencies, Modularity };

const char* metric_kind_name(MetricKind kind);
std::optional<MetricKind> metric_kind_from_name(const std::string& name);

// Per-stage counts of the modularity pipeline. The stages only ever shrink:
// score ≤ afterTrivialityFilter ≤ afterWrapperFilter ≤ afterDuplicateFilter
// ≤ spawnedRootCount.
struct ModularityReport {
    int spawnedRootCount = 0;
    int afterDuplicateFilter = 0;
    int afterWrapperFilter = 0;
    int afterTrivialityFilter = 0;
    std::set<std::string> effectiveGoals;
    int score = 0;
};

// Negative tactic count.
double metric_length(const TheoremRecord& record);

struct DepDiagnostics {
    std::set<std::string> counted;
    std::set<std::string> unresolved;
    std::set<std::string> ignored;  // resolved but not theorem/lemma, or self
};

// Negative count of unique referenced names that resolve to theorem/lemma
// and are not the theorem itself. Unresolvable names are ignored (reported
// via diagnostics, never an error).
double metric_dependencies(const TheoremRecord& record, const LibraryIndex& index,
                           DepDiagnostics* diagnostics = nullptr);

// Least fixed point of Φ over the candidate spawned roots: a root is
// effective when a hypothesis it introduced is referenced outside every
// spawned subtree, or inside the subtree of a different effective root.
// Candidates must already have passed the duplicate/wrapper/triviality
// filters.
std::set<std::string> effective_spawned(const ProofTree& tree, const TheoremRecord& record,
                                        const std::vector<ProofTree::SpawnedRoot>& candidates);

std::pair<double, ModularityReport> metric_modularity(const TheoremRecord& record);

double metric_value(MetricKind kind, const TheoremRecord& record, const LibraryIndex* index);

// μ(candidate) − μ(baseline). The candidate needs a trace; without one only
// Length can fall back to counting top-level tactic separators in the text,
// reported as approximate. `hypothetical` permits scoring unverified
// candidates (loser bookkeeping).
double improvement_score(MetricKind kind, const TheoremRecord& baseline,
                         const CandidateProof& candidate, const LibraryIndex* index = nullptr,
                         bool hypothetical = false, bool* approximate = nullptr);

// Approximate tactic count from raw proof text: top-level newline/';'
// separated units, comments and blank lines skipped, '<;>' combinators not
// split.
int approximate_tactic_count(const std::string& proofText);

}  // namespace improver
