#include "improver/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>

#include "improver/term_canon.hpp"

namespace improver {

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Length: return "length";
        case MetricKind::Dependencies: return "dep";
        case MetricKind::Modularity: return "mod";
    }
    return "length";
}

std::optional<MetricKind> metric_kind_from_name(const std::string& name) {
    if (name == "length" || name == "len") return MetricKind::Length;
    if (name == "dep" || name == "dependencies" || name == "dependency") return MetricKind::Dependencies;
    if (name == "mod" || name == "modularity") return MetricKind::Modularity;
    return std::nullopt;
}

double metric_length(const TheoremRecord& record) {
    return -static_cast<double>(record.steps.size());
}

double metric_dependencies(const TheoremRecord& record, const LibraryIndex& index,
                           DepDiagnostics* diagnostics) {
    std::set<std::string> referenced;
    for (const auto& s : record.steps)
        referenced.insert(s.referencedDeclNames.begin(), s.referencedDeclNames.end());

    std::set<std::string> deps;
    for (const auto& name : referenced) {
        auto it = index.declarations.find(name);
        if (it == index.declarations.end()) {
            if (diagnostics) diagnostics->unresolved.insert(name);
            continue;
        }
        const bool isTheorem =
            it->second.kind == DeclKind::Theorem || it->second.kind == DeclKind::Lemma;
        if (!isTheorem || name == record.theoremName) {
            if (diagnostics) diagnostics->ignored.insert(name);
            continue;
        }
        deps.insert(name);
    }
    if (diagnostics) diagnostics->counted = deps;
    return -static_cast<double>(deps.size());
}

std::set<std::string> effective_spawned(const ProofTree& tree, const TheoremRecord& record,
                                        const std::vector<ProofTree::SpawnedRoot>& candidates) {
    // Subtree step sets and introduced-name sets per candidate.
    std::map<std::string, std::set<int>> subtreeOf;
    std::map<std::string, std::set<std::string>> introOf;
    std::set<int> anySubtree;
    for (const auto& c : candidates) {
        std::set<int> steps;
        std::vector<int> stack{c.rootStep};
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            steps.insert(s);
            if (auto it = tree.children.find(s); it != tree.children.end())
                stack.insert(stack.end(), it->second.begin(), it->second.end());
        }
        anySubtree.insert(steps.begin(), steps.end());
        subtreeOf[c.goalId] = std::move(steps);
        introOf[c.goalId] =
            record.steps[static_cast<std::size_t>(c.spawningStep - 1)].introducedHypNames;
    }

    auto referencesIntro = [&record](int step, const std::set<std::string>& names) {
        const auto& refs = record.steps[static_cast<std::size_t>(step - 1)].referencedHypNames;
        return std::any_of(names.begin(), names.end(),
                           [&refs](const std::string& n) { return refs.count(n) != 0; });
    };

    // Base facts: Intro(g) used on a step outside all spawned subtrees.
    std::set<std::string> usedOutside;
    for (const auto& c : candidates)
        for (int s = 1; s <= tree.stepCount; ++s)
            if (!anySubtree.count(s) && referencesIntro(s, introOf.at(c.goalId)))
                usedOutside.insert(c.goalId);

    // Monotone iteration from ∅ to the least fixed point.
    std::set<std::string> effective;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : candidates) {
            if (effective.count(c.goalId)) continue;
            bool in = usedOutside.count(c.goalId) != 0;
            for (const auto& other : candidates) {
                if (in) break;
                if (other.goalId == c.goalId || !effective.count(other.goalId)) continue;
                for (int s : subtreeOf.at(other.goalId))
                    if (referencesIntro(s, introOf.at(c.goalId))) {
                        in = true;
                        break;
                    }
            }
            if (in) {
                effective.insert(c.goalId);
                changed = true;
            }
        }
    }
    return effective;
}

std::pair<double, ModularityReport> metric_modularity(const TheoremRecord& record) {
    ModularityReport report;
    ProofTree tree = build_tree(record);
    std::vector<ProofTree::SpawnedRoot> roots = tree.spawnedRoots;
    report.spawnedRootCount = static_cast<int>(roots.size());

    std::map<std::string, CanonicalGoal> canon;
    auto canonical = [&record, &canon](const std::string& goalId) -> const CanonicalGoal& {
        auto it = canon.find(goalId);
        if (it == canon.end()) it = canon.emplace(goalId, canonical_goal(record.goals.at(goalId))).first;
        return it->second;
    };

    // Duplicate filter: walk steps in order; a root checks against every
    // goal seen strictly before its spawning step's new goals are added.
    std::vector<ProofTree::SpawnedRoot> afterDuplicate;
    {
        std::set<Digest128> seen;
        auto addGoal = [&seen, &canonical](const std::string& goalId) {
            const auto& c = canonical(goalId);
            seen.insert(c.sequentVariantHashes.begin(), c.sequentVariantHashes.end());
        };
        if (!record.steps.empty())
            for (const auto& g : record.steps.front().goalsBefore) addGoal(g);

        std::size_t next = 0;
        for (int i = 1; i <= tree.stepCount; ++i) {
            for (; next < roots.size() && roots[next].spawningStep == i; ++next) {
                const auto& variants = canonical(roots[next].goalId).sequentVariantHashes;
                const bool dup = std::any_of(variants.begin(), variants.end(),
                                             [&seen](const Digest128& d) { return seen.count(d) != 0; });
                if (!dup) afterDuplicate.push_back(roots[next]);
            }
            for (const auto& g : record.steps[static_cast<std::size_t>(i - 1)].newGoalIds) addGoal(g);
        }
    }
    report.afterDuplicateFilter = static_cast<int>(afterDuplicate.size());

    // Wrapper filter: target-only variants shared with the parent goal.
    std::vector<ProofTree::SpawnedRoot> afterWrapper;
    for (const auto& r : afterDuplicate) {
        const auto& parentGoalId =
            record.steps[static_cast<std::size_t>(r.spawningStep - 1)].focusedGoalId;
        const auto& child = canonical(r.goalId).targetVariantHashes;
        const auto& parent = canonical(parentGoalId).targetVariantHashes;
        const bool wrapper = std::any_of(child.begin(), child.end(),
                                         [&parent](const Digest128& d) { return parent.count(d) != 0; });
        if (!wrapper) afterWrapper.push_back(r);
    }
    report.afterWrapperFilter = static_cast<int>(afterWrapper.size());

    // Nontriviality: a spawned subproof solved in ≤ 2 steps never counts.
    std::vector<ProofTree::SpawnedRoot> afterTrivial;
    for (const auto& r : afterWrapper)
        if (subtree_size(tree, r.rootStep) > 2) afterTrivial.push_back(r);
    report.afterTrivialityFilter = static_cast<int>(afterTrivial.size());

    report.effectiveGoals = effective_spawned(tree, record, afterTrivial);
    report.score = static_cast<int>(report.effectiveGoals.size());

    assert(report.score <= report.afterTrivialityFilter);
    assert(report.afterTrivialityFilter <= report.afterWrapperFilter);
    assert(report.afterWrapperFilter <= report.afterDuplicateFilter);
    assert(report.afterDuplicateFilter <= report.spawnedRootCount);
    return {static_cast<double>(report.score), report};
}

double metric_value(MetricKind kind, const TheoremRecord& record, const LibraryIndex* index) {
    switch (kind) {
        case MetricKind::Length:
            return metric_length(record);
        case MetricKind::Dependencies:
            if (!index) throw ConfigError("dependency metric requires a library index");
            return metric_dependencies(record, *index);
        case MetricKind::Modularity:
            return metric_modularity(record).first;
    }
    throw ConfigError("unknown metric kind");
}

int approximate_tactic_count(const std::string& proofText) {
    // Strip comments, drop the `:= by` header, then count lines plus
    // top-level ';' separators (not the '<;>' combinator).
    std::string text;
    text.reserve(proofText.size());
    for (std::size_t i = 0; i < proofText.size();) {
        if (proofText.compare(i, 2, "--") == 0) {
            while (i < proofText.size() && proofText[i] != '\n') ++i;
        } else if (proofText.compare(i, 2, "/-") == 0) {
            int depth = 1;
            i += 2;
            while (i < proofText.size() && depth > 0) {
                if (proofText.compare(i, 2, "/-") == 0) {
                    ++depth;
                    i += 2;
                } else if (proofText.compare(i, 2, "-/") == 0) {
                    --depth;
                    i += 2;
                } else {
                    ++i;
                }
            }
        } else {
            text.push_back(proofText[i]);
            ++i;
        }
    }

    std::size_t start = 0;
    if (auto byPos = text.find("by"); byPos != std::string::npos) {
        const bool leftOk = byPos == 0 || std::isspace(static_cast<unsigned char>(text[byPos - 1])) ||
                            text[byPos - 1] == '=';
        const bool rightOk = byPos + 2 >= text.size() ||
                             std::isspace(static_cast<unsigned char>(text[byPos + 2]));
        if (leftOk && rightOk) start = byPos + 2;
    }

    int count = 0;
    bool lineHasContent = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\n') {
            if (lineHasContent) ++count;
            lineHasContent = false;
        } else if (c == ';') {
            const bool combinator = (i > 0 && text[i - 1] == '<') ||
                                    (i + 1 < text.size() && text[i + 1] == '>');
            if (!combinator && lineHasContent) {
                ++count;
                lineHasContent = false;
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            lineHasContent = true;
        }
    }
    if (lineHasContent) ++count;
    return count;
}

namespace {

TheoremRecord candidate_record(const TheoremRecord& baseline, const CandidateProof& candidate) {
    TheoremRecord r = baseline;
    r.originalProofText = candidate.proofText;
    r.steps = candidate.steps.value_or(std::vector<TacticStep>{});
    r.goals = candidate.goals.value_or(std::map<std::string, Goal>{});
    return r;
}

}  // namespace

double improvement_score(MetricKind kind, const TheoremRecord& baseline,
                         const CandidateProof& candidate, const LibraryIndex* index,
                         bool hypothetical, bool* approximate) {
    if (approximate) *approximate = false;
    if (!hypothetical && !(candidate.verified && *candidate.verified))
        throw DataError("improvement_score: candidate is not verified (pass hypothetical to score losers)");

    double candidateValue = 0;
    if (candidate.steps) {
        candidateValue = metric_value(kind, candidate_record(baseline, candidate), index);
    } else if (kind == MetricKind::Length) {
        candidateValue = -static_cast<double>(approximate_tactic_count(candidate.proofText));
        if (approximate) *approximate = true;
    } else {
        throw DataError("improvement_score: candidate has no trace and metric '" +
                        std::string(metric_kind_name(kind)) + "' cannot score from text");
    }
    return candidateValue - metric_value(kind, baseline, index);
}

}  // namespace improver
