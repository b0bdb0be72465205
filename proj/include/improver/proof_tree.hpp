#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "improver/trace_model.hpp"

namespace improver {

// Step-indexed forest over a record's tactic steps. Edges run from the step
// that introduced a goal (as direct child or spawned obligation) to the
// step that focuses it; spawned edges are the labeled subset.
struct ProofTree {
    struct Parent {
        int step = 0;
        bool spawned = false;
    };
    struct SpawnedRoot {
        int spawningStep = 0;
        int rootStep = 0;  // first step focusing the spawned goal
        std::string goalId;
    };

    int stepCount = 0;
    std::map<int, Parent> parentOf;            // steps absent here are roots
    std::map<int, std::string> solvesGoal;     // step -> focused goal id
    std::vector<SpawnedRoot> spawnedRoots;     // ascending (spawningStep, rootStep)
    std::set<int> terminalSteps;               // goalsAfter empty
    std::map<int, std::vector<int>> children;  // derived, ascending
    std::vector<std::string> warnings;         // dangling goals etc.
};

// Goals first appearing at step i that are not direct children and were
// never previously children: (new ∖ child) ∖ seen.
std::set<std::string> spawned_goals_of_step(const TheoremRecord& record, int stepIndex,
                                            const std::set<std::string>& seen);

// Throws DataError when a step focuses a goal no prior step introduced and
// which is not a root goal.
ProofTree build_tree(const TheoremRecord& record);

// Steps in the subtree rooted at rootStep (root included), both edge kinds.
int subtree_size(const ProofTree& tree, int rootStep);

// DOT rendering: normal edges solid, spawned edges dashed.
std::string tree_to_dot(const ProofTree& tree, const TheoremRecord& record);

}  // namespace improver
