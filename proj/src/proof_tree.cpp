#include "improver/proof_tree.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace improver {

std::set<std::string> spawned_goals_of_step(const TheoremRecord& record, int stepIndex,
                                            const std::set<std::string>& seen) {
    const auto& step = record.steps.at(static_cast<std::size_t>(stepIndex - 1));
    std::set<std::string> out(step.newGoalIds.begin(), step.newGoalIds.end());
    for (const auto& c : step.childGoalIds) out.erase(c);
    for (const auto& s : seen) out.erase(s);
    return out;
}

ProofTree build_tree(const TheoremRecord& record) {
    ProofTree tree;
    tree.stepCount = static_cast<int>(record.steps.size());

    // Spawned sets per step, with the seen-set accumulating children.
    std::vector<std::set<std::string>> spawnedAt(record.steps.size() + 1);
    std::set<std::string> seenChildren;
    for (int i = 1; i <= tree.stepCount; ++i) {
        spawnedAt[static_cast<std::size_t>(i)] = spawned_goals_of_step(record, i, seenChildren);
        const auto& step = record.steps[static_cast<std::size_t>(i - 1)];
        seenChildren.insert(step.childGoalIds.begin(), step.childGoalIds.end());
    }

    std::set<std::string> rootGoals;
    if (!record.steps.empty())
        rootGoals.insert(record.steps.front().goalsBefore.begin(),
                         record.steps.front().goalsBefore.end());

    for (int j = 1; j <= tree.stepCount; ++j) {
        const auto& step = record.steps[static_cast<std::size_t>(j - 1)];
        tree.solvesGoal[j] = step.focusedGoalId;
        if (step.goalsAfter.empty()) tree.terminalSteps.insert(j);
        if (rootGoals.count(step.focusedGoalId)) continue;  // root: no parent

        // Latest introducing step wins (goal re-focus patterns).
        bool found = false;
        for (int i = j - 1; i >= 1 && !found; --i) {
            const auto& prior = record.steps[static_cast<std::size_t>(i - 1)];
            if (std::find(prior.childGoalIds.begin(), prior.childGoalIds.end(),
                          step.focusedGoalId) != prior.childGoalIds.end()) {
                tree.parentOf[j] = {i, false};
                found = true;
            } else if (spawnedAt[static_cast<std::size_t>(i)].count(step.focusedGoalId)) {
                tree.parentOf[j] = {i, true};
                found = true;
            }
        }
        if (!found)
            throw DataError("step " + std::to_string(j) + ": focuses goal '" + step.focusedGoalId +
                            "' that no prior step introduced and which is not a root goal");
    }

    for (const auto& [j, p] : tree.parentOf) tree.children[p.step].push_back(j);

    // Per spawned goal, the first step focusing it.
    for (int i = 1; i <= tree.stepCount; ++i) {
        for (const auto& g : spawnedAt[static_cast<std::size_t>(i)]) {
            int rootStep = 0;
            for (int j = i + 1; j <= tree.stepCount && rootStep == 0; ++j)
                if (tree.solvesGoal.at(j) == g && tree.parentOf.count(j) &&
                    tree.parentOf.at(j).step == i && tree.parentOf.at(j).spawned)
                    rootStep = j;
            if (rootStep == 0) {
                tree.warnings.push_back("spawned goal '" + g + "' from step " + std::to_string(i) +
                                        " is never focused (dangling); excluded from the tree");
                continue;
            }
            tree.spawnedRoots.push_back({i, rootStep, g});
        }
    }
    std::sort(tree.spawnedRoots.begin(), tree.spawnedRoots.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(a.spawningStep, a.rootStep) < std::tie(b.spawningStep, b.rootStep);
              });

    // Dangling children: introduced, never solved. Warn only.
    std::set<std::string> focused;
    for (const auto& [j, g] : tree.solvesGoal) focused.insert(g);
    for (const auto& s : record.steps)
        for (const auto& c : s.childGoalIds)
            if (!focused.count(c))
                tree.warnings.push_back("goal '" + c + "' introduced at step " +
                                        std::to_string(s.index) + " is never focused (dangling)");
    return tree;
}

int subtree_size(const ProofTree& tree, int rootStep) {
    int count = 0;
    std::vector<int> stack{rootStep};
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        ++count;
        if (auto it = tree.children.find(s); it != tree.children.end())
            stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
    return count;
}

std::string tree_to_dot(const ProofTree& tree, const TheoremRecord& record) {
    std::ostringstream out;
    out << "digraph proof {\n  rankdir=TB;\n  node [shape=box];\n";
    for (int i = 1; i <= tree.stepCount; ++i) {
        std::string label = record.steps[static_cast<std::size_t>(i - 1)].tacticText;
        std::string escaped;
        for (char c : label) {
            if (c == '"' || c == '\\') escaped.push_back('\\');
            if (c == '\n') {
                escaped += "\\n";
                continue;
            }
            escaped.push_back(c);
        }
        out << "  s" << i << " [label=\"" << i << ": " << escaped << "\"];\n";
    }
    for (const auto& [j, p] : tree.parentOf)
        out << "  s" << p.step << " -> s" << j << (p.spawned ? " [style=dashed];" : ";") << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace improver
