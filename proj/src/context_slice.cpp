#include "improver/context_slice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "improver/augment.hpp"
#include "improver/textutil.hpp"

namespace improver {

namespace {

using nlohmann::json;

constexpr int kUnreachable = std::numeric_limits<int>::max();

// One cycle through `start`, rendered "A -> B -> A".
std::string find_cycle(const std::map<std::string, std::set<std::string>>& dag) {
    std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
    std::vector<std::string> path;
    std::string cycle;

    std::function<bool(const std::string&)> dfs = [&](const std::string& m) -> bool {
        color[m] = 1;
        path.push_back(m);
        auto it = dag.find(m);
        if (it != dag.end()) {
            for (const auto& next : it->second) {
                if (!dag.count(next)) continue;
                if (color[next] == 1) {
                    std::ostringstream out;
                    auto from = std::find(path.begin(), path.end(), next);
                    for (auto p = from; p != path.end(); ++p) out << *p << " -> ";
                    out << next;
                    cycle = out.str();
                    return true;
                }
                if (color[next] == 0 && dfs(next)) return true;
            }
        }
        color[m] = 2;
        path.pop_back();
        return false;
    };

    for (const auto& [m, _] : dag)
        if (color[m] == 0 && dfs(m)) return cycle;
    return {};
}

// Multi-source BFS distances over string-keyed adjacency.
template <typename Neighbors>
std::map<std::string, int> bfs_distances(const std::set<std::string>& sources, Neighbors neighbors) {
    std::map<std::string, int> dist;
    std::deque<std::string> queue;
    for (const auto& s : sources) {
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        int d = dist[cur];
        for (const auto& next : neighbors(cur)) {
            if (dist.count(next)) continue;
            dist[next] = d + 1;
            queue.push_back(next);
        }
    }
    return dist;
}

}  // namespace

const char* decl_kind_name(DeclKind kind) {
    switch (kind) {
        case DeclKind::Theorem: return "theorem";
        case DeclKind::Lemma: return "lemma";
        case DeclKind::Definition: return "definition";
        case DeclKind::Structure: return "structure";
        case DeclKind::Class: return "class";
        case DeclKind::Instance: return "instance";
        case DeclKind::Other: return "other";
    }
    return "other";
}

std::optional<DeclKind> decl_kind_from_name(const std::string& name) {
    if (name == "theorem") return DeclKind::Theorem;
    if (name == "lemma") return DeclKind::Lemma;
    if (name == "definition") return DeclKind::Definition;
    if (name == "structure") return DeclKind::Structure;
    if (name == "class") return DeclKind::Class;
    if (name == "instance") return DeclKind::Instance;
    if (name == "other") return DeclKind::Other;
    return std::nullopt;
}

LibraryIndex load_index(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ParseError(path.string() + ": expected object");
    if (j.value("schema", "") != kIndexSchema)
        throw ParseError(path.string() + ": schema: expected '" + std::string(kIndexSchema) + "'");

    LibraryIndex index;
    const json& modules = j.contains("modules") ? j["modules"] : json::object();
    if (!modules.is_object()) throw ParseError(path.string() + ": modules: expected object");
    for (const auto& [mod, imports] : modules.items()) {
        if (!imports.is_array()) throw ParseError(path.string() + ": modules." + mod + ": expected array");
        auto& edges = index.importDag[mod];
        for (const auto& e : imports) edges.insert(e.get<std::string>());
    }

    if (auto cycle = find_cycle(index.importDag); !cycle.empty())
        throw DataError(path.string() + ": import cycle: " + cycle);

    const json& decls = j.contains("declarations") ? j["declarations"] : json::array();
    if (!decls.is_array()) throw ParseError(path.string() + ": declarations: expected array");
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const json& d = decls[i];
        const std::string where = path.string() + ": declarations[" + std::to_string(i) + "]";
        Declaration decl;
        decl.name = d.value("name", "");
        if (decl.name.empty()) throw ParseError(where + ".name: missing");
        auto kind = decl_kind_from_name(d.value("kind", ""));
        if (!kind) throw ParseError(where + ".kind: unknown kind '" + d.value("kind", "") + "'");
        decl.kind = *kind;
        decl.module = d.value("module", "");
        if (!index.importDag.count(decl.module))
            throw DataError(where + ": declaration '" + decl.name + "' names unknown module '" +
                            decl.module + "'");
        decl.signatureText = d.value("signature", "");
        if (d.contains("doc") && !d["doc"].is_null()) decl.docComment = d["doc"].get<std::string>();
        if (d.contains("references"))
            for (const auto& r : d["references"]) decl.references.insert(r.get<std::string>());
        if (!index.declarations.emplace(decl.name, std::move(decl)).second)
            throw DataError(where + ": duplicate declaration name");
    }
    return index;
}

std::set<std::string> touch_set(const TheoremRecord& record, const LibraryIndex& index,
                                std::set<std::string>* unresolved) {
    std::set<std::string> harvested = record.statementRefNames;
    for (const auto& s : record.steps)
        harvested.insert(s.referencedDeclNames.begin(), s.referencedDeclNames.end());

    std::set<std::string> out;
    for (const auto& name : harvested) {
        if (index.declarations.count(name))
            out.insert(name);
        else if (unresolved)
            unresolved->insert(name);
    }
    return out;
}

ContextSlice slice(const LibraryIndex& index, const std::set<std::string>& touch,
                   const SliceBudget& budget) {
    ContextSlice out;
    out.touchSet = touch;
    out.budget = budget;

    std::set<std::string> touched;
    std::set<std::string> touchedModules;
    for (const auto& name : touch) {
        auto it = index.declarations.find(name);
        if (it == index.declarations.end()) continue;
        touched.insert(name);
        touchedModules.insert(it->second.module);
    }
    if (touched.empty()) return out;

    auto entityDist = bfs_distances(touched, [&index](const std::string& name) {
        std::vector<std::string> next;
        auto it = index.declarations.find(name);
        if (it != index.declarations.end())
            for (const auto& r : it->second.references)
                if (index.declarations.count(r)) next.push_back(r);
        return next;
    });
    auto importDist = bfs_distances(touchedModules, [&index](const std::string& mod) {
        std::vector<std::string> next;
        auto it = index.importDag.find(mod);
        if (it != index.importDag.end())
            for (const auto& m : it->second)
                if (index.importDag.count(m)) next.push_back(m);
        return next;
    });

    // Shared hop budget: reachability in the entity graph and in the import
    // DAG must both fit. Cost ordering keeps slices monotone in both budget
    // dimensions under the item cap.
    struct Ranked {
        int cost;
        const Declaration* decl;
    };
    std::vector<Ranked> ranked;
    for (const auto& [name, hop] : entityDist) {
        const Declaration& d = index.declarations.at(name);
        auto mit = importDist.find(d.module);
        int modDist = mit == importDist.end() ? kUnreachable : mit->second;
        if (hop > budget.maxDepth || modDist > budget.maxDepth) continue;
        ranked.push_back({std::max(hop, modDist), &d});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        return std::tie(a.cost, a.decl->module, a.decl->name) <
               std::tie(b.cost, b.decl->module, b.decl->name);
    });

    // Truncate by admission order; never drop a touched declaration.
    const std::size_t cap = std::max<std::size_t>(static_cast<std::size_t>(budget.maxItems),
                                                  touched.size());
    for (const auto& r : ranked) {
        if (out.items.size() >= cap) break;
        out.items.push_back(*r.decl);
    }

    std::sort(out.items.begin(), out.items.end(), [](const Declaration& a, const Declaration& b) {
        return std::tie(a.module, a.name) < std::tie(b.module, b.name);
    });
    return out;
}

std::string serialize_slice(const ContextSlice& slice) {
    if (slice.items.empty()) return "<CONTEXT></CONTEXT>";
    std::ostringstream out;
    out << "<CONTEXT>\n";
    for (const auto& d : slice.items) {
        out << "<ITEM>\n";
        out << "kind: " << decl_kind_name(d.kind) << "\n";
        out << "name: " << escape_payload(d.name) << "\n";
        if (d.docComment) out << "/-- " << escape_payload(*d.docComment) << " -/\n";
        out << escape_payload(d.signatureText) << "\n";
        out << "</ITEM>\n";
    }
    out << "</CONTEXT>";
    return out.str();
}

}  // namespace improver
