#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "improver/trace_model.hpp"

namespace improver {

enum class DeclKind { Theorem, Lemma, Definition, Structure, Class, Instance, Other };

const char* decl_kind_name(DeclKind kind);
std::optional<DeclKind> decl_kind_from_name(const std::string& name);

struct Declaration {
    std::string name;  // fully qualified
    DeclKind kind = DeclKind::Other;
    std::string module;
    std::string signatureText;
    std::optional<std::string> docComment;
    std::set<std::string> references;
};

struct LibraryIndex {
    std::map<std::string, Declaration> declarations;
    std::map<std::string, std::set<std::string>> importDag;  // module -> imports
};

struct SliceBudget {
    int maxDepth = 1;
    int maxItems = 64;
};

struct ContextSlice {
    std::vector<Declaration> items;  // sorted by (module, name)
    std::set<std::string> touchSet;
    SliceBudget budget;
};

inline constexpr const char* kIndexSchema = "improver2-index/1";

// Validated load; an import cycle or a declaration in an unknown module is
// a DataError naming the offender.
LibraryIndex load_index(const std::filesystem::path& path);

// Surface identifiers of statement + proof, filtered to names resolvable in
// the index. Unresolved names land in *unresolved when given.
std::set<std::string> touch_set(const TheoremRecord& record, const LibraryIndex& index,
                                std::set<std::string>* unresolved = nullptr);

// Entity-graph reachability from the touch set restricted by the import DAG
// under one shared hop budget: keep declarations whose entity hop and whose
// module's import distance are both ≤ maxDepth. Admission order is
// (max(entityHop, importDist), module, name) up to maxItems; touched
// declarations are always kept.
ContextSlice slice(const LibraryIndex& index, const std::set<std::string>& touch,
                   const SliceBudget& budget);

// Byte-deterministic <CONTEXT>/<ITEM> rendering (docs/index-format.md).
std::string serialize_slice(const ContextSlice& slice);

}  // namespace improver
