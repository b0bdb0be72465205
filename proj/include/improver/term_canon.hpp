#pragma once

#include <set>
#include <string>
#include <vector>

#include "improver/digest.hpp"
#include "improver/trace_model.hpp"

namespace improver {

// Canonical hash bundle for one goal. Sequent variants drive duplicate
// detection; target variants drive wrapper detection.
struct CanonicalGoal {
    Digest128 baseTargetHash;
    std::vector<Digest128> hypTypeHashes;  // sorted; proof-relevant hyps only
    std::set<Digest128> sequentVariantHashes;
    std::set<Digest128> targetVariantHashes;
};

// Deterministic byte serialization: binder names erased (pure de Bruijn),
// free variables and metavariables renumbered by first occurrence in
// pre-order. Grammar in docs/canonical-form.md.
std::string canonicalize(const Term& term);

// Fixed 128-bit hash of the canonical bytes (MurmurHash3 x64 128, seed 0).
Digest128 hash_canonical(std::string_view bytes);

inline Digest128 hash_term(const Term& term) { return hash_canonical(canonicalize(term)); }

// Discharge loop bound; deeper ∀-telescopes truncate.
inline constexpr int kMaxDischargeStages = 64;

CanonicalGoal canonical_goal(const Goal& goal);

// True when the body references the binder (BoundVar 0 at depth 0); a
// non-dependent forall is an implication.
bool body_uses_binder(const Term& body);

// body with the outermost binder's variable replaced by `replacement`
// (a closed term); deeper indices shift down.
TermPtr instantiate_binder(const TermPtr& body, const TermPtr& replacement);

}  // namespace improver
