#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "improver/trace_model.hpp"

namespace improver {

// Deterministic bounded draws on top of mt19937_64 (rejection sampling).
// std::uniform_int_distribution is not byte-stable across standard
// libraries, and reruns must be byte-identical.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t next_below(std::uint64_t bound);  // uniform in [0, bound)

private:
    std::uint64_t state_[2];
    std::uint64_t next_u64();
};

enum class ReplayMode { Mark, Join, Replace };

const char* replay_mode_name(ReplayMode mode);
std::optional<ReplayMode> replay_mode_from_name(const std::string& name);

struct BufferConfig {
    double rho = 0.0;               // target replay proportion ρ
    ReplayMode mode = ReplayMode::Mark;
    double piMax = 1.0;             // improvement-rate cap π_max
    double gamma = 0.0;             // percentile γ
    int winners = 1;                // W
    int losers = 1;                 // L
    std::uint64_t seed = 0;

    void validate() const;  // ConfigError on out-of-range fields
};

enum class EntryTag { Frontier, Replay };

struct ProblemEntry {
    std::shared_ptr<const TheoremRecord> record;
    std::vector<CandidateProof> candidates;
    EntryTag tag = EntryTag::Frontier;
    double improvementRate = 0.0;  // π_T, recomputed from candidates
};

// Fraction of candidates that are verified AND strictly improving.
double improvement_rate(const ProblemEntry& entry);

struct ReservoirEntry {
    double bestPi = 0.0;
    int bestIteration = 0;
    std::shared_ptr<const TheoremRecord> record;  // slim: prompt fields only
    std::vector<CandidateProof> candidates;       // previous-iteration snapshot
};

struct Reservoir {
    int iteration = 0;  // shape runs completed
    std::map<std::string, ReservoirEntry> entries;
};

inline constexpr const char* kReservoirSchema = "improver2-reservoir/1";

Reservoir load_reservoir(const std::filesystem::path& path);  // missing file -> empty
void save_reservoir(const std::filesystem::path& path, const Reservoir& reservoir);

struct FilteredEntry {
    std::shared_ptr<const TheoremRecord> record;
    std::vector<CandidateProof> winners;
    std::vector<CandidateProof> losers;
    double threshold = 0.0;  // δ
};

enum class PairKind { WinnerWinner, WinnerLoser };

struct PreferencePair {
    std::string theoremName;
    std::string contextId;
    std::string statementText;
    std::string originalProofText;
    std::string chosen;
    std::string rejected;
    PairKind pairKind = PairKind::WinnerLoser;
    double chosenScore = 0.0;
    std::optional<double> rejectedScore;  // absent = unscoreable loser
};

// Tags entries replay/frontier so the replay fraction lands at ρ: eligible
// entries (present in the reservoir) become replay; overshoot demotes in
// descending π order (π > π_max first); undershoot replaces uniformly chosen
// frontier entries with reservoir items in descending bestPi order.
std::vector<ProblemEntry> mark_replay(const std::vector<ProblemEntry>& entries,
                                      const Reservoir& reservoir, const BufferConfig& config,
                                      std::vector<std::string>* warnings = nullptr);

// Candidate-level splice for replay entries: mark = unchanged, join = union
// deduplicated by whitespace-normalized proof text, replace = previous
// verbatim. Missing previous falls back to mark with a warning.
ProblemEntry merge_candidates(const ProblemEntry& current, const ProblemEntry* previous,
                              ReplayMode mode, std::vector<std::string>* warnings = nullptr);

// Drops entries with π > π_max, computes δ as the γ-th percentile (0-based
// nearest rank) of all scoreable candidates' scores, and partitions each
// surviving entry into winners (verified ∧ ŝ > δ) and losers.
std::vector<FilteredEntry> filter_dataset(const std::vector<ProblemEntry>& entries,
                                          const BufferConfig& config,
                                          std::vector<std::string>* warnings = nullptr);

// Winner dedup by equal score, loser dedup by string equality, seeded resize
// to exactly W/L, then winner-winner pairs for every strictly greater score
// and the full W×L winner-loser product.
std::vector<PreferencePair> create_pairs(const std::vector<FilteredEntry>& filtered,
                                         const BufferConfig& config);

struct ShapeResult {
    std::vector<PreferencePair> irpoDataset;
    Reservoir updatedReservoir;
    std::vector<ProblemEntry> replayDataset;  // post-merge, persisted for t+1
    std::vector<std::string> warnings;
};

ShapeResult shape_iteration(const std::vector<ProblemEntry>& newData, const Reservoir& reservoir,
                            const BufferConfig& config);

// Line-delimited persistence for pair and replay datasets.
std::string serialize_pair(const PreferencePair& pair);
void write_pair_file(const std::filesystem::path& path, const std::vector<PreferencePair>& pairs);
void write_replay_file(const std::filesystem::path& path, const std::vector<ProblemEntry>& entries);
std::vector<ProblemEntry> load_replay_file(const std::filesystem::path& path);

BufferConfig buffer_config_from_json_text(const std::string& text);

}  // namespace improver
