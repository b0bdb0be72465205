#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "improver/context_slice.hpp"
#include "improver/metrics.hpp"
#include "improver/trace_model.hpp"

namespace improver {

// Protocol-tag escaping for payload text embedded in tag-framed prompts
// (scheme in docs/adapter-protocol.md). unescape_payload(escape_payload(s))
// is the identity for every s.
std::string escape_payload(std::string_view text);
std::string unescape_payload(std::string_view text);

// The shipped prompt texts, loaded from a prompts/ directory with stable
// file names (length.txt, modularity.txt, dependency.txt, annotation.txt,
// context.txt, examples.txt, informalize.txt).
struct PromptLibrary {
    std::string length;
    std::string modularity;
    std::string dependency;
    std::string annotation;
    std::string context;
    std::string examples;
    std::string informalize;

    static PromptLibrary load(const std::filesystem::path& dir);
    const std::string& metric_prompt(MetricKind kind) const;
};

// Assembled generation prompt. currentBlock is always present; the optional
// blocks carry their instruction text and concatenate in field order.
struct PromptBundle {
    MetricKind metric = MetricKind::Length;
    std::string systemText;
    std::string currentBlock;
    std::optional<std::string> annotatedBlock;
    std::optional<std::string> contextBlock;
    std::optional<std::string> examplesBlock;
    std::optional<std::string> informalBlock;
};

struct AugmentFlags {
    bool cos = false;
    bool context = false;
    bool examples = false;
    bool informal = false;
};

// Chain-of-states annotation: the original proof text with a
// `/- goals: ... -/` block before each tactic's line and a trailing
// `/- goals: none -/`, exactly stepCount + 1 comments. Steps must carry
// byte spans. strip_cos_annotations recovers the input byte-exactly.
std::string annotate_cos(const TheoremRecord& record);
std::string strip_cos_annotations(const std::string& annotated);

// Fixed rendering used inside goal comments (docs/canonical-form.md).
std::string render_term(const Term& term);
std::string render_goal(const Goal& goal);

std::string build_informalization_prompt(const TheoremRecord& record, const PromptLibrary& prompts);

// Last <STATEMENT> and last <PROOF> blocks; missing <STATEMENT> is a
// DataError (the response is discarded upstream).
std::pair<std::string, std::string> parse_informal_response(const std::string& text);

// Content of the last <IMPROVED> block, stripped of surrounding blank lines
// and code-fence markers; nullopt when no block exists (candidate counts as
// non-compiling).
std::optional<std::string> parse_candidate_response(const std::string& text);

PromptBundle build_prompt(MetricKind kind, const TheoremRecord& record, const ContextSlice* slice,
                          const std::string* examplesText, AugmentFlags flags,
                          const PromptLibrary& prompts);

std::string render_prompt(const PromptBundle& bundle);

}  // namespace improver
