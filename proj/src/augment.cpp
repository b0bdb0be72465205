#include "improver/augment.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>

#include "improver/term_canon.hpp"
#include "improver/textutil.hpp"

namespace improver {

namespace {

constexpr std::array<std::string_view, 10> kProtocolTags = {
    "FORMAL", "CURRENT", "ANNOTATED", "IMPROVED", "STATEMENT",
    "PROOF",  "CONTEXT", "ITEM",      "EXAMPLES", "INFORMAL"};

// True when text[pos] starts an open or close protocol tag body
// ("TAG>" or "/TAG>").
bool tag_follows(std::string_view text, std::size_t pos) {
    std::string_view rest = text.substr(pos);
    if (!rest.empty() && rest.front() == '/') rest.remove_prefix(1);
    for (auto tag : kProtocolTags)
        if (rest.size() > tag.size() && rest.compare(0, tag.size(), tag) == 0 &&
            rest[tag.size()] == '>')
            return true;
    return false;
}

bool entity_follows(std::string_view text, std::size_t pos) {
    std::string_view rest = text.substr(pos);
    return rest.starts_with("lt;") || rest.starts_with("amp;");
}

}  // namespace

std::string escape_payload(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '<' && tag_follows(text, i + 1))
            out += "&lt;";
        else if (c == '&' && entity_follows(text, i + 1))
            out += "&amp;";
        else
            out.push_back(c);
    }
    return out;
}

std::string unescape_payload(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 4, "&lt;") == 0 && tag_follows(text, i + 4)) {
            out.push_back('<');
            i += 4;
        } else if (text.compare(i, 5, "&amp;") == 0 && entity_follows(text, i + 5)) {
            out.push_back('&');
            i += 5;
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    auto strip_trailing_newline = [](std::string s) {
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
        return s;
    };
    PromptLibrary lib;
    lib.length = strip_trailing_newline(read_file(dir / "length.txt"));
    lib.modularity = strip_trailing_newline(read_file(dir / "modularity.txt"));
    lib.dependency = strip_trailing_newline(read_file(dir / "dependency.txt"));
    lib.annotation = strip_trailing_newline(read_file(dir / "annotation.txt"));
    lib.context = strip_trailing_newline(read_file(dir / "context.txt"));
    lib.examples = strip_trailing_newline(read_file(dir / "examples.txt"));
    lib.informalize = strip_trailing_newline(read_file(dir / "informalize.txt"));
    return lib;
}

const std::string& PromptLibrary::metric_prompt(MetricKind kind) const {
    switch (kind) {
        case MetricKind::Length: return length;
        case MetricKind::Dependencies: return dependency;
        case MetricKind::Modularity: return modularity;
    }
    return length;
}

std::string render_term(const Term& term) {
    std::vector<std::string> binders;

    std::function<std::string(const Term&, bool)> go = [&](const Term& t, bool atom) -> std::string {
        auto paren = [atom](std::string s) { return atom ? "(" + std::move(s) + ")" : std::move(s); };
        switch (t.kind) {
            case Term::Kind::Const:
            case Term::Kind::FreeVar:
                return t.name;
            case Term::Kind::Meta:
                return "?" + t.name;
            case Term::Kind::Sort:
                return t.name.empty() ? "Sort" : "Sort " + t.name;
            case Term::Kind::BoundVar: {
                int pos = static_cast<int>(binders.size()) - 1 - t.index;
                if (pos < 0) return "#" + std::to_string(t.index);
                return binders[static_cast<std::size_t>(pos)];
            }
            case Term::Kind::App: {
                std::string s = go(*t.fn, t.fn->kind == Term::Kind::Lambda ||
                                              t.fn->kind == Term::Kind::Forall);
                for (const auto& a : t.args) {
                    s += ' ';
                    s += go(*a, a->kind == Term::Kind::App || a->kind == Term::Kind::Lambda ||
                                    a->kind == Term::Kind::Forall);
                }
                return paren(std::move(s));
            }
            case Term::Kind::Lambda: {
                std::string type = go(*t.binderType, false);
                binders.push_back(t.name);
                std::string body = go(*t.body, false);
                binders.pop_back();
                return paren("fun " + t.name + " : " + type + " => " + body);
            }
            case Term::Kind::Forall: {
                // Left operand of a right-associative arrow needs parens.
                std::string type = go(*t.binderType, t.binderType->kind == Term::Kind::Forall &&
                                                        !body_uses_binder(*t.body));
                binders.push_back(t.name);
                std::string body = go(*t.body, false);
                binders.pop_back();
                if (!body_uses_binder(*t.body)) return paren(type + " → " + body);
                return paren("∀ " + t.name + " : " + type + ", " + body);
            }
        }
        return {};
    };
    return go(term, false);
}

std::string render_goal(const Goal& goal) {
    std::string out;
    for (std::size_t i = 0; i < goal.hypotheses.size(); ++i) {
        if (i) out += ", ";
        out += goal.hypotheses[i].name + " : " + render_term(*goal.hypotheses[i].type);
    }
    if (!out.empty()) out += ' ';
    out += "⊢ " + render_term(*goal.target);
    return out;
}

std::string annotate_cos(const TheoremRecord& record) {
    const std::string& text = record.originalProofText;

    struct Insertion {
        std::size_t pos;
        std::string block;
    };
    std::vector<Insertion> insertions;

    for (const auto& step : record.steps) {
        if (!step.span || step.span->first > text.size())
            throw DataError("annotate: step " + std::to_string(step.index) +
                            ": source span missing or out of range");
        // Back up to the start of the tactic's line; reuse its indentation.
        std::size_t lineStart = text.rfind('\n', step.span->first == 0 ? 0 : step.span->first - 1);
        lineStart = lineStart == std::string::npos ? 0 : lineStart + 1;
        std::size_t indentEnd = lineStart;
        while (indentEnd < text.size() && (text[indentEnd] == ' ' || text[indentEnd] == '\t'))
            ++indentEnd;
        const std::string indent = text.substr(lineStart, indentEnd - lineStart);

        std::ostringstream block;
        block << indent << "/- goals:\n";
        for (const auto& goalId : step.goalsBefore)
            block << indent << "   " << render_goal(record.goals.at(goalId)) << "\n";
        block << indent << "-/\n";
        insertions.push_back({lineStart, block.str()});
    }

    std::sort(insertions.begin(), insertions.end(),
              [](const Insertion& a, const Insertion& b) { return a.pos < b.pos; });

    std::string out;
    out.reserve(text.size() + insertions.size() * 32);
    std::size_t cursor = 0;
    for (const auto& ins : insertions) {
        out.append(text, cursor, ins.pos - cursor);
        out += ins.block;
        cursor = ins.pos;
    }
    out.append(text, cursor, text.size() - cursor);

    if (!out.empty() && out.back() == '\n')
        out += "/- goals: none -/\n";
    else
        out += "\n/- goals: none -/";
    return out;
}

std::string strip_cos_annotations(const std::string& annotated) {
    std::string text = annotated;

    // The trailing comment comes in exactly two shapes (see annotate_cos).
    const std::string withNl = "/- goals: none -/\n";
    const std::string bare = "\n/- goals: none -/";
    if (text.size() >= withNl.size() && text.compare(text.size() - withNl.size(), withNl.size(), withNl) == 0)
        text.erase(text.size() - withNl.size());
    else if (text.size() >= bare.size() && text.compare(text.size() - bare.size(), bare.size(), bare) == 0)
        text.erase(text.size() - bare.size());

    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t lineEnd = text.find('\n', i);
        std::size_t next = lineEnd == std::string::npos ? text.size() : lineEnd + 1;
        std::string_view line(text.data() + i, (lineEnd == std::string::npos ? text.size() : lineEnd) - i);
        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        if (trimmed.starts_with("/- goals:")) {
            // Skip to the closing "-/" line (single-line blocks close here too).
            while (!trimmed.ends_with("-/") && next < text.size()) {
                i = next;
                lineEnd = text.find('\n', i);
                next = lineEnd == std::string::npos ? text.size() : lineEnd + 1;
                trimmed = std::string_view(text.data() + i,
                                           (lineEnd == std::string::npos ? text.size() : lineEnd) - i);
                while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
                    trimmed.remove_prefix(1);
            }
            i = next;
            continue;
        }
        out.append(text, i, next - i);
        i = next;
    }
    return out;
}

std::string build_informalization_prompt(const TheoremRecord& record, const PromptLibrary& prompts) {
    const std::string annotated = annotate_cos(record);
    const std::string formal = escape_payload(record.statementText + " " + annotated);
    const std::string placeholder = "{{FORMAL}}";
    std::string out = prompts.informalize;
    auto pos = out.find(placeholder);
    if (pos == std::string::npos)
        throw ConfigError("informalize prompt template lacks the {{FORMAL}} slot");
    out.replace(pos, placeholder.size(), formal);
    return out;
}

namespace {

std::optional<std::string> last_tag_block(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    auto start = text.rfind(open);
    if (start == std::string::npos) return std::nullopt;
    auto bodyStart = start + open.size();
    auto end = text.find(close, bodyStart);
    if (end == std::string::npos) return std::nullopt;
    return text.substr(bodyStart, end - bodyStart);
}

std::string strip_blank_and_fences(const std::string& body) {
    std::vector<std::string_view> lines;
    std::size_t i = 0;
    while (i <= body.size()) {
        std::size_t e = body.find('\n', i);
        if (e == std::string::npos) {
            lines.emplace_back(body.data() + i, body.size() - i);
            break;
        }
        lines.emplace_back(body.data() + i, e - i);
        i = e + 1;
    }
    auto blank = [](std::string_view l) {
        return l.find_first_not_of(" \t\r") == std::string_view::npos;
    };
    std::size_t lo = 0, hi = lines.size();
    while (lo < hi && blank(lines[lo])) ++lo;
    while (hi > lo && blank(lines[hi - 1])) --hi;
    auto fence = [](std::string_view l) {
        while (!l.empty() && (l.front() == ' ' || l.front() == '\t')) l.remove_prefix(1);
        return l.starts_with("```");
    };
    if (lo < hi && fence(lines[lo])) {
        ++lo;
        while (lo < hi && blank(lines[lo])) ++lo;
    }
    if (hi > lo && fence(lines[hi - 1])) {
        --hi;
        while (hi > lo && blank(lines[hi - 1])) --hi;
    }
    std::string out;
    for (std::size_t k = lo; k < hi; ++k) {
        out.append(lines[k]);
        if (k + 1 < hi) out.push_back('\n');
    }
    return out;
}

}  // namespace

std::pair<std::string, std::string> parse_informal_response(const std::string& text) {
    auto statement = last_tag_block(text, "STATEMENT");
    if (!statement) throw DataError("informal response has no <STATEMENT> block");
    auto proof = last_tag_block(text, "PROOF");
    return {unescape_payload(*statement), proof ? unescape_payload(*proof) : std::string{}};
}

std::optional<std::string> parse_candidate_response(const std::string& text) {
    auto body = last_tag_block(text, "IMPROVED");
    if (!body) return std::nullopt;
    return unescape_payload(strip_blank_and_fences(*body));
}

PromptBundle build_prompt(MetricKind kind, const TheoremRecord& record, const ContextSlice* slice,
                          const std::string* examplesText, AugmentFlags flags,
                          const PromptLibrary& prompts) {
    PromptBundle bundle;
    bundle.metric = kind;
    bundle.systemText = prompts.metric_prompt(kind);
    bundle.currentBlock = "<CURRENT>\n" +
                          escape_payload(record.statementText + " " + record.originalProofText) +
                          "\n</CURRENT>";

    if (flags.cos)
        bundle.annotatedBlock = prompts.annotation + "\n<ANNOTATED>\n" +
                                escape_payload(record.statementText + " " + annotate_cos(record)) +
                                "\n</ANNOTATED>";
    if (flags.context) {
        if (!slice) throw ConfigError("context augmentation toggled but no slice provided");
        bundle.contextBlock = prompts.context + "\n" + serialize_slice(*slice);
    }
    if (flags.examples) {
        if (!examplesText) throw ConfigError("examples augmentation toggled but no examples file provided");
        bundle.examplesBlock = prompts.examples + "\n<EXAMPLES>\n" + *examplesText + "\n</EXAMPLES>";
    }
    if (flags.informal) {
        if (!record.informalStatement || !record.informalProof)
            throw ConfigError("informal augmentation toggled but record '" + record.theoremName +
                              "' has no informalization");
        bundle.informalBlock = "<INFORMAL>\n<STATEMENT>" + escape_payload(*record.informalStatement) +
                               "</STATEMENT>\n<PROOF>" + escape_payload(*record.informalProof) +
                               "</PROOF>\n</INFORMAL>";
    }
    return bundle;
}

std::string render_prompt(const PromptBundle& bundle) {
    std::string out = bundle.systemText + "\n\n" + bundle.currentBlock;
    for (const auto* block :
         {&bundle.annotatedBlock, &bundle.contextBlock, &bundle.examplesBlock, &bundle.informalBlock})
        if (*block) out += "\n\n" + **block;
    return out;
}

}  // namespace improver
