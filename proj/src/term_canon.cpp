#include "improver/term_canon.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace improver {

namespace {

void put_varint(std::string& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7F) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

void put_string(std::string& out, const std::string& s) {
    put_varint(out, s.size());
    out.append(s);
}

// Free variables and metavariables share one counter but live in distinct
// key spaces.
using VarNumbering = std::map<std::pair<char, std::string>, std::uint64_t>;

void emit(const Term& t, std::string& out, VarNumbering& vars) {
    switch (t.kind) {
        case Term::Kind::Const:
            out.push_back('C');
            put_string(out, t.name);
            break;
        case Term::Kind::BoundVar:
            out.push_back('B');
            put_varint(out, static_cast<std::uint64_t>(t.index));
            break;
        case Term::Kind::FreeVar:
        case Term::Kind::Meta: {
            const char space = t.kind == Term::Kind::FreeVar ? 'f' : 'm';
            auto [it, inserted] = vars.try_emplace({space, t.name}, vars.size());
            out.push_back('F');
            put_varint(out, it->second);
            (void)inserted;
            break;
        }
        case Term::Kind::Sort:
            out.push_back('S');
            put_string(out, t.name);
            break;
        case Term::Kind::App:
            out.push_back('A');
            put_varint(out, t.args.size());
            emit(*t.fn, out, vars);
            for (const auto& a : t.args) emit(*a, out, vars);
            break;
        case Term::Kind::Lambda:
            out.push_back('L');
            emit(*t.binderType, out, vars);
            emit(*t.body, out, vars);
            break;
        case Term::Kind::Forall:
            out.push_back('P');
            emit(*t.binderType, out, vars);
            emit(*t.body, out, vars);
            break;
    }
}

bool uses_index(const Term& t, int depth) {
    switch (t.kind) {
        case Term::Kind::BoundVar:
            return t.index == depth;
        case Term::Kind::App:
            if (uses_index(*t.fn, depth)) return true;
            for (const auto& a : t.args)
                if (uses_index(*a, depth)) return true;
            return false;
        case Term::Kind::Lambda:
        case Term::Kind::Forall:
            return uses_index(*t.binderType, depth) || uses_index(*t.body, depth + 1);
        default:
            return false;
    }
}

TermPtr subst(const TermPtr& t, int depth, const TermPtr& replacement) {
    switch (t->kind) {
        case Term::Kind::BoundVar:
            if (t->index == depth) return replacement;
            if (t->index > depth) return Term::bvar(t->index - 1);
            return t;
        case Term::Kind::App: {
            std::vector<TermPtr> args;
            args.reserve(t->args.size());
            for (const auto& a : t->args) args.push_back(subst(a, depth, replacement));
            return Term::app(subst(t->fn, depth, replacement), std::move(args));
        }
        case Term::Kind::Lambda:
            return Term::lambda(t->name, subst(t->binderType, depth, replacement),
                                subst(t->body, depth + 1, replacement));
        case Term::Kind::Forall:
            return Term::forall(t->name, subst(t->binderType, depth, replacement),
                                subst(t->body, depth + 1, replacement));
        default:
            return t;
    }
}

Digest128 sequent_digest(const std::vector<Digest128>& sortedHyps, const Digest128& target) {
    std::string buf;
    buf.push_back('Q');
    put_varint(buf, sortedHyps.size());
    auto putDigest = [&buf](const Digest128& d) {
        for (int shift = 56; shift >= 0; shift -= 8) buf.push_back(static_cast<char>((d.h1 >> shift) & 0xFF));
        for (int shift = 56; shift >= 0; shift -= 8) buf.push_back(static_cast<char>((d.h2 >> shift) & 0xFF));
    };
    for (const auto& h : sortedHyps) putDigest(h);
    putDigest(target);
    return hash_canonical(buf);
}

}  // namespace

std::string canonicalize(const Term& term) {
    std::string out;
    VarNumbering vars;
    emit(term, out, vars);
    return out;
}

Digest128 hash_canonical(std::string_view bytes) { return hash_bytes(bytes); }

bool body_uses_binder(const Term& body) { return uses_index(body, 0); }

TermPtr instantiate_binder(const TermPtr& body, const TermPtr& replacement) {
    return subst(body, 0, replacement);
}

CanonicalGoal canonical_goal(const Goal& goal) {
    CanonicalGoal out;
    out.baseTargetHash = hash_term(*goal.target);

    std::vector<Digest128> hyps;
    for (const auto& h : goal.hypotheses)
        if (h.proofRelevant) hyps.push_back(hash_term(*h.type));
    std::sort(hyps.begin(), hyps.end());
    out.hypTypeHashes = hyps;

    // Stage 0, then progressive discharge of ∀-binders and implications into
    // the hypothesis multiset. Target-only variants follow the dependent
    // prefix only: an ∀-wrapped parent target must collide with the parent,
    // a genuine `A → parent-target` reduction must not.
    TermPtr target = goal.target;
    out.sequentVariantHashes.insert(sequent_digest(hyps, out.baseTargetHash));
    out.targetVariantHashes.insert(out.baseTargetHash);

    bool dependentPrefix = true;
    for (int stage = 0; stage < kMaxDischargeStages && target->kind == Term::Kind::Forall; ++stage) {
        const bool dependent = body_uses_binder(*target->body);
        Digest128 antecedent = hash_term(*target->binderType);
        hyps.insert(std::upper_bound(hyps.begin(), hyps.end(), antecedent), antecedent);
        target = instantiate_binder(target->body, Term::fvar("#d" + std::to_string(stage)));
        const Digest128 targetHash = hash_term(*target);
        out.sequentVariantHashes.insert(sequent_digest(hyps, targetHash));
        if (dependentPrefix && dependent)
            out.targetVariantHashes.insert(targetHash);
        else
            dependentPrefix = false;
    }
    return out;
}

}  // namespace improver
