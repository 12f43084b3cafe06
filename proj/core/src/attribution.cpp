#include "honeygrid/attribution.hpp"

#include <algorithm>
#include <unordered_set>

#include "honeygrid/error.hpp"
#include "json_util.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

/// Sender sightings per token, with timestamps kept sorted so a
/// windowed lookup can binary-search for a close-enough arrival.
class SenderIndex {
  public:
    void add(std::size_t token_ordinal, const std::string& sender, UtcSeconds at) {
        sightings_[key(token_ordinal, sender)].push_back(at);
    }

    void finalize() {
        for (auto& [k, times] : sightings_) std::sort(times.begin(), times.end());
    }

    bool seen(std::size_t token_ordinal, const std::string& sender) const {
        return sightings_.count(key(token_ordinal, sender)) != 0;
    }

    bool seen_within(std::size_t token_ordinal, const std::string& sender, UtcSeconds at,
                     std::int64_t window_seconds) const {
        auto it = sightings_.find(key(token_ordinal, sender));
        if (it == sightings_.end()) return false;
        const std::vector<UtcSeconds>& times = it->second;
        auto lo = std::lower_bound(times.begin(), times.end(),
                                   at - std::chrono::seconds(window_seconds));
        return lo != times.end() && *lo <= at + std::chrono::seconds(window_seconds);
    }

  private:
    static std::string key(std::size_t token_ordinal, const std::string& sender) {
        return std::to_string(token_ordinal) + '\n' + sender;
    }

    std::unordered_map<std::string, std::vector<UtcSeconds>> sightings_;
};

std::unordered_map<std::string, std::size_t> token_ordinals_by_address(
    const FrameworkLayout& layout) {
    std::unordered_map<std::string, std::size_t> map;
    for (std::size_t i = 0; i < layout.tokens.size(); ++i) {
        map.emplace(layout.tokens[i].address, i);
    }
    return map;
}

std::size_t require_token(const std::unordered_map<std::string, std::size_t>& by_address,
                          const EmailRecord& email) {
    auto it = by_address.find(email.recipient);
    if (it == by_address.end()) {
        fail("unknown-recipient", "recipient '" + email.recipient +
                                      "' is not a layout token; route it to control first");
    }
    return it->second;
}

std::vector<AttributionOutcome> attribute_array(
    const FrameworkLayout& layout, const std::vector<EmailRecord>& monitored,
    const std::unordered_map<std::string, std::size_t>& by_address) {
    std::unordered_map<std::size_t, std::size_t> app_at_token;
    for (std::size_t k = 0; k < layout.assignment.size(); ++k) {
        app_at_token.emplace(layout.assignment[k][0], k);
    }

    std::vector<AttributionOutcome> outcomes;
    outcomes.reserve(monitored.size());
    for (const EmailRecord& email : monitored) {
        std::size_t ordinal = require_token(by_address, email);
        AttributionOutcome out;
        out.email_ref = email.ref;
        out.basis = Basis::ArrayDirect;
        if (auto it = app_at_token.find(ordinal); it != app_at_token.end()) {
            out.verdict = Verdict::Attributed;
            out.app_id = layout.app_ids[it->second];
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

} // namespace

std::string sender_identity(const EmailRecord& email) {
    if (!email.from_addr.empty()) return email.from_addr;
    return extract_address(email.reply_to);
}

std::vector<AttributionOutcome> attribute(const FrameworkLayout& layout,
                                          const std::vector<EmailRecord>& monitored,
                                          const AttributionConfig& config) {
    auto by_address = token_ordinals_by_address(layout);
    if (layout.kind == LayoutKind::Array) {
        return attribute_array(layout, monitored, by_address);
    }

    SenderIndex index;
    for (const EmailRecord& email : monitored) {
        index.add(require_token(by_address, email), sender_identity(email), email.timestamp);
    }
    index.finalize();

    // Apps sharing a coordinate, per (axis, index): these are the only
    // candidates for an email arriving on that token.
    std::vector<std::vector<std::size_t>> app_coords(layout.assignment.size());
    std::vector<std::vector<std::vector<std::size_t>>> apps_on_line(layout.axes());
    for (std::size_t axis = 0; axis < layout.axes(); ++axis) {
        apps_on_line[axis].resize(layout.dims[axis]);
    }
    for (std::size_t k = 0; k < layout.assignment.size(); ++k) {
        app_coords[k] = layout.coords_of(k);
        for (std::size_t axis = 0; axis < layout.axes(); ++axis) {
            apps_on_line[axis][app_coords[k][axis]].push_back(k);
        }
    }

    auto candidates_for = [&](std::size_t axis, std::size_t idx, const std::string& sender,
                              UtcSeconds at) {
        std::vector<std::size_t> hits;
        for (std::size_t k : apps_on_line[axis][idx]) {
            bool consistent = true;
            for (std::size_t other = 0; other < layout.axes() && consistent; ++other) {
                if (other == axis) continue;
                std::size_t token = layout.token_ordinal(other, app_coords[k][other]);
                consistent = config.pairing_window_seconds
                                 ? index.seen_within(token, sender, at,
                                                     *config.pairing_window_seconds)
                                 : index.seen(token, sender);
            }
            if (consistent) hits.push_back(k);
        }
        return hits;
    };

    // Without a time window the verdict depends only on (token, sender),
    // so repeat pairs reuse the first computation.
    std::unordered_map<std::string, std::vector<std::size_t>> cache;

    std::vector<AttributionOutcome> outcomes;
    outcomes.reserve(monitored.size());
    for (const EmailRecord& email : monitored) {
        std::size_t ordinal = by_address.at(email.recipient);
        const Honeytoken& token = layout.tokens[ordinal];
        std::string sender = sender_identity(email);

        std::vector<std::size_t> hits;
        if (config.pairing_window_seconds) {
            hits = candidates_for(token.axis, token.index, sender, email.timestamp);
        } else {
            std::string key = std::to_string(ordinal) + '\n' + sender;
            auto it = cache.find(key);
            if (it == cache.end()) {
                it = cache.emplace(key, candidates_for(token.axis, token.index, sender,
                                                       email.timestamp))
                         .first;
            }
            hits = it->second;
        }

        AttributionOutcome out;
        out.email_ref = email.ref;
        out.basis = Basis::SenderPairing;
        if (hits.size() == 1) {
            out.verdict = Verdict::Attributed;
            out.app_id = layout.app_ids[hits[0]];
        } else if (hits.size() >= 2) {
            out.verdict = Verdict::Conflicting;
            for (std::size_t k : hits) out.candidates.push_back(layout.app_ids[k]);
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

namespace {

std::unordered_map<std::size_t, const EmailRecord*> emails_by_ref(
    const std::vector<EmailRecord>& monitored) {
    std::unordered_map<std::size_t, const EmailRecord*> map;
    for (const EmailRecord& email : monitored) map.emplace(email.ref, &email);
    return map;
}

const EmailRecord& require_email(
    const std::unordered_map<std::size_t, const EmailRecord*>& by_ref, std::size_t ref) {
    auto it = by_ref.find(ref);
    if (it == by_ref.end()) {
        fail("invalid-argument", "outcome references email ref " + std::to_string(ref) +
                                     " which is not in the corpus");
    }
    return *it->second;
}

} // namespace

ResolutionResult resolve_unattributed(
    const FrameworkLayout& layout,
    const std::vector<EmailRecord>& monitored,
    const std::vector<AttributionOutcome>& unattributed,
    const std::unordered_map<std::string, std::string>& oracle_map,
    const std::vector<App>& apps) {
    auto by_ref = emails_by_ref(monitored);
    auto by_address = token_ordinals_by_address(layout);

    std::unordered_map<std::string, std::size_t> app_ordinal;
    for (std::size_t i = 0; i < apps.size(); ++i) app_ordinal.emplace(apps[i].id, i);
    std::vector<KeywordSet> keyword_sets = generate_keyword_sets(apps);

    std::unordered_map<std::size_t, std::vector<std::size_t>> apps_at_token;
    for (std::size_t k = 0; k < layout.assignment.size(); ++k) {
        for (std::size_t ordinal : layout.assignment[k]) {
            auto it = app_ordinal.find(layout.app_ids[k]);
            if (it != app_ordinal.end()) apps_at_token[ordinal].push_back(it->second);
        }
    }

    ResolutionResult result;
    for (const AttributionOutcome& original : unattributed) {
        if (original.verdict != Verdict::Unattributed) continue;
        const EmailRecord& email = require_email(by_ref, original.email_ref);

        AttributionOutcome out;
        out.email_ref = original.email_ref;

        std::string sender = sender_identity(email);
        if (auto it = oracle_map.find(sender); it != oracle_map.end()) {
            out.verdict = Verdict::Attributed;
            out.basis = Basis::OracleMap;
            out.app_id = it->second;
            result.resolved.push_back(std::move(out));
            continue;
        }

        std::vector<std::size_t> recognized;
        if (auto tok = by_address.find(email.recipient); tok != by_address.end()) {
            if (auto owners = apps_at_token.find(tok->second); owners != apps_at_token.end()) {
                for (std::size_t a : owners->second) {
                    if (classify_email(email, keyword_sets[a]).recognized) {
                        recognized.push_back(a);
                    }
                }
            }
        }
        if (recognized.size() == 1) {
            out.verdict = Verdict::Attributed;
            out.basis = Basis::KeywordMatch;
            out.app_id = apps[recognized[0]].id;
            result.resolved.push_back(std::move(out));
        } else {
            out.verdict = Verdict::Unattributed;
            out.basis = Basis::ManualQueue;
            result.manual_queue.push_back(std::move(out));
        }
    }
    return result;
}

std::unordered_map<std::size_t, RecognitionLabel> classify_attributed(
    const std::vector<AttributionOutcome>& outcomes,
    const std::vector<EmailRecord>& monitored,
    const std::vector<App>& apps,
    const std::vector<std::string>& stoplist) {
    auto by_ref = emails_by_ref(monitored);
    std::unordered_map<std::string, KeywordSet> keywords;
    for (const App& app : apps) keywords.emplace(app.id, generate_keywords(app, stoplist));

    std::unordered_map<std::size_t, RecognitionLabel> labels;
    for (const AttributionOutcome& out : outcomes) {
        if (out.verdict != Verdict::Attributed) continue;
        auto kw = keywords.find(out.app_id);
        if (kw == keywords.end()) {
            fail("unknown-app", "attributed app '" + out.app_id + "' is not in the registry");
        }
        labels[out.email_ref] = classify_email(require_email(by_ref, out.email_ref), kw->second);
    }
    return labels;
}

std::vector<AppVerdict> label_apps(
    const std::vector<AttributionOutcome>& outcomes,
    const std::unordered_map<std::size_t, RecognitionLabel>& labels,
    const std::vector<App>& apps) {
    std::unordered_map<std::string, std::size_t> app_ordinal;
    for (std::size_t i = 0; i < apps.size(); ++i) app_ordinal.emplace(apps[i].id, i);

    std::vector<bool> any_email(apps.size(), false);
    std::vector<std::vector<std::size_t>> unrecognized(apps.size());
    for (const AttributionOutcome& out : outcomes) {
        if (out.verdict != Verdict::Attributed) continue;
        auto app = app_ordinal.find(out.app_id);
        if (app == app_ordinal.end()) {
            fail("unknown-app", "attributed app '" + out.app_id + "' is not in the registry");
        }
        auto label = labels.find(out.email_ref);
        if (label == labels.end()) {
            fail("missing-label", "attributed email ref " + std::to_string(out.email_ref) +
                                      " has no recognition label");
        }
        any_email[app->second] = true;
        if (!label->second.recognized) unrecognized[app->second].push_back(out.email_ref);
    }

    std::vector<AppVerdict> verdicts;
    verdicts.reserve(apps.size());
    for (std::size_t i = 0; i < apps.size(); ++i) {
        AppVerdict verdict;
        verdict.app_id = apps[i].id;
        std::sort(unrecognized[i].begin(), unrecognized[i].end());
        verdict.unrecognized_email_refs = std::move(unrecognized[i]);
        if (!verdict.unrecognized_email_refs.empty()) {
            verdict.label = AppLabel::HasUnrecognized;
        } else if (any_email[i]) {
            verdict.label = AppLabel::RecognizedOnly;
        }
        verdicts.push_back(std::move(verdict));
    }
    return verdicts;
}

ConfusionCounts evaluate(const std::vector<AppVerdict>& tensor_verdicts,
                         const std::vector<AppVerdict>& array_verdicts) {
    std::unordered_map<std::string, AppLabel> array_labels;
    for (const AppVerdict& verdict : array_verdicts) {
        array_labels.emplace(verdict.app_id, verdict.label);
    }
    if (array_labels.size() != tensor_verdicts.size()) {
        fail("universe-mismatch", "verdict lists cover different app sets");
    }

    ConfusionCounts counts;
    for (const AppVerdict& tensor : tensor_verdicts) {
        auto it = array_labels.find(tensor.app_id);
        if (it == array_labels.end()) {
            fail("universe-mismatch", "app '" + tensor.app_id + "' missing from array verdicts");
        }
        bool tensor_pos = tensor.label == AppLabel::HasUnrecognized;
        bool array_pos = it->second == AppLabel::HasUnrecognized;
        if (tensor_pos && array_pos) ++counts.tp;
        else if (!tensor_pos && !array_pos) ++counts.tn;
        else if (tensor_pos) ++counts.fp;
        else ++counts.fn;
    }
    return counts;
}

std::unordered_map<std::string, std::string> sender_oracle(
    const std::vector<AttributionOutcome>& array_outcomes,
    const std::vector<EmailRecord>& array_monitored) {
    auto by_ref = emails_by_ref(array_monitored);
    std::unordered_map<std::string, std::string> oracle;
    std::unordered_set<std::string> ambiguous;
    for (const AttributionOutcome& out : array_outcomes) {
        if (out.verdict != Verdict::Attributed) continue;
        std::string sender = sender_identity(require_email(by_ref, out.email_ref));
        if (sender.empty() || ambiguous.count(sender) != 0) continue;
        auto [it, inserted] = oracle.emplace(sender, out.app_id);
        if (!inserted && it->second != out.app_id) {
            oracle.erase(it);
            ambiguous.insert(sender);
        }
    }
    return oracle;
}

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Attributed: return "attributed";
        case Verdict::Conflicting: return "conflicting";
        case Verdict::Unattributed: return "unattributed";
    }
    return "unknown";
}

std::string_view basis_name(Basis basis) {
    switch (basis) {
        case Basis::ArrayDirect: return "array-direct";
        case Basis::SenderPairing: return "sender-pairing";
        case Basis::OracleMap: return "oracle-map";
        case Basis::KeywordMatch: return "keyword-match";
        case Basis::ManualQueue: return "manual-queue";
    }
    return "unknown";
}

std::string_view app_label_name(AppLabel label) {
    switch (label) {
        case AppLabel::RecognizedOnly: return "recognized-only";
        case AppLabel::HasUnrecognized: return "has-unrecognized";
        case AppLabel::NoEmails: return "no-emails";
    }
    return "unknown";
}

namespace {

Verdict verdict_from_name(const std::string& name, const std::string& what) {
    if (name == "attributed") return Verdict::Attributed;
    if (name == "conflicting") return Verdict::Conflicting;
    if (name == "unattributed") return Verdict::Unattributed;
    fail("parse-error", what + ": unknown verdict '" + name + "'");
}

Basis basis_from_name(const std::string& name, const std::string& what) {
    if (name == "array-direct") return Basis::ArrayDirect;
    if (name == "sender-pairing") return Basis::SenderPairing;
    if (name == "oracle-map") return Basis::OracleMap;
    if (name == "keyword-match") return Basis::KeywordMatch;
    if (name == "manual-queue") return Basis::ManualQueue;
    fail("parse-error", what + ": unknown basis '" + name + "'");
}

AppLabel app_label_from_name(const std::string& name, const std::string& what) {
    if (name == "recognized-only") return AppLabel::RecognizedOnly;
    if (name == "has-unrecognized") return AppLabel::HasUnrecognized;
    if (name == "no-emails") return AppLabel::NoEmails;
    fail("parse-error", what + ": unknown app label '" + name + "'");
}

} // namespace

std::string outcomes_to_jsonl(const std::vector<AttributionOutcome>& outcomes) {
    std::string out;
    for (const AttributionOutcome& outcome : outcomes) {
        detail::Json obj;
        obj["email_ref"] = outcome.email_ref;
        obj["verdict"] = std::string(verdict_name(outcome.verdict));
        obj["basis"] = std::string(basis_name(outcome.basis));
        if (outcome.verdict == Verdict::Attributed) obj["app_id"] = outcome.app_id;
        if (outcome.verdict == Verdict::Conflicting) obj["candidates"] = outcome.candidates;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<AttributionOutcome> outcomes_from_jsonl(const std::string& text) {
    std::vector<AttributionOutcome> outcomes;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        std::string what = "outcome line " + std::to_string(i + 1);
        detail::Json obj = detail::parse_json(lines[i], what);

        AttributionOutcome outcome;
        if (auto it = obj.find("email_ref"); it != obj.end() && it->is_number_unsigned()) {
            outcome.email_ref = it->get<std::size_t>();
        } else {
            fail("parse-error", what + ": missing email_ref");
        }
        outcome.verdict = verdict_from_name(detail::get_string(obj, "verdict", what), what);
        outcome.basis = basis_from_name(detail::get_string(obj, "basis", what), what);
        outcome.app_id = detail::get_string_or(obj, "app_id", "");
        if (auto it = obj.find("candidates"); it != obj.end() && it->is_array()) {
            for (const auto& c : *it) {
                if (c.is_string()) outcome.candidates.push_back(c.get<std::string>());
            }
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

std::string verdicts_to_jsonl(const std::vector<AppVerdict>& verdicts) {
    std::string out;
    for (const AppVerdict& verdict : verdicts) {
        detail::Json obj;
        obj["app_id"] = verdict.app_id;
        obj["label"] = std::string(app_label_name(verdict.label));
        obj["unrecognized_email_refs"] = verdict.unrecognized_email_refs;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<AppVerdict> verdicts_from_jsonl(const std::string& text) {
    std::vector<AppVerdict> verdicts;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        std::string what = "verdict line " + std::to_string(i + 1);
        detail::Json obj = detail::parse_json(lines[i], what);

        AppVerdict verdict;
        verdict.app_id = detail::get_string(obj, "app_id", what);
        verdict.label = app_label_from_name(detail::get_string(obj, "label", what), what);
        if (auto it = obj.find("unrecognized_email_refs"); it != obj.end() && it->is_array()) {
            for (const auto& ref : *it) {
                if (ref.is_number_unsigned()) {
                    verdict.unrecognized_email_refs.push_back(ref.get<std::size_t>());
                }
            }
        }
        verdicts.push_back(std::move(verdict));
    }
    return verdicts;
}

std::vector<AppVerdict> load_verdicts(const std::string& path) {
    return verdicts_from_jsonl(detail::read_file(path));
}

std::string confusion_to_json(const ConfusionCounts& counts) {
    detail::Json obj;
    obj["tp"] = counts.tp;
    obj["tn"] = counts.tn;
    obj["fp"] = counts.fp;
    obj["fn"] = counts.fn;
    return obj.dump(2) + "\n";
}

} // namespace honeygrid
