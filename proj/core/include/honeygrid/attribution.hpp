#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "honeygrid/corpus.hpp"
#include "honeygrid/layout.hpp"
#include "honeygrid/recognize.hpp"

namespace honeygrid {

enum class Verdict { Attributed, Conflicting, Unattributed };

enum class Basis { ArrayDirect, SenderPairing, OracleMap, KeywordMatch, ManualQueue };

/// Per-email attribution result. app_id is set for attributed emails;
/// candidates lists the two-or-more apps of a conflicting email.
struct AttributionOutcome {
    std::size_t email_ref = 0;
    Verdict verdict = Verdict::Unattributed;
    Basis basis = Basis::SenderPairing;
    std::string app_id;
    std::vector<std::string> candidates;
};

struct AttributionConfig {
    /// Sender co-occurrence window. Pairing normally ignores time; set
    /// this to require the paired emails to arrive within the window.
    std::optional<std::int64_t> pairing_window_seconds;
};

enum class AppLabel { RecognizedOnly, HasUnrecognized, NoEmails };

struct AppVerdict {
    std::string app_id;
    AppLabel label = AppLabel::NoEmails;
    std::vector<std::size_t> unrecognized_email_refs;
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/// Who the email is "from" for pairing purposes: the lowercased
/// from_addr, or the reply-to address when from_addr is empty.
std::string sender_identity(const EmailRecord& email);

/// Array layouts attribute each email to the app owning its recipient
/// token. Tensor layouts pair senders across axes: an email's candidate
/// apps are the grid cells on its recipient's axis line whose every
/// other token also saw the same sender. One candidate attributes, two
/// or more conflict, zero stays unattributed. Throws "unknown-recipient"
/// for mail that should have been routed to the control stream.
std::vector<AttributionOutcome> attribute(const FrameworkLayout& layout,
                                          const std::vector<EmailRecord>& monitored,
                                          const AttributionConfig& config = {});

struct ResolutionResult {
    std::vector<AttributionOutcome> resolved;
    std::vector<AttributionOutcome> manual_queue;
};

/// Post-pass over unattributed emails. Step 1 attributes by sender
/// lookup in oracle_map (e.g. exported from a parallel array run).
/// Step 2 attributes an email whose headers are recognized against
/// exactly one app assigned to its recipient token. Everything else
/// lands in the manual queue.
ResolutionResult resolve_unattributed(
    const FrameworkLayout& layout,
    const std::vector<EmailRecord>& monitored,
    const std::vector<AttributionOutcome>& unattributed,
    const std::unordered_map<std::string, std::string>& oracle_map,
    const std::vector<App>& apps);

/// Recognition labels for every attributed email, each computed
/// against the keywords of the app the email was attributed to.
std::unordered_map<std::size_t, RecognitionLabel> classify_attributed(
    const std::vector<AttributionOutcome>& outcomes,
    const std::vector<EmailRecord>& monitored,
    const std::vector<App>& apps,
    const std::vector<std::string>& stoplist = {});

/// Folds attributed-email labels into one verdict per app, in registry
/// order. Conflicting and unattributed emails contribute nothing.
/// Throws "missing-label" when an attributed email has no label.
std::vector<AppVerdict> label_apps(
    const std::vector<AttributionOutcome>& outcomes,
    const std::unordered_map<std::size_t, RecognitionLabel>& labels,
    const std::vector<App>& apps);

/// Confusion counts treating has-unrecognized as positive. Both sides
/// must cover the same apps ("universe-mismatch" otherwise).
ConfusionCounts evaluate(const std::vector<AppVerdict>& tensor_verdicts,
                         const std::vector<AppVerdict>& array_verdicts);

/// Sender-to-app map from an array run's outcomes, for use as the
/// oracle in resolve_unattributed. Senders seen for two apps are
/// dropped as ambiguous.
std::unordered_map<std::string, std::string> sender_oracle(
    const std::vector<AttributionOutcome>& array_outcomes,
    const std::vector<EmailRecord>& array_monitored);

std::string_view verdict_name(Verdict verdict);
std::string_view basis_name(Basis basis);
std::string_view app_label_name(AppLabel label);

std::string outcomes_to_jsonl(const std::vector<AttributionOutcome>& outcomes);
std::vector<AttributionOutcome> outcomes_from_jsonl(const std::string& text);

std::string verdicts_to_jsonl(const std::vector<AppVerdict>& verdicts);
std::vector<AppVerdict> verdicts_from_jsonl(const std::string& text);
std::vector<AppVerdict> load_verdicts(const std::string& path);

std::string confusion_to_json(const ConfusionCounts& counts);

} // namespace honeygrid
