#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeygrid/attribution.hpp"
#include "honeygrid/corpus.hpp"
#include "honeygrid/recognize.hpp"
#include "honeygrid/taxonomy.hpp"
#include "honeygrid/time.hpp"

namespace honeygrid {

/// Manual review results for one app: the disclosure verdict plus a
/// content class per unrecognized email ref.
struct Annotation {
    std::string app_id;
    Disclosure disclosure = Disclosure::Unknown;
    std::map<std::size_t, ContentClass> labels;
};

/// One row of the final report. App findings carry email refs; the
/// appended advertiser findings carry advertiser ordinals and no app,
/// since the advertising channel cannot name the responsible app.
struct MisuseFinding {
    std::string app_id;
    SeverityQuadrant quadrant = SeverityQuadrant::UnrelatedUnknown;
    bool misuse = true;
    std::vector<std::size_t> email_refs;
    std::vector<std::size_t> advertiser_refs;
};

struct DeletionRequest {
    std::string app_id;
    UtcSeconds requested_at{};
    std::optional<UtcSeconds> acknowledged_at;
};

/// Attributed email distilled to what the deletion audit needs.
struct AttributedEmailRef {
    std::string app_id;
    std::size_t email_ref = 0;
    UtcSeconds timestamp{};
};

/// An app that mailed after its deletion request. acknowledged is set
/// when some of that mail also postdates the app's own deletion
/// confirmation.
struct DeletionViolation {
    std::string app_id;
    std::vector<std::size_t> email_refs;
    bool acknowledged = false;
};

/// One finding per content class present among each has-unrecognized
/// app's emails, ranked most egregious first, with unrecognized
/// advertisers appended as unattributed findings. Throws
/// "missing-annotation" when a flagged app lacks an annotation or one
/// of its unrecognized emails lacks a content class.
std::vector<MisuseFinding> build_misuse_report(
    const std::vector<AppVerdict>& verdicts,
    const std::vector<Annotation>& annotations,
    const std::vector<AdvertiserRecord>& advertisers = {},
    const std::vector<AdvertiserMatch>& advertiser_matches = {});

/// Per requesting app, the attributed emails strictly after
/// requested_at. Duplicate requests for one app collapse to the
/// earliest request and earliest acknowledgement.
std::vector<DeletionViolation> flag_post_deletion_emails(
    const std::vector<DeletionRequest>& requests,
    const std::vector<AttributedEmailRef>& attributed_emails);

/// Pulls (app, ref, timestamp) triples out of attributed outcomes.
std::vector<AttributedEmailRef> collect_attributed(
    const std::vector<AttributionOutcome>& outcomes,
    const std::vector<EmailRecord>& emails);

/// Unrecognized emails grouped per flagged app, as JSON, so a reviewer
/// can fill in the annotations file.
std::string export_review_queue(const std::vector<AppVerdict>& verdicts,
                                const std::vector<EmailRecord>& emails);

std::vector<Annotation> load_annotations(const std::string& path);
std::vector<Annotation> annotations_from_jsonl(const std::string& text);

std::vector<DeletionRequest> load_deletion_requests(const std::string& path);
std::vector<DeletionRequest> deletion_requests_from_jsonl(const std::string& text);

std::string findings_to_json(const std::vector<MisuseFinding>& findings);

/// Aligned plain-text table of the same findings, one row each.
std::string findings_to_text(const std::vector<MisuseFinding>& findings,
                             const std::vector<AdvertiserRecord>& advertisers = {});

std::string violations_to_json(const std::vector<DeletionViolation>& violations);

} // namespace honeygrid
