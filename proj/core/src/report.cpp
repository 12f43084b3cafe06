#include "honeygrid/report.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "honeygrid/error.hpp"
#include "json_util.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

std::string refs_joined(const std::vector<std::size_t>& refs) {
    if (refs.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(refs[i]);
    }
    return out;
}

} // namespace

std::vector<MisuseFinding> build_misuse_report(
    const std::vector<AppVerdict>& verdicts,
    const std::vector<Annotation>& annotations,
    const std::vector<AdvertiserRecord>& advertisers,
    const std::vector<AdvertiserMatch>& advertiser_matches) {
    if (advertisers.size() != advertiser_matches.size()) {
        fail("invalid-argument", "advertiser records and match labels must align");
    }

    std::unordered_map<std::string, const Annotation*> by_app;
    for (const Annotation& annotation : annotations) {
        by_app.emplace(annotation.app_id, &annotation);
    }

    std::vector<MisuseFinding> findings;
    for (const AppVerdict& verdict : verdicts) {
        if (verdict.label != AppLabel::HasUnrecognized) continue;
        auto it = by_app.find(verdict.app_id);
        if (it == by_app.end()) {
            fail("missing-annotation",
                 "app '" + verdict.app_id + "' is flagged but has no annotation");
        }
        const Annotation& annotation = *it->second;

        std::map<ContentClass, std::vector<std::size_t>> by_class;
        for (std::size_t ref : verdict.unrecognized_email_refs) {
            auto label = annotation.labels.find(ref);
            if (label == annotation.labels.end()) {
                fail("missing-annotation", "app '" + verdict.app_id + "': email ref " +
                                               std::to_string(ref) + " has no content class");
            }
            by_class[label->second].push_back(ref);
        }

        for (auto& [content, refs] : by_class) {
            MisuseFinding finding;
            finding.app_id = verdict.app_id;
            finding.quadrant = severity_quadrant(content, annotation.disclosure);
            finding.misuse = is_misuse(finding.quadrant);
            std::sort(refs.begin(), refs.end());
            finding.email_refs = std::move(refs);
            findings.push_back(std::move(finding));
        }
    }

    std::stable_sort(findings.begin(), findings.end(),
                     [](const MisuseFinding& a, const MisuseFinding& b) {
                         if (a.quadrant != b.quadrant) return a.quadrant < b.quadrant;
                         return a.app_id < b.app_id;
                     });

    for (std::size_t i = 0; i < advertisers.size(); ++i) {
        if (advertiser_matches[i].label.recognized) continue;
        MisuseFinding finding;
        finding.quadrant = SeverityQuadrant::UnrelatedUnknown;
        finding.misuse = true;
        finding.advertiser_refs = {i};
        findings.push_back(std::move(finding));
    }
    return findings;
}

std::vector<DeletionViolation> flag_post_deletion_emails(
    const std::vector<DeletionRequest>& requests,
    const std::vector<AttributedEmailRef>& attributed_emails) {
    // Earliest request and earliest acknowledgement per app, keeping
    // first-appearance order for the output.
    std::vector<DeletionRequest> merged;
    std::unordered_map<std::string, std::size_t> position;
    for (const DeletionRequest& request : requests) {
        auto [it, inserted] = position.emplace(request.app_id, merged.size());
        if (inserted) {
            merged.push_back(request);
            continue;
        }
        DeletionRequest& existing = merged[it->second];
        existing.requested_at = std::min(existing.requested_at, request.requested_at);
        if (request.acknowledged_at &&
            (!existing.acknowledged_at || *request.acknowledged_at < *existing.acknowledged_at)) {
            existing.acknowledged_at = request.acknowledged_at;
        }
    }

    std::unordered_map<std::string, std::vector<const AttributedEmailRef*>> mail_by_app;
    for (const AttributedEmailRef& email : attributed_emails) {
        mail_by_app[email.app_id].push_back(&email);
    }

    std::vector<DeletionViolation> violations;
    for (const DeletionRequest& request : merged) {
        auto it = mail_by_app.find(request.app_id);
        if (it == mail_by_app.end()) continue;

        DeletionViolation violation;
        violation.app_id = request.app_id;
        for (const AttributedEmailRef* email : it->second) {
            if (email->timestamp <= request.requested_at) continue;
            violation.email_refs.push_back(email->email_ref);
            if (request.acknowledged_at && email->timestamp > *request.acknowledged_at) {
                violation.acknowledged = true;
            }
        }
        if (violation.email_refs.empty()) continue;
        std::sort(violation.email_refs.begin(), violation.email_refs.end());
        violations.push_back(std::move(violation));
    }
    return violations;
}

std::vector<AttributedEmailRef> collect_attributed(
    const std::vector<AttributionOutcome>& outcomes,
    const std::vector<EmailRecord>& emails) {
    std::unordered_map<std::size_t, const EmailRecord*> by_ref;
    for (const EmailRecord& email : emails) by_ref.emplace(email.ref, &email);

    std::vector<AttributedEmailRef> attributed;
    for (const AttributionOutcome& out : outcomes) {
        if (out.verdict != Verdict::Attributed) continue;
        auto it = by_ref.find(out.email_ref);
        if (it == by_ref.end()) {
            fail("invalid-argument", "outcome references email ref " +
                                         std::to_string(out.email_ref) +
                                         " which is not in the corpus");
        }
        attributed.push_back({out.app_id, out.email_ref, it->second->timestamp});
    }
    return attributed;
}

std::string export_review_queue(const std::vector<AppVerdict>& verdicts,
                                const std::vector<EmailRecord>& emails) {
    std::unordered_map<std::size_t, const EmailRecord*> by_ref;
    for (const EmailRecord& email : emails) by_ref.emplace(email.ref, &email);

    detail::Json doc = detail::Json::array();
    for (const AppVerdict& verdict : verdicts) {
        if (verdict.label != AppLabel::HasUnrecognized) continue;
        detail::Json entry;
        entry["app_id"] = verdict.app_id;
        entry["emails"] = detail::Json::array();
        for (std::size_t ref : verdict.unrecognized_email_refs) {
            detail::Json e;
            e["ref"] = ref;
            if (auto it = by_ref.find(ref); it != by_ref.end()) {
                e["from"] = it->second->from_raw;
                e["subject"] = it->second->subject;
                e["timestamp"] = format_utc(it->second->timestamp);
            }
            entry["emails"].push_back(std::move(e));
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::vector<Annotation> annotations_from_jsonl(const std::string& text) {
    std::vector<Annotation> annotations;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        std::string what = "annotation line " + std::to_string(i + 1);
        detail::Json obj = detail::parse_json(lines[i], what);

        Annotation annotation;
        annotation.app_id = detail::get_string(obj, "app_id", what);
        annotation.disclosure = disclosure_from_name(detail::get_string(obj, "disclosure", what));
        if (auto it = obj.find("labels"); it != obj.end() && it->is_object()) {
            for (auto label = it->begin(); label != it->end(); ++label) {
                std::size_t ref = 0;
                try {
                    ref = static_cast<std::size_t>(std::stoull(label.key()));
                } catch (const std::exception&) {
                    fail("parse-error", what + ": label ref '" + label.key() + "' is not a number");
                }
                if (!label.value().is_string()) {
                    fail("parse-error", what + ": content class must be a string");
                }
                annotation.labels[ref] =
                    content_class_from_name(label.value().get<std::string>());
            }
        }
        annotations.push_back(std::move(annotation));
    }
    return annotations;
}

std::vector<Annotation> load_annotations(const std::string& path) {
    return annotations_from_jsonl(detail::read_file(path));
}

std::vector<DeletionRequest> deletion_requests_from_jsonl(const std::string& text) {
    std::vector<DeletionRequest> requests;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        std::string what = "deletion request line " + std::to_string(i + 1);
        detail::Json obj = detail::parse_json(lines[i], what);

        DeletionRequest request;
        request.app_id = detail::get_string(obj, "app_id", what);
        request.requested_at = parse_utc(detail::get_string(obj, "requested_at", what));
        if (auto it = obj.find("acknowledged_at"); it != obj.end() && it->is_string()) {
            request.acknowledged_at = parse_utc(it->get<std::string>());
            if (*request.acknowledged_at < request.requested_at) {
                fail("parse-error", what + ": acknowledged_at precedes requested_at");
            }
        }
        requests.push_back(std::move(request));
    }
    return requests;
}

std::vector<DeletionRequest> load_deletion_requests(const std::string& path) {
    return deletion_requests_from_jsonl(detail::read_file(path));
}

std::string findings_to_json(const std::vector<MisuseFinding>& findings) {
    detail::Json doc = detail::Json::array();
    for (const MisuseFinding& finding : findings) {
        detail::Json obj;
        if (!finding.app_id.empty()) obj["app_id"] = finding.app_id;
        obj["quadrant"] = std::string(quadrant_name(finding.quadrant));
        obj["misuse"] = finding.misuse;
        obj["email_refs"] = finding.email_refs;
        if (!finding.advertiser_refs.empty()) obj["advertiser_refs"] = finding.advertiser_refs;
        doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

std::string findings_to_text(const std::vector<MisuseFinding>& findings,
                             const std::vector<AdvertiserRecord>& advertisers) {
    std::vector<std::array<std::string, 4>> rows;
    rows.push_back({"SEVERITY", "SUBJECT", "EVIDENCE", "MISUSE"});
    for (const MisuseFinding& finding : findings) {
        std::string subject = finding.app_id.empty() ? "(advertiser)" : "app " + finding.app_id;
        std::string evidence;
        if (!finding.email_refs.empty()) {
            evidence = "emails " + refs_joined(finding.email_refs);
        } else if (!finding.advertiser_refs.empty()) {
            std::size_t ref = finding.advertiser_refs.front();
            evidence = "advertiser #" + std::to_string(ref);
            if (ref < advertisers.size()) evidence += " " + advertisers[ref].name;
        } else {
            evidence = "-";
        }
        rows.push_back({std::string(quadrant_name(finding.quadrant)), std::move(subject),
                        std::move(evidence), finding.misuse ? "yes" : "no"});
    }

    std::array<std::size_t, 4> widths{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }

    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out += std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

std::string violations_to_json(const std::vector<DeletionViolation>& violations) {
    std::size_t acknowledged = 0;
    detail::Json list = detail::Json::array();
    for (const DeletionViolation& violation : violations) {
        if (violation.acknowledged) ++acknowledged;
        detail::Json obj;
        obj["app_id"] = violation.app_id;
        obj["email_refs"] = violation.email_refs;
        obj["acknowledged"] = violation.acknowledged;
        list.push_back(std::move(obj));
    }

    detail::Json doc;
    doc["violating_apps"] = violations.size();
    doc["acknowledged_violations"] = acknowledged;
    doc["violations"] = std::move(list);
    return doc.dump(2) + "\n";
}

} // namespace honeygrid
