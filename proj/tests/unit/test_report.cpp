#include <functional>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "honeygrid/error.hpp"
#include "honeygrid/report.hpp"
#include "honeygrid/taxonomy.hpp"
#include "honeygrid/time.hpp"
#include "test_support.hpp"

using namespace honeygrid;

namespace {

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return std::string(e.code());
    }
    return "";
}

AppVerdict flagged(const std::string& id, std::vector<std::size_t> refs) {
    AppVerdict v;
    v.app_id = id;
    v.label = AppLabel::HasUnrecognized;
    v.unrecognized_email_refs = std::move(refs);
    return v;
}

Annotation annotate(const std::string& id, Disclosure disclosure,
                    std::map<std::size_t, ContentClass> labels) {
    Annotation a;
    a.app_id = id;
    a.disclosure = disclosure;
    a.labels = std::move(labels);
    return a;
}

AttributedEmailRef mail(const std::string& app, std::size_t ref, const std::string& ts) {
    return AttributedEmailRef{app, ref, parse_utc(ts)};
}

DeletionRequest request_at(const std::string& app, const std::string& ts,
                           const std::string& ack = "") {
    DeletionRequest r;
    r.app_id = app;
    r.requested_at = parse_utc(ts);
    if (!ack.empty()) r.acknowledged_at = parse_utc(ack);
    return r;
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("content class and disclosure map onto the four quadrants") {
    CHECK(severity_quadrant(ContentClass::Malicious, Disclosure::Unknown) ==
          SeverityQuadrant::MaliciousUnknown);
    CHECK(severity_quadrant(ContentClass::Malicious, Disclosure::Disclosed) ==
          SeverityQuadrant::MaliciousUnknown);
    CHECK(severity_quadrant(ContentClass::Unrelated, Disclosure::Unknown) ==
          SeverityQuadrant::UnrelatedUnknown);
    CHECK(severity_quadrant(ContentClass::Unrelated, Disclosure::Disclosed) ==
          SeverityQuadrant::UnrelatedDisclosed);
    CHECK(severity_quadrant(ContentClass::Functional, Disclosure::Disclosed) ==
          SeverityQuadrant::FunctionalDisclosed);
    CHECK(severity_quadrant(ContentClass::Functional, Disclosure::Unknown) ==
          SeverityQuadrant::FunctionalDisclosed);
}

TEST_CASE("only functional-disclosed findings escape the misuse flag") {
    CHECK(is_misuse(SeverityQuadrant::MaliciousUnknown));
    CHECK(is_misuse(SeverityQuadrant::UnrelatedUnknown));
    CHECK(is_misuse(SeverityQuadrant::UnrelatedDisclosed));
    CHECK(!is_misuse(SeverityQuadrant::FunctionalDisclosed));
}

TEST_CASE("taxonomy names round-trip") {
    for (auto content : {ContentClass::Malicious, ContentClass::Unrelated,
                         ContentClass::Functional}) {
        CHECK(content_class_from_name(content_class_name(content)) == content);
    }
    for (auto verdict : {Disclosure::Disclosed, Disclosure::Unknown}) {
        CHECK(disclosure_from_name(disclosure_name(verdict)) == verdict);
    }
    CHECK(error_of([] { content_class_from_name("spammy"); }) == "parse-error");
    CHECK(error_of([] { disclosure_from_name("maybe"); }) == "parse-error");
}

TEST_CASE("one finding per content class present at each flagged app") {
    std::vector<AppVerdict> verdicts{flagged("app-a", {1, 2, 3})};
    std::vector<Annotation> annotations{
        annotate("app-a", Disclosure::Unknown,
                 {{1, ContentClass::Malicious},
                  {2, ContentClass::Unrelated},
                  {3, ContentClass::Unrelated}}),
    };
    auto findings = build_misuse_report(verdicts, annotations);
    REQUIRE(findings.size() == 2);
    CHECK(findings[0].quadrant == SeverityQuadrant::MaliciousUnknown);
    CHECK(findings[0].email_refs == std::vector<std::size_t>{1});
    CHECK(findings[0].misuse);
    CHECK(findings[1].quadrant == SeverityQuadrant::UnrelatedUnknown);
    CHECK(findings[1].email_refs == std::vector<std::size_t>{2, 3});
}

TEST_CASE("findings sort by severity then app id") {
    std::vector<AppVerdict> verdicts{
        flagged("zeta", {1}),
        flagged("alpha", {2}),
        flagged("mid", {3}),
    };
    std::vector<Annotation> annotations{
        annotate("zeta", Disclosure::Disclosed, {{1, ContentClass::Unrelated}}),
        annotate("alpha", Disclosure::Disclosed, {{2, ContentClass::Functional}}),
        annotate("mid", Disclosure::Unknown, {{3, ContentClass::Malicious}}),
    };
    auto findings = build_misuse_report(verdicts, annotations);
    REQUIRE(findings.size() == 3);
    CHECK(findings[0].app_id == "mid");
    CHECK(findings[0].quadrant == SeverityQuadrant::MaliciousUnknown);
    CHECK(findings[1].app_id == "zeta");
    CHECK(findings[1].quadrant == SeverityQuadrant::UnrelatedDisclosed);
    CHECK(findings[2].app_id == "alpha");
    CHECK(findings[2].quadrant == SeverityQuadrant::FunctionalDisclosed);
    CHECK(!findings[2].misuse);
}

TEST_CASE("clean apps need no annotation at all") {
    std::vector<AppVerdict> verdicts(2);
    verdicts[0].app_id = "quiet";
    verdicts[0].label = AppLabel::NoEmails;
    verdicts[1].app_id = "tidy";
    verdicts[1].label = AppLabel::RecognizedOnly;
    CHECK(build_misuse_report(verdicts, {}).empty());
}

TEST_CASE("a flagged app without annotation is an error") {
    std::vector<AppVerdict> verdicts{flagged("app-a", {1})};
    CHECK(error_of([&] { build_misuse_report(verdicts, {}); }) == "missing-annotation");

    // Annotation present but one email ref unlabeled.
    std::vector<Annotation> partial{
        annotate("app-a", Disclosure::Unknown, {{2, ContentClass::Unrelated}}),
    };
    CHECK(error_of([&] { build_misuse_report(verdicts, partial); }) == "missing-annotation");
}

TEST_CASE("unrecognized advertisers append as unattributed findings") {
    std::vector<AdvertiserRecord> ads(3);
    ads[0].name = "Matched Co";
    ads[1].name = "Mystery One";
    ads[2].name = "Mystery Two";
    std::vector<AdvertiserMatch> matches(3);
    matches[0].label.recognized = true;
    matches[0].matched_app_ids = {"app-a"};

    auto findings = build_misuse_report({}, {}, ads, matches);
    REQUIRE(findings.size() == 2);
    for (const auto& finding : findings) {
        CHECK(finding.app_id.empty());
        CHECK(finding.quadrant == SeverityQuadrant::UnrelatedUnknown);
        CHECK(finding.misuse);
        CHECK(finding.email_refs.empty());
    }
    CHECK(findings[0].advertiser_refs == std::vector<std::size_t>{1});
    CHECK(findings[1].advertiser_refs == std::vector<std::size_t>{2});

    std::vector<AdvertiserMatch> short_list(2);
    CHECK(error_of([&] { build_misuse_report({}, {}, ads, short_list); }) ==
          "invalid-argument");
}

TEST_CASE("emails strictly after the request are violations") {
    std::vector<DeletionRequest> requests{request_at("app-a", "2019-03-01T00:00:00Z")};
    std::vector<AttributedEmailRef> emails{
        mail("app-a", 1, "2019-02-28T23:59:59Z"),  // before
        mail("app-a", 2, "2019-03-01T00:00:00Z"),  // at the instant: not after
        mail("app-a", 3, "2019-03-01T00:00:01Z"),  // violation
        mail("app-b", 4, "2019-04-01T00:00:00Z"),  // no request for app-b
    };
    auto violations = flag_post_deletion_emails(requests, emails);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].app_id == "app-a");
    CHECK(violations[0].email_refs == std::vector<std::size_t>{3});
    CHECK(!violations[0].acknowledged);
}

TEST_CASE("a request with no later mail produces no violation") {
    std::vector<DeletionRequest> requests{request_at("app-a", "2019-03-01T00:00:00Z")};
    std::vector<AttributedEmailRef> emails{mail("app-a", 1, "2019-01-15T00:00:00Z")};
    CHECK(flag_post_deletion_emails(requests, emails).empty());
    CHECK(flag_post_deletion_emails(requests, {}).empty());
}

TEST_CASE("mail after the acknowledgement marks the violation acknowledged") {
    // Request on March 1, acknowledged March 5. Mail on March 3 violates
    // the request but predates the confirmation; mail on March 8 shows
    // the app kept sending even after confirming deletion.
    std::vector<AttributedEmailRef> emails{
        mail("app-a", 1, "2019-03-03T00:00:00Z"),
        mail("app-a", 2, "2019-03-08T00:00:00Z"),
    };

    auto acked = flag_post_deletion_emails(
        {request_at("app-a", "2019-03-01T00:00:00Z", "2019-03-05T00:00:00Z")}, emails);
    REQUIRE(acked.size() == 1);
    CHECK(acked[0].email_refs == std::vector<std::size_t>{1, 2});
    CHECK(acked[0].acknowledged);

    // Same mail, but the acknowledgement came after everything: the app
    // never mailed post-confirmation.
    auto late_ack = flag_post_deletion_emails(
        {request_at("app-a", "2019-03-01T00:00:00Z", "2019-03-09T00:00:00Z")}, emails);
    REQUIRE(late_ack.size() == 1);
    CHECK(!late_ack[0].acknowledged);

    // No acknowledgement at all.
    auto no_ack = flag_post_deletion_emails({request_at("app-a", "2019-03-01T00:00:00Z")},
                                            emails);
    REQUIRE(no_ack.size() == 1);
    CHECK(!no_ack[0].acknowledged);
}

TEST_CASE("duplicate requests merge to earliest request and acknowledgement") {
    std::vector<DeletionRequest> requests{
        request_at("app-a", "2019-03-10T00:00:00Z"),
        request_at("app-a", "2019-03-01T00:00:00Z", "2019-03-20T00:00:00Z"),
        request_at("app-a", "2019-03-15T00:00:00Z", "2019-03-16T00:00:00Z"),
    };
    std::vector<AttributedEmailRef> emails{
        mail("app-a", 1, "2019-03-05T00:00:00Z"),  // after merged request (Mar 1)
        mail("app-a", 2, "2019-03-18T00:00:00Z"),  // after merged ack (Mar 16)
    };
    auto violations = flag_post_deletion_emails(requests, emails);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].email_refs == std::vector<std::size_t>{1, 2});
    CHECK(violations[0].acknowledged);
}

TEST_CASE("collect_attributed keeps only attributed outcomes") {
    auto apps = testsupport::make_apps(2);
    auto layout = build_array_layout(apps, testsupport::make_token_pool(2, "hg.test"));
    std::vector<EmailRecord> emails{
        testsupport::make_email(0, "person-0@hg.test", "a@b.com", "2019-02-01T10:00:00Z"),
        testsupport::make_email(1, "person-1@hg.test", "c@d.com", "2019-02-02T11:00:00Z"),
    };
    auto outcomes = attribute(layout, emails);
    outcomes.push_back(AttributionOutcome{7, Verdict::Unattributed, Basis::SenderPairing,
                                          "", {}});
    auto attributed = collect_attributed(outcomes, emails);
    REQUIRE(attributed.size() == 2);
    CHECK(attributed[0].app_id == "app-0");
    CHECK(attributed[0].email_ref == 0);
    CHECK(format_utc(attributed[0].timestamp) == "2019-02-01T10:00:00Z");
    CHECK(attributed[1].app_id == "app-1");
}

TEST_CASE("review queue exports flagged apps with email context") {
    std::vector<EmailRecord> emails{
        testsupport::make_email(0, "person-0@hg.test", "who@where.com", "2019-02-01T10:00:00Z"),
    };
    emails[0].subject = "mystery offer";
    std::vector<AppVerdict> verdicts{flagged("app-0", {0})};
    verdicts.push_back(AppVerdict{"app-1", AppLabel::RecognizedOnly, {}});

    std::string json = export_review_queue(verdicts, emails);
    CHECK(json.find("\"app_id\": \"app-0\"") != std::string::npos);
    CHECK(json.find("mystery offer") != std::string::npos);
    CHECK(json.find("2019-02-01T10:00:00Z") != std::string::npos);
    CHECK(json.find("app-1") == std::string::npos);
}

TEST_CASE("annotations load from JSON lines") {
    std::string text =
        R"({"app_id":"app-a","disclosure":"unknown","labels":{"3":"malicious","7":"unrelated"}})" "\n"
        R"({"app_id":"app-b","disclosure":"disclosed"})" "\n";
    auto annotations = annotations_from_jsonl(text);
    REQUIRE(annotations.size() == 2);
    CHECK(annotations[0].disclosure == Disclosure::Unknown);
    REQUIRE(annotations[0].labels.size() == 2);
    CHECK(annotations[0].labels.at(3) == ContentClass::Malicious);
    CHECK(annotations[0].labels.at(7) == ContentClass::Unrelated);
    CHECK(annotations[1].labels.empty());

    CHECK(error_of([] {
              annotations_from_jsonl(R"({"app_id":"x","disclosure":"sort of"})" "\n");
          }) == "parse-error");
    CHECK(error_of([] {
              annotations_from_jsonl(
                  R"({"app_id":"x","disclosure":"unknown","labels":{"a":"malicious"}})" "\n");
          }) == "parse-error");
}

TEST_CASE("deletion requests load and reject impossible acknowledgements") {
    std::string text =
        R"({"app_id":"app-a","requested_at":"2019-03-01T00:00:00Z"})" "\n"
        R"({"app_id":"app-b","requested_at":"2019-03-01T00:00:00Z","acknowledged_at":"2019-03-02T00:00:00Z"})" "\n";
    auto requests = deletion_requests_from_jsonl(text);
    REQUIRE(requests.size() == 2);
    CHECK(!requests[0].acknowledged_at);
    REQUIRE(requests[1].acknowledged_at);
    CHECK(format_utc(*requests[1].acknowledged_at) == "2019-03-02T00:00:00Z");

    CHECK(error_of([] {
              deletion_requests_from_jsonl(
                  R"({"app_id":"x","requested_at":"2019-03-02T00:00:00Z","acknowledged_at":"2019-03-01T00:00:00Z"})" "\n");
          }) == "parse-error");
}

TEST_CASE("findings serialize to JSON with advertiser refs when present") {
    MisuseFinding app_finding;
    app_finding.app_id = "app-a";
    app_finding.quadrant = SeverityQuadrant::MaliciousUnknown;
    app_finding.misuse = true;
    app_finding.email_refs = {4, 9};
    MisuseFinding ad_finding;
    ad_finding.quadrant = SeverityQuadrant::UnrelatedUnknown;
    ad_finding.advertiser_refs = {2};

    std::string json = findings_to_json({app_finding, ad_finding});
    CHECK(json.find("\"malicious-unknown\"") != std::string::npos);
    CHECK(json.find("\"advertiser_refs\"") != std::string::npos);
    // The advertiser finding carries no app_id key at all.
    CHECK(json.find("\"app_id\": \"app-a\"") != std::string::npos);
}

TEST_CASE("text table columns stay aligned") {
    MisuseFinding long_row;
    long_row.app_id = "an-app-with-a-long-identifier";
    long_row.quadrant = SeverityQuadrant::UnrelatedDisclosed;
    long_row.email_refs = {1, 2, 3};
    MisuseFinding short_row;
    short_row.app_id = "x";
    short_row.quadrant = SeverityQuadrant::MaliciousUnknown;
    short_row.email_refs = {9};

    std::string table = findings_to_text({long_row, short_row});
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < table.size()) {
        std::size_t end = table.find('\n', start);
        lines.push_back(table.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].find("SEVERITY") == 0);
    // Every row places the MISUSE column at the same offset.
    std::size_t misuse_col = lines[0].find("MISUSE");
    CHECK(lines[1].rfind("yes") == misuse_col);
    CHECK(lines[2].rfind("yes") == misuse_col);

    // Advertiser rows name the advertiser when records are supplied.
    MisuseFinding ad_row;
    ad_row.quadrant = SeverityQuadrant::UnrelatedUnknown;
    ad_row.advertiser_refs = {0};
    std::vector<AdvertiserRecord> ads(1);
    ads[0].name = "Shadow Media";
    std::string with_ads = findings_to_text({ad_row}, ads);
    CHECK(with_ads.find("(advertiser)") != std::string::npos);
    CHECK(with_ads.find("Shadow Media") != std::string::npos);
}

TEST_CASE("violations JSON carries totals and per-app detail") {
    DeletionViolation v1;
    v1.app_id = "app-a";
    v1.email_refs = {3, 4};
    v1.acknowledged = true;
    DeletionViolation v2;
    v2.app_id = "app-b";
    v2.email_refs = {8};

    std::string json = violations_to_json({v1, v2});
    CHECK(json.find("\"violating_apps\": 2") != std::string::npos);
    CHECK(json.find("\"acknowledged_violations\": 1") != std::string::npos);
    CHECK(json.find("\"app-b\"") != std::string::npos);

    CHECK(violations_to_json({}).find("\"violating_apps\": 0") != std::string::npos);
}

} // TEST_SUITE("report")
