#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "honeygrid/recognize.hpp"
#include "test_support.hpp"

using namespace honeygrid;

namespace {

App make_app(const std::string& name, const std::string& domain) {
    App app;
    app.id = "app-x";
    app.name = name;
    app.host_domain = domain;
    return app;
}

std::set<std::string> keyword_set_of(const App& app,
                                     const std::vector<std::string>& stoplist = {}) {
    auto ks = generate_keywords(app, stoplist);
    return std::set<std::string>(ks.keywords.begin(), ks.keywords.end());
}

EmailRecord email_with(const std::string& field, const std::string& value) {
    EmailRecord rec = testsupport::make_email(0, "t@hg.test", "sender@elsewhere.com");
    if (field == "from") rec.from_raw = value;
    if (field == "reply_to") rec.reply_to = value;
    if (field == "message_id") rec.message_id = value;
    if (field == "subject") rec.subject = value;
    if (field == "body") rec.body = value;
    return rec;
}

} // namespace

TEST_SUITE("recognize") {

TEST_CASE("name words and domain labels become keywords") {
    // [PAPER] "test application" on subdomain.example.com yields exactly
    // the name, its words, the domain, and the non-suffix labels.
    auto keywords = keyword_set_of(make_app("test application", "subdomain.example.com"));
    CHECK(keywords == std::set<std::string>{"test application", "test", "application",
                                            "subdomain.example.com", "subdomain", "example"});
}

TEST_CASE("single-word name and two-level country domain") {
    // [PAPER] the WeWanted app: one name word, one registrable label.
    auto keywords = keyword_set_of(make_app("WeWanted", "wewanted.com.tw"));
    CHECK(keywords == std::set<std::string>{"wewanted", "wewanted.com.tw"});
}

TEST_CASE("keywords are lowercased and deduplicated") {
    auto keywords = keyword_set_of(make_app("Scoop SCOOP scoop", "scoop.com"));
    CHECK(keywords == std::set<std::string>{"scoop scoop scoop", "scoop", "scoop.com"});
}

TEST_CASE("stoplist drops word tokens but keeps full name and domain") {
    App app = make_app("login with example", "login-example.com");
    auto keywords = keyword_set_of(app, {"login", "with"});
    CHECK(keywords == std::set<std::string>{"login with example", "example",
                                            "login-example.com", "login-example"});
    // Without the stoplist the generic words are present.
    auto unfiltered = keyword_set_of(app);
    CHECK(unfiltered.count("login") == 1);
    CHECK(unfiltered.count("with") == 1);
}

TEST_CASE("keyword generation survives empty fields") {
    auto no_domain = keyword_set_of(make_app("Solo", ""));
    CHECK(no_domain == std::set<std::string>{"solo"});
    auto no_name = keyword_set_of(make_app("", "one.example.org"));
    CHECK(no_name == std::set<std::string>{"one.example.org", "one", "example"});
}

TEST_CASE("generate_keyword_sets covers every app in order") {
    auto apps = testsupport::make_apps(3);
    auto sets = generate_keyword_sets(apps);
    REQUIRE(sets.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(sets[i].app_id == apps[i].id);
        CHECK(!sets[i].keywords.empty());
    }
}

TEST_CASE("from field is searched and matches case-insensitively") {
    auto ks = generate_keywords(make_app("Thailand Property", "thailand-property.com"));

    auto label = classify_email(email_with("from", "Alerts <news@Thailand-Property.com>"), ks);
    CHECK(label.recognized);
    CHECK(label.matched_field == "from");

    // [PAPER]-shaped: a sender sharing only the app's domain text.
    auto offers = classify_email(email_with("from", "offers@example.com"),
                                 generate_keywords(make_app("test application",
                                                            "subdomain.example.com")));
    CHECK(offers.recognized);
    CHECK(offers.matched_keyword == "example");
}

TEST_CASE("fields are scanned from, reply-to, message-id, subject") {
    auto ks = generate_keywords(make_app("Quartz Atlas", "quartzatlas.com"));

    auto in_reply = classify_email(email_with("reply_to", "help@quartzatlas.com"), ks);
    CHECK(in_reply.recognized);
    CHECK(in_reply.matched_field == "reply-to");

    auto in_mid = classify_email(email_with("message_id", "<1@quartzatlas.com>"), ks);
    CHECK(in_mid.recognized);
    CHECK(in_mid.matched_field == "message-id");

    auto in_subject = classify_email(email_with("subject", "Your Quartz invoice"), ks);
    CHECK(in_subject.recognized);
    CHECK(in_subject.matched_field == "subject");
    CHECK(in_subject.matched_keyword == "quartz");

    // When two fields match, the earlier field in the scan order wins.
    EmailRecord both = email_with("subject", "quartz news");
    both.reply_to = "digest@quartzatlas.com";
    auto first = classify_email(both, ks);
    CHECK(first.matched_field == "reply-to");
}

TEST_CASE("the body never triggers recognition") {
    auto ks = generate_keywords(make_app("Quartz Atlas", "quartzatlas.com"));
    auto label = classify_email(email_with("body", "quartz atlas quartzatlas.com"), ks);
    CHECK(!label.recognized);
    CHECK(label.matched_field.empty());
    CHECK(label.matched_keyword.empty());
}

TEST_CASE("unrelated mail stays unrecognized") {
    // [PAPER]-shaped negatives: senders that share no keyword with the app.
    auto ks = generate_keywords(make_app("GetScoop", "getscoop.example"));
    CHECK(!classify_email(email_with("from", "deals@dotpropertygroup.com"), ks).recognized);
    CHECK(!classify_email(email_with("subject", "win a free cruise"), ks).recognized);
}

TEST_CASE("recognition is monotone in the keyword set") {
    // Adding name words can only turn unrecognized into recognized; the
    // email mentions only the fifth word, so the verdict flips exactly
    // when that word joins the set and never flips back.
    const std::vector<std::string> words{"amber", "birch", "cedar", "dunes", "ember", "fjord"};
    EmailRecord email = email_with("subject", "your ember receipt");
    for (std::size_t n = 1; n <= words.size(); ++n) {
        App merged;
        merged.id = "merged";
        for (std::size_t i = 0; i < n; ++i) {
            merged.name += (i ? " " : "") + words[i];
        }
        merged.host_domain = "merged.example";
        bool hit = classify_email(email, generate_keywords(merged)).recognized;
        CHECK(hit == (n >= 5));
    }
}

TEST_CASE("advertisers match on name or domain across all apps") {
    auto apps = testsupport::make_apps(2);
    apps[0].name = "Amber Atlas";
    apps[0].host_domain = "amberatlas.com";
    apps[1].name = "Birch Basket";
    apps[1].host_domain = "birchbasket.io";
    auto sets = generate_keyword_sets(apps);

    AdvertiserRecord ad;
    ad.name = "Amber Atlas Media";
    ad.domain = "ads.example";
    auto by_name = classify_advertiser(ad, sets);
    CHECK(by_name.label.recognized);
    CHECK(by_name.label.matched_field == "name");
    CHECK(by_name.matched_app_ids == std::vector<std::string>{"app-0"});

    AdvertiserRecord by_domain;
    by_domain.name = "Anonymous Buyer";
    by_domain.domain = "promo.birchbasket.io";
    auto hit = classify_advertiser(by_domain, sets);
    CHECK(hit.label.recognized);
    CHECK(hit.label.matched_field == "domain");
    CHECK(hit.matched_app_ids == std::vector<std::string>{"app-1"});

    AdvertiserRecord neither;
    neither.name = "Totally Unrelated";
    neither.domain = "elsewhere.net";
    auto miss = classify_advertiser(neither, sets);
    CHECK(!miss.label.recognized);
    CHECK(miss.matched_app_ids.empty());
}

TEST_CASE("an advertiser matching several apps reports each one") {
    auto apps = testsupport::make_apps(3);
    apps[0].name = "Shared Vendor";
    apps[0].host_domain = "vendor-one.com";
    apps[1].name = "Vendor Two";
    apps[1].host_domain = "vendor-two.com";
    apps[2].name = "Quiet App";
    apps[2].host_domain = "quiet.example";
    auto sets = generate_keyword_sets(apps);

    AdvertiserRecord ad;
    ad.name = "The Vendor Network";
    ad.domain = "vendor.net";
    auto match = classify_advertiser(ad, sets);
    CHECK(match.label.recognized);
    CHECK(match.matched_app_ids == std::vector<std::string>{"app-0", "app-1"});
}

} // TEST_SUITE("recognize")
