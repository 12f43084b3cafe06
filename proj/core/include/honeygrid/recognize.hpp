#pragma once

#include <string>
#include <vector>

#include "honeygrid/corpus.hpp"
#include "honeygrid/layout.hpp"

namespace honeygrid {

/// Lowercased search terms for one app: the full name, each whitespace
/// word of the name, the full host domain, and each domain label left
/// of the public suffix. Sorted, deduplicated, never empty strings.
struct KeywordSet {
    std::string app_id;
    std::vector<std::string> keywords;
};

/// Outcome of keyword search. matched_keyword and matched_field are
/// set exactly when recognized: the field is the first hit in the scan
/// order (from, reply-to, message-id, subject for email; name, domain
/// for advertisers).
struct RecognitionLabel {
    bool recognized = false;
    std::string matched_keyword;
    std::string matched_field;
};

struct AdvertiserMatch {
    RecognitionLabel label;
    std::vector<std::string> matched_app_ids;
};

/// Stoplist entries drop individual word and label tokens; the full
/// name and full domain always survive.
KeywordSet generate_keywords(const App& app, const std::vector<std::string>& stoplist = {});

std::vector<KeywordSet> generate_keyword_sets(const std::vector<App>& apps,
                                              const std::vector<std::string>& stoplist = {});

/// Case-insensitive substring search over the from, reply-to,
/// message-id, and subject fields, in that order. The body is never
/// searched.
RecognitionLabel classify_email(const EmailRecord& email, const KeywordSet& keywords);

/// Recognized when any app's keyword occurs in the advertiser's name
/// or domain; reports every app that matched.
AdvertiserMatch classify_advertiser(const AdvertiserRecord& advertiser,
                                    const std::vector<KeywordSet>& keyword_sets);

} // namespace honeygrid
