#include "honeygrid/recognize.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "honeygrid/public_suffix.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

std::vector<std::string> whitespace_words(const std::string& text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

/// First keyword (in set order) found in the lowercased haystack.
const std::string* first_match(const std::vector<std::string>& keywords,
                               const std::string& haystack_lower) {
    for (const std::string& keyword : keywords) {
        if (haystack_lower.find(keyword) != std::string::npos) return &keyword;
    }
    return nullptr;
}

} // namespace

KeywordSet generate_keywords(const App& app, const std::vector<std::string>& stoplist) {
    std::unordered_set<std::string> stop;
    for (const std::string& entry : stoplist) stop.insert(detail::to_lower(entry));

    std::string name = detail::to_lower(std::string(detail::trim(app.name)));
    std::string domain = detail::to_lower(std::string(detail::trim(app.host_domain)));

    std::vector<std::string> keywords;
    auto add = [&keywords](std::string keyword) {
        if (!keyword.empty()) keywords.push_back(std::move(keyword));
    };
    auto add_token = [&](std::string token) {
        if (!token.empty() && stop.count(token) == 0) keywords.push_back(std::move(token));
    };

    add(name);
    for (std::string& word : whitespace_words(name)) add_token(std::move(word));
    add(domain);
    for (std::string& label : domain_labels(domain)) add_token(std::move(label));

    std::sort(keywords.begin(), keywords.end());
    keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
    return KeywordSet{app.id, std::move(keywords)};
}

std::vector<KeywordSet> generate_keyword_sets(const std::vector<App>& apps,
                                              const std::vector<std::string>& stoplist) {
    std::vector<KeywordSet> sets;
    sets.reserve(apps.size());
    for (const App& app : apps) sets.push_back(generate_keywords(app, stoplist));
    return sets;
}

RecognitionLabel classify_email(const EmailRecord& email, const KeywordSet& keywords) {
    const std::array<std::pair<std::string_view, const std::string*>, 4> fields{{
        {"from", &email.from_raw},
        {"reply-to", &email.reply_to},
        {"message-id", &email.message_id},
        {"subject", &email.subject},
    }};

    for (const auto& [field_name, text] : fields) {
        std::string lowered = detail::to_lower(*text);
        if (const std::string* hit = first_match(keywords.keywords, lowered)) {
            return RecognitionLabel{true, *hit, std::string(field_name)};
        }
    }
    return RecognitionLabel{};
}

AdvertiserMatch classify_advertiser(const AdvertiserRecord& advertiser,
                                    const std::vector<KeywordSet>& keyword_sets) {
    std::string name_lower = detail::to_lower(advertiser.name);
    std::string domain_lower = detail::to_lower(advertiser.domain);

    AdvertiserMatch match;
    for (const KeywordSet& set : keyword_sets) {
        if (const std::string* hit = first_match(set.keywords, name_lower)) {
            if (!match.label.recognized) {
                match.label = RecognitionLabel{true, *hit, "name"};
            }
            match.matched_app_ids.push_back(set.app_id);
            continue;
        }
        if (domain_lower.empty()) continue;
        if (const std::string* hit = first_match(set.keywords, domain_lower)) {
            if (!match.label.recognized) {
                match.label = RecognitionLabel{true, *hit, "domain"};
            }
            match.matched_app_ids.push_back(set.app_id);
        }
    }
    return match;
}

} // namespace honeygrid
