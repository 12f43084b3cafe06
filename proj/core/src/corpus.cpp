#include "honeygrid/corpus.hpp"

#include <unordered_map>
#include <unordered_set>

#include "honeygrid/error.hpp"
#include "json_util.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

std::string line_tag(std::size_t line) {
    return "line " + std::to_string(line);
}

/// Strips quotes and comments a display name could smuggle an '@' into;
/// good enough for the "Name <addr>" and bare-address forms we ingest.
std::string_view address_span(std::string_view raw) {
    std::size_t open = raw.rfind('<');
    if (open != std::string_view::npos) {
        std::size_t close = raw.find('>', open + 1);
        if (close != std::string_view::npos) return raw.substr(open + 1, close - open - 1);
        return raw.substr(open + 1);
    }
    return raw;
}

EmailRecord email_from_json(const detail::Json& obj, std::size_t line, std::size_t ref) {
    EmailRecord rec;
    rec.ref = ref;
    rec.recipient = detail::to_lower(detail::get_string(obj, "recipient", line_tag(line)));
    rec.from_raw = detail::get_string(obj, "from_raw", line_tag(line));
    rec.body = detail::get_string(obj, "body", line_tag(line));
    rec.reply_to = detail::get_string_or(obj, "reply_to", "");
    rec.message_id = detail::get_string_or(obj, "message_id", "");
    rec.subject = detail::get_string_or(obj, "subject", "");

    std::string from_addr = detail::get_string_or(obj, "from_addr", "");
    rec.from_addr = from_addr.empty() ? extract_address(rec.from_raw)
                                      : detail::to_lower(detail::trim(from_addr));
    if (rec.from_addr.empty()) {
        fail("parse-error", line_tag(line) + ": no sender address in from_addr or from_raw");
    }

    try {
        rec.timestamp = parse_utc(detail::get_string(obj, "timestamp", line_tag(line)));
    } catch (const Error& e) {
        if (e.code() != "invalid-timestamp") throw;
        fail("invalid-timestamp", line_tag(line) + ": " + e.what());
    }
    return rec;
}

} // namespace

std::string extract_address(const std::string& raw_field) {
    std::string_view span = detail::trim(address_span(raw_field));
    if (span.find('@') == std::string_view::npos) return "";
    return detail::to_lower(std::string(span));
}

std::vector<EmailRecord> emails_from_jsonl(const std::string& text) {
    std::vector<EmailRecord> records;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        detail::Json obj = detail::parse_json(lines[i], line_tag(i + 1));
        records.push_back(email_from_json(obj, i + 1, records.size()));
    }
    return records;
}

std::vector<EmailRecord> load_email_corpus(const std::string& path) {
    return emails_from_jsonl(detail::read_file(path));
}

std::string emails_to_jsonl(const std::vector<EmailRecord>& emails) {
    std::string out;
    for (const EmailRecord& rec : emails) {
        detail::Json obj;
        obj["recipient"] = rec.recipient;
        obj["from_addr"] = rec.from_addr;
        obj["from_raw"] = rec.from_raw;
        if (!rec.reply_to.empty()) obj["reply_to"] = rec.reply_to;
        if (!rec.message_id.empty()) obj["message_id"] = rec.message_id;
        if (!rec.subject.empty()) obj["subject"] = rec.subject;
        obj["body"] = rec.body;
        obj["timestamp"] = format_utc(rec.timestamp);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

void save_email_corpus(const std::string& path, const std::vector<EmailRecord>& emails) {
    detail::write_file(path, emails_to_jsonl(emails));
}

std::vector<EmailRecord> dedupe(const std::vector<EmailRecord>& emails) {
    std::vector<EmailRecord> kept;
    kept.reserve(emails.size());
    std::unordered_set<std::string> seen;
    for (const EmailRecord& rec : emails) {
        if (!rec.message_id.empty()) {
            std::string key = rec.recipient + '\n' + rec.message_id;
            if (!seen.insert(std::move(key)).second) continue;
        }
        kept.push_back(rec);
    }
    return kept;
}

CorpusPartition route_catch_all(const std::vector<EmailRecord>& emails,
                                const FrameworkLayout& layout) {
    std::unordered_set<std::string> token_addresses;
    for (const Honeytoken& token : layout.tokens) token_addresses.insert(token.address);

    CorpusPartition partition;
    for (const EmailRecord& rec : emails) {
        if (token_addresses.count(rec.recipient) != 0) {
            partition.monitored.push_back(rec);
        } else {
            partition.control.push_back(rec);
        }
    }
    return partition;
}

std::vector<AdvertiserRecord> advertisers_from_jsonl(const std::string& text) {
    std::vector<AdvertiserRecord> unique;
    std::unordered_set<std::string> seen;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        detail::Json obj = detail::parse_json(lines[i], line_tag(i + 1));

        AdvertiserRecord rec;
        rec.name = std::string(detail::trim(detail::get_string(obj, "name", line_tag(i + 1))));
        if (rec.name.empty()) fail("parse-error", line_tag(i + 1) + ": advertiser name is empty");
        rec.domain = detail::to_lower(detail::trim(detail::get_string_or(obj, "domain", "")));
        try {
            rec.snapshot_time = parse_utc(detail::get_string(obj, "snapshot_time", line_tag(i + 1)));
        } catch (const Error& e) {
            if (e.code() != "invalid-timestamp") throw;
            fail("invalid-timestamp", line_tag(i + 1) + ": " + e.what());
        }

        std::string key = detail::to_lower(rec.name) + '\n' + rec.domain;
        if (seen.insert(std::move(key)).second) unique.push_back(std::move(rec));
    }
    return unique;
}

std::vector<AdvertiserRecord> load_advertiser_snapshots(const std::string& path) {
    return advertisers_from_jsonl(detail::read_file(path));
}

std::vector<App> apps_from_jsonl(const std::string& text) {
    std::vector<App> apps;
    std::unordered_set<std::string> ids;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        detail::Json obj = detail::parse_json(lines[i], line_tag(i + 1));

        App app;
        app.id = detail::get_string(obj, "id", line_tag(i + 1));
        app.name = detail::get_string(obj, "name", line_tag(i + 1));
        app.host_domain = detail::to_lower(
            detail::trim(detail::get_string(obj, "host_domain", line_tag(i + 1))));
        if (auto it = obj.find("host_url"); it != obj.end() && it->is_string()) {
            app.host_url = it->get<std::string>();
        }
        if (app.id.empty()) fail("parse-error", line_tag(i + 1) + ": app id is empty");
        if (!ids.insert(app.id).second) {
            fail("parse-error", line_tag(i + 1) + ": duplicate app id '" + app.id + "'");
        }
        apps.push_back(std::move(app));
    }
    return apps;
}

std::vector<App> load_app_registry(const std::string& path) {
    return apps_from_jsonl(detail::read_file(path));
}

std::string apps_to_jsonl(const std::vector<App>& apps) {
    std::string out;
    for (const App& app : apps) {
        detail::Json obj;
        obj["id"] = app.id;
        obj["name"] = app.name;
        obj["host_domain"] = app.host_domain;
        if (app.host_url) obj["host_url"] = *app.host_url;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

} // namespace honeygrid
