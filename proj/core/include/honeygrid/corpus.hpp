#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "honeygrid/layout.hpp"
#include "honeygrid/time.hpp"

namespace honeygrid {

/// One received email, normalized at load time. `ref` is the record's
/// position in its source corpus and stays stable through dedup and
/// routing, so downstream verdicts can cite the original line.
struct EmailRecord {
    std::size_t ref = 0;
    std::string recipient;   // lowercase
    std::string from_addr;   // lowercase bare address
    std::string from_raw;
    std::string reply_to;
    std::string message_id;
    std::string subject;
    std::string body;
    UtcSeconds timestamp{};
};

struct AdvertiserRecord {
    std::string name;
    std::string domain;      // may be empty
    UtcSeconds snapshot_time{};
};

/// Monitored mail went to a layout token; everything else lands in the
/// control stream and never reaches attribution or classification.
struct CorpusPartition {
    std::vector<EmailRecord> monitored;
    std::vector<EmailRecord> control;
};

/// Pulls the bare address out of a From-style field: "Ann <A@X.com>"
/// and plain "a@x.com" both yield "a@x.com". Empty when no address is
/// present.
std::string extract_address(const std::string& raw_field);

/// Loads a JSON-lines corpus. Records are normalized (addresses
/// lowercased, absent optional fields empty) and get sequential refs.
/// Malformed lines throw "parse-error" naming the line; bad timestamps
/// throw "invalid-timestamp".
std::vector<EmailRecord> load_email_corpus(const std::string& path);
std::vector<EmailRecord> emails_from_jsonl(const std::string& text);

std::string emails_to_jsonl(const std::vector<EmailRecord>& emails);
void save_email_corpus(const std::string& path, const std::vector<EmailRecord>& emails);

/// Keeps the first record per (recipient, message_id); records without
/// a message id are never dropped. Order is preserved.
std::vector<EmailRecord> dedupe(const std::vector<EmailRecord>& emails);

/// Splits mail by whether the recipient is one of the layout's token
/// addresses. Every input record lands in exactly one stream.
CorpusPartition route_catch_all(const std::vector<EmailRecord>& emails,
                                const FrameworkLayout& layout);

/// Loads advertiser snapshot lines and collapses repeat sightings of
/// the same (name, domain), keeping the earliest-seen record.
std::vector<AdvertiserRecord> load_advertiser_snapshots(const std::string& path);
std::vector<AdvertiserRecord> advertisers_from_jsonl(const std::string& text);

/// App registry, one JSON object per line. Duplicate ids are rejected.
std::vector<App> load_app_registry(const std::string& path);
std::vector<App> apps_from_jsonl(const std::string& text);
std::string apps_to_jsonl(const std::vector<App>& apps);

} // namespace honeygrid
