#include "honeygrid/simulation.hpp"

#include <cmath>
#include <unordered_map>

#include "honeygrid/error.hpp"
#include "honeygrid/rng.hpp"
#include "json_util.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

// Substream tags so every draw has its own generator, independent of
// iteration order.
constexpr std::uint64_t kTagAppMiss = 0xA1;
constexpr std::uint64_t kTagAppMsgId = 0xA2;
constexpr std::uint64_t kTagLeakMiss = 0xB1;
constexpr std::uint64_t kTagLeakMsgId = 0xB2;
constexpr std::uint64_t kTagTrial = 0xC1;

const char* kCampaignStart = "2018-12-01T00:00:00Z";
constexpr std::int64_t kLeakDelaySeconds = 30ll * 86400;

std::string hex16(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::string message_id_for(std::uint64_t substream_seed) {
    return "<" + hex16(SplitMix64(substream_seed).next()) + "@mx.sim>";
}

/// Per-token sender variant for split-sender apps: tag goes into the
/// local part so the domain stays plausible.
std::string per_token_sender(const std::string& base, std::size_t axis, std::size_t index) {
    std::string tag = "+t" + std::to_string(axis) + "-" + std::to_string(index);
    std::size_t at = base.rfind('@');
    if (at == std::string::npos) return base + tag;
    return base.substr(0, at) + tag + base.substr(at);
}

void check_epsilon(double epsilon, const std::string& app_id) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        fail("invalid-argument", "epsilon for app '" + app_id + "' must be within [0, 1]");
    }
}

} // namespace

SimulationResult simulate(const FrameworkLayout& layout,
                          const std::vector<BehaviorSpec>& specs,
                          std::size_t emails_per_app,
                          std::uint64_t seed) {
    std::unordered_map<std::string, std::size_t> app_ordinal;
    for (std::size_t k = 0; k < layout.app_ids.size(); ++k) {
        app_ordinal.emplace(layout.app_ids[k], k);
    }

    // Resolve shared groups to their first-listed member's address.
    std::unordered_map<std::string, std::string> group_sender;
    std::unordered_map<std::string, std::size_t> group_size;
    for (const BehaviorSpec& spec : specs) {
        if (!spec.shared_sender_group) continue;
        group_sender.emplace(*spec.shared_sender_group, spec.sender_address);
        ++group_size[*spec.shared_sender_group];
    }
    for (const auto& [group, members] : group_size) {
        if (members < 2) {
            fail("invalid-argument", "shared sender group '" + group + "' has only " +
                                         std::to_string(members) + " member");
        }
    }

    UtcSeconds start = parse_utc(kCampaignStart);
    SimulationResult result;

    auto emit = [&](const std::string& recipient, const std::string& sender,
                    const std::string& message_id, UtcSeconds at, TruthEntry truth) {
        EmailRecord rec;
        rec.ref = result.corpus.size();
        rec.recipient = recipient;
        rec.from_addr = detail::to_lower(sender);
        rec.from_raw = sender;
        rec.message_id = message_id;
        rec.timestamp = at;
        result.truth.emplace(rec.ref, std::move(truth));
        result.corpus.push_back(std::move(rec));
    };

    for (const BehaviorSpec& spec : specs) {
        check_epsilon(spec.epsilon, spec.app_id);
        auto it = app_ordinal.find(spec.app_id);
        if (it == app_ordinal.end()) {
            fail("unknown-app", "behavior spec names app '" + spec.app_id +
                                    "' which is not in the layout");
        }
        std::size_t k = it->second;
        std::vector<std::size_t> coords = layout.coords_of(k);

        std::string base_sender = spec.sender_address;
        if (spec.shared_sender_group) base_sender = group_sender.at(*spec.shared_sender_group);

        for (std::size_t e = 0; e < emails_per_app; ++e) {
            std::string message_id = message_id_for(mix_seed({seed, kTagAppMsgId, k, e}));
            UtcSeconds at = start + std::chrono::seconds(static_cast<std::int64_t>(k) * 3600 +
                                                         static_cast<std::int64_t>(e) * 60);
            for (std::size_t axis = 0; axis < layout.axes(); ++axis) {
                SplitMix64 draw(mix_seed({seed, kTagAppMiss, k, e, axis}));
                if (draw.next_double() < spec.epsilon) continue;
                std::string sender = spec.split_sender
                                         ? per_token_sender(base_sender, axis, coords[axis])
                                         : base_sender;
                emit(layout.token_at(axis, coords[axis]).address, sender, message_id, at,
                     TruthEntry{spec.app_id, false, std::nullopt});
            }
        }

        if (!spec.leak) continue;
        for (std::size_t j = 0; j < spec.leak->emails; ++j) {
            std::string message_id = message_id_for(mix_seed({seed, kTagLeakMsgId, k, j}));
            UtcSeconds at = start + std::chrono::seconds(kLeakDelaySeconds +
                                                         static_cast<std::int64_t>(k) * 3600 +
                                                         static_cast<std::int64_t>(j) * 60);
            for (std::size_t axis = 0; axis < layout.axes(); ++axis) {
                SplitMix64 draw(mix_seed({seed, kTagLeakMiss, k, j, axis}));
                if (draw.next_double() < spec.epsilon) continue;
                emit(layout.token_at(axis, coords[axis]).address, spec.leak->attacker_sender,
                     message_id, at, TruthEntry{spec.app_id, true, spec.leak->content_class});
            }
        }
    }
    return result;
}

double unattribution_probability(double epsilon, std::size_t dimensions) {
    check_epsilon(epsilon, "(formula)");
    if (dimensions == 0) fail("invalid-argument", "dimensions must be >= 1");
    return 1.0 - std::pow(1.0 - epsilon, static_cast<double>(dimensions));
}

double estimate_unattribution(double epsilon, std::size_t dimensions, std::size_t trials,
                              std::uint64_t seed) {
    check_epsilon(epsilon, "(estimate)");
    if (dimensions == 0) fail("invalid-argument", "dimensions must be >= 1");
    if (trials == 0) fail("invalid-argument", "trials must be >= 1");

    std::size_t missed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(mix_seed({seed, kTagTrial, t}));
        for (std::size_t i = 0; i < dimensions; ++i) {
            if (rng.next_double() < epsilon) {
                ++missed;
                break;
            }
        }
    }
    return static_cast<double>(missed) / static_cast<double>(trials);
}

AuditCounts misattribution_audit(const std::vector<AttributionOutcome>& outcomes,
                                 const GroundTruth& truth) {
    if (outcomes.size() != truth.size()) {
        fail("coverage-mismatch", "outcomes cover " + std::to_string(outcomes.size()) +
                                      " emails, ground truth covers " +
                                      std::to_string(truth.size()));
    }

    AuditCounts counts;
    for (const AttributionOutcome& out : outcomes) {
        auto entry = truth.find(out.email_ref);
        if (entry == truth.end()) {
            fail("coverage-mismatch",
                 "no ground truth for email ref " + std::to_string(out.email_ref));
        }
        switch (out.verdict) {
            case Verdict::Conflicting: ++counts.conflicting; break;
            case Verdict::Unattributed: ++counts.unattributed; break;
            case Verdict::Attributed:
                if (out.app_id == entry->second.app_id) ++counts.correct;
                else ++counts.misattributed;
                break;
        }
    }
    return counts;
}

std::vector<BehaviorSpec> behavior_specs_from_jsonl(const std::string& text) {
    std::vector<BehaviorSpec> specs;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        std::string what = "behavior line " + std::to_string(i + 1);
        detail::Json obj = detail::parse_json(lines[i], what);

        BehaviorSpec spec;
        spec.app_id = detail::get_string(obj, "app_id", what);
        spec.sender_address = detail::get_string(obj, "sender_address", what);
        if (auto it = obj.find("epsilon"); it != obj.end() && it->is_number()) {
            spec.epsilon = it->get<double>();
        }
        if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
            fail("parse-error", what + ": epsilon must be within [0, 1]");
        }
        if (auto it = obj.find("split_sender"); it != obj.end() && it->is_boolean()) {
            spec.split_sender = it->get<bool>();
        }
        if (auto it = obj.find("shared_sender_group"); it != obj.end() && it->is_string()) {
            spec.shared_sender_group = it->get<std::string>();
        }
        if (auto it = obj.find("leak"); it != obj.end() && it->is_object()) {
            LeakSpec leak;
            leak.attacker_sender = detail::get_string(*it, "attacker_sender", what);
            if (auto n = it->find("emails"); n != it->end() && n->is_number_unsigned()) {
                leak.emails = n->get<std::size_t>();
            }
            leak.content_class =
                content_class_from_name(detail::get_string_or(*it, "content_class", "unrelated"));
            spec.leak = std::move(leak);
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<BehaviorSpec> load_behavior_specs(const std::string& path) {
    return behavior_specs_from_jsonl(detail::read_file(path));
}

std::string truth_to_json(const GroundTruth& truth) {
    detail::Json doc = detail::Json::object();
    for (const auto& [ref, entry] : truth) {
        detail::Json e;
        e["app_id"] = entry.app_id;
        e["origin"] = entry.leaked ? "attacker" : "app";
        if (entry.content_class) {
            e["content_class"] = std::string(content_class_name(*entry.content_class));
        }
        doc[std::to_string(ref)] = std::move(e);
    }
    return doc.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
    detail::Json doc = detail::parse_json(text, "ground truth");
    if (!doc.is_object()) fail("parse-error", "ground truth: expected a JSON object");

    GroundTruth truth;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::size_t ref = 0;
        try {
            ref = static_cast<std::size_t>(std::stoull(it.key()));
        } catch (const std::exception&) {
            fail("parse-error", "ground truth: ref '" + it.key() + "' is not a number");
        }
        TruthEntry entry;
        entry.app_id = detail::get_string(it.value(), "app_id", "ground truth");
        entry.leaked = detail::get_string_or(it.value(), "origin", "app") == "attacker";
        std::string content = detail::get_string_or(it.value(), "content_class", "");
        if (!content.empty()) entry.content_class = content_class_from_name(content);
        truth.emplace(ref, std::move(entry));
    }
    return truth;
}

GroundTruth load_truth(const std::string& path) {
    return truth_from_json(detail::read_file(path));
}

std::string audit_to_json(const AuditCounts& counts) {
    detail::Json obj;
    obj["correct"] = counts.correct;
    obj["conflicting"] = counts.conflicting;
    obj["unattributed"] = counts.unattributed;
    obj["misattributed"] = counts.misattributed;
    return obj.dump(2) + "\n";
}

} // namespace honeygrid
