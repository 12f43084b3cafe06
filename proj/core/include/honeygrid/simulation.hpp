#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeygrid/attribution.hpp"
#include "honeygrid/corpus.hpp"
#include "honeygrid/layout.hpp"
#include "honeygrid/taxonomy.hpp"

namespace honeygrid {

/// An attacker who obtained the app's honeytoken addresses and mails
/// them directly.
struct LeakSpec {
    std::string attacker_sender;
    std::size_t emails = 1;
    ContentClass content_class = ContentClass::Unrelated;
};

/// How one app behaves during the campaign. epsilon is the per-token
/// probability that a given copy never arrives; split_sender makes the
/// app use a distinct sender address per token, and apps sharing a
/// shared_sender_group all mail from the group's first-listed address.
struct BehaviorSpec {
    std::string app_id;
    std::string sender_address;
    double epsilon = 0.0;
    bool split_sender = false;
    std::optional<std::string> shared_sender_group;
    std::optional<LeakSpec> leak;
};

/// Where an emitted email really came from.
struct TruthEntry {
    std::string app_id;
    bool leaked = false;
    std::optional<ContentClass> content_class;
};

using GroundTruth = std::map<std::size_t, TruthEntry>;

struct SimulationResult {
    std::vector<EmailRecord> corpus;
    GroundTruth truth;
};

struct AuditCounts {
    std::size_t correct = 0;
    std::size_t conflicting = 0;
    std::size_t unattributed = 0;
    std::size_t misattributed = 0;
};

/// Emits emails_per_app logical emails per spec'd app, each copied to
/// every assigned token independently with probability 1 - epsilon,
/// then the attacker emails of any leak specs. Byte-identical output
/// for identical inputs and seed. Throws "unknown-app" when a spec
/// names an app outside the layout.
SimulationResult simulate(const FrameworkLayout& layout,
                          const std::vector<BehaviorSpec>& specs,
                          std::size_t emails_per_app,
                          std::uint64_t seed);

/// 1 - (1 - epsilon)^n: the chance at least one of an app's n token
/// copies goes missing, leaving the email unattributable by pairing.
double unattribution_probability(double epsilon, std::size_t dimensions);

/// Monte Carlo counterpart of unattribution_probability: fraction of
/// trials in which any of n independent Bernoulli(epsilon) draws hits.
double estimate_unattribution(double epsilon, std::size_t dimensions, std::size_t trials,
                              std::uint64_t seed);

/// Attribution outcomes versus ground truth, one count per email.
/// Throws "coverage-mismatch" unless outcomes and truth cover exactly
/// the same refs.
AuditCounts misattribution_audit(const std::vector<AttributionOutcome>& outcomes,
                                 const GroundTruth& truth);

std::vector<BehaviorSpec> load_behavior_specs(const std::string& path);
std::vector<BehaviorSpec> behavior_specs_from_jsonl(const std::string& text);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);
GroundTruth load_truth(const std::string& path);

std::string audit_to_json(const AuditCounts& counts);

} // namespace honeygrid
