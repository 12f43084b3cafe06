// Command-line front end for the honeytoken campaign toolkit: plans
// layouts, generates tokens, ingests and attributes mail, classifies
// emails and advertisers, simulates campaigns, and builds reports.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "honeygrid/attribution.hpp"
#include "honeygrid/corpus.hpp"
#include "honeygrid/error.hpp"
#include "honeygrid/layout.hpp"
#include "honeygrid/recognize.hpp"
#include "honeygrid/report.hpp"
#include "honeygrid/simulation.hpp"

namespace {

using namespace honeygrid;
using Json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io-error", "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail("io-error", "read failed for '" + path + "'");
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("io-error", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail("io-error", "write failed for '" + path + "'");
}

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::unordered_map<std::string, std::string> load_oracle_map(const std::string& path) {
    Json doc = Json::parse(slurp(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        fail("parse-error", "oracle map '" + path + "' must be a JSON object");
    }
    std::unordered_map<std::string, std::string> map;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.value().is_string()) map.emplace(it.key(), it.value().get<std::string>());
    }
    return map;
}

struct PlanOptions {
    std::string apps_path;
    std::string framework = "matrix";
    std::size_t dimensions = 2;
    std::string dims_csv;
    std::string tokens_path;
    std::string first_names_path;
    std::string last_names_path;
    std::string domain;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string schedule_path;
    int grace_minutes = kDefaultGraceMinutes;
};

std::vector<std::size_t> parse_dims_csv(const std::string& csv) {
    std::vector<std::size_t> dims;
    std::istringstream in(csv);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            dims.push_back(static_cast<std::size_t>(std::stoull(part)));
        } catch (const std::exception&) {
            fail("invalid-argument", "--dims expects comma-separated integers");
        }
    }
    return dims;
}

std::vector<Honeytoken> token_pool_for(const PlanOptions& opt, std::size_t count) {
    if (!opt.tokens_path.empty()) return load_tokens(opt.tokens_path);
    if (opt.first_names_path.empty() || opt.last_names_path.empty() || opt.domain.empty()) {
        fail("invalid-argument",
             "plan needs either --tokens or --first-names/--last-names/--domain");
    }
    return generate_honeytokens(load_name_list(opt.first_names_path),
                                load_name_list(opt.last_names_path), opt.domain, count,
                                opt.seed);
}

int run_plan(const PlanOptions& opt) {
    std::vector<App> apps = load_app_registry(opt.apps_path);

    FrameworkLayout layout;
    if (opt.framework == "array") {
        layout = build_array_layout(apps, token_pool_for(opt, apps.size()));
    } else if (opt.framework == "matrix" || opt.framework == "tensor") {
        std::size_t n = opt.framework == "matrix" ? 2 : opt.dimensions;
        std::vector<std::size_t> dims =
            opt.dims_csv.empty() ? default_tensor_dims(apps.size(), n)
                                 : parse_dims_csv(opt.dims_csv);
        std::size_t count = 0;
        for (std::size_t d : dims) count += d;
        layout = build_tensor_layout(apps, token_pool_for(opt, count), n, dims);
    } else {
        fail("invalid-argument", "--framework must be array, matrix, or tensor");
    }

    save_layout(opt.out_path, layout);
    if (!opt.schedule_path.empty()) {
        spill(opt.schedule_path, schedule_to_json(emit_rotation_schedule(layout,
                                                                         opt.grace_minutes)));
    }
    std::printf("layout kind=%s apps=%zu tokens=%zu\n",
                layout.kind == LayoutKind::Array ? "array" : "tensor", layout.app_ids.size(),
                layout.tokens.size());
    return 0;
}

struct TokenOptions {
    std::string first_names_path;
    std::string last_names_path;
    std::string domain;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_tokens(const TokenOptions& opt) {
    std::vector<Honeytoken> tokens =
        generate_honeytokens(load_name_list(opt.first_names_path),
                             load_name_list(opt.last_names_path), opt.domain, opt.count,
                             opt.seed);
    spill(opt.out_path, tokens_to_jsonl(tokens));
    std::printf("tokens=%zu domain=%s\n", tokens.size(), opt.domain.c_str());
    return 0;
}

struct IngestOptions {
    std::string layout_path;
    std::string corpus_path;
    std::string monitored_path;
    std::string control_path;
    bool keep_duplicates = false;
};

int run_ingest(const IngestOptions& opt) {
    FrameworkLayout layout = load_layout(opt.layout_path);
    std::vector<EmailRecord> corpus = load_email_corpus(opt.corpus_path);
    std::size_t loaded = corpus.size();
    if (!opt.keep_duplicates) corpus = dedupe(corpus);
    CorpusPartition partition = route_catch_all(corpus, layout);

    if (!opt.monitored_path.empty()) save_email_corpus(opt.monitored_path, partition.monitored);
    if (!opt.control_path.empty()) save_email_corpus(opt.control_path, partition.control);
    std::printf("loaded=%zu duplicates=%zu monitored=%zu control=%zu\n", loaded,
                loaded - corpus.size(), partition.monitored.size(), partition.control.size());
    return 0;
}

struct AttributeOptions {
    std::string layout_path;
    std::string corpus_path;
    std::string out_path;
    std::int64_t window_seconds = -1;
    std::string oracle_path;
    std::string apps_path;
    std::string export_oracle_path;
    bool resolve = false;
};

int run_attribute(const AttributeOptions& opt) {
    FrameworkLayout layout = load_layout(opt.layout_path);
    std::vector<EmailRecord> monitored = load_email_corpus(opt.corpus_path);

    AttributionConfig config;
    if (opt.window_seconds >= 0) config.pairing_window_seconds = opt.window_seconds;
    std::vector<AttributionOutcome> outcomes = attribute(layout, monitored, config);

    if (!opt.export_oracle_path.empty()) {
        Json doc = Json::object();
        auto oracle = sender_oracle(outcomes, monitored);
        std::vector<std::string> senders;
        senders.reserve(oracle.size());
        for (const auto& [sender, app] : oracle) senders.push_back(sender);
        std::sort(senders.begin(), senders.end());
        for (const std::string& sender : senders) doc[sender] = oracle.at(sender);
        spill(opt.export_oracle_path, doc.dump(2) + "\n");
    }

    if (opt.resolve) {
        if (opt.apps_path.empty()) fail("invalid-argument", "--resolve needs --apps");
        std::vector<App> apps = load_app_registry(opt.apps_path);
        std::unordered_map<std::string, std::string> oracle;
        if (!opt.oracle_path.empty()) oracle = load_oracle_map(opt.oracle_path);

        ResolutionResult resolution =
            resolve_unattributed(layout, monitored, outcomes, oracle, apps);
        std::unordered_map<std::size_t, const AttributionOutcome*> replacement;
        for (const AttributionOutcome& out : resolution.resolved) {
            replacement.emplace(out.email_ref, &out);
        }
        for (const AttributionOutcome& out : resolution.manual_queue) {
            replacement.emplace(out.email_ref, &out);
        }
        for (AttributionOutcome& out : outcomes) {
            if (auto it = replacement.find(out.email_ref);
                out.verdict == Verdict::Unattributed && it != replacement.end()) {
                out = *it->second;
            }
        }
    }

    std::size_t attributed = 0, conflicting = 0, unattributed = 0;
    for (const AttributionOutcome& out : outcomes) {
        switch (out.verdict) {
            case Verdict::Attributed: ++attributed; break;
            case Verdict::Conflicting: ++conflicting; break;
            case Verdict::Unattributed: ++unattributed; break;
        }
    }
    if (!opt.out_path.empty()) spill(opt.out_path, outcomes_to_jsonl(outcomes));
    std::printf("attributed=%zu conflicting=%zu unattributed=%zu\n", attributed, conflicting,
                unattributed);
    return 0;
}

struct ClassifyEmailOptions {
    std::string apps_path;
    std::string corpus_path;
    std::string outcomes_path;
    std::string stoplist_path;
    std::string out_path;
    std::string labels_path;
};

int run_classify_emails(const ClassifyEmailOptions& opt) {
    std::vector<App> apps = load_app_registry(opt.apps_path);
    std::vector<EmailRecord> monitored = load_email_corpus(opt.corpus_path);
    std::vector<AttributionOutcome> outcomes = outcomes_from_jsonl(slurp(opt.outcomes_path));
    std::vector<std::string> stoplist;
    if (!opt.stoplist_path.empty()) stoplist = read_lines(opt.stoplist_path);

    auto labels = classify_attributed(outcomes, monitored, apps, stoplist);
    std::vector<AppVerdict> verdicts = label_apps(outcomes, labels, apps);

    if (!opt.labels_path.empty()) {
        std::string out;
        for (const AttributionOutcome& outcome : outcomes) {
            auto it = labels.find(outcome.email_ref);
            if (it == labels.end()) continue;
            Json obj;
            obj["email_ref"] = outcome.email_ref;
            obj["recognized"] = it->second.recognized;
            if (it->second.recognized) {
                obj["matched_keyword"] = it->second.matched_keyword;
                obj["matched_field"] = it->second.matched_field;
            }
            out += obj.dump();
            out += '\n';
        }
        spill(opt.labels_path, out);
    }
    if (!opt.out_path.empty()) spill(opt.out_path, verdicts_to_jsonl(verdicts));

    std::size_t recognized_only = 0, has_unrecognized = 0, no_emails = 0;
    for (const AppVerdict& verdict : verdicts) {
        switch (verdict.label) {
            case AppLabel::RecognizedOnly: ++recognized_only; break;
            case AppLabel::HasUnrecognized: ++has_unrecognized; break;
            case AppLabel::NoEmails: ++no_emails; break;
        }
    }
    std::printf("recognized-only=%zu has-unrecognized=%zu no-emails=%zu\n", recognized_only,
                has_unrecognized, no_emails);
    return 0;
}

struct ClassifyAdOptions {
    std::string apps_path;
    std::string advertisers_path;
    std::string stoplist_path;
    std::string out_path;
};

int run_classify_advertisers(const ClassifyAdOptions& opt) {
    std::vector<App> apps = load_app_registry(opt.apps_path);
    std::vector<AdvertiserRecord> advertisers = load_advertiser_snapshots(opt.advertisers_path);
    std::vector<std::string> stoplist;
    if (!opt.stoplist_path.empty()) stoplist = read_lines(opt.stoplist_path);
    std::vector<KeywordSet> keyword_sets = generate_keyword_sets(apps, stoplist);

    std::size_t recognized = 0;
    std::string out;
    for (const AdvertiserRecord& advertiser : advertisers) {
        AdvertiserMatch match = classify_advertiser(advertiser, keyword_sets);
        if (match.label.recognized) ++recognized;
        Json obj;
        obj["name"] = advertiser.name;
        if (!advertiser.domain.empty()) obj["domain"] = advertiser.domain;
        obj["recognized"] = match.label.recognized;
        if (match.label.recognized) {
            obj["matched_keyword"] = match.label.matched_keyword;
            obj["matched_field"] = match.label.matched_field;
            obj["matched_app_ids"] = match.matched_app_ids;
        }
        out += obj.dump();
        out += '\n';
    }
    if (!opt.out_path.empty()) spill(opt.out_path, out);
    std::printf("advertisers=%zu recognized=%zu unrecognized=%zu\n", advertisers.size(),
                recognized, advertisers.size() - recognized);
    return 0;
}

struct SimulateOptions {
    std::string layout_path;
    std::string behaviors_path;
    std::size_t emails_per_app = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string truth_path;
};

int run_simulate(const SimulateOptions& opt) {
    FrameworkLayout layout = load_layout(opt.layout_path);
    std::vector<BehaviorSpec> specs = load_behavior_specs(opt.behaviors_path);
    SimulationResult result = simulate(layout, specs, opt.emails_per_app, opt.seed);

    save_email_corpus(opt.out_path, result.corpus);
    if (!opt.truth_path.empty()) spill(opt.truth_path, truth_to_json(result.truth));
    std::printf("emails=%zu apps=%zu seed=%llu\n", result.corpus.size(), specs.size(),
                static_cast<unsigned long long>(opt.seed));
    return 0;
}

struct EvaluateOptions {
    std::string matrix_path;
    std::string array_path;
    std::string out_path;
};

int run_evaluate(const EvaluateOptions& opt) {
    ConfusionCounts counts =
        evaluate(load_verdicts(opt.matrix_path), load_verdicts(opt.array_path));
    if (!opt.out_path.empty()) spill(opt.out_path, confusion_to_json(counts));
    std::printf("tp=%zu tn=%zu fp=%zu fn=%zu\n", counts.tp, counts.tn, counts.fp, counts.fn);
    return 0;
}

struct ReportOptions {
    std::string verdicts_path;
    std::string annotations_path;
    std::string advertisers_path;
    std::string apps_path;
    std::string out_path;
    std::string text_path;
    std::string review_queue_path;
    std::string corpus_path;
};

int run_report(const ReportOptions& opt) {
    std::vector<AppVerdict> verdicts = load_verdicts(opt.verdicts_path);

    if (!opt.review_queue_path.empty()) {
        if (opt.corpus_path.empty()) fail("invalid-argument", "--review-queue needs --corpus");
        spill(opt.review_queue_path,
              export_review_queue(verdicts, load_email_corpus(opt.corpus_path)));
    }

    std::vector<Annotation> annotations;
    if (!opt.annotations_path.empty()) annotations = load_annotations(opt.annotations_path);

    std::vector<AdvertiserRecord> advertisers;
    std::vector<AdvertiserMatch> matches;
    if (!opt.advertisers_path.empty()) {
        if (opt.apps_path.empty()) fail("invalid-argument", "--advertisers needs --apps");
        advertisers = load_advertiser_snapshots(opt.advertisers_path);
        std::vector<KeywordSet> keyword_sets =
            generate_keyword_sets(load_app_registry(opt.apps_path));
        matches.reserve(advertisers.size());
        for (const AdvertiserRecord& advertiser : advertisers) {
            matches.push_back(classify_advertiser(advertiser, keyword_sets));
        }
    }

    std::vector<MisuseFinding> findings =
        build_misuse_report(verdicts, annotations, advertisers, matches);
    if (!opt.out_path.empty()) spill(opt.out_path, findings_to_json(findings));
    std::string table = findings_to_text(findings, advertisers);
    if (!opt.text_path.empty()) spill(opt.text_path, table);
    std::fputs(table.c_str(), stdout);
    return 0;
}

struct DeletionAuditOptions {
    std::string requests_path;
    std::string outcomes_path;
    std::string corpus_path;
    std::string out_path;
};

int run_deletion_audit(const DeletionAuditOptions& opt) {
    std::vector<DeletionRequest> requests = load_deletion_requests(opt.requests_path);
    std::vector<AttributionOutcome> outcomes = outcomes_from_jsonl(slurp(opt.outcomes_path));
    std::vector<EmailRecord> monitored = load_email_corpus(opt.corpus_path);

    std::vector<DeletionViolation> violations =
        flag_post_deletion_emails(requests, collect_attributed(outcomes, monitored));
    std::size_t acknowledged = 0;
    for (const DeletionViolation& violation : violations) {
        if (violation.acknowledged) ++acknowledged;
    }
    if (!opt.out_path.empty()) spill(opt.out_path, violations_to_json(violations));
    std::printf("requested=%zu violating=%zu acknowledged-violations=%zu\n", requests.size(),
                violations.size(), acknowledged);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"honeytoken campaign toolkit"};
    app.require_subcommand(1);

    PlanOptions plan_opt;
    CLI::App* plan = app.add_subcommand("plan", "build a sharing layout and rotation schedule");
    plan->add_option("--apps", plan_opt.apps_path, "app registry JSONL")->required();
    plan->add_option("--framework", plan_opt.framework, "array, matrix, or tensor");
    plan->add_option("--n", plan_opt.dimensions, "tensor dimension count");
    plan->add_option("--dims", plan_opt.dims_csv, "explicit axis sizes, comma separated");
    plan->add_option("--tokens", plan_opt.tokens_path, "pre-generated honeytoken JSONL");
    plan->add_option("--first-names", plan_opt.first_names_path, "first-name list");
    plan->add_option("--last-names", plan_opt.last_names_path, "last-name list");
    plan->add_option("--domain", plan_opt.domain, "honeytoken email domain");
    plan->add_option("--seed", plan_opt.seed, "deterministic name-pair shuffle seed");
    plan->add_option("--out", plan_opt.out_path, "layout JSON output")->required();
    plan->add_option("--schedule", plan_opt.schedule_path, "rotation schedule JSON output");
    plan->add_option("--grace", plan_opt.grace_minutes, "minutes to wait after each install");
    plan->callback([&]() { run_plan(plan_opt); });

    TokenOptions token_opt;
    CLI::App* tokens = app.add_subcommand("tokens", "generate honeytoken addresses");
    tokens->add_option("--first-names", token_opt.first_names_path)->required();
    tokens->add_option("--last-names", token_opt.last_names_path)->required();
    tokens->add_option("--domain", token_opt.domain)->required();
    tokens->add_option("--count", token_opt.count)->required();
    tokens->add_option("--seed", token_opt.seed);
    tokens->add_option("--out", token_opt.out_path)->required();
    tokens->callback([&]() { run_tokens(token_opt); });

    IngestOptions ingest_opt;
    CLI::App* ingest = app.add_subcommand("ingest", "dedupe a corpus and split off catch-all");
    ingest->add_option("--layout", ingest_opt.layout_path)->required();
    ingest->add_option("--corpus", ingest_opt.corpus_path)->required();
    ingest->add_option("--out-monitored", ingest_opt.monitored_path);
    ingest->add_option("--out-control", ingest_opt.control_path);
    ingest->add_flag("--keep-duplicates", ingest_opt.keep_duplicates);
    ingest->callback([&]() { run_ingest(ingest_opt); });

    AttributeOptions attr_opt;
    CLI::App* attr = app.add_subcommand("attribute", "attribute monitored mail to apps");
    attr->add_option("--layout", attr_opt.layout_path)->required();
    attr->add_option("--corpus", attr_opt.corpus_path, "monitored emails JSONL")->required();
    attr->add_option("--out", attr_opt.out_path, "attribution outcomes JSONL");
    attr->add_option("--window", attr_opt.window_seconds, "sender pairing window in seconds");
    attr->add_flag("--resolve", attr_opt.resolve, "run the unattributed resolution steps");
    attr->add_option("--oracle", attr_opt.oracle_path, "sender-to-app JSON map for step 1");
    attr->add_option("--apps", attr_opt.apps_path, "app registry for keyword resolution");
    attr->add_option("--export-oracle", attr_opt.export_oracle_path,
                     "write the sender-to-app map derived from these outcomes");
    attr->callback([&]() { run_attribute(attr_opt); });

    CLI::App* classify = app.add_subcommand("classify", "keyword recognition");
    classify->require_subcommand(1);

    ClassifyEmailOptions cls_email_opt;
    CLI::App* cls_emails = classify->add_subcommand("emails", "label attributed emails");
    cls_emails->add_option("--apps", cls_email_opt.apps_path)->required();
    cls_emails->add_option("--corpus", cls_email_opt.corpus_path)->required();
    cls_emails->add_option("--outcomes", cls_email_opt.outcomes_path)->required();
    cls_emails->add_option("--stoplist", cls_email_opt.stoplist_path);
    cls_emails->add_option("--out", cls_email_opt.out_path, "per-app verdict JSONL");
    cls_emails->add_option("--labels", cls_email_opt.labels_path, "per-email label JSONL");
    cls_emails->callback([&]() { run_classify_emails(cls_email_opt); });

    ClassifyAdOptions cls_ad_opt;
    CLI::App* cls_ads = classify->add_subcommand("advertisers", "label advertiser snapshots");
    cls_ads->add_option("--apps", cls_ad_opt.apps_path)->required();
    cls_ads->add_option("--advertisers", cls_ad_opt.advertisers_path)->required();
    cls_ads->add_option("--stoplist", cls_ad_opt.stoplist_path);
    cls_ads->add_option("--out", cls_ad_opt.out_path);
    cls_ads->callback([&]() { run_classify_advertisers(cls_ad_opt); });

    SimulateOptions sim_opt;
    CLI::App* simulate = app.add_subcommand("simulate", "emit a synthetic campaign corpus");
    simulate->add_option("--layout", sim_opt.layout_path)->required();
    simulate->add_option("--behaviors", sim_opt.behaviors_path)->required();
    simulate->add_option("--emails-per-app", sim_opt.emails_per_app);
    simulate->add_option("--seed", sim_opt.seed);
    simulate->add_option("--out", sim_opt.out_path, "corpus JSONL output")->required();
    simulate->add_option("--truth", sim_opt.truth_path, "ground truth JSON output");
    simulate->callback([&]() { run_simulate(sim_opt); });

    EvaluateOptions eval_opt;
    CLI::App* evaluate = app.add_subcommand("evaluate", "confusion counts, matrix vs array");
    evaluate->add_option("--matrix", eval_opt.matrix_path, "matrix-side verdict JSONL")
        ->required();
    evaluate->add_option("--array", eval_opt.array_path, "array-side verdict JSONL")->required();
    evaluate->add_option("--out", eval_opt.out_path, "confusion counts JSON");
    evaluate->callback([&]() { run_evaluate(eval_opt); });

    ReportOptions report_opt;
    CLI::App* report = app.add_subcommand("report", "combine verdicts and annotations");
    report->add_option("--verdicts", report_opt.verdicts_path)->required();
    report->add_option("--annotations", report_opt.annotations_path);
    report->add_option("--advertisers", report_opt.advertisers_path);
    report->add_option("--apps", report_opt.apps_path);
    report->add_option("--out", report_opt.out_path, "findings JSON");
    report->add_option("--text", report_opt.text_path, "findings table file");
    report->add_option("--review-queue", report_opt.review_queue_path,
                       "export unrecognized emails for manual annotation");
    report->add_option("--corpus", report_opt.corpus_path, "monitored emails JSONL");
    report->callback([&]() { run_report(report_opt); });

    DeletionAuditOptions del_opt;
    CLI::App* del = app.add_subcommand("deletion-audit", "flag mail sent after deletion requests");
    del->add_option("--requests", del_opt.requests_path)->required();
    del->add_option("--outcomes", del_opt.outcomes_path)->required();
    del->add_option("--corpus", del_opt.corpus_path)->required();
    del->add_option("--out", del_opt.out_path);
    del->callback([&]() { run_deletion_audit(del_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const honeygrid::Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return e.code() == "io-error" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
