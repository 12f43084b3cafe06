#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace honeygrid {

/// A monitored third-party app.
struct App {
    std::string id;           ///< unique within a campaign
    std::string name;         ///< display name, e.g. "Thailand Property Login"
    std::string host_domain;  ///< registrable domain, lowercase, e.g. "thailand-property.com"
    std::optional<std::string> host_url;
};

/// One honeytoken email identity and the slot it occupies in a layout.
/// Tokens coming out of generate_honeytokens() are an unassigned pool
/// (empty account_id); the layout builders stamp account/axis/index.
struct Honeytoken {
    std::string address;     ///< firstname-lastname@domain, lowercase
    std::string account_id;  ///< platform account the token is associated with
    std::size_t axis = 0;    ///< 0-based dimension
    std::size_t index = 0;   ///< position along that axis
};

enum class LayoutKind { Array, Tensor };

/// Assignment of honeytokens to apps: one token per app for arrays, one
/// token per axis for tensors, with apps filling grid cells in row-major
/// input order.
struct FrameworkLayout {
    LayoutKind kind = LayoutKind::Array;
    std::vector<std::size_t> dims;  ///< per-axis position counts; {N} for arrays
    std::string domain;
    std::vector<Honeytoken> tokens;  ///< ordered by (axis, index)
    std::vector<std::string> app_ids;
    /// app ordinal -> token ordinals (indexes into `tokens`), one per axis.
    std::vector<std::vector<std::size_t>> assignment;

    std::size_t axes() const { return dims.size(); }
    std::size_t capacity() const;
    /// Index into `tokens` for (axis, position).
    std::size_t token_ordinal(std::size_t axis, std::size_t index) const;
    const Honeytoken& token_at(std::size_t axis, std::size_t index) const;
    /// Grid coordinate of an app, one entry per axis.
    std::vector<std::size_t> coords_of(std::size_t app_ordinal) const;
};

enum class StepKind {
    AssociateToken,
    SetPrimary,
    InstallApp,
    Wait,
    UninstallApp,
    RemoveToken,
};

struct ScheduleStep {
    StepKind kind = StepKind::Wait;
    std::string account_id;
    std::optional<std::string> token;  ///< token address
    std::optional<std::string> app_id;
    std::optional<int> duration_minutes;  ///< Wait steps only
};

inline constexpr int kDefaultGraceMinutes = 15;

/// Unique firstname-lastname@domain addresses drawn by seeded shuffle of
/// the name Cartesian product. Deterministic per seed.
/// Throws "capacity-exceeded" when count exceeds the distinct pairs,
/// "invalid-domain" on a malformed domain.
std::vector<Honeytoken> generate_honeytokens(const std::vector<std::string>& first_names,
                                             const std::vector<std::string>& last_names,
                                             const std::string& domain,
                                             std::size_t count,
                                             std::uint64_t seed);

/// Honeytokens needed to monitor `app_count` apps with an n-dimensional
/// layout: N for n=1, otherwise n * ceil(N^(1/n)) with all axes equal.
std::size_t tokens_required(std::size_t app_count, std::size_t dimensions);

/// Smallest r >= 1 with r^n >= value.
std::size_t nth_root_ceil(std::size_t value, std::size_t n);

/// Default axis sizes for build_tensor_layout: rows = ceil(sqrt(N)),
/// cols = ceil(N/rows) for n=2; ceil(N^(1/n)) per axis otherwise.
std::vector<std::size_t> default_tensor_dims(std::size_t app_count, std::size_t dimensions);

/// One-token-per-app layout; uses the first |apps| tokens of the pool.
FrameworkLayout build_array_layout(const std::vector<App>& apps,
                                   const std::vector<Honeytoken>& token_pool);

/// n-dimensional grid layout over `dimensions` axes. Axis sizes come from
/// `explicit_dims` when non-empty, default_tensor_dims otherwise; the pool
/// must supply sum(dims) tokens.
FrameworkLayout build_tensor_layout(const std::vector<App>& apps,
                                    const std::vector<Honeytoken>& token_pool,
                                    std::size_t dimensions,
                                    const std::vector<std::size_t>& explicit_dims = {});

/// Per-account token rotation: associate + set-primary, install every app
/// assigned to the token (each install followed by a grace wait), uninstall
/// them all, remove the token.
std::vector<ScheduleStep> emit_rotation_schedule(const FrameworkLayout& layout,
                                                 int grace_minutes = kDefaultGraceMinutes);

std::string layout_to_json(const FrameworkLayout& layout);
FrameworkLayout layout_from_json(const std::string& json_text);
FrameworkLayout load_layout(const std::string& path);
void save_layout(const std::string& path, const FrameworkLayout& layout);

std::string schedule_to_json(const std::vector<ScheduleStep>& steps);
std::string_view step_kind_name(StepKind kind);

/// Plain-text name list, one name per line, UTF-8; blank lines skipped.
std::vector<std::string> load_name_list(const std::string& path);

std::string tokens_to_jsonl(const std::vector<Honeytoken>& tokens);
std::vector<Honeytoken> tokens_from_jsonl(const std::string& text);
std::vector<Honeytoken> load_tokens(const std::string& path);

} // namespace honeygrid
