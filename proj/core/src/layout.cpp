#include "honeygrid/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "honeygrid/error.hpp"
#include "honeygrid/rng.hpp"
#include "json_util.hpp"
#include "strutil.hpp"

namespace honeygrid {

namespace {

std::string account_for_axis(std::size_t axis) {
    return "axis-" + std::to_string(axis);
}

std::string normalize_domain(const std::string& raw) {
    std::string domain = detail::to_lower(detail::trim(raw));
    bool ok = !domain.empty() && domain.find('.') != std::string::npos &&
              domain.find('@') == std::string::npos &&
              domain.find_first_of(" \t") == std::string::npos &&
              domain.front() != '.' && domain.back() != '.' &&
              domain.front() != '-' && domain.back() != '-';
    if (!ok) fail("invalid-domain", "not a usable email domain: '" + raw + "'");
    return domain;
}

std::vector<std::string> normalize_names(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const std::string& raw : names) {
        std::string name = detail::to_lower(detail::trim(raw));
        std::replace_if(name.begin(), name.end(),
                        [](unsigned char c) { return std::isspace(c) != 0; }, '-');
        if (name.empty() || name.find('@') != std::string::npos) continue;
        if (seen.insert(name).second) out.push_back(std::move(name));
    }
    return out;
}

/// True when r^n >= value, computed without overflow.
bool pow_at_least(std::size_t r, std::size_t n, std::size_t value) {
    unsigned __int128 acc = 1;
    for (std::size_t i = 0; i < n; ++i) {
        acc *= r;
        if (acc >= value) return true;
    }
    return acc >= value;
}

void check_unique_app_ids(const std::vector<App>& apps) {
    std::unordered_set<std::string> seen;
    for (const App& app : apps) {
        if (app.id.empty()) fail("invalid-argument", "app with empty id");
        if (!seen.insert(app.id).second) {
            fail("invalid-argument", "duplicate app id '" + app.id + "'");
        }
    }
}

std::string domain_of_address(const std::string& address) {
    std::size_t at = address.rfind('@');
    return at == std::string::npos ? std::string{} : address.substr(at + 1);
}

} // namespace

std::size_t FrameworkLayout::capacity() const {
    std::size_t cap = 1;
    for (std::size_t d : dims) {
        if (d != 0 && cap > std::numeric_limits<std::size_t>::max() / d) {
            return std::numeric_limits<std::size_t>::max();
        }
        cap *= d;
    }
    return dims.empty() ? 0 : cap;
}

std::size_t FrameworkLayout::token_ordinal(std::size_t axis, std::size_t index) const {
    std::size_t offset = 0;
    for (std::size_t a = 0; a < axis; ++a) offset += dims[a];
    return offset + index;
}

const Honeytoken& FrameworkLayout::token_at(std::size_t axis, std::size_t index) const {
    return tokens.at(token_ordinal(axis, index));
}

std::vector<std::size_t> FrameworkLayout::coords_of(std::size_t app_ordinal) const {
    const std::vector<std::size_t>& tuple = assignment.at(app_ordinal);
    std::vector<std::size_t> coords(tuple.size());
    for (std::size_t a = 0; a < tuple.size(); ++a) coords[a] = tokens[tuple[a]].index;
    return coords;
}

std::vector<Honeytoken> generate_honeytokens(const std::vector<std::string>& first_names,
                                             const std::vector<std::string>& last_names,
                                             const std::string& domain,
                                             std::size_t count,
                                             std::uint64_t seed) {
    std::string dom = normalize_domain(domain);
    if (count == 0) return {};

    std::vector<std::string> firsts = normalize_names(first_names);
    std::vector<std::string> lasts = normalize_names(last_names);
    std::size_t pairs = firsts.size() * lasts.size();
    if (count > pairs) {
        fail("capacity-exceeded", "need " + std::to_string(count) + " addresses but only " +
                                      std::to_string(pairs) + " name pairs exist");
    }

    std::vector<std::size_t> order(pairs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    seeded_shuffle(order, seed);

    std::vector<Honeytoken> tokens;
    tokens.reserve(count);
    std::unordered_set<std::string> used;
    for (std::size_t pair : order) {
        if (tokens.size() == count) break;
        const std::string& first = firsts[pair / lasts.size()];
        const std::string& last = lasts[pair % lasts.size()];
        std::string address = first + "-" + last + "@" + dom;
        // Hyphenated names can collide ("anne-marie"+"smith" vs "anne"+"marie-smith").
        if (!used.insert(address).second) continue;
        tokens.push_back(Honeytoken{std::move(address), "", 0, tokens.size()});
    }
    if (tokens.size() < count) {
        fail("capacity-exceeded", "name pairs collapse to fewer than " + std::to_string(count) +
                                      " distinct addresses");
    }
    return tokens;
}

std::size_t nth_root_ceil(std::size_t value, std::size_t n) {
    if (value == 0 || n == 0) fail("invalid-argument", "nth_root_ceil needs value >= 1, n >= 1");
    if (n == 1 || value == 1) return n == 1 ? value : 1;

    std::size_t r = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(value), 1.0 / static_cast<double>(n))));
    r = std::max<std::size_t>(r, 1);
    while (r > 1 && pow_at_least(r - 1, n, value)) --r;
    while (!pow_at_least(r, n, value)) ++r;
    return r;
}

std::size_t tokens_required(std::size_t app_count, std::size_t dimensions) {
    if (app_count == 0) fail("invalid-argument", "app_count must be >= 1");
    if (dimensions == 0) fail("invalid-argument", "dimensions must be >= 1");
    if (dimensions == 1) return app_count;
    return dimensions * nth_root_ceil(app_count, dimensions);
}

std::vector<std::size_t> default_tensor_dims(std::size_t app_count, std::size_t dimensions) {
    if (dimensions < 2) fail("invalid-argument", "tensor layouts need >= 2 dimensions");
    if (app_count == 0) return std::vector<std::size_t>(dimensions, 0);
    if (dimensions == 2) {
        std::size_t rows = nth_root_ceil(app_count, 2);
        std::size_t cols = (app_count + rows - 1) / rows;
        return {rows, cols};
    }
    return std::vector<std::size_t>(dimensions, nth_root_ceil(app_count, dimensions));
}

FrameworkLayout build_array_layout(const std::vector<App>& apps,
                                   const std::vector<Honeytoken>& token_pool) {
    check_unique_app_ids(apps);
    if (token_pool.size() < apps.size()) {
        fail("insufficient-tokens", "array layout for " + std::to_string(apps.size()) +
                                        " apps needs as many tokens, got " +
                                        std::to_string(token_pool.size()));
    }

    FrameworkLayout layout;
    layout.kind = LayoutKind::Array;
    layout.dims = {apps.size()};
    layout.tokens.reserve(apps.size());
    for (std::size_t k = 0; k < apps.size(); ++k) {
        Honeytoken token = token_pool[k];
        token.account_id = account_for_axis(0);
        token.axis = 0;
        token.index = k;
        layout.tokens.push_back(std::move(token));
        layout.app_ids.push_back(apps[k].id);
        layout.assignment.push_back({k});
    }
    layout.domain = layout.tokens.empty() ? "" : domain_of_address(layout.tokens.front().address);
    return layout;
}

FrameworkLayout build_tensor_layout(const std::vector<App>& apps,
                                    const std::vector<Honeytoken>& token_pool,
                                    std::size_t dimensions,
                                    const std::vector<std::size_t>& explicit_dims) {
    check_unique_app_ids(apps);
    if (dimensions < 2) fail("invalid-argument", "tensor layouts need >= 2 dimensions");

    std::vector<std::size_t> dims = explicit_dims;
    if (dims.empty()) {
        dims = default_tensor_dims(apps.size(), dimensions);
    } else if (dims.size() != dimensions) {
        fail("invalid-argument", "explicit dims length must equal the dimension count");
    }

    FrameworkLayout layout;
    layout.kind = LayoutKind::Tensor;
    layout.dims = dims;
    if (layout.capacity() < apps.size()) {
        fail("capacity-exceeded", "grid capacity " + std::to_string(layout.capacity()) +
                                      " is below app count " + std::to_string(apps.size()));
    }

    std::size_t needed = std::accumulate(dims.begin(), dims.end(), std::size_t{0});
    if (token_pool.size() < needed) {
        fail("insufficient-tokens", "tensor layout needs " + std::to_string(needed) +
                                        " tokens, got " + std::to_string(token_pool.size()));
    }

    std::size_t next = 0;
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
        for (std::size_t index = 0; index < dims[axis]; ++index) {
            Honeytoken token = token_pool[next++];
            token.account_id = account_for_axis(axis);
            token.axis = axis;
            token.index = index;
            layout.tokens.push_back(std::move(token));
        }
    }
    layout.domain = layout.tokens.empty() ? "" : domain_of_address(layout.tokens.front().address);

    // Row-major fill: app k sits at the cell whose mixed-radix encoding is k.
    for (std::size_t k = 0; k < apps.size(); ++k) {
        std::size_t rest = k;
        std::vector<std::size_t> tuple(dims.size());
        for (std::size_t axis = dims.size(); axis-- > 0;) {
            std::size_t coord = rest % dims[axis];
            rest /= dims[axis];
            tuple[axis] = layout.token_ordinal(axis, coord);
        }
        layout.app_ids.push_back(apps[k].id);
        layout.assignment.push_back(std::move(tuple));
    }
    return layout;
}

std::vector<ScheduleStep> emit_rotation_schedule(const FrameworkLayout& layout,
                                                 int grace_minutes) {
    if (grace_minutes < 0) fail("invalid-argument", "grace period must be >= 0 minutes");

    std::vector<ScheduleStep> steps;
    for (std::size_t axis = 0; axis < layout.axes(); ++axis) {
        for (std::size_t index = 0; index < layout.dims[axis]; ++index) {
            const Honeytoken& token = layout.token_at(axis, index);
            std::size_t ordinal = layout.token_ordinal(axis, index);

            std::vector<std::size_t> assigned;
            for (std::size_t k = 0; k < layout.assignment.size(); ++k) {
                if (layout.assignment[k][axis] == ordinal) assigned.push_back(k);
            }
            if (assigned.empty()) continue; // unused grid slot, nothing to share

            steps.push_back({StepKind::AssociateToken, token.account_id, token.address, {}, {}});
            steps.push_back({StepKind::SetPrimary, token.account_id, token.address, {}, {}});
            for (std::size_t k : assigned) {
                steps.push_back({StepKind::InstallApp, token.account_id, {}, layout.app_ids[k], {}});
                steps.push_back({StepKind::Wait, token.account_id, {}, {}, grace_minutes});
            }
            for (std::size_t k : assigned) {
                steps.push_back({StepKind::UninstallApp, token.account_id, {}, layout.app_ids[k], {}});
            }
            steps.push_back({StepKind::RemoveToken, token.account_id, token.address, {}, {}});
        }
    }
    return steps;
}

std::string_view step_kind_name(StepKind kind) {
    switch (kind) {
        case StepKind::AssociateToken: return "associate-token";
        case StepKind::SetPrimary: return "set-primary";
        case StepKind::InstallApp: return "install-app";
        case StepKind::Wait: return "wait";
        case StepKind::UninstallApp: return "uninstall-app";
        case StepKind::RemoveToken: return "remove-token";
    }
    return "unknown";
}

namespace {

detail::Json token_to_json(const Honeytoken& token) {
    detail::Json t;
    t["address"] = token.address;
    t["account_id"] = token.account_id;
    t["axis"] = token.axis;
    t["index"] = token.index;
    return t;
}

Honeytoken token_from_json(const detail::Json& t, const std::string& what) {
    Honeytoken token;
    token.address = detail::to_lower(detail::get_string(t, "address", what));
    token.account_id = detail::get_string_or(t, "account_id", "");
    if (auto it = t.find("axis"); it != t.end() && it->is_number_unsigned()) {
        token.axis = it->get<std::size_t>();
    }
    if (auto it = t.find("index"); it != t.end() && it->is_number_unsigned()) {
        token.index = it->get<std::size_t>();
    }
    return token;
}

} // namespace

std::string layout_to_json(const FrameworkLayout& layout) {
    detail::Json doc;
    doc["kind"] = layout.kind == LayoutKind::Array ? "array" : "tensor";
    doc["dims"] = layout.dims;
    doc["domain"] = layout.domain;
    doc["tokens"] = detail::Json::array();
    for (const Honeytoken& token : layout.tokens) {
        doc["tokens"].push_back(token_to_json(token));
    }
    detail::Json assignment = detail::Json::object();
    for (std::size_t k = 0; k < layout.app_ids.size(); ++k) {
        detail::Json addresses = detail::Json::array();
        for (std::size_t ordinal : layout.assignment[k]) {
            addresses.push_back(layout.tokens[ordinal].address);
        }
        assignment[layout.app_ids[k]] = std::move(addresses);
    }
    doc["assignment"] = std::move(assignment);
    return doc.dump(2) + "\n";
}

FrameworkLayout layout_from_json(const std::string& json_text) {
    detail::Json doc = detail::parse_json(json_text, "layout document");
    FrameworkLayout layout;

    std::string kind = detail::get_string(doc, "kind", "layout");
    if (kind == "array") {
        layout.kind = LayoutKind::Array;
    } else if (kind == "tensor") {
        layout.kind = LayoutKind::Tensor;
    } else {
        fail("parse-error", "layout kind must be 'array' or 'tensor', got '" + kind + "'");
    }

    auto dims_it = doc.find("dims");
    if (dims_it == doc.end() || !dims_it->is_array()) fail("parse-error", "layout: missing dims");
    for (const auto& d : *dims_it) {
        if (!d.is_number_unsigned()) fail("parse-error", "layout: dims must be non-negative integers");
        layout.dims.push_back(d.get<std::size_t>());
    }
    if (layout.dims.empty()) fail("parse-error", "layout: dims may not be empty");
    if (layout.kind == LayoutKind::Array && layout.dims.size() != 1) {
        fail("parse-error", "layout: array layouts have exactly one axis");
    }
    layout.domain = detail::get_string_or(doc, "domain", "");

    auto tokens_it = doc.find("tokens");
    if (tokens_it == doc.end() || !tokens_it->is_array()) fail("parse-error", "layout: missing tokens");
    std::vector<Honeytoken> tokens;
    for (const auto& t : *tokens_it) {
        tokens.push_back(token_from_json(t, "layout token"));
    }

    // Re-slot by (axis, index) and check the grid is fully populated.
    std::size_t expected = std::accumulate(layout.dims.begin(), layout.dims.end(), std::size_t{0});
    if (tokens.size() != expected) {
        fail("parse-error", "layout: expected " + std::to_string(expected) + " tokens, got " +
                                std::to_string(tokens.size()));
    }
    layout.tokens.resize(expected);
    std::vector<bool> filled(expected, false);
    for (Honeytoken& token : tokens) {
        if (token.axis >= layout.dims.size() || token.index >= layout.dims[token.axis]) {
            fail("parse-error", "layout: token '" + token.address + "' is outside the grid");
        }
        std::size_t ordinal = layout.token_ordinal(token.axis, token.index);
        if (filled[ordinal]) {
            fail("parse-error", "layout: duplicate token slot for '" + token.address + "'");
        }
        filled[ordinal] = true;
        layout.tokens[ordinal] = std::move(token);
    }

    std::unordered_map<std::string, std::size_t> by_address;
    for (std::size_t i = 0; i < layout.tokens.size(); ++i) {
        if (!by_address.emplace(layout.tokens[i].address, i).second) {
            fail("parse-error", "layout: duplicate token address '" + layout.tokens[i].address + "'");
        }
    }

    auto assign_it = doc.find("assignment");
    if (assign_it == doc.end() || !assign_it->is_object()) {
        fail("parse-error", "layout: missing assignment");
    }
    std::unordered_set<std::string> tuples_seen;
    for (auto it = assign_it->begin(); it != assign_it->end(); ++it) {
        if (!it.value().is_array() || it.value().size() != layout.dims.size()) {
            fail("parse-error", "layout: app '" + it.key() + "' needs one token per axis");
        }
        std::vector<std::size_t> tuple;
        std::string key;
        for (std::size_t axis = 0; axis < it.value().size(); ++axis) {
            const auto& addr = it.value()[axis];
            if (!addr.is_string()) fail("parse-error", "layout: assignment addresses must be strings");
            auto found = by_address.find(detail::to_lower(addr.get<std::string>()));
            if (found == by_address.end()) {
                fail("parse-error", "layout: app '" + it.key() + "' references unknown token");
            }
            if (layout.tokens[found->second].axis != axis) {
                fail("parse-error", "layout: app '" + it.key() + "' token order must follow axes");
            }
            tuple.push_back(found->second);
            key += std::to_string(found->second) + ",";
        }
        if (!tuples_seen.insert(key).second) {
            fail("parse-error", "layout: two apps share the full token tuple");
        }
        layout.app_ids.push_back(it.key());
        layout.assignment.push_back(std::move(tuple));
    }
    return layout;
}

FrameworkLayout load_layout(const std::string& path) {
    return layout_from_json(detail::read_file(path));
}

void save_layout(const std::string& path, const FrameworkLayout& layout) {
    detail::write_file(path, layout_to_json(layout));
}

std::string schedule_to_json(const std::vector<ScheduleStep>& steps) {
    detail::Json doc = detail::Json::array();
    for (const ScheduleStep& step : steps) {
        detail::Json s;
        s["kind"] = std::string(step_kind_name(step.kind));
        s["account_id"] = step.account_id;
        if (step.token) s["token"] = *step.token;
        if (step.app_id) s["app_id"] = *step.app_id;
        if (step.duration_minutes) s["duration_minutes"] = *step.duration_minutes;
        doc.push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> load_name_list(const std::string& path) {
    std::vector<std::string> names;
    for (const std::string& line : detail::split_lines(detail::read_file(path))) {
        std::string_view name = detail::trim(line);
        if (!name.empty()) names.emplace_back(name);
    }
    return names;
}

std::string tokens_to_jsonl(const std::vector<Honeytoken>& tokens) {
    std::string out;
    for (const Honeytoken& token : tokens) {
        out += token_to_json(token).dump();
        out += '\n';
    }
    return out;
}

std::vector<Honeytoken> tokens_from_jsonl(const std::string& text) {
    std::vector<Honeytoken> tokens;
    std::vector<std::string> lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        detail::Json obj = detail::parse_json(lines[i], "token line " + std::to_string(i + 1));
        tokens.push_back(token_from_json(obj, "token line " + std::to_string(i + 1)));
    }
    return tokens;
}

std::vector<Honeytoken> load_tokens(const std::string& path) {
    return tokens_from_jsonl(detail::read_file(path));
}

} // namespace honeygrid
