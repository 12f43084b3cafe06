#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "honeygrid/error.hpp"
#include "honeygrid/layout.hpp"
#include "test_support.hpp"

using namespace honeygrid;
using testsupport::make_apps;
using testsupport::make_token_pool;

namespace {

std::string error_code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return std::string(e.code());
    }
    return "";
}

} // namespace

TEST_SUITE("layout") {

TEST_CASE("tokens_required reproduces the published sizings") {
    // [PAPER] 1,024 apps in a two-dimensional grid need 64 tokens, and a
    // million apps need 2,000.
    CHECK(tokens_required(1024, 2) == 64);
    CHECK(tokens_required(1'000'000, 2) == 2000);
}

TEST_CASE("tokens_required boundary behaviour") {
    CHECK(tokens_required(1, 1) == 1);
    CHECK(tokens_required(5, 1) == 5);
    CHECK(tokens_required(1, 2) == 2);
    CHECK(tokens_required(4, 2) == 4);
    CHECK(tokens_required(1000, 3) == 30);
    CHECK(error_code_of([] { tokens_required(0, 2); }) == "invalid-argument");
    CHECK(error_code_of([] { tokens_required(10, 0); }) == "invalid-argument");
}

TEST_CASE("higher dimensions do not always save tokens at small N") {
    // The savings story only holds for large app counts. For small ones
    // the ceiling bites: 5 apps cost 5 tokens flat but 2*ceil(sqrt(5)) = 6
    // in a grid. Pinned so nobody "fixes" the formula into something the
    // sizing table would contradict.
    CHECK(tokens_required(5, 2) == 6);
    CHECK(tokens_required(5, 2) > tokens_required(5, 1));
    CHECK(tokens_required(9, 3) > tokens_required(9, 2));
    CHECK(tokens_required(16, 3) > tokens_required(16, 2));
    CHECK(tokens_required(17, 4) > tokens_required(17, 3));
}

TEST_CASE("nth_root_ceil agrees with brute force") {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t value = 1; value <= 600; ++value) {
            std::size_t r = nth_root_ceil(value, n);
            // r^n >= value and (r-1)^n < value, checked by multiplication.
            auto pow_n = [n](std::size_t base) {
                std::size_t acc = 1;
                for (std::size_t i = 0; i < n; ++i) acc *= base;
                return acc;
            };
            CAPTURE(value);
            CAPTURE(n);
            CHECK(pow_n(r) >= value);
            if (r > 1) CHECK(pow_n(r - 1) < value);
        }
    }
}

TEST_CASE("default_tensor_dims covers the app count snugly") {
    CHECK(default_tensor_dims(1024, 2) == std::vector<std::size_t>{32, 32});
    CHECK(default_tensor_dims(1000, 2) == std::vector<std::size_t>{32, 32});
    // ceil(sqrt(30)) = 6 rows, then 5 columns suffice.
    CHECK(default_tensor_dims(30, 2) == std::vector<std::size_t>{6, 5});
    CHECK(default_tensor_dims(1000, 3) == std::vector<std::size_t>{10, 10, 10});
    for (std::size_t n : {2, 3, 4}) {
        for (std::size_t count : {1, 2, 7, 19, 64, 100, 257}) {
            auto dims = default_tensor_dims(count, n);
            REQUIRE(dims.size() == n);
            std::size_t cap = 1;
            for (std::size_t d : dims) cap *= d;
            CAPTURE(count);
            CAPTURE(n);
            CHECK(cap >= count);
        }
    }
}

TEST_CASE("generate_honeytokens is deterministic and collision-free") {
    std::vector<std::string> first{"alice", "bob", "carol", "dan"};
    std::vector<std::string> last{"reed", "stone", "vale"};

    auto a = generate_honeytokens(first, last, "example.com", 10, 7);
    auto b = generate_honeytokens(first, last, "example.com", 10, 7);
    auto c = generate_honeytokens(first, last, "example.com", 10, 8);

    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].address == b[i].address);
    }
    CHECK(a.front().account_id.empty());

    std::set<std::string> unique;
    bool all_wellformed = true;
    for (const auto& tok : a) {
        unique.insert(tok.address);
        auto at = tok.address.find('@');
        auto dash = tok.address.find('-');
        all_wellformed = all_wellformed && at != std::string::npos &&
                         dash != std::string::npos && dash < at &&
                         tok.address.substr(at + 1) == "example.com";
    }
    CHECK(unique.size() == 10);
    CHECK(all_wellformed);

    // A different seed should pick a different sample of the 12 pairs.
    std::vector<std::string> a_addrs, c_addrs;
    for (const auto& t : a) a_addrs.push_back(t.address);
    for (const auto& t : c) c_addrs.push_back(t.address);
    CHECK(a_addrs != c_addrs);
}

TEST_CASE("generate_honeytokens rejects impossible requests") {
    std::vector<std::string> first{"alice", "bob"};
    std::vector<std::string> last{"reed"};

    CHECK(error_code_of([&] {
              generate_honeytokens(first, last, "example.com", 3, 1);
          }) == "capacity-exceeded");
    CHECK(error_code_of([&] {
              generate_honeytokens(first, last, "not a domain", 1, 1);
          }) == "invalid-domain");
    CHECK(error_code_of([&] {
              generate_honeytokens(first, last, "", 1, 1);
          }) == "invalid-domain");
    CHECK(error_code_of([&] {
              generate_honeytokens({}, last, "example.com", 1, 1);
          }) == "capacity-exceeded");
}

TEST_CASE("hyphenated names that collide are skipped, not duplicated") {
    // "a-b" + "c" and "a" + "b-c" both flatten to a-b-c@…; the pool must
    // treat them as one identity.
    std::vector<std::string> first{"a-b", "a"};
    std::vector<std::string> last{"c", "b-c"};
    auto tokens = generate_honeytokens(first, last, "example.com", 3, 3);
    std::set<std::string> unique;
    for (const auto& t : tokens) unique.insert(t.address);
    CHECK(unique.size() == 3);
    CHECK(error_code_of([&] {
              generate_honeytokens(first, last, "example.com", 4, 3);
          }) == "capacity-exceeded");
}

TEST_CASE("array layout pairs each app with its own token") {
    auto apps = make_apps(5);
    auto pool = make_token_pool(5, "hg.test");
    auto layout = build_array_layout(apps, pool);

    CHECK(layout.kind == LayoutKind::Array);
    CHECK(layout.dims == std::vector<std::size_t>{5});
    CHECK(layout.capacity() == 5);
    REQUIRE(layout.tokens.size() == 5);
    REQUIRE(layout.assignment.size() == 5);
    std::set<std::size_t> used;
    for (std::size_t a = 0; a < 5; ++a) {
        REQUIRE(layout.assignment[a].size() == 1);
        used.insert(layout.assignment[a][0]);
        CHECK(layout.coords_of(a) == std::vector<std::size_t>{layout.assignment[a][0]});
    }
    CHECK(used.size() == 5);
    for (const auto& tok : layout.tokens) {
        CHECK(tok.account_id == "axis-0");
    }
}

TEST_CASE("array layout needs one token per app") {
    auto apps = make_apps(6);
    auto pool = make_token_pool(5, "hg.test");
    CHECK(error_code_of([&] { build_array_layout(apps, pool); }) ==
          "insufficient-tokens");
}

TEST_CASE("tensor layout fills the grid row-major") {
    auto apps = make_apps(6);
    auto pool = make_token_pool(5, "hg.test");
    auto layout = build_tensor_layout(apps, pool, 2, {2, 3});

    CHECK(layout.kind == LayoutKind::Tensor);
    CHECK(layout.dims == std::vector<std::size_t>{2, 3});
    CHECK(layout.capacity() == 6);
    REQUIRE(layout.tokens.size() == 5);

    // App k sits at (k / 3, k % 3); each cell receives one token per axis.
    for (std::size_t a = 0; a < 6; ++a) {
        auto coords = layout.coords_of(a);
        REQUIRE(coords.size() == 2);
        CHECK(coords[0] == a / 3);
        CHECK(coords[1] == a % 3);
        REQUIRE(layout.assignment[a].size() == 2);
        CHECK(layout.assignment[a][0] == layout.token_ordinal(0, coords[0]));
        CHECK(layout.assignment[a][1] == layout.token_ordinal(1, coords[1]));
    }

    CHECK(layout.token_at(0, 0).account_id == "axis-0");
    CHECK(layout.token_at(1, 2).account_id == "axis-1");
    CHECK(layout.token_at(1, 0).axis == 1);
    CHECK(layout.token_at(1, 0).index == 0);
}

TEST_CASE("tensor layout uses default dims when none given") {
    auto apps = make_apps(30);
    auto pool = make_token_pool(11, "hg.test");
    auto layout = build_tensor_layout(apps, pool, 2);
    CHECK(layout.dims == std::vector<std::size_t>{6, 5});
}

TEST_CASE("tensor layout validates capacity and token supply") {
    auto apps = make_apps(7);
    CHECK(error_code_of([&] {
              build_tensor_layout(apps, make_token_pool(5, "hg.test"), 2, {2, 3});
          }) == "capacity-exceeded");
    CHECK(error_code_of([&] {
              build_tensor_layout(make_apps(6), make_token_pool(4, "hg.test"), 2, {2, 3});
          }) == "insufficient-tokens");
}

TEST_CASE("duplicate app ids are rejected") {
    auto apps = make_apps(3);
    apps[2].id = apps[0].id;
    CHECK(error_code_of([&] {
              build_array_layout(apps, make_token_pool(3, "hg.test"));
          }) == "invalid-argument");
    CHECK(error_code_of([&] {
              build_tensor_layout(apps, make_token_pool(4, "hg.test"), 2, {2, 2});
          }) == "invalid-argument");
}

TEST_CASE("rotation schedule walks associate, installs, teardown per token") {
    auto apps = make_apps(4);
    auto layout = build_tensor_layout(apps, make_token_pool(4, "hg.test"), 2, {2, 2});
    auto steps = emit_rotation_schedule(layout);

    // Each of the 4 tokens covers 2 apps:
    // associate + set-primary + 2*(install + wait) + 2 uninstalls + remove = 9.
    REQUIRE(steps.size() == 36);

    // First token's block, in order.
    CHECK(steps[0].kind == StepKind::AssociateToken);
    CHECK(steps[0].token == layout.tokens[0].address);
    CHECK(steps[0].account_id == "axis-0");
    CHECK(steps[1].kind == StepKind::SetPrimary);
    CHECK(steps[2].kind == StepKind::InstallApp);
    CHECK(steps[2].app_id == "app-0");
    CHECK(steps[3].kind == StepKind::Wait);
    CHECK(steps[3].duration_minutes == kDefaultGraceMinutes);
    CHECK(steps[4].kind == StepKind::InstallApp);
    CHECK(steps[4].app_id == "app-1");
    CHECK(steps[5].kind == StepKind::Wait);
    CHECK(steps[6].kind == StepKind::UninstallApp);
    CHECK(steps[7].kind == StepKind::UninstallApp);
    CHECK(steps[8].kind == StepKind::RemoveToken);
    CHECK(steps[8].token == layout.tokens[0].address);

    // Custom grace propagates to every wait step.
    auto quick = emit_rotation_schedule(layout, 5);
    for (const auto& step : quick) {
        if (step.kind == StepKind::Wait) CHECK(step.duration_minutes == 5);
    }
}

TEST_CASE("rotation schedule for arrays is one app per token") {
    auto apps = make_apps(3);
    auto layout = build_array_layout(apps, make_token_pool(3, "hg.test"));
    auto steps = emit_rotation_schedule(layout);
    REQUIRE(steps.size() == 3 * 6);
    for (std::size_t t = 0; t < 3; ++t) {
        const auto* block = &steps[t * 6];
        CHECK(block[0].kind == StepKind::AssociateToken);
        CHECK(block[1].kind == StepKind::SetPrimary);
        CHECK(block[2].kind == StepKind::InstallApp);
        CHECK(block[3].kind == StepKind::Wait);
        CHECK(block[4].kind == StepKind::UninstallApp);
        CHECK(block[5].kind == StepKind::RemoveToken);
    }
}

TEST_CASE("tokens with no assigned apps are skipped in the schedule") {
    // 4 apps on a 3x3 grid occupy cells (0,0) (0,1) (0,2) (1,0), so the
    // axis-0 index-2 token serves nobody and gets no schedule block.
    auto apps = make_apps(4);
    auto layout = build_tensor_layout(apps, make_token_pool(6, "hg.test"), 2, {3, 3});
    auto steps = emit_rotation_schedule(layout);
    std::set<std::string> scheduled;
    for (const auto& s : steps) {
        if (s.kind == StepKind::AssociateToken) scheduled.insert(*s.token);
    }
    CHECK(scheduled.count(layout.token_at(0, 2).address) == 0);
    CHECK(scheduled.size() == 5);
}

TEST_CASE("layout serialization round-trips byte-identically") {
    auto apps = make_apps(6);
    auto layout = build_tensor_layout(apps, make_token_pool(5, "hg.test"), 2, {2, 3});
    std::string once = layout_to_json(layout);
    FrameworkLayout parsed = layout_from_json(once);
    std::string twice = layout_to_json(parsed);
    CHECK(once == twice);

    CHECK(parsed.kind == layout.kind);
    CHECK(parsed.dims == layout.dims);
    CHECK(parsed.app_ids == layout.app_ids);
    CHECK(parsed.assignment == layout.assignment);
    REQUIRE(parsed.tokens.size() == layout.tokens.size());
    for (std::size_t i = 0; i < parsed.tokens.size(); ++i) {
        CHECK(parsed.tokens[i].address == layout.tokens[i].address);
        CHECK(parsed.tokens[i].axis == layout.tokens[i].axis);
        CHECK(parsed.tokens[i].index == layout.tokens[i].index);
    }

    auto array = build_array_layout(make_apps(3), make_token_pool(3, "hg.test"));
    CHECK(layout_to_json(layout_from_json(layout_to_json(array))) ==
          layout_to_json(array));
}

TEST_CASE("layout_from_json rejects corrupted documents") {
    auto layout = build_tensor_layout(make_apps(6), make_token_pool(5, "hg.test"), 2, {2, 3});
    std::string good = layout_to_json(layout);

    CHECK(error_code_of([&] { layout_from_json("{"); }) == "parse-error");
    CHECK(error_code_of([&] { layout_from_json("[]"); }) == "parse-error");

    // Duplicate token address.
    std::string dup = good;
    auto pos = dup.find("person-1@hg.test");
    REQUIRE(pos != std::string::npos);
    dup.replace(pos, 16, "person-0@hg.test");
    CHECK(error_code_of([&] { layout_from_json(dup); }) == "parse-error");
}

TEST_CASE("token pool serialization round-trips") {
    auto tokens = make_token_pool(4, "hg.test");
    tokens[1].account_id = "axis-0";
    tokens[1].axis = 0;
    tokens[1].index = 1;
    std::string text = tokens_to_jsonl(tokens);
    auto parsed = tokens_from_jsonl(text);
    REQUIRE(parsed.size() == 4);
    CHECK(parsed[1].address == tokens[1].address);
    CHECK(parsed[1].account_id == "axis-0");
    CHECK(parsed[1].index == 1);
    CHECK(tokens_to_jsonl(parsed) == text);
}

TEST_CASE("name lists load one name per line") {
    testsupport::TempDir dir;
    dir.write("names.txt", "alice\nbob\n\ncarol\n");
    auto names = load_name_list(dir.path("names.txt"));
    CHECK(names == std::vector<std::string>{"alice", "bob", "carol"});
    CHECK(error_code_of([&] { load_name_list(dir.path("absent.txt")); }) ==
          "io-error");
}

} // TEST_SUITE("layout")
