#include <doctest.h>

#include "honeygrid/error.hpp"
#include "honeygrid/time.hpp"

using namespace honeygrid;

namespace {

long long epoch(std::string_view text) {
    return parse_utc(text).time_since_epoch().count();
}

} // namespace

TEST_SUITE("time") {

TEST_CASE("parses canonical UTC instants to known epoch seconds") {
    // Reference values from GNU date -u -d "<instant>" +%s.
    CHECK(epoch("1970-01-01T00:00:00Z") == 0);
    CHECK(epoch("2018-12-01T00:00:00Z") == 1543622400);
    CHECK(epoch("2018-12-01T05:43:07Z") == 1543642987);
    CHECK(epoch("2020-02-29T23:59:59Z") == 1583020799);
    CHECK(epoch("2038-01-19T03:14:07Z") == 2147483647);
}

TEST_CASE("numeric offsets convert to UTC") {
    CHECK(epoch("2019-01-10T08:00:00+02:00") == 1547100000);
    CHECK(epoch("2019-01-10T01:30:00-04:30") == 1547100000);
    CHECK(epoch("2019-01-10T06:00:00+00:00") == 1547100000);
}

TEST_CASE("fractional seconds are accepted and truncated") {
    CHECK(epoch("2018-12-01T00:00:00.999Z") == 1543622400);
    CHECK(epoch("2018-12-01T00:00:00.000001Z") == 1543622400);
}

TEST_CASE("lowercase designators and space separator are tolerated") {
    CHECK(epoch("2018-12-01t00:00:00z") == 1543622400);
    CHECK(epoch("2018-12-01 00:00:00Z") == 1543622400);
}

TEST_CASE("leap second folds into the previous second") {
    CHECK(epoch("2016-12-31T23:59:60Z") == epoch("2016-12-31T23:59:59Z"));
}

TEST_CASE("malformed instants are rejected with a stable error code") {
    for (const char* bad : {
             "",
             "not a date",
             "2018-12-01",
             "2018-12-01T00:00:00",
             "2018-13-01T00:00:00Z",
             "2018-00-10T00:00:00Z",
             "2018-02-30T00:00:00Z",
             "2018-12-01T24:00:00Z",
             "2018-12-01T00:61:00Z",
             "2018-12-01T00:00:00.Z",
             "2018-12-01T00:00:00+25:00",
             "2018-12-01T00:00:00Zjunk",
         }) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_utc(bad), Error);
        try {
            parse_utc(bad);
        } catch (const Error& e) {
            CHECK(e.code() == "invalid-timestamp");
        }
    }
}

TEST_CASE("format and parse are inverses on whole seconds") {
    for (const char* text : {
             "1970-01-01T00:00:00Z",
             "2018-12-01T05:43:07Z",
             "2020-02-29T23:59:59Z",
             "1968-07-14T12:01:02Z",
         }) {
        CHECK(format_utc(parse_utc(text)) == text);
    }
}

} // TEST_SUITE
