#include <doctest.h>

#include <atomic>
#include <mutex>
#include <thread>

#include "infodelta/error.hpp"
#include "infodelta/gdelt.hpp"
#include "infodelta/hash.hpp"
#include "infodelta/series.hpp"
#include "stub_server.hpp"
#include "support.hpp"

using namespace infodelta;
using namespace std::chrono;

namespace {

const Window kTwoWeeks = Window::parse("2023-01-02:2023-01-09");

std::string timeline(const std::vector<std::pair<std::string, int>>& points) {
  std::string out = R"({"query_details":{"title":"x"},"timeline":[{"series":"Article Count","data":[)";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ",";
    out += R"({"date":")" + points[i].first + R"(","value":)" + std::to_string(points[i].second) + "}";
  }
  return out + "]}]}";
}

gdelt::LiveOptions fast_options() {
  gdelt::LiveOptions o;
  o.min_interval = milliseconds{100};
  o.initial_backoff = milliseconds{150};
  o.backoff_factor = 2.0;
  o.timeout = seconds{5};
  return o;
}

}  // namespace

TEST_CASE("timeline URL") {
  auto url = gdelt::timeline_url(gdelt::kDefaultEndpoint, parse_query(R"("casa green" OR EPBD)"), "IT",
                                 Window::parse("2022-12-26:2024-08-12"));
  CHECK(url ==
        "https://api.gdeltproject.org/api/v2/doc/doc?query=%28%22casa%20green%22%20OR%20EPBD%29%20sourcecountry%3AIT"
        "&mode=timelinevolraw&format=json&startdatetime=20221226000000&enddatetime=20240818235959");
  CHECK(gdelt::fixture_name(url) == sha256_hex(url) + ".json");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("daily counts sum into weeks") {
  auto s = gdelt::parse_timeline(
      timeline({{"20230102T000000Z", 2}, {"20230103T000000Z", 3}, {"20230109T000000Z", 5}}), kTwoWeeks, "x");
  CHECK(s.values == std::vector<std::int64_t>{5, 5});
  CHECK(s.source == Source::Gdelt);
  CHECK(format_date(s.week_start[1]) == "2023-01-09");

  // points outside the window are ignored
  s = gdelt::parse_timeline(timeline({{"20230101T000000Z", 9}, {"20230115T235959Z", 1}, {"20230116T000000Z", 9}}),
                            kTwoWeeks, "x");
  CHECK(s.values == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("zero and empty timelines give zeros over the window") {
  auto w = Window::parse("2023-01-02:2023-01-23");
  std::vector<std::pair<std::string, int>> zeros;
  for (int d = 2; d <= 29; ++d) zeros.emplace_back("202301" + std::string(d < 10 ? "0" : "") + std::to_string(d) + "T000000Z", 0);
  CHECK(gdelt::parse_timeline(timeline(zeros), w, "x").values == std::vector<std::int64_t>(4, 0));
  CHECK(gdelt::parse_timeline(R"({"timeline":[]})", w, "x").values == std::vector<std::int64_t>(4, 0));
}

TEST_CASE("malformed bodies") {
  for (const char* body : {"<html>rate limited</html>", "{}", R"({"timeline":{}})", R"({"timeline":[{"x":1}]})",
                           R"({"timeline":[{"data":[{"date":"2023","value":1}]}]})",
                           R"({"timeline":[{"data":[{"date":"20230102T000000Z","value":-1}]}]})",
                           R"({"timeline":[{"data":[{"date":"20230102T000000Z"}]}]})"}) {
    CAPTURE(body);
    CHECK_THROWS_AS(gdelt::parse_timeline(body, kTwoWeeks, "x"), ApiFormatError);
  }
}

TEST_CASE("fixture replay") {
  testing::TempDir dir;
  auto q = parse_query("ztl");
  auto url = gdelt::timeline_url(gdelt::kDefaultEndpoint, q, "IT", kTwoWeeks);
  testing::write_file(dir / gdelt::fixture_name(url),
                      timeline({{"20230102T000000Z", 2}, {"20230103T000000Z", 3}, {"20230109T000000Z", 5}}));
  gdelt::FixtureTransport transport(dir.path());
  auto a = gdelt::fetch_timeline(q, "IT", kTwoWeeks, transport, "mobility_ltz");
  auto b = gdelt::fetch_timeline(q, "IT", kTwoWeeks, transport, "mobility_ltz");
  CHECK(a.values == std::vector<std::int64_t>{5, 5});
  write_series_csv(dir / "a.csv", a);
  write_series_csv(dir / "b.csv", b);
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));

  CHECK_THROWS_AS(gdelt::fetch_timeline(parse_query("other"), "IT", kTwoWeeks, transport), gdelt::FixtureMissing);
  CHECK_THROWS_AS(gdelt::fetch_timeline(BooleanQuery{}, "IT", kTwoWeeks, transport), EmptyQuery);
}

TEST_CASE("live: 503 three times fails after three requests") {
  testing::StubServer server({503, 503, 503, 503}, timeline({{"20230102T000000Z", 4}}));
  gdelt::LiveTransport transport(fast_options());
  int status = 0;
  try {
    gdelt::fetch_timeline(parse_query("ztl"), "IT", kTwoWeeks, transport, "x", server.endpoint());
    FAIL("expected NetworkError");
  } catch (const NetworkError& e) {
    status = e.status();
  }
  CHECK(status == 503);
  CHECK(server.calls() == 3);
  CHECK(transport.requests_sent() == 3);

  // exponential backoff, never closer than min_interval
  auto t = server.arrivals();
  REQUIRE(t.size() == 3);
  CHECK(t[1] - t[0] >= milliseconds{150});
  CHECK(t[2] - t[1] >= milliseconds{300});
}

TEST_CASE("live: recovers after transient failures and records the body") {
  testing::StubServer server({503, 429, 200}, timeline({{"20230102T000000Z", 4}}));
  testing::TempDir dir;
  auto options = fast_options();
  options.record_dir = dir.path();
  gdelt::LiveTransport transport(options);
  auto q = parse_query("ztl");
  auto s = gdelt::fetch_timeline(q, "IT", kTwoWeeks, transport, "x", server.endpoint());
  CHECK(s.values == std::vector<std::int64_t>{4, 0});
  CHECK(server.calls() == 3);
  REQUIRE(server.paths().size() == 3);
  CHECK(server.paths()[0].find("mode=timelinevolraw") != std::string::npos);

  // the recorded body replays offline
  gdelt::FixtureTransport replay(dir.path());
  CHECK(gdelt::fetch_timeline(q, "IT", kTwoWeeks, replay, "x", server.endpoint()).values == s.values);
}

TEST_CASE("live: client errors are not retried") {
  testing::StubServer server({404}, timeline({{"20230102T000000Z", 4}}));
  gdelt::LiveTransport transport(fast_options());
  CHECK_THROWS_AS(gdelt::fetch_timeline(parse_query("ztl"), "IT", kTwoWeeks, transport, "x", server.endpoint()),
                  NetworkError);
  CHECK(server.calls() == 1);
}

TEST_CASE("live: successive requests respect min_interval") {
  testing::StubServer server({}, timeline({{"20230102T000000Z", 4}}));
  auto options = fast_options();
  options.min_interval = milliseconds{250};
  gdelt::LiveTransport transport(options);
  for (int i = 0; i < 3; ++i)
    gdelt::fetch_timeline(parse_query("ztl"), "IT", kTwoWeeks, transport, "x", server.endpoint());
  auto t = server.arrivals();
  REQUIRE(t.size() == 3);
  CHECK(t[1] - t[0] >= milliseconds{240});
  CHECK(t[2] - t[1] >= milliseconds{240});
}

TEST_CASE("live: unreachable host is a transport error") {
  gdelt::LiveOptions o = fast_options();
  o.max_attempts = 2;
  o.timeout = seconds{1};
  gdelt::LiveTransport transport(o);
  try {
    transport.get("http://127.0.0.1:1/x");
    FAIL("expected NetworkError");
  } catch (const NetworkError& e) {
    CHECK(e.status() == 0);
  }
  CHECK(transport.requests_sent() == 2);
}
