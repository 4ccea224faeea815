#include "infodelta/gdelt.hpp"

#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "infodelta/error.hpp"
#include "infodelta/hash.hpp"
#include "infodelta/json_out.hpp"

namespace infodelta::gdelt {

using namespace std::chrono;

namespace {

std::string url_encode(std::string_view text) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

// "20221226T000000Z" or "20221226000000"
Date parse_point_date(const std::string& text) {
  if (text.size() < 8) throw ApiFormatError("bad timeline date '" + text + "'");
  for (int i = 0; i < 8; ++i)
    if (text[static_cast<std::size_t>(i)] < '0' || text[static_cast<std::size_t>(i)] > '9')
      throw ApiFormatError("bad timeline date '" + text + "'");
  try {
    return parse_date(text.substr(0, 4) + "-" + text.substr(4, 2) + "-" + text.substr(6, 2));
  } catch (const std::invalid_argument&) {
    throw ApiFormatError("bad timeline date '" + text + "'");
  }
}

bool transient(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string timeline_url(std::string_view endpoint, const BooleanQuery& query, std::string_view country,
                         const Window& window) {
  Timestamp start{window.first.time_since_epoch()};
  Timestamp end = window.end_exclusive() - seconds{1};
  std::string q = render_gdelt(query) + " sourcecountry:" + std::string(country);
  std::string url(endpoint);
  url += "?query=" + url_encode(q);
  url += "&mode=timelinevolraw&format=json";
  url += "&startdatetime=" + format_compact(start);
  url += "&enddatetime=" + format_compact(end);
  return url;
}

std::string fixture_name(std::string_view url) { return sha256_hex(url) + ".json"; }

RawSeries parse_timeline(std::string_view body, const Window& window, const std::string& subtopic_id) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    auto head = std::string(body.substr(0, 120));
    throw ApiFormatError("response is not JSON: " + head);
  }
  if (!doc.is_object() || !doc.contains("timeline") || !doc["timeline"].is_array())
    throw ApiFormatError("response has no 'timeline' array");

  RawSeries out;
  out.subtopic_id = subtopic_id;
  out.source = Source::Gdelt;
  const std::size_t n = window.weeks();
  out.values.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) out.week_start.push_back(window.week_at(i));

  const auto& timeline = doc["timeline"];
  if (timeline.empty()) return out;
  const auto& series = timeline.front();
  if (!series.is_object() || !series.contains("data") || !series["data"].is_array())
    throw ApiFormatError("timeline series has no 'data' array");
  for (const auto& point : series["data"]) {
    if (!point.is_object() || !point.contains("date") || !point["date"].is_string() || !point.contains("value") ||
        !point["value"].is_number())
      throw ApiFormatError("timeline point lacks 'date'/'value'");
    double v = point["value"].get<double>();
    if (v < 0 || v != std::floor(v)) throw ApiFormatError("timeline value is not a non-negative count");
    Date week = week_of(parse_point_date(point["date"].get<std::string>()));
    if (!window.contains_week(week)) continue;
    out.values[window.index_of(week)] += static_cast<std::int64_t>(v);
  }
  return out;
}

std::string FixtureTransport::get(const std::string& url) {
  auto path = dir_ / fixture_name(url);
  if (!std::filesystem::exists(path)) throw FixtureMissing("no recorded response " + path.string() + " for " + url);
  return read_text_file(path);
}

void LiveTransport::wait_turn(milliseconds extra) {
  auto now = steady_clock::now();
  if (last_request_) {
    auto ready = *last_request_ + std::max(options_.min_interval, extra);
    if (ready > now) std::this_thread::sleep_until(ready);
  } else if (extra.count() > 0) {
    std::this_thread::sleep_for(extra);
  }
  last_request_ = steady_clock::now();
}

std::string LiveTransport::get(const std::string& url) {
  std::lock_guard lock(mutex_);

  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw NetworkError("malformed URL " + url, 0);
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);

  int last_status = 0;
  std::string last_cause;
  milliseconds backoff{0};
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    wait_turn(backoff);
    ++requests_sent_;
    auto res = client.Get(path);
    if (!res) {
      last_status = 0;
      last_cause = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      if (options_.record_dir) write_text_file(*options_.record_dir / fixture_name(url), res->body);
      return res->body;
    } else {
      last_status = res->status;
      last_cause = "HTTP " + std::to_string(res->status);
      if (!transient(res->status)) throw NetworkError(last_cause + " from " + origin, last_status);
    }
    backoff = attempt == 1 ? options_.initial_backoff
                           : duration_cast<milliseconds>(backoff * options_.backoff_factor);
  }
  throw NetworkError(last_cause + " after " + std::to_string(options_.max_attempts) + " attempts to " + origin,
                     last_status);
}

RawSeries fetch_timeline(const BooleanQuery& query, std::string_view country, const Window& window,
                         Transport& transport, const std::string& subtopic_id, std::string_view endpoint) {
  if (query.is_phrase() && query.phrase.empty()) throw EmptyQuery();
  if (query.kind != BooleanQuery::Kind::Phrase && query.children.empty()) throw EmptyQuery();
  auto url = timeline_url(endpoint, query, country, window);
  return parse_timeline(transport.get(url), window, subtopic_id);
}

}  // namespace infodelta::gdelt
