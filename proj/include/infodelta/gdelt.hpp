#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "infodelta/error.hpp"
#include "infodelta/query.hpp"
#include "infodelta/types.hpp"

namespace infodelta::gdelt {

inline constexpr std::string_view kDefaultEndpoint = "https://api.gdeltproject.org/api/v2/doc/doc";

/// Raw-volume timeline request URL for `query` restricted to a source country.
/// The window is expanded to whole days: first Monday 00:00:00 through the
/// Sunday after the last Monday, 23:59:59.
std::string timeline_url(std::string_view endpoint, const BooleanQuery& query, std::string_view country,
                         const Window& window);

/// File name under which the response to `url` is recorded.
std::string fixture_name(std::string_view url);

/// Parses a `timelinevolraw` JSON body and sums daily counts into the
/// window's ISO weeks. Points outside the window are ignored.
/// Throws ApiFormatError.
RawSeries parse_timeline(std::string_view body, const Window& window, const std::string& subtopic_id);

class FixtureMissing : public IoError {
 public:
  using IoError::IoError;
};

/// Fetches a response body for a URL.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string get(const std::string& url) = 0;
};

/// Replays recorded bodies from `dir/<fixture_name(url)>`.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string get(const std::string& url) override;

 private:
  std::filesystem::path dir_;
};

struct LiveOptions {
  std::chrono::milliseconds min_interval{5000};  // between any two requests
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double backoff_factor = 2.0;
  std::chrono::seconds timeout{30};
  std::optional<std::filesystem::path> record_dir;  // save successful bodies as fixtures
};

/// HTTP(S) client. Requests are serialised and spaced by min_interval;
/// transport failures, 429 and 5xx responses are retried with exponential
/// backoff until max_attempts is reached. Throws NetworkError.
class LiveTransport : public Transport {
 public:
  explicit LiveTransport(LiveOptions options = {}) : options_(std::move(options)) {}
  std::string get(const std::string& url) override;

  int requests_sent() const { return requests_sent_; }

 private:
  LiveOptions options_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  int requests_sent_ = 0;

  void wait_turn(std::chrono::milliseconds extra);
};

/// Throws EmptyQuery, NetworkError, ApiFormatError, FixtureMissing.
RawSeries fetch_timeline(const BooleanQuery& query, std::string_view country, const Window& window,
                         Transport& transport, const std::string& subtopic_id = {},
                         std::string_view endpoint = kDefaultEndpoint);

}  // namespace infodelta::gdelt
