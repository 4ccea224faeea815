#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

namespace testing {

using std::chrono::steady_clock;

// Local HTTP server answering with a scripted list of status codes.
class StubServer {
 public:
  StubServer(std::vector<int> script, std::string ok_body) : script_(std::move(script)), ok_body_(std::move(ok_body)) {
    server_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      arrivals_.push_back(steady_clock::now());
      paths_.push_back(req.target);
      int status = calls_ < script_.size() ? script_[calls_] : 200;
      ++calls_;
      res.status = status;
      res.set_content(status == 200 ? ok_body_ : "busy", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api/v2/doc/doc"; }
  std::size_t calls() {
    std::lock_guard lock(mutex_);
    return calls_;
  }
  std::vector<steady_clock::time_point> arrivals() {
    std::lock_guard lock(mutex_);
    return arrivals_;
  }
  std::vector<std::string> paths() {
    std::lock_guard lock(mutex_);
    return paths_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::vector<int> script_;
  std::string ok_body_;
  std::mutex mutex_;
  std::size_t calls_ = 0;
  std::vector<steady_clock::time_point> arrivals_;
  std::vector<std::string> paths_;
};

}  // namespace testing
