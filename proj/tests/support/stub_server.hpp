#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

namespace test_support {

// Local chat-completions stub. Replies with a canned completion payload by
// default; a status script like {500, 500, 200} serves those statuses in
// order (repeating the last entry).
class StubServer {
 public:
  explicit StubServer(std::vector<int> status_script = {200}, std::string reply_text = "stub reply")
      : status_script_(std::move(status_script)), reply_text_(std::move(reply_text)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard<std::mutex> lock(mutex_);
        bodies_.push_back(req.body);
        auto auth = req.get_header_value("Authorization");
        auth_headers_.push_back(auth);
      }
      const std::size_t n = hits_++;
      const int status =
          status_script_[n < status_script_.size() ? n : status_script_.size() - 1];
      res.status = status;
      if (status == 200) {
        res.set_content(
            "{\"choices\":[{\"message\":{\"role\":\"assistant\",\"content\":\"" + reply_text_ +
                "\"}}]}",
            "application/json");
      } else {
        res.set_content("{\"error\":\"injected fault\"}", "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::size_t hits() const { return hits_.load(); }
  std::vector<std::string> bodies() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return bodies_;
  }
  std::vector<std::string> auth_headers() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return auth_headers_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> hits_{0};
  std::vector<int> status_script_;
  std::string reply_text_;
  mutable std::mutex mutex_;
  std::vector<std::string> bodies_;
  std::vector<std::string> auth_headers_;
};

}  // namespace test_support
