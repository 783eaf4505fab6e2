#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "skillrank/embedding.hpp"
#include "skillrank/idf.hpp"
#include "skillrank/model.hpp"
#include "skillrank/rankeval.hpp"

namespace httplib {
class Server;
}

namespace skillrank {

// Loaded artifacts plus the title -> ranked skills pipeline shared by the
// CLI and the HTTP service: normalize, embed, forward, optional IDF boost,
// rank. Immutable after construction.
class SkillRanker {
 public:
  SkillRanker(LinearHead head, std::optional<IdfTable> idf = std::nullopt,
              std::optional<EmbeddingStore> store = std::nullopt, double unseen_idf = 0.0);

  const LinearHead& head() const { return head_; }
  bool has_idf() const { return idf_.has_value(); }

  // Stored vector when the title is in the store, fallback embedding of the
  // head's dimension otherwise.
  EmbeddingVector embed(std::string_view normalized_title) const;
  ImportanceVector importance(std::string_view normalized_title) const;
  // Raw importances, or boosted scores when use_idf. Throws if use_idf and
  // no IDF table is loaded.
  std::vector<double> scores(std::string_view normalized_title, bool use_idf) const;
  RankedSkillList rank(std::string_view raw_title, std::size_t top_k, bool use_idf) const;

 private:
  LinearHead head_;
  std::optional<IdfTable> idf_;
  std::optional<EmbeddingStore> store_;
  double unseen_idf_;
};

struct RankRequest {
  std::string title;
  std::size_t top_k = 20;
  bool use_idf = true;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Request handlers as plain functions of (request, loaded ranker), so they
// are testable without a socket.
ServiceResponse handle_rank(const SkillRanker& ranker, const RankRequest& request);
ServiceResponse handle_rank(const SkillRanker& ranker, std::string_view json_body);
ServiceResponse handle_health(const SkillRanker* ranker);

// HTTP front end: POST /rank, GET /healthz. The socket is bound before the
// artifacts are loaded so health checks see 503 until publish() is called.
class ServiceHost {
 public:
  ServiceHost();
  ~ServiceHost();
  ServiceHost(const ServiceHost&) = delete;
  ServiceHost& operator=(const ServiceHost&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  void start();
  void publish(std::unique_ptr<const SkillRanker> ranker);
  void stop();
  // Blocks until stop() is called from elsewhere.
  void wait();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<const SkillRanker> owned_;
  std::atomic<const SkillRanker*> ranker_{nullptr};
  std::thread thread_;
};

}  // namespace skillrank
