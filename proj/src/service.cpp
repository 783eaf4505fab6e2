#include "skillrank/service.hpp"

#include <httplib.h>

#include "skillrank/error.hpp"
#include "skillrank/io.hpp"

namespace skillrank {

SkillRanker::SkillRanker(LinearHead head, std::optional<IdfTable> idf, std::optional<EmbeddingStore> store,
                         double unseen_idf)
    : head_(std::move(head)), idf_(std::move(idf)), store_(std::move(store)), unseen_idf_(unseen_idf) {
  if (store_ && store_->dimension() != head_.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding store dimension " + std::to_string(store_->dimension()) +
                                                   " differs from model dimension " +
                                                   std::to_string(head_.dimension()));
  }
}

EmbeddingVector SkillRanker::embed(std::string_view normalized_title) const {
  if (store_ && store_->contains(normalized_title)) {
    const auto v = store_->at(normalized_title);
    return {v.begin(), v.end()};
  }
  return fallback_embed(normalized_title, head_.dimension());
}

ImportanceVector SkillRanker::importance(std::string_view normalized_title) const {
  return forward(head_, embed(normalized_title));
}

std::vector<double> SkillRanker::scores(std::string_view normalized_title, bool use_idf) const {
  auto imp = importance(normalized_title);
  if (!use_idf) return imp;
  if (!idf_) throw Error(ErrorCode::kInvalidArgument, "IDF boosting requested but no IDF table is loaded");
  return boost_scores(imp, head_.skill_order(), *idf_, unseen_idf_);
}

RankedSkillList SkillRanker::rank(std::string_view raw_title, std::size_t top_k, bool use_idf) const {
  const std::string title = normalize_title(raw_title);
  return rank_skills(scores(title, use_idf), head_.skill_order(), top_k);
}

namespace {

ServiceResponse error_response(int status, std::string_view code, std::string_view message) {
  Json body;
  body["error"] = code;
  body["message"] = message;
  return {status, body.dump(), "application/json"};
}

}  // namespace

ServiceResponse handle_rank(const SkillRanker& ranker, const RankRequest& request) {
  std::string title;
  try {
    title = normalize_title(request.title);
  } catch (const Error& e) {
    return error_response(400, "empty_title", e.what());
  }
  const std::size_t taxonomy = ranker.head().skill_count();
  if (request.top_k < 1 || request.top_k > taxonomy) {
    return error_response(400, "invalid_top_k", "top_k must lie in [1, " + std::to_string(taxonomy) + "]");
  }
  if (request.use_idf && !ranker.has_idf()) {
    return error_response(409, "idf_unavailable", "use_idf requested but the service has no IDF table");
  }
  const auto ranked = rank_skills(ranker.scores(title, request.use_idf), ranker.head().skill_order(), request.top_k);
  Json body;
  body["title"] = title;
  Json skills = Json::array();
  for (const auto& e : ranked) {
    Json entry;
    entry["skill"] = e.skill;
    entry["score"] = e.score;
    skills.push_back(std::move(entry));
  }
  body["skills"] = std::move(skills);
  return {200, body.dump(), "application/json"};
}

ServiceResponse handle_rank(const SkillRanker& ranker, std::string_view json_body) {
  Json parsed;
  try {
    parsed = Json::parse(json_body.begin(), json_body.end());
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "invalid_request", std::string("body is not JSON: ") + e.what());
  }
  if (!parsed.is_object()) return error_response(400, "invalid_request", "body must be a JSON object");

  RankRequest request;
  if (!parsed.contains("title") || !parsed["title"].is_string()) {
    return error_response(400, "invalid_request", "field \"title\" must be a string");
  }
  request.title = parsed["title"].get<std::string>();
  if (parsed.contains("top_k")) {
    const auto& k = parsed["top_k"];
    if (!k.is_number_integer()) return error_response(400, "invalid_top_k", "top_k must be an integer");
    if (k.get<long long>() < 1) return error_response(400, "invalid_top_k", "top_k must be >= 1");
    request.top_k = k.get<std::size_t>();
  }
  if (parsed.contains("use_idf")) {
    if (!parsed["use_idf"].is_boolean()) return error_response(400, "invalid_request", "use_idf must be a boolean");
    request.use_idf = parsed["use_idf"].get<bool>();
  }
  return handle_rank(ranker, request);
}

ServiceResponse handle_health(const SkillRanker* ranker) {
  if (ranker == nullptr) return {503, "loading", "text/plain"};
  return {200, "ok", "text/plain"};
}

ServiceHost::ServiceHost() : server_(std::make_unique<httplib::Server>()) {
  server_->Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    const auto r = handle_health(ranker_.load(std::memory_order_acquire));
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  server_->Post("/rank", [this](const httplib::Request& req, httplib::Response& res) {
    const SkillRanker* ranker = ranker_.load(std::memory_order_acquire);
    ServiceResponse r = ranker == nullptr ? ServiceResponse{503, R"({"error":"loading","message":"model not loaded"})"}
                                          : handle_rank(*ranker, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
}

ServiceHost::~ServiceHost() { stop(); }

int ServiceHost::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ServiceHost::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void ServiceHost::publish(std::unique_ptr<const SkillRanker> ranker) {
  owned_ = std::move(ranker);
  ranker_.store(owned_.get(), std::memory_order_release);
}

void ServiceHost::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ServiceHost::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace skillrank
