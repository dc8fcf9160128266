#pragma once

#include <memory>
#include <optional>
#include <string>

#include "pmchat/service.hpp"

namespace pmchat {

struct HttpConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  ///< 0 picks a free port
    /// When set, every request except GET /healthz needs "Authorization: Bearer <token>".
    std::optional<std::string> bearer_token;

    /// Reads PMCHAT_API_TOKEN.
    static std::optional<std::string> token_from_env();
};

int http_status_for(ErrorCode code);
Json error_envelope(const Error& e);

/// JSON API over a PmChatService:
///
///   POST /logs                         multipart (file + metadata) or JSON {csv, metadata, mapping}
///   GET  /logs
///   GET  /logs/{id}/kpis/structural|temporal
///   GET  /logs/{id}/dfg|variants|performance|conformance|handover
///   POST /logs/{id}/analyze            {module, reference_model?}
///   POST /sessions                     {log_id, style}
///   GET  /sessions/{id}
///   POST /sessions/{id}/analysis       {module, task}
///   POST /sessions/{id}/message        {text}
///   GET  /sessions/{id}/history
///   GET  /sessions/{id}/analyses
///   POST /ratings                      a rating or {ratings: [...]}
///   GET  /ratings/distribution?group_by=&style=&module=&sector=
///   GET  /healthz
///
/// Errors are {code, message, details} with a status derived from the code.
class HttpApi {
public:
    HttpApi(PmChatService& service, HttpConfig config);
    ~HttpApi();
    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Binds the socket; returns the bound port. Throws Error(io) when the port is taken.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void listen();
    /// Blocks until a concurrent listen() is accepting connections.
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pmchat
