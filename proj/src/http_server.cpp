#include "pmchat/http_server.hpp"

#include <httplib.h>

#include <cstdlib>
#include <functional>

namespace pmchat {

std::optional<std::string> HttpConfig::token_from_env() {
    const char* token = std::getenv("PMCHAT_API_TOKEN");
    if (token == nullptr || *token == '\0') return std::nullopt;
    return std::string(token);
}

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::schema: return 400;
        case ErrorCode::validation: return 400;
        case ErrorCode::empty_log: return 422;
        case ErrorCode::redaction: return 422;
        case ErrorCode::not_found: return 404;
        case ErrorCode::precondition: return 409;
        case ErrorCode::budget: return 413;
        case ErrorCode::provider: return 502;
        case ErrorCode::io: return 500;
        case ErrorCode::internal: return 500;
    }
    return 500;
}

Json error_envelope(const Error& e) {
    return Json{{"code", to_string(e.code())}, {"message", e.what()}, {"details", e.details()}};
}

namespace {

using Handler = std::function<Json(const httplib::Request&, httplib::Response&)>;

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    try {
        Json j = Json::parse(req.body);
        if (!j.is_object()) throw Error(ErrorCode::validation, "request body must be a JSON object");
        return j;
    } catch (const Json::parse_error& ex) {
        throw Error(ErrorCode::validation, std::string("request body is not valid JSON: ") + ex.what());
    }
}

std::string required_string(const Json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string()) {
        throw Error(ErrorCode::validation, std::string("field '") + key + "' is required",
                    Json{{"field", key}});
    }
    return body[key].get<std::string>();
}

ColumnMapping mapping_from_json(const Json& j) {
    ColumnMapping m;
    if (!j.is_object()) return m;
    m.case_column = j.value("case_column", m.case_column);
    m.activity_column = j.value("activity_column", m.activity_column);
    m.timestamp_column = j.value("timestamp_column", m.timestamp_column);
    if (j.contains("resource_column") && j["resource_column"].is_string()) {
        m.resource_column = j["resource_column"].get<std::string>();
    }
    return m;
}

Json message_json(const FollowUpResult& r) {
    Json out;
    out["reply"] = r.reply ? to_json(*r.reply) : Json(nullptr);
    if (r.not_available) {
        out["not_available"] = Json{{"kind", to_string(r.not_available->kind)},
                                    {"last_error", r.not_available->last_error},
                                    {"attempts", r.not_available->attempts}};
    } else {
        out["not_available"] = nullptr;
    }
    return out;
}

}  // namespace

struct HttpApi::Impl {
    PmChatService& service;
    HttpConfig config;
    httplib::Server server;
    int port = -1;

    Impl(PmChatService& s, HttpConfig c) : service(s), config(std::move(c)) {
        // httplib's default also sets SO_REUSEPORT, which would let a second server share a taken port.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        routes();
    }

    bool authorized(const httplib::Request& req) const {
        if (!config.bearer_token || req.path == "/healthz") return true;
        return req.get_header_value("Authorization") == "Bearer " + *config.bearer_token;
    }

    void route(const std::string& method, const std::string& pattern, Handler handler) {
        auto wrapped = [this, handler](const httplib::Request& req, httplib::Response& res) {
            Json body;
            res.status = 200;
            if (!authorized(req)) {
                res.status = 401;
                body = Json{{"code", "unauthorized"}, {"message", "missing or wrong bearer token"},
                            {"details", Json::object()}};
            } else {
                try {
                    body = handler(req, res);
                } catch (const Error& e) {
                    res.status = http_status_for(e.code());
                    body = error_envelope(e);
                } catch (const std::exception& e) {
                    res.status = 500;
                    body = Json{{"code", "internal"}, {"message", e.what()}, {"details", Json::object()}};
                }
            }
            res.set_content(body.dump(), "application/json");
        };
        if (method == "GET") server.Get(pattern, wrapped);
        else server.Post(pattern, wrapped);
    }

    Json module_part(const std::string& log_id, EngineModule module, const char* key) {
        auto record = service.ensure_output(log_id, module);
        Json out{{"log_id", log_id}, {"module", to_string(module)}, {"version", record.version}};
        if (key == nullptr) {
            out["payload"] = record.payload;
        } else {
            out[key] = record.payload.at(key);
        }
        return out;
    }

    Json ingest(const httplib::Request& req) {
        std::string csv;
        Json meta = Json::object();
        Json mapping = Json::object();
        if (req.is_multipart_form_data()) {
            if (!req.has_file("file")) throw Error(ErrorCode::validation, "multipart field 'file' is required");
            csv = req.get_file_value("file").content;
            if (req.has_file("metadata")) meta = Json::parse(req.get_file_value("metadata").content);
            if (req.has_file("mapping")) mapping = Json::parse(req.get_file_value("mapping").content);
        } else {
            const Json body = parse_body(req);
            csv = required_string(body, "csv");
            meta = body.value("metadata", Json::object());
            mapping = body.value("mapping", Json::object());
        }
        if (meta.contains("mapping")) mapping = meta["mapping"];
        const auto result = service.ingest(csv, mapping_from_json(mapping), metadata_from_json(meta));
        return Json{{"log_id", result.log_id},
                    {"is_new", result.is_new},
                    {"cases", result.cases},
                    {"events", result.events},
                    {"report", to_json(result.report)}};
    }

    void routes() {
        route("GET", "/healthz", [](const auto&, auto&) { return Json{{"status", "ok"}}; });

        route("POST", "/logs", [this](const auto& req, auto&) { return ingest(req); });
        route("GET", "/logs", [this](const auto&, auto&) { return Json{{"logs", service.store().list_logs()}}; });

        const std::string id = "/logs/([A-Za-z0-9]+)";
        route("GET", id + "/kpis/structural", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::dashboard, "structural");
        });
        route("GET", id + "/kpis/temporal", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::dashboard, "temporal");
        });
        route("GET", id + "/dfg", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::discovery, "dfg");
        });
        route("GET", id + "/variants", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::discovery, "variants");
        });
        route("GET", id + "/performance", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::performance, nullptr);
        });
        route("GET", id + "/conformance", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::conformance, nullptr);
        });
        route("GET", id + "/handover", [this](const auto& req, auto&) {
            return module_part(req.matches[1], EngineModule::orgmining, "handover");
        });
        route("POST", id + "/analyze", [this](const auto& req, auto&) {
            const Json body = parse_body(req);
            const auto module = module_from_string(required_string(body, "module"));
            std::optional<ProcessModel> reference;
            if (body.contains("reference_model") && !body["reference_model"].is_null()) {
                reference = model_from_json(body["reference_model"]);
            }
            const auto result = service.analyze(req.matches[1], module, reference);
            return Json{{"cache_hit", result.cache_hit}, {"output", to_json(result.record)}};
        });

        route("POST", "/sessions", [this](const auto& req, auto&) {
            const Json body = parse_body(req);
            const auto style = style_from_string(body.value("style", std::string("optimized")));
            return to_json(service.create_session(required_string(body, "log_id"), style));
        });
        const std::string sid = "/sessions/([A-Za-z0-9]+)";
        route("GET", sid, [this](const auto& req, auto&) { return to_json(service.get_session(req.matches[1])); });
        route("POST", sid + "/analysis", [this](const auto& req, auto&) {
            const Json body = parse_body(req);
            const auto module = module_from_string(required_string(body, "module"));
            const auto task = task_from_string(body.value("task", std::string("Analytics")));
            return to_json(service.run_analysis(req.matches[1], module, task));
        });
        route("POST", sid + "/message", [this](const auto& req, auto&) {
            const Json body = parse_body(req);
            return message_json(service.follow_up(req.matches[1], required_string(body, "text")));
        });
        route("GET", sid + "/history", [this](const auto& req, auto&) {
            const auto s = service.get_session(req.matches[1]);
            Json history = Json::array();
            for (const auto& m : s.history) history.push_back(to_json(m));
            return Json{{"session_id", s.session_id}, {"history", history}};
        });
        route("GET", sid + "/analyses", [this](const auto& req, auto&) {
            Json out = Json::array();
            for (const auto& a : service.analyses(req.matches[1])) out.push_back(to_json(a));
            return Json{{"analyses", out}};
        });

        route("POST", "/ratings", [this](const auto& req, auto&) {
            const Json body = parse_body(req);
            std::vector<RatingRecord> records;
            if (body.contains("ratings")) {
                if (!body["ratings"].is_array()) throw Error(ErrorCode::validation, "'ratings' must be an array");
                for (const auto& r : body["ratings"]) records.push_back(rating_from_json(r));
            } else {
                records.push_back(rating_from_json(body));
            }
            return Json{{"rating_ids", service.ratings().record_all(std::move(records))}};
        });
        route("GET", "/ratings/distribution", [this](const auto& req, auto&) {
            const auto group_by =
                group_by_from_string(req.has_param("group_by") ? req.get_param_value("group_by") : "overall");
            std::optional<PromptStyle> style;
            if (req.has_param("style")) style = style_from_string(req.get_param_value("style"));
            const std::string module = req.has_param("module") ? req.get_param_value("module") : "";
            const std::string sector = req.has_param("sector") ? req.get_param_value("sector") : "";
            return distribution(service.ratings().all(), group_by,
                                [&](const RatingRecord& r) {
                                    return (!style || r.prompt_style == *style) &&
                                           (module.empty() || r.module == module) &&
                                           (sector.empty() || r.sector == sector);
                                })
                .to_json();
        });

        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (!res.body.empty()) return;
            const char* code = res.status == 404 ? "not_found" : "validation_error";
            res.set_content(Json{{"code", code}, {"message", "no such endpoint"}, {"details", Json::object()}}.dump(),
                            "application/json");
        });
    }
};

HttpApi::HttpApi(PmChatService& service, HttpConfig config)
    : impl_(std::make_unique<Impl>(service, std::move(config))) {}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind() {
    int port = impl_->config.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(impl_->config.host);
    } else if (!impl_->server.bind_to_port(impl_->config.host, port)) {
        port = -1;
    }
    if (port < 0) {
        throw Error(ErrorCode::io, "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port),
                    Json{{"port", impl_->config.port}});
    }
    impl_->port = port;
    return port;
}

void HttpApi::listen() {
    if (impl_->port < 0) throw Error(ErrorCode::internal, "bind() must succeed before listen()");
    impl_->server.listen_after_bind();
}

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpApi::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace pmchat
