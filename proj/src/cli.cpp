#include "pmchat/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "pmchat/http_server.hpp"
#include "pmchat/orgmining.hpp"
#include "pmchat/service.hpp"

namespace pmchat {

namespace {

std::string default_data_dir() {
    const char* env = std::getenv("PMCHAT_DATA_DIR");
    return env != nullptr && *env != '\0' ? env : "pmchat-data";
}

HttpApi* g_running_api = nullptr;

void handle_signal(int) {
    if (g_running_api != nullptr) g_running_api->stop();
}

void print_response(std::ostream& out, const AnalysisResult& r) {
    if (r.response) {
        out << *r.response << "\n";
    } else {
        out << "[N.A.] provider unavailable after " << r.attempts << " attempt(s): "
            << r.not_available->last_error << "\n";
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            std::shared_ptr<Transport> transport) {
    CLI::App app{"Process mining KPIs with a conversational analyst", "pmchat"};
    app.require_subcommand(1);
    std::string data_dir = default_data_dir();
    app.add_option("--data-dir", data_dir, "Data directory (default $PMCHAT_DATA_DIR or ./pmchat-data)");

    double dependency = 0.5;
    std::size_t frequency = 2;
    auto add_thresholds = [&](CLI::App* sub) {
        sub->add_option("--dependency", dependency, "Dependency threshold for discovery")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--frequency", frequency, "Frequency threshold for discovery");
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse, clean and register an event log CSV");
    std::string csv_path;
    ColumnMapping mapping;
    std::string resource_col;
    LogMetadata metadata;
    bool ingest_json = false;
    ingest->add_option("csv", csv_path, "Event log CSV")->required();
    ingest->add_option("--case-col", mapping.case_column, "Case id column");
    ingest->add_option("--activity-col", mapping.activity_column, "Activity column");
    ingest->add_option("--timestamp-col", mapping.timestamp_column, "Timestamp column");
    ingest->add_option("--resource-col", resource_col, "Resource column");
    ingest->add_option("--sector", metadata.sector, "Business sector");
    ingest->add_option("--economic-activity", metadata.economic_activity, "Economic activity");
    ingest->add_option("--process", metadata.process_name, "Process name");
    ingest->add_option("--org", metadata.organization, "Organization name");
    ingest->add_flag("--json", ingest_json, "Print the result as JSON");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compute and store module KPIs");
    std::string log_id;
    std::string module_name = "dashboard";
    std::string format = "text";
    std::string model_path;
    analyze->add_option("log_id", log_id, "Log id")->required();
    analyze->add_option("--module", module_name, "dashboard, discovery, performance, conformance, orgmining or all");
    analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot", "none"}));
    analyze->add_option("--model", model_path, "Reference model JSON for conformance");
    add_thresholds(analyze);

    // prompt
    auto* prompt = app.add_subcommand("prompt", "Print the prompt an analysis would send");
    std::string style_name = "optimized";
    std::string task_name = "Analytics";
    bool dry_run = false;
    prompt->add_option("log_id", log_id, "Log id")->required();
    prompt->add_option("--module", module_name, "Engine module");
    prompt->add_option("--style", style_name, "zero_shot or optimized");
    prompt->add_option("--task", task_name, "Analytics, Interpretation or Recommendations");
    prompt->add_flag("--dry-run", dry_run, "Print the prompt without calling a provider");

    // chat
    auto* chat = app.add_subcommand("chat", "Interactive analysis session");
    chat->add_option("log_id", log_id, "Log id")->required();
    chat->add_option("--style", style_name, "zero_shot or optimized");
    chat->add_option("--module", module_name, "Module for the opening analysis");
    chat->add_option("--task", task_name, "Task for the opening analysis");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    HttpConfig http;
    serve->add_option("--port", http.port, "Port (0 picks a free one)");
    serve->add_option("--host", http.host, "Bind address");
    serve->add_option("--data-dir", data_dir, "Data directory");

    // eval
    auto* eval = app.add_subcommand("eval", "Expert rating bookkeeping");
    eval->require_subcommand(1);
    auto* eval_import = eval->add_subcommand("import", "Import ratings from CSV");
    std::string ratings_path;
    std::string source_tag = "import";
    eval_import->add_option("csv", ratings_path, "Ratings CSV (category,sector,gender,style,module)")->required();
    eval_import->add_option("--source", source_tag, "Source tag for rows without one");
    auto* eval_report = eval->add_subcommand("report", "Rating distribution");
    std::string group_by = "overall";
    std::string filter_style;
    std::string filter_module;
    bool compare = false;
    eval_report->add_option("--group-by", group_by, "overall, sector, gender or style")
        ->check(CLI::IsMember({"overall", "sector", "gender", "style"}));
    eval_report->add_option("--style", filter_style, "Only ratings of this prompt style");
    eval_report->add_option("--module", filter_module, "Only ratings of this module");
    eval_report->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    eval_report->add_flag("--compare-styles", compare, "Compare zero-shot and optimized Good shares");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        ServiceConfig config;
        config.data_dir = data_dir;
        config.engine.thresholds = DiscoveryThresholds{dependency, frequency};
        ProviderConfig provider = ProviderConfig::from_env();
        if (!transport) transport = make_transport(provider);
        if (provider.provider != "mock") config.model_name = provider.model;
        PmChatService service(config, transport);

        if (*ingest) {
            if (!resource_col.empty()) mapping.resource_column = resource_col;
            const auto r = service.ingest(read_file(csv_path), mapping, metadata);
            if (ingest_json) {
                out << Json{{"log_id", r.log_id}, {"is_new", r.is_new}, {"cases", r.cases}, {"events", r.events},
                            {"report", to_json(r.report)}}
                           .dump(2)
                    << "\n";
            } else {
                out << "log_id: " << r.log_id << (r.is_new ? "" : " (already registered)") << "\n"
                    << "cases: " << r.cases << ", events: " << r.events << "\n"
                    << "rows: " << r.report.input_rows << " read, " << r.report.total_dropped() << " dropped ("
                    << r.report.count(DropReason::empty_field) << " empty field, "
                    << r.report.count(DropReason::bad_timestamp) << " bad timestamp, "
                    << r.report.count(DropReason::duplicate) << " duplicate)\n";
            }
            return 0;
        }

        if (*analyze) {
            std::optional<ProcessModel> reference;
            if (!model_path.empty()) reference = model_from_json(Json::parse(read_file(model_path)));
            std::vector<EngineModule> modules;
            if (module_name == "all") modules.assign(kAllModules.begin(), kAllModules.end());
            else modules.push_back(module_from_string(module_name));
            if (format == "dot" && modules.size() == 1 && modules[0] != EngineModule::discovery &&
                modules[0] != EngineModule::orgmining) {
                throw Error(ErrorCode::validation, "--format dot needs --module discovery or orgmining");
            }
            for (auto m : modules) {
                const auto r = service.analyze(log_id, m, m == EngineModule::conformance ? reference : std::nullopt);
                const std::string ref = log_id + "/" + std::string(to_string(m)) + "/v" + std::to_string(r.record.version);
                if (r.cache_hit) out << "cache hit: " << ref << " (payload unchanged)\n";
                else out << "stored: " << ref << "\n";
                if (format == "json") {
                    out << r.record.payload.dump(2) << "\n";
                } else if (format == "text") {
                    out << render_module_data({{m, r.record}}, RenderBudget{1u << 30});
                } else if (format == "dot") {
                    const auto log = service.store().load_log(log_id);
                    if (m == EngineModule::discovery) out << dfg_to_dot(build_dfg(log));
                    if (m == EngineModule::orgmining) out << handover_to_dot(handover_network(log));
                }
            }
            return 0;
        }

        if (*prompt) {
            if (!dry_run) {
                throw Error(ErrorCode::validation, "prompt only prints; pass --dry-run (use 'chat' to send prompts)");
            }
            out << service.build_prompt(log_id, module_from_string(module_name), style_from_string(style_name),
                                        task_from_string(task_name));
            return 0;
        }

        if (*chat) {
            const auto module = module_from_string(module_name);
            service.ensure_output(log_id, EngineModule::dashboard);
            service.ensure_output(log_id, module);
            const auto session = service.create_session(log_id, style_from_string(style_name));
            out << "session " << session.session_id << " on log " << log_id << "\n"
                << "commands: /analyze <module> [task], /quit; anything else is a follow-up question\n";
            print_response(out, service.run_analysis(session.session_id, module, task_from_string(task_name)));
            std::string line;
            while (out << "> " << std::flush, std::getline(in, line)) {
                if (line == "/quit" || line == "/exit") break;
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                try {
                    if (line.rfind("/analyze", 0) == 0) {
                        std::istringstream words(line.substr(8));
                        std::string m;
                        std::string t = "Analytics";
                        words >> m >> t;
                        const auto mod = module_from_string(m);
                        service.ensure_output(log_id, mod);
                        print_response(out, service.run_analysis(session.session_id, mod, task_from_string(t)));
                    } else {
                        const auto r = service.follow_up(session.session_id, line);
                        if (r.reply) out << r.reply->content << "\n";
                        else out << "[N.A.] provider unavailable: " << r.not_available->last_error << "\n";
                    }
                } catch (const Error& e) {
                    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
                }
            }
            return 0;
        }

        if (*serve) {
            http.bearer_token = HttpConfig::token_from_env();
            HttpApi api(service, http);
            const int port = api.bind();
            out << "listening on http://" << http.host << ":" << port << " (data: " << data_dir << ")" << std::endl;
            g_running_api = &api;
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            api.listen();
            g_running_api = nullptr;
            return 0;
        }

        if (*eval_import) {
            auto imported = parse_ratings_csv(read_file(ratings_path), source_tag);
            const auto ids = service.ratings().record_all(std::move(imported.records));
            out << "imported " << ids.size() << " rating(s)";
            if (!ids.empty()) out << " (" << ids.front() << " .. " << ids.back() << ")";
            out << "\n";
            for (const auto& e : imported.row_errors) err << "skipped " << e << "\n";
            return imported.row_errors.empty() ? 0 : 1;
        }

        if (*eval_report) {
            const auto records = service.ratings().all();
            if (compare) {
                const auto c = compare_styles(records);
                Json j{{"zero_shot", c.zero_shot ? c.zero_shot->to_json() : Json(nullptr)},
                       {"optimized", c.optimized ? c.optimized->to_json() : Json(nullptr)},
                       {"good_delta", c.good_delta ? Json(*c.good_delta) : Json(nullptr)}};
                if (format == "json") {
                    out << j.dump(2) << "\n";
                } else {
                    if (c.zero_shot) out << "zero_shot\n" << c.zero_shot->to_text();
                    if (c.optimized) out << "optimized\n" << c.optimized->to_text();
                    if (c.good_delta) out << "Good delta (optimized - zero_shot): " << *c.good_delta << " points\n";
                }
                return 0;
            }
            std::optional<PromptStyle> style;
            if (!filter_style.empty()) style = style_from_string(filter_style);
            const auto report = distribution(records, group_by_from_string(group_by), [&](const RatingRecord& r) {
                return (!style || r.prompt_style == *style) && (filter_module.empty() || r.module == filter_module);
            });
            if (format == "json") out << report.to_json().dump(2) << "\n";
            else out << report.to_text();
            return 0;
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        if (!e.details().empty()) err << e.details().dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error [internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pmchat
