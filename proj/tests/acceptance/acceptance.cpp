// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance              run everything, print the report, exit 0
//   acceptance --only NAME  run one criterion, exit 1 when it fails

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli_support.hpp"
#include "oracle/oracle.hpp"
#include "pmchat/conformance.hpp"
#include "pmchat/discovery.hpp"
#include "pmchat/evaluation.hpp"
#include "pmchat/service.hpp"
#include "service_support.hpp"
#include "support.hpp"

using namespace pmchat;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<EventLog> random_logs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<EventLog> logs;
    for (std::size_t i = 0; i < n; ++i) logs.push_back(oracle::random_log(rng, 50, 20));
    return logs;
}

// Structural/temporal KPIs, DFG edge counts and variant frequencies against the
// brute-force oracle on L1 and 200 random logs.
Verdict kpi_oracle() {
    const auto t0 = Clock::now();
    auto logs = random_logs(200, 20240101);
    logs.insert(logs.begin(), testing::l1().log);
    std::size_t mismatches = 0;
    for (const auto& log : logs) {
        const auto s = structural_stats(log);
        const auto o = oracle::structural(log);
        mismatches += s.total_cases != o.cases;
        mismatches += s.total_activities != o.activities;
        mismatches += s.total_variants != o.variants;
        mismatches += s.total_cases_with_rework != o.rework_cases;
        const auto t = temporal_stats(log);
        const auto [lo, hi] = oracle::time_range(log);
        mismatches += t.first_event_date != lo;
        mismatches += t.last_event_date != hi;
        mismatches += t.span != hi - lo;

        const auto dfg = build_dfg(log);
        const auto pairs = oracle::directly_follows(log);
        mismatches += dfg.edges.size() != pairs.size();
        for (const auto& p : pairs) mismatches += dfg.edge_count(p.from, p.to) != p.count;

        const auto variants = extract_variants(log);
        const auto counted = oracle::variant_counts(log);
        mismatches += variants.size() != counted.size();
        for (const auto& c : counted) {
            bool found = false;
            for (const auto& v : variants) found = found || (v.activity_sequence == c.sequence && v.frequency == c.count);
            mismatches += !found;
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << logs.size() << " logs, " << mismatches << " mismatches, " << elapsed << "s (limit 10s)";
    return {mismatches == 0 && elapsed < 10.0, d.str()};
}

Verdict dfg_identity() {
    std::size_t bad = 0;
    const auto logs = random_logs(200, 20240101);
    for (const auto& log : logs) bad += build_dfg(log).total_edge_frequency() != log.event_count() - log.cases.size();
    return {bad == 0, std::to_string(logs.size()) + " logs, " + std::to_string(bad) + " violations"};
}

Verdict self_conformance() {
    std::size_t not_perfect = 0, not_decreasing = 0;
    const auto logs = random_logs(100, 777);
    for (auto log : logs) {
        const auto model = discover_model(log, 0.0, 1);
        const double before = check_conformance(model, log).log_fitness;
        not_perfect += before != 1.0;
        // A case that starts with an activity the model has never seen.
        Case injected;
        injected.case_id = "zz-injected";
        injected.events.push_back(Event{"zz-injected", "NeverSeen", testing::ts("2024-06-01T00:00:00Z"), {}, {}});
        injected.events.push_back(Event{"zz-injected", log.cases[0].events[0].activity,
                                        testing::ts("2024-06-01T00:01:00Z"), {}, {}});
        log.cases.push_back(injected);
        not_decreasing += !(check_conformance(model, log).log_fitness < before);
    }
    return {not_perfect == 0 && not_decreasing == 0,
            "100 trials, " + std::to_string(not_perfect) + " imperfect self-replays, " +
                std::to_string(not_decreasing) + " non-decreasing injections"};
}

// Hand count under the replay rule (one start, one per pair, one end per case):
// L1 cases [A,B,C], [A,B,B,C], [A,C] are fully allowed by their own (0.0, 1) model
// and contribute 4 + 5 + 3 = 12 moves; [A,C,B] scores start ok, A->C ok, C->B
// disallowed, end B disallowed = 2 of 4. The expected value below assumes
// 15 moves for L1, which this rule cannot produce.
Verdict hand_replay() {
    auto log = testing::l1().log;
    const auto model = discover_model(log, 0.0, 1);
    Case extra;
    extra.case_id = "case-004";
    auto t = testing::ts("2024-01-02T00:00:00Z");
    for (const char* a : {"A", "C", "B"}) {
        extra.events.push_back(Event{"case-004", a, t, {}, {}});
        t += std::chrono::minutes(1);
    }
    log.cases.push_back(extra);
    const auto report = check_conformance(model, log);
    const double expected = 17.0 / 19.0;
    std::ostringstream d;
    d.precision(12);
    d << "expected 17/19 = " << expected << ", got " << report.allowed_moves << "/" << report.total_moves << " = "
      << report.log_fitness;
    return {std::abs(report.log_fitness - expected) <= 1e-12, d.str()};
}

Verdict prompt_structure() {
    testing::TempDir dir;
    const std::string data = dir.path().string();
    const auto ingest = testing::run(testing::ingest_l1_args(data, testing::fixture("logs/L1.csv").string()));
    const auto id = testing::ingested_id(ingest);
    testing::run({"--data-dir", data, "analyze", id, "--module", "all", "--format", "none"});

    std::size_t wrong = 0, checked = 0;
    for (auto module : kAllModules) {
        for (const char* task : {"Analytics", "Interpretation", "Recommendations"}) {
            for (auto style : {PromptStyle::zero_shot, PromptStyle::optimized}) {
                const auto r = testing::run({"--data-dir", data, "prompt", id, "--module",
                                             std::string(to_string(module)), "--style",
                                             std::string(to_string(style)), "--task", task, "--dry-run"});
                const auto headers = scan_headers(r.out);
                const std::size_t want = style == PromptStyle::zero_shot ? 12 : 9;
                wrong += r.code != 0 || headers.size() != want || headers != section_headers(style);
                ++checked;
            }
        }
    }
    const auto g1 = testing::run({"--data-dir", data, "prompt", id, "--module", "dashboard", "--style", "optimized",
                                  "--task", "Analytics", "--dry-run"});
    const bool golden = g1.code == 0 && g1.out == read_file(testing::fixture("prompts/G1.txt"));
    return {wrong == 0 && golden, std::to_string(checked) + " prompts, " + std::to_string(wrong) +
                                      " with wrong headers; G1 " + (golden ? "byte-identical" : "DIFFERS")};
}

struct RunRecord {
    std::vector<std::string> prompts;
    std::vector<std::string> responses;
};

// ingest L1 -> analyze all modules -> session -> Analytics on each module -> one follow-up.
RunRecord end_to_end(const std::filesystem::path& dir, std::shared_ptr<MockTransport> mock, PromptStyle style,
                     AnalysisTask task) {
    ServiceConfig config;
    config.data_dir = dir;
    config.clock = testing::fixed_now;
    PmChatService service(config, mock);
    const auto id = service.ingest(testing::l1_csv(), testing::l1_mapping(), testing::l1_metadata()).log_id;
    for (auto m : kAllModules) service.analyze(id, m);
    const auto session = service.create_session(id, style);
    for (auto m : kAllModules) service.run_analysis(session.session_id, m, task);
    service.follow_up(session.session_id, "Which of these findings should the organization address first?");

    // Read back what was persisted, as a fresh process would.
    PmChatService reader(config, std::make_shared<MockTransport>());
    RunRecord out;
    for (const auto& a : reader.analyses(session.session_id)) {
        out.prompts.push_back(a.prompt_text);
        out.responses.push_back(a.response.value_or("<N.A.>"));
    }
    const auto history = reader.get_session(session.session_id).history;
    out.responses.push_back(history.back().content);
    return out;
}

Verdict redaction() {
    auto mock = std::make_shared<MockTransport>();
    std::size_t blocked = 0;
    for (auto style : {PromptStyle::zero_shot, PromptStyle::optimized}) {
        for (auto task : {AnalysisTask::analytics, AnalysisTask::interpretation, AnalysisTask::recommendations}) {
            testing::TempDir dir;
            end_to_end(dir.path(), mock, style, task);
            // Attempted leaks must be stopped before the transport.
            PmChatService service(testing::service_config(dir.path()), mock);
            for (const char* leak : {"Look at case-002", "What did carol do?", "Invoice INV-1003 is late"}) {
                try {
                    service.follow_up("s000001", leak);
                } catch (const Error& e) {
                    blocked += e.code() == ErrorCode::redaction;
                }
            }
        }
    }
    const auto deny = testing::l1().deny_entries;
    const auto bodies = mock->recorded();
    std::size_t matches = 0;
    for (const auto& body : bodies) {
        for (const auto& entry : deny) matches += body.find(entry) != std::string::npos;
    }
    return {matches == 0 && blocked == 18 && !bodies.empty(),
            std::to_string(bodies.size()) + " outbound bodies scanned against " + std::to_string(deny.size()) +
                " deny entries: " + std::to_string(matches) + " matches; " + std::to_string(blocked) +
                "/18 leak attempts blocked"};
}

Verdict na_semantics() {
    auto mock = std::make_shared<MockTransport>();
    std::vector<Millis> slept;
    LlmGateway gateway(mock, 4, [&](Millis d) { slept.push_back(d); });
    mock->fail_always(FailureKind::server_error);
    RetryPolicy policy;
    CompletionRequest req;
    req.messages = {{ChatRole::user, "Role: x\n\nTask: y"}};
    const auto outcome = gateway.complete_with_retry(req, policy);
    const bool gateway_ok = !outcome.ok() && outcome.attempts == policy.max_attempts &&
                            mock->call_count() == static_cast<std::size_t>(policy.max_attempts);

    testing::ServiceRig rig;
    const auto id = rig.ingest_l1();
    rig.service.analyze(id, EngineModule::dashboard);
    const auto s = rig.service.create_session(id, PromptStyle::optimized);
    rig.service.run_analysis(s.session_id, EngineModule::dashboard, AnalysisTask::analytics);
    const auto before = rig.service.get_session(s.session_id).history;
    rig.mock->fail_always(FailureKind::timeout);
    const auto na = rig.service.run_analysis(s.session_id, EngineModule::dashboard, AnalysisTask::interpretation);
    const auto after = rig.service.get_session(s.session_id).history;
    const bool prefix_kept = after.size() == before.size() + 1 &&
                             std::equal(before.begin(), before.end(), after.begin()) &&
                             after.back().role == ChatRole::user;
    const auto stored = rig.service.analyses(s.session_id);
    const bool recorded = na.not_available.has_value() && stored.size() == 2 && stored[1].not_available.has_value();
    rig.mock->clear_faults();
    const bool usable = rig.service.follow_up(s.session_id, "Please try again.").reply.has_value();

    std::ostringstream d;
    d << "NotAvailable after " << outcome.attempts << " of " << policy.max_attempts << " attempts ("
      << mock->call_count() << " calls); session history " << before.size() << " -> " << after.size()
      << ", N.A. stored: " << (recorded ? "yes" : "no") << ", usable afterwards: " << (usable ? "yes" : "no");
    return {gateway_ok && prefix_kept && recorded && usable, d.str()};
}

Verdict evaluation_arithmetic() {
    const auto imported = parse_ratings_csv(read_file(testing::fixture("ratings/reconstruction.csv")), "fixture");
    const auto overall = distribution(imported.records, GroupBy::overall).groups.at("overall").percent;
    const auto sector = distribution(imported.records, GroupBy::sector);
    const auto gender = distribution(imported.records, GroupBy::gender);
    auto good = [](const DistributionReport& r, const std::string& g) {
        return r.groups.at(g).percent.at(RatingCategory::good);
    };
    const int o[4] = {overall.at(RatingCategory::good), overall.at(RatingCategory::mediocre),
                      overall.at(RatingCategory::bad), overall.at(RatingCategory::na)};
    const int sec[3] = {good(sector, "Public Sector"), good(sector, "Service Sector"),
                        good(sector, "Industrial Sector")};
    const int gen[2] = {good(gender, "male"), good(gender, "female")};
    const bool pass = imported.row_errors.empty() && o[0] == 72 && o[1] == 19 && o[2] == 8 && o[3] == 1 &&
                      sec[0] == 67 && sec[1] == 71 && sec[2] == 77 && gen[0] == 74 && gen[1] == 70;
    std::ostringstream d;
    d << "overall " << o[0] << "/" << o[1] << "/" << o[2] << "/" << o[3] << ", sector Good " << sec[0] << "/"
      << sec[1] << "/" << sec[2] << ", gender Good " << gen[0] << "/" << gen[1];
    return {pass, d.str()};
}

Verdict e2e_determinism() {
    const auto t0 = Clock::now();
    RunRecord runs[2];
    for (auto& run : runs) {
        testing::TempDir dir;
        run = end_to_end(dir.path(), std::make_shared<MockTransport>(), PromptStyle::optimized,
                         AnalysisTask::analytics);
    }
    const double elapsed = seconds_since(t0);
    const bool same = runs[0].prompts == runs[1].prompts && runs[0].responses == runs[1].responses;
    std::ostringstream d;
    d << runs[0].prompts.size() << " prompts + " << runs[0].responses.size() << " responses per run, "
      << (same ? "byte-identical" : "DIFFERENT") << ", " << elapsed << "s (limit 30s)";
    return {same && runs[0].prompts.size() == 5 && elapsed < 30.0, d.str()};
}

// Expert-judged answer quality needs human judges and a live proprietary model.
// The artifact substitutes the property suites and the rating-arithmetic reproduction,
// so this line passes when that substitute holds.
Verdict not_reproducible() {
    const auto arithmetic = evaluation_arithmetic();
    return {arithmetic.pass,
            "expert-judged quality (72% Good, optimized > zero-shot) not reproducible offline; substitute: "
            "property suites + rating arithmetic (" + std::string(arithmetic.pass ? "holds" : "FAILS") + ")"};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
        {"kpi_oracle", kpi_oracle},
        {"dfg_identity", dfg_identity},
        {"self_conformance", self_conformance},
        {"hand_replay", hand_replay},
        {"prompt_structure", prompt_structure},
        {"redaction", redaction},
        {"na_semantics", na_semantics},
        {"evaluation_arithmetic", evaluation_arithmetic},
        {"e2e_determinism", e2e_determinism},
        {"not_reproducible", not_reproducible},
    };
    return all;
}

Verdict run_guarded(const std::function<Verdict()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
    }
    bool matched = false;
    bool all_pass = true;
    for (const auto& [name, fn] : criteria()) {
        if (!only.empty() && name != only) continue;
        matched = true;
        const auto v = run_guarded(fn);
        all_pass = all_pass && v.pass;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    }
    if (!matched) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return only.empty() || all_pass ? 0 : 1;
}
