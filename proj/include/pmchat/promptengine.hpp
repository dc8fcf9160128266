#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pmchat/dashboard.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

enum class AnalysisTask { analytics, interpretation, recommendations };
enum class PromptStyle { zero_shot, optimized };

std::string_view to_string(AnalysisTask t);
std::string_view to_string(PromptStyle s);
AnalysisTask task_from_string(std::string_view s);
PromptStyle style_from_string(std::string_view s);

/// The closing sentence appended to the Task section; one fixed string per task.
std::string_view task_directive(AnalysisTask t);

struct ZeroShotPromptFields {
    std::string role;
    std::string task;
    std::string process;
    std::string organization;
    std::string sector;
    std::string kpis;
    std::string objective;
    std::string considerations;
    std::string deliverables;
    std::string analysis_guidelines;
    std::string additional_instructions;
};

struct OptimizedPromptFields {
    std::string role;
    std::string task;
    std::string process;
    std::string organization;
    std::string analysis_focus;
    std::string deep_dive;
    std::string recommendations;
    std::string additional_considerations;
};

/// Token estimate is ceil(utf8_bytes / 4).
struct RenderBudget {
    std::size_t max_prompt_tokens = 12000;
};

std::size_t estimate_tokens(std::string_view text);

/// Section headers in emission order, ending with "Module Data".
const std::vector<std::string>& section_headers(PromptStyle style);

/// Headers found at the start of a section (first line or after a blank line), in order.
std::vector<std::string> scan_headers(std::string_view prompt);

inline constexpr std::string_view kOmittedForLength = "(omitted for length)";

// Module data. Each engine module renders as one titled block of fixed lines plus
// tables whose rows carry a weight (a frequency or count). Under budget pressure
// rows are dropped lowest weight first and each shortened table ends in a
// "… truncated N rows" marker.

struct TableRow {
    std::string text;
    std::size_t weight = 0;
};

struct ModuleTable {
    std::string title;
    std::vector<TableRow> rows;  ///< truncated from the back; usually weight descending
};

struct ModuleBlock {
    EngineModule module = EngineModule::dashboard;
    std::string title;
    std::vector<std::string> lines;
    std::vector<ModuleTable> tables;
};

ModuleBlock module_block(EngineModule module, const Json& payload);

struct FittedModuleData {
    std::string text;
    std::size_t dropped_rows = 0;
    bool fits = true;
};

/// Renders blocks in dashboard, discovery, performance, conformance, orgmining order,
/// dropping table rows until the text is at most max_bytes long.
FittedModuleData fit_module_data(const std::vector<ModuleBlock>& blocks, std::size_t max_bytes);

/// Throws validation when outputs is empty and budget when even the row-free text is too large.
std::string render_module_data(const std::map<EngineModule, ModuleOutputRecord>& outputs,
                               const RenderBudget& budget = {});

std::string build_zero_shot(const ZeroShotPromptFields& fields, AnalysisTask task, std::string_view module_data);
std::string build_optimized(const OptimizedPromptFields& fields, AnalysisTask task, std::string_view module_data);

/// Builds a prompt that fits the budget. Truncation order: module-data rows, then
/// Additional Instructions / Additional Considerations, then Considerations.
/// Role, Task and Process are never shortened.
std::string assemble_prompt(const ZeroShotPromptFields& fields, AnalysisTask task,
                            const std::map<EngineModule, ModuleOutputRecord>& outputs, const RenderBudget& budget);
std::string assemble_prompt(const OptimizedPromptFields& fields, AnalysisTask task,
                            const std::map<EngineModule, ModuleOutputRecord>& outputs, const RenderBudget& budget);

struct DefaultFields {
    ZeroShotPromptFields zero_shot;
    OptimizedPromptFields optimized;
};

DefaultFields default_fields_for(const LogMetadata& metadata, EngineModule module, AnalysisTask task);

inline constexpr std::string_view kDefaultRole = "Act as a business process analyst and process mining expert.";

}  // namespace pmchat
