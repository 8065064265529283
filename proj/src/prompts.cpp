// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/prompts.hpp"

#include <sstream>

namespace ctxforge {

namespace {

constexpr const char* kExecutorHead = R"(### SYSTEM ROLE
You are the Executor Agent. Your sole objective is to fulfill the user's TASK by synthesizing information from the provided context and your internal knowledge base.

### TOOLS AVAILABLE
{{tool_list}}

### OPERATIONAL PROTOCOL
1. Analyze: Review the user's TASK and the CONTEXT PREVIEW carefully.
2. Retrieve: Use the context_manage_tool if the preview is insufficient or if specific details are missing.
3. Evaluate: The provided context is NOT guaranteed to be of high quality. If the provided context is irrelevant, missing, unhelpful or demonstrably wrong, rely on your internal expertise to complete the task.
)";

constexpr const char* kExecutorSummarizeStep = R"(4. Summarize: You must call ctx_usage_summary_tool only one time to report how you used the context or why you didn't use it. Meanwhile:
   - In your summary, tag the resources you used:
   - Use \helpful_resource_id{...} if the resource was useful.
   - Use \unhelpful_resource_id{...} if it was confusing, wrong, or not useful.
)";

constexpr const char* kExecutorTail = R"({{execute_step}}. Execute: Call the final_answer_tool to submit your complete, final answer.

Note: the context provided could be empty. In this case, you should totally ignore the context_manage_tool and rely on your internal knowledge to solve the task.

### OUTPUT CONSTRAINTS FOR YOUR FINAL ANSWER
- Do not include internal thought processes, meta-commentary, or descriptions of your workflow in the final answer.
- Provide the answer immediately and concisely, adhering strictly to any formatting requested by the user.

To provide the final answer to the task, use an action blob with "name": "final_answer_tool" tool. It is the only way to complete the task, else you will be stuck on a loop. Your final output should look like this:
Action:
{
  "name": "final_answer_tool",
  "arguments": {"answer": "insert your final answer here"}
}
You could call the final_answer_tool multiple times, and we will automatically select the last valid call as your final answer.

### CONTEXT PREVIEW AND TASK GIVEN
{{context_and_task}})";

constexpr const char* kOptimizerTemplate = R"(### ROLE & MISSION
You are an autonomous Context Engineer that optimizes a structured context for a given task for one step.
Your optimized context will finally be delivered to a downstream Executor Agent to perform the task. With this context, the Executor Agent should be more likely to succeed on similar tasks.

### TOOL AUGMENTATION
You are augmented with the following tools to manage the context:
{{tool_list}}

### TOOL USAGE RULES
1. You MUST ALWAYS call a tool in your response. To finish your turn, call final_answer_tool.
2. Always use the correct arguments for the tools.
3. DO NOT call the same tool with the exact same parameters twice.

### INCOMING DATA PACKAGE EXPLANATION
- A. Context Update History: How the context has been updated in previous steps and the corresponding performance on the held-out validation set.
- B. Context Preview: A preview of the current state of the context. Due to the limited context size, the preview may only present the beginning of the resources and hide the rest.
- C. Executor Trajectory & Feedback: A list of an executor's trajectory and feedback, each of which contains:
  - task: The original instruction given to the Executor.
  - executor_output: The Executor's final response.
  - reference answer (if available): The reference answer to the task. This is the ground truth that the executor's output should achieve.
  - evaluation_result (if available): could be a score or natural language feedback, indicating how the executor's final response meets the task's requirements.
  - context_usage_summary (if available): A concise summary of how the context was used for this task. Sometimes, the executor replies that the context provided is empty (but the context is not empty). This is because we pre-filter the context based on the task, and there does not exist relevant information that can be used to help the executor with this task.
  - previous attempted context update (if available): A concise summary of previous attempts of optimizing the SAME context, followed by the corresponding performance on the held-out validation set.

### CONTEXT ANALYSIS & REFINEMENT MISSION

### INCOMING DATA PACKAGE
{{package}}

### RECOMMENDED WORKFLOW
You are recommended to follow this workflow:
1. Understanding & Analysis & Brainstorming:
   - Understand the task: what kind of knowledge and skills is needed to solve the task?
   - Analyze the executor's performance and how the context was used. Try to get a comprehensive understanding of the task, the executor's performance and what factors influenced its success and failure.
   - Brainstorm possible information that can be helpful to the executor to succeed on similar tasks.
2. Planning:
   - Based on your analysis, form a clear actionable plan with the planning_tool. When making the plan, keep the following tips in mind:
   - DO NOT try to fix everything at once. Focus on high-impact changes.
   - THINK STRATEGICALLY: Compared to adding simple fragmented facts, more effective strategies could be adding high-level principle/hints/methodology, or diverse few-shot examples that can help the executor generalize to unseen cases.
3. Execute the plan: Use your tools to execute your plan. When adding a new information, you should:
   - Prioritize quality over quantity.
   - Avoid fragmentation: Do not add many small, repetitive, or low-value resources. This pollutes the context. Prefer adding fewer high-quality resources that contain diverse information.
   - Reject low-quality, noisy, and redundant information.
4. Clean Up your CONTEXT (If Necessary):
   - Control the length of each item in the context. It should not be too long nor too fragmented. To do so, you can split one big resource or merge similar items.
   - Different parts of the context could conflict with each other, which will heavily impact the final answer quality. You should keep only one version of them.
   - If you want to remove a resource, you must have a VERY STRONG justification to do so because they can't be recovered.
5. Final Summary: After executing your plan, you MUST call the final_answer_tool to conclude your editions to the context. Your conclusion should be concise and comprehensive, and indicate What you updated in the context, and the reasoning behind your changes. You are encouraged to share the plan you made for this optimization step.

### RULES OF THUMB (sorted by priority)
(1) [Final Goal - Generalization] Your final goal is to optimize the context to help the executor succeed/specialize on future similar tasks, instead of solely updating context for the current task.
(2) [Understandable Context] You need to make the context easy to understand and the information in it easy to find.
(3) [Active Searching] Always use the browser_use_tool to search for the desirable high-quality external knowledge to strengthen the context, instead of relying on your own knowledge base if you can. Note that you might not find useful information from a single call immediately. You are encouraged to try different search queries (based on the browser_use_tool's feedback), aiming to find diverse information from different perspectives.
(4) [Quality-Control] Find and add high-quality examples and relevant knowledge to the context to help the executor generalize to unseen cases (with the browser_use_tool if applicable).
(5) [Edition Only] {{edition_only_rule}})";

constexpr const char* kAgentSearchTemplate = R"(You are a retrieval sub-agent. Rank the stored resources below by relevance to the query.

QUERY: {{query}}

RESOURCES:
{{listing}}

Reply with a JSON array of resource ids, most relevant first. Include only relevant resources.)";

}  // namespace

std::string render_tool_list(const std::vector<ToolSpec>& tools) {
  std::ostringstream out;
  bool first = true;
  for (const auto& tool : tools) {
    if (!first) out << "\n";
    first = false;
    out << "- " << tool.name << ": " << tool.description << "\n";
    out << "  Takes inputs: {";
    for (std::size_t i = 0; i < tool.params.size(); ++i) {
      if (i) out << ", ";
      out << tool.params[i].name << ": " << tool.params[i].type
          << (tool.params[i].required ? "" : " (optional)");
    }
    out << "}\n";
    out << "  Returns an output of type: " << tool.output_type;
  }
  return out.str();
}

std::string render_executor_prompt(const std::string& context_preview, const std::string& task,
                                   const std::vector<ToolSpec>& tools, ExecutorMode mode) {
  std::string context_block = context_preview.empty()
                                  ? std::string("(the context is currently empty)")
                                  : context_preview;
  std::string context_and_task = "CONTEXT PREVIEW:\n" + context_block + "\n\nTASK:\n" + task;

  std::string tmpl(kExecutorHead);
  if (mode == ExecutorMode::Training) tmpl += kExecutorSummarizeStep;
  tmpl += kExecutorTail;

  return render_template(tmpl, {
                                   {"tool_list", render_tool_list(tools)},
                                   {"execute_step", mode == ExecutorMode::Training ? "5" : "4"},
                                   {"context_and_task", context_and_task},
                               });
}

namespace {

std::string render_package(const OptimizerDataPackage& package) {
  std::ostringstream out;
  out << kUpdateHistoryHeader << "\n";
  if (package.update_history.empty()) {
    out << "(no previous updates)\n";
  } else {
    std::size_t step = 1;
    for (const auto& entry : package.update_history) {
      out << "[update] step " << step++ << ": " << entry.summary;
      if (entry.val_score) out << " (validation score: " << *entry.val_score << ")";
      out << "\n";
    }
  }
  out << "\n" << kContextPreviewHeader << "\n" << package.context_preview << "\n";
  out << "\n" << kFeedbackHeader << "\n";
  std::size_t idx = 1;
  for (const auto& fb : package.feedback) {
    out << "--- trajectory " << idx++ << " ---\n";
    out << "task: " << fb.task << "\n";
    out << "executor_output: " << fb.executor_output << "\n";
    if (fb.reference) out << "reference answer: " << *fb.reference << "\n";
    if (fb.evaluation_result) out << "evaluation_result: " << *fb.evaluation_result << "\n";
    if (fb.context_usage_summary)
      out << "context_usage_summary: " << *fb.context_usage_summary << "\n";
  }
  if (!package.sibling_summaries.empty()) {
    out << "\n" << kSiblingHeader << "\n";
    std::size_t s = 1;
    for (const auto& summary : package.sibling_summaries)
      out << "[sibling] " << s++ << ": " << summary << "\n";
    out << kDiversityInstruction << "\n";
  }
  std::string text = out.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace

std::string render_optimizer_prompt(const OptimizerDataPackage& package,
                                    const std::vector<ToolSpec>& tools) {
  if (package.feedback.empty())
    throw CtxError("optimizer data package requires at least one trajectory+feedback entry");
  return render_template(kOptimizerTemplate, {
                                                 {"tool_list", render_tool_list(tools)},
                                                 {"package", render_package(package)},
                                                 {"edition_only_rule", kEditionOnlyRule},
                                             });
}

std::string render_agent_search_prompt(const std::string& query, const std::string& listing) {
  return render_template(kAgentSearchTemplate, {{"query", query}, {"listing", listing}});
}

std::string extract_section(const std::string& prompt, const std::string& header) {
  std::size_t start = prompt.find(header);
  if (start == std::string::npos) return "";
  start += header.size();
  std::size_t end = prompt.find("\n### ", start);
  if (end == std::string::npos) end = prompt.size();
  return trim(prompt.substr(start, end - start));
}

}  // namespace ctxforge
