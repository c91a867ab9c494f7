#include "actorsim/cli.hpp"

#include "actorsim/direct_logic.hpp"
#include "actorsim/laws.hpp"
#include "actorsim/scenarios.hpp"
#include "actorsim/trace_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace actorsim {

namespace {

struct RunOptions {
  std::string scenario;
  std::string policy = "fair";
  std::uint64_t seed = 0;
  std::uint64_t max_steps = kDefaultMaxSteps;
  int depth = 10;
  std::string trace_out;
  std::string script;
  bool check_laws = true;
  std::vector<std::string> params;
};

std::string outputs_text(const std::vector<Value>& outputs) {
  if (outputs.size() == 1) return to_string(outputs.front());
  return to_string(Value::list(Value::List(outputs.begin(), outputs.end())));
}

std::string set_text(const std::set<std::vector<Value>>& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& o : set) {
    if (!first) out += ", ";
    first = false;
    out += outputs_text(o);
  }
  return out + "}";
}

void print_report(std::ostream& out, const Report& report) {
  if (report.ok()) {
    out << "laws: ok\n";
    return;
  }
  out << "laws: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) {
    out << "  " << v.kind << ": " << v.detail;
    if (v.event) out << " (event " << v.event->value << ")";
    out << "\n";
  }
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

int run_logic_scenario(const RunOptions& o, std::ostream& out, std::ostream& err) {
  out << "scenario: " << o.scenario << "\n";
  try {
    logic::run_script(logic_scenario_script(o.scenario), out);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitParse;
  }
  if (!o.trace_out.empty()) {
    Trace empty;
    empty.policy = "logic";
    if (!write_file(o.trace_out, write_trace(empty), err)) return kExitNoInput;
  }
  return kExitOk;
}

int run_exhaustive(const RunOptions& o, const System& system, std::ostream& out, std::ostream& err) {
  if (!o.trace_out.empty()) {
    err << "--trace-out is not available with the exhaustive policy\n";
    return kExitUsage;
  }
  Report laws;
  EnumerateOptions options;
  options.cap = enumeration_cap_from_env();
  if (o.check_laws) {
    options.on_leaf = [&](const Configuration& c, bool) { laws.merge(check_all(c.trace())); };
  }
  OutcomeSet set;
  try {
    set = enumerate_outcomes(system, o.depth, options);
  } catch (const ExplosionGuard& e) {
    err << e.what() << "\n";
    return kExitNotHalted;
  }
  std::set<std::vector<Value>> running;
  for (const auto& outcome : set.outcomes) {
    if (!outcome.halted) running.insert(outcome.outputs);
  }
  out << "scenario: " << o.scenario << "\n"
      << "policy: exhaustive\n"
      << "depth: " << o.depth << "\n"
      << "configurations: " << set.tree_size << "\n"
      << "outcomes: " << set_text(set.halting_outputs()) << "\n";
  if (!running.empty()) out << "cut off at depth: " << set_text(running) << "\n";
  if (o.check_laws) {
    print_report(out, laws);
    if (!laws.ok()) return kExitLawViolation;
  }
  return kExitOk;
}

int run_command(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const ScenarioInfo* info = find_scenario(o.scenario);
  if (info == nullptr) {
    err << "unknown scenario '" << o.scenario << "' (see 'actorctl list')\n";
    return kExitUsage;
  }
  if (info->logic) return run_logic_scenario(o, out, err);

  ScenarioParams params;
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      err << "--param expects key=value, got '" << kv << "'\n";
      return kExitUsage;
    }
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  std::optional<System> system;
  try {
    system = make_scenario(o.scenario, params);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  if (o.policy == "exhaustive") return run_exhaustive(o, *system, out, err);

  Policy policy;
  if (o.policy == "fair") {
    policy = Policy::fair_fifo();
  } else if (o.policy == "random") {
    policy = Policy::seeded_random(o.seed);
  } else if (o.policy == "adversarial") {
    if (o.script.empty()) {
      err << "--policy adversarial needs --script NAME (starve-stop, always-print)\n";
      return kExitUsage;
    }
    try {
      policy = Policy::adversarial(o.script);
    } catch (const std::invalid_argument& e) {
      err << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    err << "unknown policy '" << o.policy << "'\n";
    return kExitUsage;
  }

  const RunResult result = run(*system, policy, o.max_steps);
  out << "scenario: " << o.scenario << "\n"
      << "policy: " << policy.tag() << "\n"
      << "halted: " << (result.halted ? "true" : "false") << "\n"
      << "steps: " << result.steps << "\n"
      << "outputs: " << outputs_text(result.outputs) << "\n";

  const Trace& trace = result.final_config.trace();
  if (!o.trace_out.empty() && !write_file(o.trace_out, write_trace(trace), err)) return kExitNoInput;
  if (o.check_laws) {
    const Report report = check_all(trace);
    print_report(out, report);
    if (!report.ok()) return kExitLawViolation;
  }
  if (!result.halted) {
    // Divergence is the expected result for these under an adversary.
    const bool expected = policy.kind == Policy::Kind::Adversarial &&
                          (o.scenario == "ndtm" || o.scenario == "csp-xyz");
    if (!expected) {
      err << "step budget of " << o.max_steps << " exhausted before quiescence\n";
      return kExitNotHalted;
    }
  }
  return kExitOk;
}

int check_trace_command(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot read " << path << "\n";
    return kExitNoInput;
  }
  Trace trace;
  try {
    trace = parse_trace(f);
  } catch (const TraceParseError& e) {
    err << e.what() << "\n";
    return kExitParse;
  }
  out << "events: " << trace.events.size() << "\n"
      << "messages: " << trace.messages.size() << "\n";
  const Report report = check_all(trace);
  print_report(out, report);
  return report.ok() ? kExitOk : kExitLawViolation;
}

int logic_command(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot read " << path << "\n";
    return kExitNoInput;
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  try {
    logic::run_script(buffer.str(), out);
  } catch (const logic::ScriptError& e) {
    err << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Actor model kernel: scenarios, trace checking, Direct Logic scripts", "actorctl"};
  app.require_subcommand(1);

  RunOptions o;
  auto* run_cmd = app.add_subcommand("run", "Run or enumerate a scenario");
  run_cmd->add_option("scenario", o.scenario, "Scenario name")->required();
  run_cmd->add_option("--policy", o.policy, "fair | random | adversarial | exhaustive")
      ->check(CLI::IsMember({"fair", "random", "adversarial", "exhaustive"}));
  run_cmd->add_option("--seed", o.seed, "Seed for the random policy");
  run_cmd->add_option("--max-steps", o.max_steps, "Delivery budget")->check(CLI::PositiveNumber);
  run_cmd->add_option("--depth", o.depth, "Depth bound for exhaustive enumeration")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--trace-out", o.trace_out, "Write the JSONL trace here");
  run_cmd->add_option("--script", o.script, "Adversarial script: starve-stop, always-print");
  run_cmd->add_flag("--check-laws,!--no-check-laws", o.check_laws, "Check trace laws (default on)");
  run_cmd->add_option("--param", o.params, "Scenario parameter key=value");

  std::string path;
  auto* check_cmd = app.add_subcommand("check-trace", "Law-check a JSONL trace file");
  check_cmd->add_option("path", path, "Trace file")->required();

  std::string script_path;
  auto* logic_cmd = app.add_subcommand("logic", "Run a Direct Logic script");
  logic_cmd->add_option("path", script_path, "Script file")->required();

  auto* list_cmd = app.add_subcommand("list", "List scenarios");

  std::vector<const char*> argv{"actorctl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (run_cmd->parsed()) return run_command(o, out, err);
  if (check_cmd->parsed()) return check_trace_command(path, out, err);
  if (logic_cmd->parsed()) return logic_command(script_path, out, err);
  if (list_cmd->parsed()) {
    for (const auto& s : scenario_catalog()) out << s.name << "\t" << s.summary << "\n";
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace actorsim
