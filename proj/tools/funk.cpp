// Command-line driver: check, run, trace, erase-run, emit-regions,
// region-run, diff and stats over .fk files.
//
// Exit codes: 0 success/agreement, 1 static error, 2 runtime stuck or trap,
// 3 fuel exhausted, 4 diff disagreement, 64 usage error.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "funk/diff.hpp"
#include "funk/driver.hpp"
#include "funk/erasure.hpp"
#include "funk/machine.hpp"
#include "funk/oracle.hpp"
#include "funk/pretty.hpp"
#include "funk/regions.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitStatic = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitFuel = 3;
constexpr int kExitDiff = 4;

std::string read_input(const std::string& input) {
  if (input == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return funk::read_file(input);
}

void report(const std::string& path, funk::Span span, const std::string& kind,
            const std::string& message) {
  std::cerr << path << ":" << span.line << ":" << span.col << ": " << kind
            << ": " << message << "\n";
}

// Compiles a file, mapping frontend and checker failures to exit code 1.
int compile_or_fail(const std::string& input, funk::Compiled& out) {
  std::string path = input == "-" ? "<stdin>" : input;
  try {
    out = funk::compile_source(read_input(input), path);
    return kExitOk;
  } catch (const funk::ParseError& e) {
    report(path, e.span, "syntax", e.what());
    return kExitStatic;
  } catch (const funk::TypeError& e) {
    report(path, e.span, funk::to_string(e.kind), e.what());
    return kExitStatic;
  } catch (const std::exception& e) {
    std::cerr << path << ": error: " << e.what() << "\n";
    return kExitStatic;
  }
}

json stats_json(const funk::RunStats& s) {
  return json{{"steps", s.steps},
              {"max_value_stack", s.max_value_stack},
              {"max_control_stack", s.max_control_stack},
              {"max_retained_cells", s.max_retained_cells}};
}

int finish_run(const funk::RunResult& result, bool as_json, bool with_stats) {
  switch (result.status) {
    case funk::RunResult::Status::Final:
      if (as_json) {
        json out{{"version", 1},
                 {"observation", funk::to_string(result.observation)}};
        if (with_stats) out["stats"] = stats_json(result.stats);
        std::cout << out.dump() << "\n";
      } else {
        std::cout << funk::to_string(result.observation) << "\n";
      }
      return kExitOk;
    case funk::RunResult::Status::Stuck:
      std::cerr << result.message << "\n";
      return kExitRuntime;
    case funk::RunResult::Status::FuelExhausted:
      std::cerr << result.message << "\n";
      return kExitFuel;
  }
  return kExitRuntime;
}

std::vector<std::string> collect_inputs(const std::string& input) {
  namespace fs = std::filesystem;
  if (input != "-" && fs::is_directory(input)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(input))
      if (entry.path().extension() == ".fk")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
  }
  return {input};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funk: a stack language with a type-and-effect system"};
  app.require_subcommand(1);

  std::string input;
  std::uint64_t fuel = 1000000;
  if (const char* env = std::getenv("FUNK_FUEL")) fuel = std::strtoull(env, nullptr, 10);
  bool oracle = false, no_tailcall = false, as_json = false;

  auto add_common = [&](CLI::App* cmd, bool runs) {
    cmd->add_option("input", input, "source file, directory (diff), or -")
        ->required();
    if (runs) cmd->add_option("--fuel", fuel, "step budget");
    cmd->add_flag("--json", as_json, "machine-readable output");
    return cmd;
  };

  auto* cmd_check = add_common(app.add_subcommand("check", "typecheck"), false);
  auto* cmd_run = add_common(app.add_subcommand("run", "evaluate"), true);
  cmd_run->add_flag("--oracle", oracle, "assert state typing at every step");
  cmd_run->add_flag("--no-tailcall", no_tailcall,
                    "execute tail calls as call-then-return");
  auto* cmd_trace =
      add_common(app.add_subcommand("trace", "stream a step trace"), true);
  auto* cmd_erase =
      add_common(app.add_subcommand("erase-run", "run after erasure"), true);
  auto* cmd_emit = add_common(
      app.add_subcommand("emit-regions", "print the region translation"),
      false);
  auto* cmd_region = add_common(
      app.add_subcommand("region-run", "run the region translation"), true);
  auto* cmd_diff = add_common(
      app.add_subcommand("diff", "compare all three semantics"), true);
  auto* cmd_stats =
      add_common(app.add_subcommand("stats", "run and report statistics"),
                 true);
  cmd_stats->add_flag("--no-tailcall", no_tailcall,
                      "execute tail calls as call-then-return");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_check->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      if (as_json)
        std::cout << json{{"version", 1},
                          {"type", funk::pretty(c.checked.type)}}
                         .dump()
                  << "\n";
      else
        std::cout << funk::pretty(c.checked.type) << "\n";
      return kExitOk;
    }

    if (cmd_run->parsed() || cmd_stats->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      funk::RunOptions opts;
      opts.fuel = fuel;
      opts.no_tailcall = no_tailcall;
      if (oracle)
        opts.per_state = funk::state_typing_oracle(c.checked.type);
      funk::RunResult result;
      try {
        result = funk::run(c.checked.program, opts);
      } catch (const funk::TypeError& e) {
        std::cerr << input << ": oracle: " << e.what() << "\n";
        return kExitRuntime;
      }
      if (cmd_stats->parsed()) {
        if (result.status != funk::RunResult::Status::Final &&
            result.status != funk::RunResult::Status::FuelExhausted) {
          std::cerr << result.message << "\n";
          return kExitRuntime;
        }
        const auto& s = result.stats;
        if (as_json) {
          std::cout << json{{"version", 1}, {"stats", stats_json(s)}}.dump()
                    << "\n";
        } else {
          std::cout << "steps " << s.steps << "\nmax_value_stack "
                    << s.max_value_stack << "\nmax_control_stack "
                    << s.max_control_stack << "\nmax_retained_cells "
                    << s.max_retained_cells << "\n";
        }
        return result.status == funk::RunResult::Status::Final ? kExitOk
                                                               : kExitFuel;
      }
      return finish_run(result, as_json, /*with_stats=*/true);
    }

    if (cmd_trace->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      std::cout << json{{"version", 1}}.dump() << "\n";
      funk::RunOptions opts;
      opts.fuel = fuel;
      opts.trace = [](const funk::StepRecord& r) {
        std::cout << json{{"step", r.step},
                          {"rule", r.rule},
                          {"stmt", r.stmt},
                          {"stack_depth", r.stack_depth},
                          {"locals", r.locals},
                          {"control_depth", r.control_depth}}
                         .dump()
                  << "\n";
      };
      funk::RunResult result = funk::run(c.checked.program, opts);
      if (result.status == funk::RunResult::Status::Final) {
        std::cout << json{{"observation", funk::to_string(result.observation)},
                          {"stats", stats_json(result.stats)}}
                         .dump()
                  << "\n";
        return kExitOk;
      }
      std::cerr << result.message << "\n";
      return result.status == funk::RunResult::Status::FuelExhausted
                 ? kExitFuel
                 : kExitRuntime;
    }

    if (cmd_erase->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      funk::RunResult result =
          funk::erased::run(funk::erase(c.checked.program), fuel);
      return finish_run(result, as_json, false);
    }

    if (cmd_emit->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      std::cout << funk::region::pretty(funk::region::translate(c.checked))
                << "\n";
      return kExitOk;
    }

    if (cmd_region->parsed()) {
      funk::Compiled c;
      if (int rc = compile_or_fail(input, c)) return rc;
      funk::region::RunResult result =
          funk::region::run(funk::region::translate(c.checked), fuel);
      switch (result.status) {
        case funk::region::RunResult::Status::Final:
          std::cout << funk::to_string(result.observation)
                    << (result.opaque_location ? " (opaque location)" : "")
                    << "\n";
          return kExitOk;
        case funk::region::RunResult::Status::TrapDangling:
        case funk::region::RunResult::Status::TrapStuck:
          std::cerr << "trap: " << result.message << "\n";
          return kExitRuntime;
        case funk::region::RunResult::Status::FuelExhausted:
          std::cerr << result.message << "\n";
          return kExitFuel;
      }
    }

    if (cmd_diff->parsed()) {
      std::vector<std::string> files = collect_inputs(input);
      json entries = json::array();
      bool all_agree = true;
      for (const auto& file : files) {
        std::string shown =
            files.size() == 1 ? file : std::filesystem::path(file).filename().string();
        try {
          funk::Compiled c = funk::compile_source(read_input(file), file);
          funk::DiffEntry entry = funk::diff_program(shown, c.checked, fuel);
          all_agree &= entry.agree;
          entries.push_back(json{{"name", entry.name},
                                 {"direct", entry.direct},
                                 {"erased", entry.erased},
                                 {"region", entry.region},
                                 {"agree", entry.agree},
                                 {"caveats", entry.caveats}});
          if (!as_json)
            std::cout << (entry.agree ? "agree " : "DISAGREE ") << shown
                      << ": direct=" << entry.direct
                      << " erased=" << entry.erased
                      << " region=" << entry.region
                      << (entry.caveats.empty() ? "" : "  (see caveats)")
                      << "\n";
        } catch (const funk::ParseError& e) {
          if (!as_json)
            std::cout << "skip " << shown << ": syntax error\n";
          entries.push_back(json{{"name", shown}, {"skipped", "syntax"}});
        } catch (const funk::TypeError& e) {
          if (!as_json)
            std::cout << "skip " << shown << ": rejected ("
                      << funk::to_string(e.kind) << ")\n";
          entries.push_back(
              json{{"name", shown}, {"skipped", funk::to_string(e.kind)}});
        }
      }
      if (as_json)
        std::cout << json{{"version", 1},
                          {"agree", all_agree},
                          {"programs", entries}}
                         .dump()
                  << "\n";
      return all_agree ? kExitOk : kExitDiff;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 64;
}
