#include "funk/diff.hpp"

#include "funk/erasure.hpp"
#include "funk/machine.hpp"
#include "funk/regions.hpp"

namespace funk {

DiffEntry diff_program(const std::string& name, const CheckedProgram& p,
                       std::uint64_t fuel) {
  DiffEntry entry;
  entry.name = name;

  RunOptions opts;
  opts.fuel = fuel;
  RunResult direct = run(p.program, opts);
  RunResult erased_res = erased::run(erase(p.program), fuel);
  region::RunResult region_res = region::run(region::translate(p), fuel);

  auto describe = [](RunResult::Status s, const Observation& o) {
    switch (s) {
      case RunResult::Status::Final:
        return to_string(o);
      case RunResult::Status::Stuck:
        return std::string("stuck");
      case RunResult::Status::FuelExhausted:
        return std::string("fuel-exhausted");
    }
    return std::string("?");
  };

  entry.direct = describe(direct.status, direct.observation);
  entry.erased = describe(erased_res.status, erased_res.observation);
  switch (region_res.status) {
    case region::RunResult::Status::Final:
      entry.region = to_string(region_res.observation);
      break;
    case region::RunResult::Status::TrapDangling:
      entry.region = "trap-dangling";
      break;
    case region::RunResult::Status::TrapStuck:
      entry.region = "trap-stuck";
      break;
    case region::RunResult::Status::FuelExhausted:
      entry.region = "fuel-exhausted";
      break;
  }

  bool all_final = direct.status == RunResult::Status::Final &&
                   erased_res.status == RunResult::Status::Final &&
                   region_res.status == region::RunResult::Status::Final;
  if (all_final) {
    bool erased_ok =
        erased_view(direct.observation) == erased_res.observation;
    bool region_ok = !region_res.opaque_location &&
                     direct.observation == region_res.observation;
    entry.agree = erased_ok && region_ok;
    if (direct.observation.kind == Observation::Kind::Abs)
      entry.caveats.push_back(
          "direct result observes abs; compared as fun after erasure");
    if (region_res.opaque_location)
      entry.caveats.push_back("region result is an opaque location");
  }
  return entry;
}

}  // namespace funk
