// weakfan: exact certification of nilpotent orbit pairs and weak-fan
// subdivision. See README.md for the session schema and subcommands.

#include <cstdio>
#include <string>
#include <vector>

#include "weakfan/engine.hpp"

namespace {

const char* kUsage = R"(usage: weakfan <subcommand> --session FILE [options]

subcommands:
  orbit check --cone C --flag F        certify (C, F) as a nilpotent orbit pair
  wf compute --nilpotent N             weight filtration of a single nilpotent
  wf cone --cone C [--samples K]       cone weight filtration with sampling
  split --cone C --flag F              Deligne splitting of (W(C)[-n], F)
  grading --cone C --flag F            grading element and its rational form
  cones intersect --left A --right B [--gamma G]
  gamma enumerate --left A --right B --max-word-len L
  fan check                            weak-fan predicate on witness data
  fan build                            two-stage subdivision to a weak fan
  fan ray-refine --ray R               refine along an interior ray
  fan star --i NI --j NJ               star subdivision at two rays

options: --output json|summary (default json)
exit codes: 0 certified/weak-fan/success, 1 refuted/violation, 2 input error
)";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::fputs(kUsage, args.empty() ? stderr : stdout);
    return args.empty() ? 2 : 0;
  }
  weakfan::RunResult r = weakfan::run_command(args);
  std::fputs(r.output.c_str(), r.exit_code == 2 ? stderr : stdout);
  return r.exit_code;
}
