#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace vhom {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitFailed = 4,
};

/// Command-line entry point. Subcommands: probabilities, dip-scan, image,
/// snr, encrypt-demo, masks, selftest.
int cli_main(int argc, char **argv);

/// Same, with explicit arguments (args[0] is the program name) and streams.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace vhom
