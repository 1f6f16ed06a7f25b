#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace invsynth {
class Transport;
}

namespace invsynth::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,      // verification failed, synthesis exhausted, bench regression
  kUsage = 2,        // bad flags or unreadable input
  kEnvironment = 3,  // solver or endpoint unavailable
};

struct Io {
  std::ostream& out;
  std::ostream& err;
  std::shared_ptr<Transport> transport;  // null: real HTTP client
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, const Io& io);
int run(int argc, char** argv);

}  // namespace invsynth::cli
