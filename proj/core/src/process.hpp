#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invsynth::detail {

struct ProcessResult {
  std::string stdout_text;
  std::string stderr_text;
  int exit_status = -1;  // exit code, or 128 + signal number
  bool timed_out = false;
  double elapsed_ms = 0;
  long peak_rss_kb = 0;
  std::optional<std::string> spawn_error;
};

/// Runs argv[0] (PATH lookup) with stdin from /dev/null, capturing both
/// output streams. The child is SIGKILLed once `timeout` elapses.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

/// A uniquely named file in the temp directory, removed on destruction.
class TempFile {
 public:
  TempFile(std::string_view suffix, std::string_view contents);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace invsynth::detail
