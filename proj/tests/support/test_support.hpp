#pragma once

#include <invsynth/orchestrator.hpp>
#include <invsynth/solver.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testing_support {

inline std::filesystem::path source_dir() { return INVSYNTH_SOURCE_DIR; }
inline std::filesystem::path corpus_dir() { return source_dir() / "corpus" / "mini"; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }

inline bool have_solver() { return std::string(INVSYNTH_TEST_SOLVER).size() > 0; }

inline invsynth::SolverConfig solver() {
  invsynth::SolverConfig c;
  c.executable = INVSYNTH_TEST_SOLVER;
  return c;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("invsynth-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline constexpr const char* kBench122 =
    "int i, size, sn;\n"
    "assume(size >= 0);\n"
    "sn = 0;\n"
    "i = 1;\n"
    "while (i <= size) {\n"
    "  sn = sn + 1;\n"
    "  i = i + 1;\n"
    "}\n"
    "assert(sn == size || sn == 0);\n";

inline constexpr const char* kWeak122 = "(= sn (- i 1))";
inline constexpr const char* kRepaired122 = "(and (>= i 1) (= sn (- i 1)) (<= i (+ size 1)))";

}  // namespace testing_support

#define REQUIRE_SOLVER()                                   \
  do {                                                     \
    if (!testing_support::have_solver()) GTEST_SKIP() << "z3 not available"; \
  } while (0)
