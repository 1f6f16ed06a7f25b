#pragma once

#include "invsynth/orchestrator.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace invsynth {

struct CorpusEntry {
  std::string id;
  std::filesystem::path path;
  std::optional<std::string> expected_status;
};

/// Entries of `corpus.json` when present, otherwise every `.c` and `.smt2t`
/// file in `dir` (sorted, id = file stem). Throws Error when the directory
/// is unreadable, empty, or ids collide.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

struct BenchRow {
  std::string id;
  std::string status;  // a SynthesisStatus name, or "InputError"
  int iterations = 0;
  double wall_ms = 0;  // synthesize() only
  double solver_ms = 0;
  double memory_mb = 0;
  std::string invariant;
  std::string error;
  std::optional<std::string> expected_status;

  bool solved() const { return status == "Solved"; }
  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
  std::string method;
  int max_iterations = 0;
  std::vector<BenchRow> rows;
  int solved = 0;
  double mean_time_s = 0;       // over all rows
  double mean_iterations = 0;   // over solved rows
  double mean_memory_mb = 0;    // over all rows
  std::vector<int> histogram;   // [k-1] = rows solved at attempt k

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Aggregates rows (kept in the given order).
BenchReport make_report(std::string method, int max_iterations, std::vector<BenchRow> rows);

BenchRow row_from_trace(const std::string& id, const SynthesisTrace& trace);

struct BenchOptions {
  ProposerOptions proposer;
  std::optional<std::filesystem::path> out_dir;  // traces/<id>.json and report.{txt,json,csv}
  std::string method;  // report label; defaults to the proposer id
};

/// Runs every entry through synthesize() on `parallelism` workers. Entry
/// failures become rows; only an unreadable corpus throws.
BenchReport run_corpus(const std::filesystem::path& dir, const SynthesisConfig& config, int parallelism,
                       const BenchOptions& options = {});

enum class ReportFormat { Text, Json, Csv };

std::string emit_report(const BenchReport& report, ReportFormat format);
BenchReport report_from_json(std::string_view json);

}  // namespace invsynth
