#include "invsynth/bench.hpp"

#include "invsynth/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace invsynth {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& r = rows[ri];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << " | ";
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size(), ' ');
    }
    os << '\n';
    if (ri == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) {
        if (i) os << "-+-";
        os << std::string(width[i], '-');
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("corpus directory not found: " + dir.string());
  std::vector<CorpusEntry> entries;
  fs::path manifest = dir / "corpus.json";
  if (fs::exists(manifest)) {
    json doc;
    try {
      doc = json::parse(read_file(manifest));
      for (const auto& e : doc.at("entries")) {
        CorpusEntry entry;
        entry.path = dir / e.at("path").get<std::string>();
        entry.id = e.contains("id") ? e.at("id").get<std::string>() : entry.path.stem().string();
        if (e.contains("expected") && !e.at("expected").is_null()) entry.expected_status = e.at("expected").get<std::string>();
        entries.push_back(std::move(entry));
      }
    } catch (const json::exception& e) {
      throw Error("invalid corpus manifest " + manifest.string() + ": " + e.what());
    }
  } else {
    for (const auto& de : fs::directory_iterator(dir, ec)) {
      auto ext = de.path().extension();
      if (de.is_regular_file() && (ext == ".c" || ext == ".smt2t")) entries.push_back({de.path().stem().string(), de.path(), {}});
    }
    if (ec) throw Error("cannot list corpus directory " + dir.string() + ": " + ec.message());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  }
  if (entries.empty()) throw Error("corpus " + dir.string() + " has no entries");
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (!ids.insert(e.id).second) throw Error("duplicate corpus id: " + e.id);
  }
  return entries;
}

BenchRow row_from_trace(const std::string& id, const SynthesisTrace& trace) {
  BenchRow row;
  row.id = id;
  row.status = to_string(trace.status);
  row.iterations = trace.proposals();
  row.wall_ms = trace.wall_ms;
  row.solver_ms = trace.solver_ms;
  row.memory_mb = trace.peak_memory_mb;
  row.invariant = trace.invariant.value_or("");
  row.error = trace.error;
  return row;
}

BenchReport make_report(std::string method, int max_iterations, std::vector<BenchRow> rows) {
  BenchReport r;
  r.method = std::move(method);
  r.max_iterations = max_iterations;
  r.histogram.assign(static_cast<std::size_t>(std::max(max_iterations, 0)), 0);
  double time_sum = 0, mem_sum = 0, iter_sum = 0;
  for (const auto& row : rows) {
    time_sum += row.wall_ms;
    mem_sum += row.memory_mb;
    if (row.solved()) {
      ++r.solved;
      iter_sum += row.iterations;
      if (row.iterations >= 1 && row.iterations <= max_iterations) ++r.histogram[row.iterations - 1];
    }
  }
  if (!rows.empty()) {
    r.mean_time_s = time_sum / static_cast<double>(rows.size()) / 1000.0;
    r.mean_memory_mb = mem_sum / static_cast<double>(rows.size());
  }
  if (r.solved > 0) r.mean_iterations = iter_sum / r.solved;
  r.rows = std::move(rows);
  return r;
}

BenchReport run_corpus(const fs::path& dir, const SynthesisConfig& config, int parallelism, const BenchOptions& options) {
  if (parallelism < 1) throw Error("parallelism must be >= 1");
  config.validate();
  auto entries = load_corpus(dir);
  if (options.out_dir) fs::create_directories(*options.out_dir / "traces");

  std::vector<BenchRow> rows(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const auto& entry = entries[i];
      BenchRow row;
      try {
        Problem problem = Problem::load(entry.path);
        problem.name = entry.id;
        ProposerOptions popts = options.proposer;
        popts.solver = config.solver;
        popts.seed = config.seed;
        auto proposer = make_proposer(config.proposer_id, popts);
        SynthesisTrace trace = synthesize(problem, config, *proposer);
        row = row_from_trace(entry.id, trace);
        if (options.out_dir) write_file(*options.out_dir / "traces" / (entry.id + ".json"), trace_to_json(trace));
      } catch (const std::exception& e) {
        row.id = entry.id;
        row.status = "InputError";
        row.error = e.what();
      }
      row.expected_status = entry.expected_status;
      rows[i] = std::move(row);
    }
  };
  {
    std::vector<std::jthread> pool;
    int n = std::min<int>(parallelism, static_cast<int>(entries.size()));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  BenchReport report =
      make_report(options.method.empty() ? config.proposer_id : options.method, config.max_iterations, std::move(rows));
  if (options.out_dir) {
    write_file(*options.out_dir / "report.txt", emit_report(report, ReportFormat::Text));
    write_file(*options.out_dir / "report.json", emit_report(report, ReportFormat::Json));
    write_file(*options.out_dir / "report.csv", emit_report(report, ReportFormat::Csv));
  }
  return report;
}

std::string emit_report(const BenchReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Text: {
      std::ostringstream os;
      os << "# " << r.rows.size() << " entries, max " << r.max_iterations << " iterations per entry\n"
         << "# Solved: entries with status Solved\n"
         << "# Time (s): mean wall-clock of synthesis over all entries\n"
         << "# Iters: mean number of proposals over solved entries\n"
         << "# Memory (MB): mean peak solver resident set over all entries\n\n";
      os << table({{"Method", "Solved", "Time (s)", "Iters", "Memory (MB)"},
                   {r.method, std::to_string(r.solved), fixed(r.mean_time_s, 2), fixed(r.mean_iterations, 2),
                    fixed(r.mean_memory_mb, 2)}});
      os << '\n';
      std::vector<std::string> head{"Iteration"}, counts{"Solved"};
      for (std::size_t k = 0; k < r.histogram.size(); ++k) {
        head.push_back(std::to_string(k + 1));
        counts.push_back(std::to_string(r.histogram[k]));
      }
      os << table({head, counts});
      os << '\n';
      std::vector<std::vector<std::string>> detail{{"Entry", "Status", "Iters", "Time (s)", "Memory (MB)", "Invariant"}};
      for (const auto& row : r.rows) {
        detail.push_back({row.id, row.status, std::to_string(row.iterations), fixed(row.wall_ms / 1000.0, 3),
                          fixed(row.memory_mb, 2), row.invariant.empty() ? row.error : row.invariant});
      }
      os << table(detail);
      return os.str();
    }
    case ReportFormat::Json: {
      json j;
      j["method"] = r.method;
      j["max_iterations"] = r.max_iterations;
      j["entries"] = r.rows.size();
      j["solved"] = r.solved;
      j["mean_time_s"] = r.mean_time_s;
      j["mean_iterations"] = r.mean_iterations;
      j["mean_memory_mb"] = r.mean_memory_mb;
      j["histogram"] = r.histogram;
      j["conventions"] = {{"time", "mean over all entries"},
                          {"iterations", "mean over solved entries"},
                          {"memory", "mean peak solver RSS over all entries"}};
      json rows = json::array();
      for (const auto& row : r.rows) {
        rows.push_back({{"id", row.id},
                        {"status", row.status},
                        {"iterations", row.iterations},
                        {"wall_ms", row.wall_ms},
                        {"solver_ms", row.solver_ms},
                        {"memory_mb", row.memory_mb},
                        {"invariant", row.invariant},
                        {"error", row.error},
                        {"expected", row.expected_status ? json(*row.expected_status) : json(nullptr)}});
      }
      j["rows"] = std::move(rows);
      return j.dump(2) + "\n";
    }
    case ReportFormat::Csv: {
      std::ostringstream os;
      os << "id,status,iterations,time_s,solver_ms,memory_mb,invariant,expected\n";
      for (const auto& row : r.rows) {
        os << csv_field(row.id) << ',' << row.status << ',' << row.iterations << ',' << fixed(row.wall_ms / 1000.0, 6)
           << ',' << fixed(row.solver_ms, 3) << ',' << fixed(row.memory_mb, 3) << ',' << csv_field(row.invariant) << ','
           << csv_field(row.expected_status.value_or("")) << '\n';
      }
      return os.str();
    }
  }
  return {};
}

BenchReport report_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    BenchReport r;
    r.method = j.at("method").get<std::string>();
    r.max_iterations = j.at("max_iterations").get<int>();
    r.solved = j.at("solved").get<int>();
    r.mean_time_s = j.at("mean_time_s").get<double>();
    r.mean_iterations = j.at("mean_iterations").get<double>();
    r.mean_memory_mb = j.at("mean_memory_mb").get<double>();
    r.histogram = j.at("histogram").get<std::vector<int>>();
    for (const auto& e : j.at("rows")) {
      BenchRow row;
      row.id = e.at("id").get<std::string>();
      row.status = e.at("status").get<std::string>();
      row.iterations = e.at("iterations").get<int>();
      row.wall_ms = e.at("wall_ms").get<double>();
      row.solver_ms = e.at("solver_ms").get<double>();
      row.memory_mb = e.at("memory_mb").get<double>();
      row.invariant = e.at("invariant").get<std::string>();
      row.error = e.at("error").get<std::string>();
      if (!e.at("expected").is_null()) row.expected_status = e.at("expected").get<std::string>();
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("invalid report JSON: ") + e.what());
  }
}

}  // namespace invsynth
