#include "sidekick/results.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"

namespace sidekick {

namespace {

using detail::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw ParseError("unterminated quote", static_cast<int>(line_no));
  }
  return fields;
}

double to_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'", static_cast<int>(line_no));
  }
}

ordered_json wilcoxon_json(const PairedTest& t) {
  ordered_json j;
  j["method"] = t.method;
  j["reference"] = t.reference;
  j["n_pairs"] = t.result.n_pairs;
  j["w_plus"] = t.result.w_plus;
  j["w_minus"] = t.result.w_minus;
  j["z"] = t.result.z;
  j["p"] = t.result.p;
  j["r"] = t.result.r;
  j["exact_p"] = t.result.exact_p ? ordered_json(*t.result.exact_p) : ordered_json();
  j["no_effect"] = t.result.no_effect;
  return j;
}

ordered_json aggregates_json(std::span<const MethodAggregate> aggregates) {
  auto rows = ordered_json::array();
  for (const MethodAggregate& a : aggregates) {
    rows.push_back({{"method", a.method}, {"n", a.count}, {"mean", a.mean}, {"se", a.se},
                    {"min", a.min}, {"max", a.max}, {"single_seed", a.single_seed}});
  }
  return rows;
}

ordered_json record_json(const RunRecord& r) {
  ordered_json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  if (r.ok()) {
    j["makespan"] = r.makespan;
    j["truck_travel"] = r.truck_travel;
    j["wait"] = r.total_wait;
    j["n_sorties"] = r.n_sorties;
    j["wall_time"] = r.wall_time;
  } else {
    j["failed_stage"] = *r.failed_stage;
    j["error"] = r.error;
  }
  return j;
}

} // namespace

std::string format_runs_csv(std::span<const RunRecord> records) {
  std::string out = std::string(runs_csv_header) + "\n";
  for (const RunRecord& r : records) {
    if (!r.ok()) {
      continue;
    }
    out += csv_field(r.method) + "," + std::to_string(r.seed) + "," + num(r.makespan) + "," +
           num(r.truck_travel) + "," + num(r.total_wait) + "," + std::to_string(r.n_sorties) + "," +
           num(r.wall_time) + "\n";
  }
  return out;
}

std::vector<RunRecord> parse_runs_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line_no == 1) {
      if (line != runs_csv_header) {
        throw ParseError("unexpected header '" + line + "'", 1);
      }
      continue;
    }
    if (line.empty()) {
      continue;
    }
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 7) {
      throw ParseError("expected 7 fields, got " + std::to_string(f.size()),
                       static_cast<int>(line_no));
    }
    RunRecord r;
    r.method = f[0];
    if (f[1].empty() || f[1].find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad seed '" + f[1] + "'", static_cast<int>(line_no));
    }
    r.seed = static_cast<std::uint64_t>(std::stoull(f[1]));
    r.makespan = to_double(f[2], line_no);
    r.truck_travel = to_double(f[3], line_no);
    r.total_wait = to_double(f[4], line_no);
    r.n_sorties = static_cast<int>(to_double(f[5], line_no));
    r.wall_time = to_double(f[6], line_no);
    records.push_back(std::move(r));
  }
  if (line_no == 0) {
    throw ParseError("empty runs file", 1);
  }
  return records;
}

std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path) {
  try {
    return parse_runs_csv(detail::read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_aggregate_csv(std::span<const MethodAggregate> aggregates) {
  std::string out = std::string(aggregate_csv_header) + "\n";
  for (const MethodAggregate& a : aggregates) {
    out += csv_field(a.method) + "," + std::to_string(a.count) + "," + num(a.mean) + "," +
           num(a.se) + "," + num(a.min) + "," + num(a.max) + "\n";
  }
  return out;
}

std::string format_tests_csv(std::span<const PairedTest> tests) {
  std::string out = std::string(tests_csv_header) + "\n";
  for (const PairedTest& t : tests) {
    const WilcoxonResult& w = t.result;
    out += csv_field(t.method) + "," + csv_field(t.reference) + "," + std::to_string(w.n_pairs) +
           "," + num(w.w_plus) + "," + num(w.w_minus) + "," + num(w.z) + "," + num(w.p) + "," +
           num(w.r) + "," + (w.exact_p ? num(*w.exact_p) : std::string()) + "," +
           (w.no_effect ? "no_effect" : "") + "\n";
  }
  return out;
}

std::string format_plot_bundle(const Instance& inst, const PipelineOutcome& outcome) {
  ordered_json doc;
  doc["method"] = outcome.record.method;
  doc["seed"] = outcome.record.seed;
  auto nodes = ordered_json::array();
  for (const Point& p : inst.nodes) {
    nodes.push_back({p.x, p.y});
  }
  doc["nodes"] = std::move(nodes);
  doc["depot"] = depot;
  doc["recharge"] = inst.params.recharge;
  doc["tour"] = outcome.solution.tour;
  auto sorties = ordered_json::array();
  for (const Sortie& s : outcome.solution.sorties) {
    sorties.push_back({s.launch, s.customer, s.rendezvous});
  }
  doc["sorties"] = std::move(sorties);
  doc["makespan"] = outcome.report.makespan;
  doc["truck_travel"] = outcome.report.truck_travel;
  doc["total_wait"] = outcome.report.total_wait;
  doc["n_sorties"] = outcome.report.n_sorties;
  auto events = ordered_json::array();
  for (const Event& e : outcome.report.events) {
    events.push_back({{"time", e.time}, {"event", to_string(e.kind)}, {"node", e.node}});
  }
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

std::string format_aggregate_bundle(std::span<const MethodAggregate> aggregates) {
  ordered_json doc;
  doc["aggregate"] = aggregates_json(aggregates);
  return doc.dump(2) + "\n";
}

std::vector<PairedTest> reference_tests(std::span<const RunRecord> records,
                                        const std::string& reference) {
  std::vector<PairedTest> tests;
  if (reference.empty()) {
    return tests;
  }
  std::vector<std::string> methods;
  bool has_reference = false;
  for (const RunRecord& r : records) {
    if (r.method == reference) {
      has_reference = true;
    } else if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  if (!has_reference) {
    return tests;
  }
  for (const std::string& m : methods) {
    try {
      tests.push_back(paired_test(records, m, reference, {.exact = true}));
    } catch (const std::invalid_argument&) {
      // fewer than two common seeds
    }
  }
  return tests;
}

std::string slugify(const std::string& name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') {
    out.pop_back();
  }
  return out.empty() ? "method" : out;
}

EmittedFiles emit_results(const ExperimentConfig& cfg, const BatchResult& batch,
                          const std::filesystem::path& dir) {
  std::vector<RunRecord> records;
  records.reserve(batch.outcomes.size());
  for (const PipelineOutcome& o : batch.outcomes) {
    records.push_back(o.record);
  }
  const auto aggregates = aggregate(records);
  const auto tests = reference_tests(records, cfg.reference);

  EmittedFiles files;
  files.runs = dir / "runs.csv";
  files.aggregate = dir / "aggregate.csv";
  files.tests = dir / "tests.csv";
  files.failures = dir / "failures.csv";
  files.bundle = dir / "bundle.json";

  detail::write_text_file(files.runs, format_runs_csv(records));
  detail::write_text_file(files.aggregate, format_aggregate_csv(aggregates));
  detail::write_text_file(files.tests, format_tests_csv(tests));

  std::string failures = "method,seed,stage,error\n";
  for (const RunRecord& r : records) {
    if (!r.ok()) {
      failures += csv_field(r.method) + "," + std::to_string(r.seed) + "," + *r.failed_stage + "," +
                  csv_field(r.error) + "\n";
    }
  }
  detail::write_text_file(files.failures, failures);

  ordered_json bundle;
  bundle["config"] = cfg.source_text;
  auto runs = ordered_json::array();
  for (const RunRecord& r : records) {
    runs.push_back(record_json(r));
  }
  bundle["runs"] = std::move(runs);
  bundle["aggregate"] = aggregates_json(aggregates);
  auto test_rows = ordered_json::array();
  for (const PairedTest& t : tests) {
    test_rows.push_back(wilcoxon_json(t));
  }
  bundle["tests"] = std::move(test_rows);
  detail::write_text_file(files.bundle, bundle.dump(2) + "\n");

  const std::size_t n_seeds = batch.instances.size();
  for (std::size_t i = 0; i < batch.outcomes.size(); ++i) {
    const PipelineOutcome& o = batch.outcomes[i];
    if (!o.record.ok()) {
      continue;
    }
    const auto path =
      dir / "plots" / (slugify(o.record.method) + "_seed" + std::to_string(o.record.seed) + ".json");
    detail::write_text_file(path, format_plot_bundle(batch.instances[i % n_seeds], o));
    files.plot_bundles.push_back(path);
  }
  const auto agg_path = dir / "plots" / "aggregate.json";
  detail::write_text_file(agg_path, format_aggregate_bundle(aggregates));
  files.plot_bundles.push_back(agg_path);
  return files;
}

} // namespace sidekick
