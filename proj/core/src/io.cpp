#include "coin/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "json.hpp"

namespace coin {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail_line(const std::string& what, std::size_t line_no) {
  throw std::runtime_error(what + " (line " + std::to_string(line_no) + ")");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(',');
    if (pos == std::string_view::npos) {
      out.push_back(trim(line));
      return out;
    }
    out.push_back(trim(line.substr(0, pos)));
    line.remove_prefix(pos + 1);
  }
}

double parse_double(std::string_view field, const char* name, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    fail_line(std::string("could not parse ") + name + " value '" + std::string(field) + "'",
              line_no);
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

SummaryTable read_summary_table(std::istream& in, std::optional<int> nu_override) {
  SummaryTable table;
  std::optional<int> file_nu;
  bool saw_header = false;
  std::unordered_set<std::string> seen_ids;

  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = trim(raw_line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.rfind("nu", 0) == 0) {
        auto rest = trim(body.substr(2));
        if (!rest.empty() && rest.front() == '=') {
          rest = trim(rest.substr(1));
          int nu = 0;
          const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), nu);
          if (ec != std::errc{} || ptr != rest.data() + rest.size() || nu < 1)
            fail_line("bad nu comment '" + std::string(body) + "'", line_no);
          file_nu = nu;
        }
      }
      continue;
    }
    if (!saw_header) {
      const auto fields = split_csv(line);
      if (fields.size() != 3 || fields[0] != "id" || fields[1] != "x" || fields[2] != "s2")
        fail_line("expected header 'id,x,s2', got '" + std::string(line) + "'", line_no);
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      fail_line("expected 3 fields, got " + std::to_string(fields.size()), line_no);
    std::string id(fields[0]);
    if (id.empty()) fail_line("empty id", line_no);
    if (!seen_ids.insert(id).second) fail_line("duplicate id '" + id + "'", line_no);
    const double x = parse_double(fields[1], "x", line_no);
    const double s2 = parse_double(fields[2], "s2", line_no);
    if (!std::isfinite(x) || !std::isfinite(s2))
      fail_line("non-finite value for id '" + id + "'", line_no);
    if (s2 < 0.0) fail_line("negative s2 for id '" + id + "'", line_no);
    table.ids.push_back(std::move(id));
    table.stats.push_back({x, s2});
  }
  if (!saw_header) throw std::runtime_error("summary input is empty (no header line)");
  if (table.stats.empty()) throw std::runtime_error("summary input has a header but no rows");

  if (nu_override) {
    if (*nu_override < 1) throw std::invalid_argument("nu must be >= 1");
    table.nu = *nu_override;
  } else if (file_nu) {
    table.nu = *file_nu;
  } else {
    throw std::invalid_argument(
        "degrees of freedom not given: pass --nu or add a '# nu=<int>' line");
  }

  table.zero_s2_rows = sanitize_zero_s2(table.stats);
  return table;
}

SummaryTable read_summary_table(const std::filesystem::path& path,
                                std::optional<int> nu_override) {
  auto in = open_input(path);
  return read_summary_table(in, nu_override);
}

RawMatrix read_raw_matrix(std::istream& in, std::size_t n1) {
  RawMatrix raw;
  raw.design = Design::two_group;
  raw.n1 = n1;

  std::unordered_set<std::string> seen_ids;
  std::string raw_line;
  std::size_t line_no = 0;
  std::size_t n_cols = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv(line);
    if (fields.size() < 2) fail_line("expected an id plus at least one sample column", line_no);
    if (n_cols == 0) {
      n_cols = fields.size() - 1;
    } else if (fields.size() - 1 != n_cols) {
      fail_line("ragged row: expected " + std::to_string(n_cols) + " sample columns, got " +
                    std::to_string(fields.size() - 1),
                line_no);
    }
    std::string id(fields[0]);
    if (id.empty()) fail_line("empty id", line_no);
    if (!seen_ids.insert(id).second) fail_line("duplicate id '" + id + "'", line_no);
    raw.ids.push_back(std::move(id));
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const std::string where = "column " + std::to_string(j + 1);
      const double v = parse_double(fields[j], where.c_str(), line_no);
      if (!std::isfinite(v)) fail_line("non-finite sample value in " + where, line_no);
      raw.values.push_back(v);
    }
    ++raw.m;
  }
  if (raw.m == 0) throw std::runtime_error("raw input has no data rows");
  raw.n = n_cols;
  if (n1 < 2 || n1 + 2 > raw.n)
    throw std::invalid_argument("n1 = " + std::to_string(n1) + " leaves a group with < 2 of " +
                                std::to_string(raw.n) + " columns");
  raw.validate();
  return raw;
}

RawMatrix read_raw_matrix(const std::filesystem::path& path, std::size_t n1) {
  auto in = open_input(path);
  return read_raw_matrix(in, n1);
}

namespace {

json run_line(const RunReport& r) {
  json j;
  j["record"] = "run";
  j["method"] = r.method;
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["nu"] = r.nu;
  j["m"] = r.m;
  if (r.tau) j["tau"] = *r.tau;
  if (r.u) j["u"] = *r.u;
  if (r.k_hat) j["k_hat"] = *r.k_hat;
  j["zero_s2"] = r.zero_s2;
  j["rejected_ids"] = r.rejected_ids;
  json cfg = json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

json hypothesis_line(const ReportHypothesis& h) {
  json j;
  j["record"] = "hypothesis";
  j["id"] = h.id;
  j["x"] = h.x;
  j["s2"] = h.s2;
  if (h.score) j["score"] = *h.score;
  if (h.e_value) j["e_value"] = *h.e_value;
  j["rejected"] = h.rejected;
  return j;
}

}  // namespace

void write_report(std::ostream& out, const RunReport& report) {
  out << run_line(report).dump() << '\n';
  for (const auto& h : report.hypotheses) out << hypothesis_line(h).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing report stream");
}

void write_report(const std::filesystem::path& path, const RunReport& report) {
  auto out = open_output(path);
  write_report(out, report);
}

RunReport read_report(std::istream& in) {
  RunReport r;
  std::string line;
  std::size_t line_no = 0;
  bool saw_run = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(std::string("bad report JSON: ") + e.what(), line_no);
    }
    const std::string record = j.value("record", "");
    if (record == "run") {
      if (saw_run) fail_line("second run line in report", line_no);
      saw_run = true;
      r.method = j.at("method").get<std::string>();
      r.alpha = j.at("alpha").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.nu = j.at("nu").get<int>();
      r.m = j.at("m").get<std::size_t>();
      if (j.contains("tau")) r.tau = j["tau"].get<double>();
      if (j.contains("u")) r.u = j["u"].get<double>();
      if (j.contains("k_hat")) r.k_hat = j["k_hat"].get<std::size_t>();
      r.zero_s2 = j.at("zero_s2").get<std::size_t>();
      r.rejected_ids = j.at("rejected_ids").get<std::vector<std::string>>();
      for (const auto& [k, v] : j.at("config").items())
        r.config.emplace_back(k, v.get<std::string>());
      std::sort(r.config.begin(), r.config.end());
      if (j.contains("timing_ms")) r.timing_ms = j["timing_ms"].get<double>();
    } else if (record == "hypothesis") {
      if (!saw_run) fail_line("hypothesis line before the run line", line_no);
      ReportHypothesis h;
      h.id = j.at("id").get<std::string>();
      h.x = j.at("x").get<double>();
      h.s2 = j.at("s2").get<double>();
      if (j.contains("score")) h.score = j["score"].get<double>();
      if (j.contains("e_value")) h.e_value = j["e_value"].get<double>();
      h.rejected = j.at("rejected").get<bool>();
      r.hypotheses.push_back(std::move(h));
    } else {
      fail_line("unknown record type '" + record + "'", line_no);
    }
  }
  if (!saw_run) throw std::runtime_error("report has no run line");
  return r;
}

RunReport read_report(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_report(in);
}

}  // namespace coin
