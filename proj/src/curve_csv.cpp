#include "acute/curve_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "acute/errors.hpp"

namespace acute {

namespace {

constexpr const char* kCurveHeader = "trial,task_index,episode,cumulative_timesteps,return,success";

template <class T>
T parse_field(const std::string& s, const std::string& where, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw SchemaError(where + ": bad " + column + " value '" + s + "'");
  return v;
}

std::string stamp_value(const std::string& line, const std::string& key) {
  const std::string needle = " " + key + "=";
  const auto pos = line.find(needle);
  if (pos == std::string::npos) return "";
  const auto start = pos + needle.size();
  return line.substr(start, line.find(' ', start) - start);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<CurveRow> curve_rows(const std::vector<TrialResult>& trials) {
  std::vector<CurveRow> rows;
  for (std::size_t k = 0; k < trials.size(); ++k) {
    for (const auto& task : trials[k].hf_tasks) {
      long t = task.start_offset;
      const auto& r = task.result;
      for (std::size_t e = 0; e < r.return_history.size(); ++e) {
        t += r.length_history[e];
        rows.push_back(CurveRow{static_cast<int>(k), task.task_index, static_cast<int>(e), t,
                                r.return_history[e], r.success_history[e] != 0});
      }
    }
  }
  return rows;
}

std::string write_curve_csv(const std::vector<CurveRow>& rows, const Stamp& stamp,
                            const std::string& method) {
  std::ostringstream out;
  out << "# " << kCurveSchema << " config_hash=" << stamp.config_hash << " seed=" << stamp.seed
      << " method=" << method << '\n';
  out << kCurveHeader << '\n';
  for (const auto& r : rows)
    out << r.trial << ',' << r.task_index << ',' << r.episode << ',' << r.cumulative_timesteps
        << ',' << format_number(r.ret) << ',' << (r.success ? 1 : 0) << '\n';
  return out.str();
}

CurveFile read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  CurveFile file;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (line_no == 1) {
      if (line.rfind(std::string("# ") + kCurveSchema, 0) != 0)
        throw SchemaError(where + ": expected '# " + kCurveSchema + "' schema line");
      file.config_hash = stamp_value(line, "config_hash");
      file.method = stamp_value(line, "method");
      const std::string seed = stamp_value(line, "seed");
      if (file.config_hash.empty() || seed.empty() || file.method.empty())
        throw SchemaError(where + ": schema line lacks config_hash, seed or method");
      file.seed = parse_field<std::uint64_t>(seed, where, "seed");
      continue;
    }
    if (!header_seen) {
      if (line != kCurveHeader)
        throw SchemaError(where + ": expected header '" + kCurveHeader + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6)
      throw SchemaError(where + ": expected 6 columns, found " + std::to_string(cells.size()));
    CurveRow r;
    r.trial = parse_field<int>(cells[0], where, "trial");
    r.task_index = parse_field<int>(cells[1], where, "task_index");
    r.episode = parse_field<int>(cells[2], where, "episode");
    r.cumulative_timesteps = parse_field<long>(cells[3], where, "cumulative_timesteps");
    r.ret = parse_field<double>(cells[4], where, "return");
    const int s = parse_field<int>(cells[5], where, "success");
    if (s != 0 && s != 1) throw SchemaError(where + ": success must be 0 or 1");
    r.success = s == 1;
    if (!file.rows.empty()) {
      const CurveRow& prev = file.rows.back();
      if (r.trial == prev.trial && r.cumulative_timesteps <= prev.cumulative_timesteps)
        throw SchemaError(where + ": cumulative_timesteps must increase within a trial");
    }
    file.rows.push_back(r);
  }
  if (!header_seen) throw SchemaError(path.string() + ": missing header");
  return file;
}

std::map<int, LearningCurve> CurveFile::target_curves() const {
  std::map<int, int> target_index;
  for (const auto& r : rows) {
    auto [it, inserted] = target_index.emplace(r.trial, r.task_index);
    if (!inserted) it->second = std::max(it->second, r.task_index);
  }
  std::map<int, LearningCurve> curves;
  std::map<int, long> before_target;
  for (const auto& r : rows) {
    const int target = target_index[r.trial];
    if (r.task_index < target) {
      before_target[r.trial] = r.cumulative_timesteps;
      continue;
    }
    LearningCurve& c = curves[r.trial];
    if (c.points.empty()) c.sunk_cost_timesteps = before_target[r.trial];
    c.points.push_back(
        CurvePoint{r.cumulative_timesteps - c.sunk_cost_timesteps, r.ret, r.success});
  }
  return curves;
}

}  // namespace acute
