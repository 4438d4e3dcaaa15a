#include "rppg/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rppg/error.hpp"

namespace rppg {

namespace {

std::map<std::string, double> index_by_subject(const std::vector<SubjectValue>& rows,
                                               const char* side) {
  std::map<std::string, double> out;
  for (const auto& r : rows) {
    if (!out.emplace(r.subject, r.hr_bpm).second) {
      throw Error(ErrorKind::Join,
                  std::string("duplicate subject '") + r.subject + "' in " + side);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

EvalReport evaluate(const std::vector<SubjectValue>& estimates,
                    const std::vector<SubjectValue>& ground_truth) {
  const auto est = index_by_subject(estimates, "estimates");
  const auto gt = index_by_subject(ground_truth, "ground truth");
  for (const auto& [s, _] : est) {
    if (!gt.contains(s)) throw Error(ErrorKind::Join, "no ground truth for subject '" + s + "'");
  }
  for (const auto& [s, _] : gt) {
    if (!est.contains(s)) throw Error(ErrorKind::Join, "no estimate for subject '" + s + "'");
  }
  if (gt.empty()) throw Error(ErrorKind::Join, "no subjects to evaluate");

  EvalReport rep;
  double sum_ae = 0.0, sum_sq = 0.0, sum_rate = 0.0, sum_diff = 0.0;
  for (const auto& [s, g] : gt) {
    const double e = est.at(s);
    if (!(g > 0.0)) throw Error(ErrorKind::Join, "ground truth for '" + s + "' must be > 0");
    SubjectError row{s, g, e, std::abs(e - g), g - e};
    sum_ae += row.abs_error_bpm;
    sum_sq += row.abs_error_bpm * row.abs_error_bpm;
    sum_rate += row.abs_error_bpm / g;
    sum_diff += row.diff_bpm;
    rep.subjects.push_back(std::move(row));
  }
  const double n = static_cast<double>(rep.subjects.size());
  rep.mae = sum_ae / n;
  rep.rmse = std::sqrt(sum_sq / n);
  rep.mean_error_rate_pct = 100.0 * sum_rate / n;

  auto& ba = rep.bland_altman;
  ba.mean_diff = sum_diff / n;
  double ss = 0.0;
  for (const auto& row : rep.subjects) ss += (row.diff_bpm - ba.mean_diff) * (row.diff_bpm - ba.mean_diff);
  ba.sd_diff = rep.subjects.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  ba.lower_2sd = ba.mean_diff - 2.0 * ba.sd_diff;
  ba.upper_2sd = ba.mean_diff + 2.0 * ba.sd_diff;
  ba.lower_3sd = ba.mean_diff - 3.0 * ba.sd_diff;
  ba.upper_3sd = ba.mean_diff + 3.0 * ba.sd_diff;
  return rep;
}

std::vector<SubjectValue> read_subject_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<SubjectValue> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": expected 'subject,hr_bpm'");
    }
    const std::string subject = trim(line.substr(0, comma));
    const std::string value = trim(line.substr(comma + 1));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      if (line_no == 1 && rows.empty()) continue;  // header
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": bad HR value '" + value + "'");
    }
    rows.push_back({subject, v});
  }
  return rows;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json subjects = nlohmann::json::array();
  for (const auto& s : report.subjects) {
    subjects.push_back({{"subject", s.subject},
                        {"ground_truth_bpm", s.ground_truth_bpm},
                        {"estimate_bpm", s.estimate_bpm},
                        {"abs_error_bpm", s.abs_error_bpm},
                        {"diff_bpm", s.diff_bpm}});
  }
  const auto& ba = report.bland_altman;
  return {{"subjects", subjects},
          {"mae", report.mae},
          {"rmse", report.rmse},
          {"mean_error_rate_pct", report.mean_error_rate_pct},
          {"bland_altman",
           {{"mean_diff", ba.mean_diff},
            {"sd_diff", ba.sd_diff},
            {"lower_2sd", ba.lower_2sd},
            {"upper_2sd", ba.upper_2sd},
            {"lower_3sd", ba.lower_3sd},
            {"upper_3sd", ba.upper_3sd}}}};
}

void write_eval_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "subject,ground_truth_bpm,estimate_bpm,abs_error_bpm,diff_bpm\n";
  for (const auto& s : report.subjects) {
    out << s.subject << ',' << num(s.ground_truth_bpm) << ',' << num(s.estimate_bpm) << ','
        << num(s.abs_error_bpm) << ',' << num(s.diff_bpm) << '\n';
  }
}

}  // namespace rppg
