#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rppg {

struct SubjectValue {
  std::string subject;
  double hr_bpm = 0.0;
};

struct SubjectError {
  std::string subject;
  double ground_truth_bpm = 0.0;
  double estimate_bpm = 0.0;
  double abs_error_bpm = 0.0;
  double diff_bpm = 0.0;  // ground truth - estimate
};

/// Agreement statistics over diff = GT - estimate. sd_diff is the sample
/// standard deviation (n - 1); zero for a single subject.
struct BlandAltman {
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double lower_2sd = 0.0;
  double upper_2sd = 0.0;
  double lower_3sd = 0.0;
  double upper_3sd = 0.0;
};

struct EvalReport {
  std::vector<SubjectError> subjects;  // sorted by subject key
  double mae = 0.0;
  double rmse = 0.0;
  double mean_error_rate_pct = 0.0;
  BlandAltman bland_altman;
};

/// Joins estimates to ground truth by subject. Every subject must appear
/// exactly once on each side.
EvalReport evaluate(const std::vector<SubjectValue>& estimates,
                    const std::vector<SubjectValue>& ground_truth);

/// Reads `subject,hr_bpm` rows; a header line is optional.
std::vector<SubjectValue> read_subject_csv(const std::filesystem::path& path);

nlohmann::json to_json(const EvalReport& report);
void write_eval_csv(const std::filesystem::path& path, const EvalReport& report);

}  // namespace rppg
