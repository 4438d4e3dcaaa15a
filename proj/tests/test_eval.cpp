#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>

#include "rppg/error.hpp"
#include "rppg/eval.hpp"
#include "tmpdir.hpp"

using namespace rppg;

namespace {

std::filesystem::path data_dir() {
  const char* d = std::getenv("RPPG_TEST_DATA");
  return d ? std::filesystem::path(d) : std::filesystem::path(RPPG_TEST_DATA_DIR);
}

// Nine-subject reference set: ground truth and forehead estimates.
const std::vector<double> kGt = {84.0, 92.0, 104.2, 93.5, 89.21, 73.10, 95.00, 89.15, 79.00};
const std::vector<double> kEst = {86.21, 91.75, 103.85, 95.66, 86.02, 75.00, 97.30, 92.33, 84.03};

std::vector<SubjectValue> rows(const std::vector<double>& v) {
  std::vector<SubjectValue> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back({(i < 4 ? "T1-" + std::to_string(i + 1) : "T2-" + std::to_string(i - 3)), v[i]});
  }
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected rppg::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("evaluate: nine-subject reference set") {
  const auto rep = evaluate(rows(kEst), rows(kGt));
  CHECK(rep.subjects.size() == 9);
  CHECK(rep.mae == doctest::Approx(2.28).epsilon(0.01 / 2.28));
  CHECK(rep.bland_altman.mean_diff == doctest::Approx(-1.44).epsilon(0.01 / 1.44));

  // direct recomputation
  double ae = 0.0, d = 0.0, sq = 0.0, rate = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    ae += std::abs(kEst[i] - kGt[i]);
    sq += (kEst[i] - kGt[i]) * (kEst[i] - kGt[i]);
    d += kGt[i] - kEst[i];
    rate += std::abs(kEst[i] - kGt[i]) / kGt[i];
  }
  CHECK(rep.mae == doctest::Approx(ae / 9.0).epsilon(1e-12));
  CHECK(rep.rmse == doctest::Approx(std::sqrt(sq / 9.0)).epsilon(1e-12));
  CHECK(rep.mean_error_rate_pct == doctest::Approx(100.0 * rate / 9.0).epsilon(1e-12));
  CHECK(rep.bland_altman.mean_diff == doctest::Approx(d / 9.0).epsilon(1e-12));
  double ss = 0.0;
  for (std::size_t i = 0; i < 9; ++i) ss += std::pow(kGt[i] - kEst[i] - d / 9.0, 2);
  CHECK(rep.bland_altman.sd_diff == doctest::Approx(std::sqrt(ss / 8.0)).epsilon(1e-12));

  for (const auto& s : rep.subjects) {
    CHECK(s.diff_bpm >= rep.bland_altman.lower_2sd);
    CHECK(s.diff_bpm <= rep.bland_altman.upper_2sd);
  }
}

TEST_CASE("evaluate: the CSV fixtures give the same report") {
  const auto est = read_subject_csv(data_dir() / "forehead_estimates.csv");
  const auto gt = read_subject_csv(data_dir() / "ground_truth.csv");
  REQUIRE(est.size() == 9);
  CHECK(est[0].subject == "T1-1");
  CHECK(est[0].hr_bpm == 86.21);
  CHECK(to_json(evaluate(est, gt)) == to_json(evaluate(rows(kEst), rows(kGt))));
}

TEST_CASE("evaluate: identity gives zeros") {
  const auto rep = evaluate(rows(kGt), rows(kGt));
  CHECK(rep.mae == 0.0);
  CHECK(rep.rmse == 0.0);
  CHECK(rep.mean_error_rate_pct == 0.0);
  CHECK(rep.bland_altman.mean_diff == 0.0);
  CHECK(rep.bland_altman.sd_diff == 0.0);
}

TEST_CASE("evaluate: join errors") {
  auto est = rows(kEst);
  auto gt = rows(kGt);
  SUBCASE("missing estimate") {
    est.pop_back();
    CHECK(kind_of([&] { evaluate(est, gt); }) == ErrorKind::Join);
  }
  SUBCASE("extra estimate") {
    est.push_back({"X", 70.0});
    CHECK(kind_of([&] { evaluate(est, gt); }) == ErrorKind::Join);
  }
  SUBCASE("duplicate subject") {
    gt.push_back(gt.front());
    est.push_back(est.front());
    CHECK(kind_of([&] { evaluate(est, gt); }) == ErrorKind::Join);
  }
  SUBCASE("empty") {
    CHECK(kind_of([&] { evaluate({}, {}); }) == ErrorKind::Join);
  }
}

TEST_CASE("evaluate properties over random inputs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> hr(45.0, 180.0), err(-15.0, 15.0);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SubjectValue> gt, est;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const double g = hr(rng);
      gt.push_back({"s" + std::to_string(i), g});
      est.push_back({"s" + std::to_string(i), g + err(rng)});
    }
    const auto a = evaluate(est, gt);
    std::shuffle(est.begin(), est.end(), rng);
    std::shuffle(gt.begin(), gt.end(), rng);
    const auto b = evaluate(est, gt);
    CHECK(to_json(a) == to_json(b));
    CHECK(a.mae <= a.rmse + 1e-12);
    const auto& ba = a.bland_altman;
    CHECK(ba.lower_2sd == ba.mean_diff - 2.0 * ba.sd_diff);
    CHECK(ba.upper_2sd == ba.mean_diff + 2.0 * ba.sd_diff);
    CHECK(ba.lower_3sd == ba.mean_diff - 3.0 * ba.sd_diff);
    CHECK(ba.upper_3sd == ba.mean_diff + 3.0 * ba.sd_diff);
    CHECK(std::is_sorted(a.subjects.begin(), a.subjects.end(),
                         [](const auto& x, const auto& y) { return x.subject < y.subject; }));
  }
}

TEST_CASE("subject CSV parsing") {
  TempDir dir;
  std::ofstream(dir / "a.csv") << "s1, 70.5\n\n# note\ns2,80\n";
  const auto r = read_subject_csv(dir / "a.csv");
  REQUIRE(r.size() == 2);
  CHECK(r[0].subject == "s1");
  CHECK(r[0].hr_bpm == 70.5);
  std::ofstream(dir / "b.csv") << "s1,70\ns2,fast\n";
  CHECK(kind_of([&] { read_subject_csv(dir / "b.csv"); }) == ErrorKind::Parse);
  std::ofstream(dir / "c.csv") << "s1 70\n";
  CHECK(kind_of([&] { read_subject_csv(dir / "c.csv"); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { read_subject_csv(dir / "missing.csv"); }) == ErrorKind::Io);
}

TEST_CASE("eval CSV output") {
  TempDir dir;
  write_eval_csv(dir / "out.csv", evaluate(rows(kEst), rows(kGt)));
  std::ifstream in(dir / "out.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "subject,ground_truth_bpm,estimate_bpm,abs_error_bpm,diff_bpm");
  CHECK(first.rfind("T1-1,84,86.21", 0) == 0);
}
