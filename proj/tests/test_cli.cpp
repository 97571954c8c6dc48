#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"
#include "gbht/anomaly.hpp"
#include "gbht/dataset.hpp"
#include "gbht/metrics.hpp"
#include "gbht/model_io.hpp"
#include "testutil.hpp"

using gbht::Dataset;
using gbht::GbhtModel;
using gbht::Matrix;
using gbht::Vector;
using testutil::TempFile;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gbht");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (std::string& a : args) argv.push_back(a.data());

  std::ostringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  int code;
  try {
    code = gbht::cli::run(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

// The rest of the first stdout line starting with `prefix`, or "".
std::string stdout_after(const std::string& out, const std::string& prefix) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return {};
}

double stdout_number(const std::string& out, const std::string& prefix) {
  const std::string rest = stdout_after(out, prefix);
  REQUIRE(!rest.empty());
  return std::strtod(rest.c_str(), nullptr);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors map to the documented exit codes") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"fit", "--data", "x.csv"}).code == 2);  // missing required
  CHECK(run_cli({"synth", "--type", "V", "--d", "2", "--n", "10",
                 "--out", "/tmp/x.csv"}).code == 2);
  CHECK(run_cli({"eval", "--model", "m.json", "--test", "t.csv",
                 "--report", "r.json", "--truth-type", "I"}).code == 2);
}

TEST_CASE("missing input files are runtime errors, not usage errors") {
  TempFile model("cli_missing_model");
  CliResult r = run_cli({"fit", "--data", "/nonexistent/data.csv", "--T", "2",
                         "--smin", "-1", "--smax", "0",
                         "--model", model.path()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("synth writes a deterministic sample table") {
  TempFile a("cli_synth_a"), b("cli_synth_b"), c("cli_synth_c");
  CliResult ra = run_cli({"synth", "--type", "I", "--d", "2", "--n", "200",
                          "--out", a.path(), "--seed", "7"});
  CliResult rb = run_cli({"synth", "--type", "I", "--d", "2", "--n", "200",
                          "--out", b.path(), "--seed", "7"});
  CliResult rc = run_cli({"synth", "--type", "I", "--d", "2", "--n", "200",
                          "--out", c.path(), "--seed", "8"});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  REQUIRE(rc.code == 0);
  CHECK(ra.out.find("wrote ") != std::string::npos);

  const std::string ta = slurp(a.path());
  CHECK(ta == slurp(b.path()));
  CHECK(ta != slurp(c.path()));
  CHECK(ta.rfind("x1,x2\n", 0) == 0);
  CHECK(std::count(ta.begin(), ta.end(), '\n') == 201);

  Dataset ds = gbht::load_csv(a.path());
  CHECK(ds.matrix.rows() == 200);
  CHECK(ds.matrix.cols() == 2);
}

TEST_CASE("fit reports the final training loss and saves a loadable model") {
  TempFile data("cli_fit_data"), model("cli_fit_model");
  REQUIRE(run_cli({"synth", "--type", "II", "--d", "2", "--n", "300",
                   "--out", data.path(), "--seed", "3"}).code == 0);
  CliResult r = run_cli({"fit", "--data", data.path(), "--T", "3",
                         "--smin", "-1", "--smax", "0",
                         "--model", model.path(), "--seed", "11"});
  REQUIRE(r.code == 0);

  GbhtModel m = gbht::load_model(model.path());
  CHECK(m.components.size() == 3);
  CHECK(m.config.seed == 11);
  const double printed = stdout_number(r.out, "train_nll ");
  CHECK(std::abs(printed - m.train_nll_trace.back()) <=
        1e-4 * std::abs(m.train_nll_trace.back()));
}

TEST_CASE("eval writes a report with anll plus optional ground-truth mae") {
  TempFile train("cli_eval_train"), test("cli_eval_test");
  TempFile model("cli_eval_model"), report("cli_eval_report");
  REQUIRE(run_cli({"synth", "--type", "II", "--d", "2", "--n", "300",
                   "--out", train.path(), "--seed", "3"}).code == 0);
  REQUIRE(run_cli({"synth", "--type", "II", "--d", "2", "--n", "150",
                   "--out", test.path(), "--seed", "4"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", train.path(), "--T", "3",
                   "--smin", "-1", "--smax", "0",
                   "--model", model.path(), "--seed", "11"}).code == 0);

  CliResult r = run_cli({"eval", "--model", model.path(), "--test", test.path(),
                         "--report", report.path()});
  REQUIRE(r.code == 0);
  nlohmann::json doc = read_json(report.path());
  CHECK(doc.at("format") == 1);
  CHECK(doc.at("mae").is_null());
  CHECK(doc.at("auc").is_null());
  CHECK(doc.at("n_test") == 150);
  CHECK(doc.at("config").is_object());
  CHECK(doc.at("config").at("iterations") == 3);
  REQUIRE(doc.at("anll").is_number());

  // The reported anll must match an independent recompute through the
  // library on the same inputs.
  GbhtModel m = gbht::load_model(model.path());
  Dataset ds = gbht::load_csv(test.path());
  std::vector<double> logs(static_cast<std::size_t>(ds.matrix.rows()));
  for (int i = 0; i < ds.matrix.rows(); ++i) {
    Vector x = ds.matrix.row(i).transpose();
    logs[static_cast<std::size_t>(i)] = m.log_density_at(x);
  }
  const double expect = gbht::anll(logs);
  CHECK(doc.at("anll").get<double>() == doctest::Approx(expect).epsilon(1e-13));
  CHECK(std::abs(stdout_number(r.out, "anll ") - expect) <=
        1e-4 * std::abs(expect));

  CliResult rt = run_cli({"eval", "--model", model.path(), "--test", test.path(),
                          "--report", report.path(),
                          "--truth-type", "II", "--truth-d", "2"});
  REQUIRE(rt.code == 0);
  nlohmann::json doc2 = read_json(report.path());
  REQUIRE(doc2.at("mae").is_number());
  CHECK(doc2.at("mae").get<double>() >= 0.0);
  CHECK(stdout_number(rt.out, "mae ") >= 0.0);
}

TEST_CASE("cv writes the scanned table and picks the first minimizer") {
  TempFile data("cli_cv_data"), report("cli_cv_report");
  REQUIRE(run_cli({"synth", "--type", "I", "--d", "2", "--n", "150",
                   "--out", data.path(), "--seed", "21"}).code == 0);
  CliResult r = run_cli({"cv", "--data", data.path(), "--T", "2",
                         "--smin-grid", "-1:0.5:0", "--gap-grid", "0.5:0.5:1",
                         "--folds", "3", "--report", report.path(),
                         "--seed", "5"});
  REQUIRE(r.code == 0);

  nlohmann::json doc = read_json(report.path());
  CHECK(doc.at("format") == 1);
  CHECK(doc.at("folds") == 3);
  REQUIRE(doc.at("table").is_array());
  REQUIRE(doc.at("table").size() == 6);  // 3 s_min values x 2 gaps

  std::size_t best = 0;
  for (std::size_t i = 0; i < doc["table"].size(); ++i) {
    const nlohmann::json& e = doc["table"][i];
    REQUIRE(e.at("fold_anll").size() == 3);
    double sum = 0.0;
    for (const auto& v : e.at("fold_anll")) sum += v.get<double>();
    CHECK(e.at("mean_anll").get<double>() ==
          doctest::Approx(sum / 3.0).epsilon(1e-12));
    CHECK(e.at("s_max").get<double>() > e.at("s_min").get<double>());
    if (e.at("mean_anll").get<double>() <
        doc["table"][best].at("mean_anll").get<double>())
      best = i;
  }
  const nlohmann::json& chosen = doc.at("chosen");
  CHECK(chosen.at("index").get<std::size_t>() == best);
  CHECK(chosen.at("s_min") == doc["table"][best].at("s_min"));
  CHECK(chosen.at("s_max") == doc["table"][best].at("s_max"));
  CHECK(stdout_number(r.out, "cv_anll ") ==
        doctest::Approx(chosen.at("mean_anll").get<double>()).epsilon(1e-4));
  CHECK(!stdout_after(r.out, "chosen_smin ").empty());
  CHECK(!stdout_after(r.out, "chosen_smax ").empty());
}

TEST_CASE("score exports scores and flags, with auc when labels are given") {
  TempFile train("cli_score_train"), model("cli_score_model");
  TempFile input("cli_score_input"), scores("cli_score_out");
  REQUIRE(run_cli({"synth", "--type", "I", "--d", "2", "--n", "200",
                   "--out", train.path(), "--seed", "31"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", train.path(), "--T", "5",
                   "--smin", "-1", "--smax", "0",
                   "--model", model.path(), "--seed", "31"}).code == 0);

  // 20 inlier rows straight from the training sample plus two far points.
  Dataset train_ds = gbht::load_csv(train.path());
  {
    std::ofstream out(input.path(), std::ios::binary);
    out << "x1,x2,lab\n";
    char buf[96];
    for (int i = 0; i < 20; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,0", train_ds.matrix(i, 0),
                    train_ds.matrix(i, 1));
      out << buf << '\n';
    }
    out << "50,50,1\n-50,-50,1\n";
  }

  CliResult r = run_cli({"score", "--model", model.path(),
                         "--data", input.path(), "--contamination", "0.1",
                         "--labels", "lab", "--out", scores.path()});
  REQUIRE(r.code == 0);
  CHECK(stdout_number(r.out, "auc ") == 1.0);
  CHECK(r.out.find("flagged ") != std::string::npos);
  CHECK(r.out.find(" of 22") != std::string::npos);

  const std::string text = slurp(scores.path());
  CHECK(text.rfind("score,flag\n", 0) == 0);
  Dataset out_ds = gbht::load_csv(scores.path());
  REQUIRE(out_ds.matrix.rows() == 22);
  REQUIRE(out_ds.matrix.cols() == 2);
  int flagged = 0;
  for (int i = 0; i < 22; ++i) {
    const double flag = out_ds.matrix(i, 1);
    REQUIRE((flag == 0.0 || flag == 1.0));
    flagged += flag == 1.0 ? 1 : 0;
  }
  // The two far points have zero density, the top anomaly scores.
  CHECK(out_ds.matrix(20, 1) == 1.0);
  CHECK(out_ds.matrix(21, 1) == 1.0);
  CHECK(flagged >= 2);

  // Scores are the negated densities of the loaded model, verbatim.
  GbhtModel m = gbht::load_model(model.path());
  Dataset in_ds = gbht::load_csv(input.path(), std::string("lab"));
  for (int i = 0; i < 22; ++i) {
    Vector x = in_ds.matrix.row(i).transpose();
    CHECK(out_ds.matrix(i, 0) == -m.density_at(x));
  }

  CHECK(run_cli({"score", "--model", model.path(), "--data", input.path(),
                 "--rho", "0.1", "--contamination", "0.1",
                 "--out", scores.path()}).code == 2);

  CliResult rz = run_cli({"score", "--model", model.path(),
                          "--data", input.path(), "--rho", "0",
                          "--labels", "lab", "--out", scores.path()});
  REQUIRE(rz.code == 0);
  CHECK(rz.out.find("flagged 2 of 22") != std::string::npos);
}

TEST_CASE("curve samples the model density verbatim") {
  TempFile data("cli_curve_data"), model("cli_curve_model"), curve("cli_curve_out");
  REQUIRE(run_cli({"synth", "--type", "IV", "--d", "1", "--n", "400",
                   "--out", data.path(), "--seed", "17"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", data.path(), "--T", "4",
                   "--smin", "-1", "--smax", "0",
                   "--model", model.path(), "--seed", "17"}).code == 0);

  CliResult r = run_cli({"curve", "--model", model.path(), "--lo", "-1",
                         "--hi", "6", "--res", "100", "--out", curve.path()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("101 points") != std::string::npos);

  const std::string text = slurp(curve.path());
  CHECK(text.rfind("x,density\n", 0) == 0);
  Dataset pts = gbht::load_csv(curve.path());
  REQUIRE(pts.matrix.rows() == 101);
  CHECK(pts.matrix(0, 0) == -1.0);
  CHECK(pts.matrix(100, 0) == 6.0);

  GbhtModel m = gbht::load_model(model.path());
  for (int i = 0; i < 101; ++i) {
    REQUIRE(pts.matrix(i, 1) >= 0.0);
    Vector x(1);
    x << pts.matrix(i, 0);
    CHECK(pts.matrix(i, 1) == m.density_at(x));  // %.17g round-trips exactly
  }
}

TEST_CASE("a high resolution curve integrates to one") {
  TempFile data("cli_curveint_data"), model("cli_curveint_model");
  TempFile curve("cli_curveint_out");
  REQUIRE(run_cli({"synth", "--type", "IV", "--d", "1", "--n", "400",
                   "--out", data.path(), "--seed", "17"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", data.path(), "--T", "4",
                   "--smin", "-1", "--smax", "0",
                   "--model", model.path(), "--seed", "17"}).code == 0);
  REQUIRE(run_cli({"curve", "--model", model.path(), "--lo", "-3", "--hi", "8",
                   "--res", "20000", "--out", curve.path()}).code == 0);

  Dataset pts = gbht::load_csv(curve.path());
  REQUIRE(pts.matrix.rows() == 20001);
  double integral = 0.0;
  for (int i = 0; i + 1 < pts.matrix.rows(); ++i)
    integral += 0.5 * (pts.matrix(i, 1) + pts.matrix(i + 1, 1)) *
                (pts.matrix(i + 1, 0) - pts.matrix(i, 0));
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("curve rejects higher-dimensional models and empty ranges") {
  TempFile data("cli_curve2d_data"), model("cli_curve2d_model");
  TempFile curve("cli_curve2d_out");
  REQUIRE(run_cli({"synth", "--type", "I", "--d", "2", "--n", "150",
                   "--out", data.path(), "--seed", "5"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", data.path(), "--T", "2",
                   "--smin", "-1", "--smax", "0",
                   "--model", model.path(), "--seed", "5"}).code == 0);

  CliResult r2d = run_cli({"curve", "--model", model.path(), "--lo", "0",
                           "--hi", "1", "--res", "10", "--out", curve.path()});
  CHECK(r2d.code == 1);
  CHECK(r2d.err.find("error") != std::string::npos);

  TempFile data1("cli_curve1d_data"), model1("cli_curve1d_model");
  REQUIRE(run_cli({"synth", "--type", "IV", "--d", "1", "--n", "100",
                   "--out", data1.path(), "--seed", "6"}).code == 0);
  REQUIRE(run_cli({"fit", "--data", data1.path(), "--T", "2",
                   "--smin", "-1", "--smax", "0",
                   "--model", model1.path(), "--seed", "6"}).code == 0);
  CHECK(run_cli({"curve", "--model", model1.path(), "--lo", "2", "--hi", "2",
                 "--res", "10", "--out", curve.path()}).code == 1);
}

}  // TEST_SUITE
