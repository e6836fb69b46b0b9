// Golden tests for the dfp command-line tool. Every CLI path must be a thin
// wrapper: its output equals the corresponding library call on the parsed
// inputs. Usage: cli_tests <path-to-dfp-binary> <fixtures-dir>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfp/conformal.hpp"
#include "dfp/crossval.hpp"
#include "dfp/dataset.hpp"
#include "dfp/predictor.hpp"
#include "dfp/quantile.hpp"
#include "dfp/risk.hpp"

using nlohmann::json;

namespace {

int g_failures = 0;

#define CHECK(cond)                                                        \
  do {                                                                     \
    if (!(cond)) {                                                         \
      ++g_failures;                                                        \
      std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << ": " << #cond \
                << "\n";                                                   \
    }                                                                      \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<json> json_lines(const std::string& s) {
  std::vector<json> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

dfp::Dataset read_xy_csv(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header x0,y
  dfp::Dataset d;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    d.add({std::stod(line.substr(0, comma))}, std::stod(line.substr(comma + 1)));
  }
  return d;
}

std::string fx(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_tests <dfp-binary> <fixtures-dir>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const std::string dir = argv[2];
  const std::string tmp = std::filesystem::temp_directory_path().string();

  // ---- predict split: output matches the library on the parsed inputs
  {
    std::string cmd = bin + " predict --method split --train " +
                      fx(dir, "split_train.csv") + " --cal " +
                      fx(dir, "split_cal.csv") + " --test " +
                      fx(dir, "split_test.csv") + " --alpha 0.2";
    RunResult r = run(cmd);
    CHECK(r.exit_code == 0);
    auto lines = json_lines(r.out);
    CHECK(lines.size() == 2);
    // the zero-response training set fits the zero function, so the
    // calibration scores are exactly 0.1, 0.2, 0.3, 0.4
    dfp::FiniteSample cal({0.1, 0.2, 0.3, 0.4});
    double q = dfp::split_threshold(cal, 0.2);
    CHECK(q == 0.4);
    CHECK(lines[0]["threshold"].get<double>() == q);
    CHECK(lines[0]["prediction"].get<double>() == 0.0);
    CHECK(lines[0]["set"]["type"] == "intervals");
    CHECK(lines[0]["set"]["parts"][0][0].get<double>() == -q);
    CHECK(lines[0]["set"]["parts"][0][1].get<double>() == q);
    // p-value of test row 0 (y = 0.05): matches the library
    CHECK(lines[0]["pvalue"].get<double>() ==
          dfp::conformal_pvalue({0.1, 0.2, 0.3, 0.4, 0.05}));
  }

  // ---- alpha nesting: the 0.1 set contains the 0.5 set row by row
  {
    auto at = [&](double alpha) {
      return json_lines(run(bin + " predict --method split --train " +
                            fx(dir, "split_train.csv") + " --cal " +
                            fx(dir, "split_cal.csv") + " --test " +
                            fx(dir, "split_test.csv") + " --alpha " +
                            std::to_string(alpha))
                            .out);
    };
    // interval bounds; "all" reads as the whole line, "inf"/"-inf" as +-inf
    auto bounds = [](const json& set) -> std::pair<double, double> {
      if (set["type"] == "all")
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
      auto side = [](const json& v) {
        if (v.is_string())
          return v == "inf" ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
        return v.get<double>();
      };
      return {side(set["parts"][0][0]), side(set["parts"][0][1])};
    };
    auto wide = at(0.1), narrow = at(0.5);
    CHECK(wide.size() == narrow.size());
    for (std::size_t i = 0; i < wide.size(); ++i) {
      auto [wl, wh] = bounds(wide[i]["set"]);
      auto [nl, nh] = bounds(narrow[i]["set"]);
      CHECK(wl <= nl);
      CHECK(wh >= nh);
    }
  }

  // ---- jackknife-plus: byte-for-byte against the library call
  {
    RunResult r = run(bin + " predict --method jackknife-plus --train " +
                      fx(dir, "linear_train.csv") + " --test " +
                      fx(dir, "linear_test.csv") + " --alpha 0.1");
    CHECK(r.exit_code == 0);
    dfp::Dataset train = read_xy_csv(fx(dir, "linear_train.csv"));
    dfp::Dataset test = read_xy_csv(fx(dir, "linear_test.csv"));
    dfp::RegressionFitter fit = [](const dfp::Dataset& d) {
      dfp::PredictorSpec spec;
      spec.kind = dfp::PredictorKind::kLeastSquares;
      dfp::Predictor f = dfp::Predictor::fit(spec, d);
      return [f](const std::vector<double>& x) { return f.predict(x); };
    };
    std::string expected;
    for (std::size_t i = 0; i < test.n(); ++i) {
      auto iv = dfp::jackknife_interval(fit, train, test.x[i], 0.1,
                                        dfp::JackknifeVariant::kPlus);
      json rec = {{"row", i},
                  {"set",
                   {{"type", "intervals"},
                    {"parts", json::array({json::array({iv.first, iv.second})})}}}};
      expected += rec.dump() + "\n";
    }
    CHECK(r.out == expected);
  }

  // ---- monitor: empty stream produces no output
  {
    std::string empty = tmp + "/dfp_cli_empty.jsonl";
    std::ofstream(empty).close();
    RunResult r = run(bin + " monitor --events " + empty + " --alpha 0.05");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
  }

  // ---- monitor: snapshot + tail replay equals the full run;
  //      the alarm fires exactly when the wealth first reaches 1/alpha
  {
    std::string base = " --alpha 0.05 --lambda 0.5 --eta 0.1";
    RunResult full =
        run(bin + " monitor --events " + fx(dir, "events.jsonl") + base);
    CHECK(full.exit_code == 0);
    auto full_lines = json_lines(full.out);
    CHECK(full_lines.size() == 30);

    // split the fixture stream into a head and a tail
    std::string head = tmp + "/dfp_cli_head.jsonl";
    std::string tail = tmp + "/dfp_cli_tail.jsonl";
    {
      std::ifstream in(fx(dir, "events.jsonl"));
      std::ofstream h(head), t(tail);
      std::string line;
      int i = 0;
      while (std::getline(in, line))
        (i++ < 10 ? h : t) << line << "\n";
    }
    std::string snap = tmp + "/dfp_cli_snap.json";
    RunResult first =
        run(bin + " monitor --events " + head + base + " --snapshot-out " + snap);
    CHECK(first.exit_code == 0);
    RunResult resumed =
        run(bin + " monitor --events " + tail + base + " --snapshot-in " + snap);
    CHECK(resumed.exit_code == 0);
    std::string full_tail;
    {
      std::stringstream ss(full.out);
      std::string line;
      int i = 0;
      while (std::getline(ss, line))
        if (i++ >= 10) full_tail += line + "\n";
    }
    CHECK(resumed.out == full_tail);

    // alarm latching: alarm_t <=> some s <= t had log-wealth >= log(1/alpha)
    bool crossed = false;
    double thr = std::log(1.0 / 0.05);
    for (const auto& l : full_lines) {
      if (l["log_martingale"].get<double>() >= thr) crossed = true;
      CHECK(l["alarm"].get<bool>() == crossed);
    }
    CHECK(crossed);  // the fixture stream is drifting and must trigger
  }

  // ---- monitor: out-of-order events are rejected
  {
    std::string ooo = tmp + "/dfp_cli_ooo.jsonl";
    std::ofstream(ooo) << "{\"y\":0.1,\"t\":3}\n{\"y\":0.2,\"t\":2}\n";
    CHECK(run(bin + " monitor --events " + ooo + " --alpha 0.1").exit_code != 0);
  }

  // ---- outliers: p-values and rejections equal the library computation
  {
    RunResult r = run(bin + " outliers --cal " + fx(dir, "outlier_cal.csv") +
                      " --test " + fx(dir, "outlier_test.csv") + " --q 0.2");
    CHECK(r.exit_code == 0);
    json out = json::parse(r.out);
    dfp::Dataset cal;
    {
      std::ifstream in(fx(dir, "outlier_cal.csv"));
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line))
        if (!line.empty()) cal.add({}, std::stod(line));
    }
    dfp::FiniteSample cal_scores(cal.y);
    std::vector<double> test_scores = {0.99, 0.02, 0.97, 0.50};
    auto p = dfp::outlier_pvalues(cal_scores, test_scores);
    auto rej = dfp::bh_procedure(p, 0.2);
    CHECK(out["pvalues"].get<std::vector<double>>() == p);
    CHECK(out["rejected"].get<std::vector<std::size_t>>() == rej.indices);
    CHECK(out["threshold"].get<double>() == rej.threshold);
  }

  // ---- malformed CSV: nonzero exit with a row diagnostic
  {
    RunResult r = run(bin + " predict --method full-ls --train " +
                      fx(dir, "bad.csv") + " --test " + fx(dir, "bad.csv") +
                      " --alpha 0.1");
    CHECK(r.exit_code != 0);
    CHECK(r.out.find("bad.csv:3") != std::string::npos);
  }

  // ---- config round-trip: the emitted effective config reproduces the run
  {
    std::string cfg = tmp + "/dfp_cli_cfg.json";
    std::string cmd = bin + " predict --method split --train " +
                      fx(dir, "split_train.csv") + " --cal " +
                      fx(dir, "split_cal.csv") + " --test " +
                      fx(dir, "split_test.csv") + " --alpha 0.3";
    RunResult a = run(cmd + " --emit-config " + cfg);
    RunResult b = run(bin + " predict --config " + cfg);
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
    // unknown config keys are rejected
    std::string bad_cfg = tmp + "/dfp_cli_badcfg.json";
    std::ofstream(bad_cfg) << "{\"alpha\":0.3,\"no_such_key\":1}\n";
    CHECK(run(bin + " predict --config " + bad_cfg).exit_code != 0);
  }

  // ---- test-ci: deterministic given the seed, stochastic seed is mandatory
  {
    std::string base = bin + " test-ci --input " + fx(dir, "ci.csv") +
                       " --mode local --stat abs-corr --samples 400 --alpha 0.1";
    CHECK(run(base).exit_code != 0);  // no --seed
    RunResult a = run(base + " --seed 3");
    RunResult b = run(base + " --seed 3");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    json out = json::parse(a.out);
    CHECK(out["pvalue"].get<double>() > 0.0);
    CHECK(out["pvalue"].get<double>() <= 1.0);
  }

  // ---- verify: single-suite selection honored; the seed changes the report
  //      values but not the pass verdict; unknown suites are an error
  {
    std::string base = bin + " verify --suite smoothed-uniform --trials 2000";
    std::string rep1 = tmp + "/dfp_cli_rep1.json";
    std::string rep2 = tmp + "/dfp_cli_rep2.json";
    RunResult a = run(base + " --seed 1 --out " + rep1);
    RunResult b = run(base + " --seed 2 --out " + rep2);
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    json ra = json::parse(std::ifstream(rep1));
    json rb = json::parse(std::ifstream(rep2));
    CHECK(ra.size() == 1);
    CHECK(ra[0]["suite"] == "smoothed-uniform");
    CHECK(ra[0]["pass"].get<bool>());
    CHECK(rb[0]["pass"].get<bool>());
    CHECK(ra[0]["estimate"].get<double>() != rb[0]["estimate"].get<double>());
    CHECK(run(bin + " verify --suite no-such-suite").exit_code != 0);

    // report renders the verify output and propagates the verdict
    RunResult rep = run(bin + " report --input " + rep1);
    CHECK(rep.exit_code == 0);
    CHECK(rep.out.find("smoothed-uniform") != std::string::npos);
    CHECK(rep.out.find("PASS") != std::string::npos);
  }

  if (g_failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << g_failures << " failures\n";
  return 1;
}
