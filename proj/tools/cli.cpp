// dfp: command-line frontend for the distribution-free predictive inference
// library. Subcommands: predict, outliers, monitor, calibrate-probs, test-ci,
// verify, report.
//
// CSV format: comma-separated with a header row; feature columns x0..x{d-1},
// response y, optional w (weight / likelihood ratio / confounder) and group.
// Event protocol (monitor): one JSON object per line {"x":[...], "y": num,
// "t": int optional}; the output mirrors the input with computed fields.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfp/aggregate.hpp"
#include "dfp/calibration.hpp"
#include "dfp/conditional.hpp"
#include "dfp/conformal.hpp"
#include "dfp/crossval.hpp"
#include "dfp/harness.hpp"
#include "dfp/independence.hpp"
#include "dfp/online.hpp"
#include "dfp/predictor.hpp"
#include "dfp/risk.hpp"
#include "dfp/score.hpp"
#include "dfp/weighted.hpp"

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- CSV input

struct Table {
  dfp::Dataset data;
  std::vector<double> w;  // parallel to rows; empty when no w column
  bool has_w = false;
  bool has_y = false;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw CLI::ValidationError(path + ": empty file (header row required)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  int y_col = -1, w_col = -1, group_col = -1;
  std::vector<int> x_cols;  // column index per feature position
  std::map<int, int> x_by_pos;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h == "y")
      y_col = static_cast<int>(c);
    else if (h == "w")
      w_col = static_cast<int>(c);
    else if (h == "group")
      group_col = static_cast<int>(c);
    else if (h.size() >= 2 && h[0] == 'x')
      x_by_pos[std::stoi(h.substr(1))] = static_cast<int>(c);
    else
      throw CLI::ValidationError(path + ": unknown column '" + h + "'");
  }
  for (std::size_t k = 0; k < x_by_pos.size(); ++k) {
    auto it = x_by_pos.find(static_cast<int>(k));
    if (it == x_by_pos.end())
      throw CLI::ValidationError(path + ": feature columns must be x0..x" +
                                 std::to_string(x_by_pos.size() - 1));
    x_cols.push_back(it->second);
  }
  Table t;
  t.has_w = w_col >= 0;
  t.has_y = y_col >= 0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw CLI::ValidationError(path + ":" + std::to_string(row) +
                                 ": expected " + std::to_string(header.size()) +
                                 " columns, got " + std::to_string(cells.size()));
    auto num = [&](int c) {
      try {
        std::size_t used = 0;
        double v = std::stod(cells[static_cast<std::size_t>(c)], &used);
        if (used != cells[static_cast<std::size_t>(c)].size())
          throw std::invalid_argument("trailing characters");
        return v;
      } catch (const std::exception&) {
        throw CLI::ValidationError(path + ":" + std::to_string(row) +
                                   ": column '" + header[static_cast<std::size_t>(c)] +
                                   "' is not a number: '" +
                                   cells[static_cast<std::size_t>(c)] + "'");
      }
    };
    std::vector<double> x;
    for (int c : x_cols) x.push_back(num(c));
    double y = y_col >= 0 ? num(y_col) : 0.0;
    int g = group_col >= 0 ? static_cast<int>(num(group_col)) : -1;
    t.data.add(x, y, g);
    if (w_col >= 0) t.w.push_back(num(w_col));
  }
  if (t.data.n() == 0)
    throw CLI::ValidationError(path + ": no data rows");
  return t;
}

// ---------------------------------------------------------- set / json glue

json num_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

json set_to_json(const dfp::PredictionSet& s) {
  using Kind = dfp::PredictionSet::Kind;
  switch (s.kind()) {
    case Kind::kAll:
      return json{{"type", "all"}};
    case Kind::kEmpty:
      return json{{"type", "empty"}};
    case Kind::kLabels: {
      json items = json::array();
      for (int l : s.label_items()) items.push_back(l);
      return json{{"type", "labels"}, {"items", items}};
    }
    case Kind::kIntervals: {
      json parts = json::array();
      for (const auto& p : s.parts())
        parts.push_back(json::array({num_or_inf(p.first), num_or_inf(p.second)}));
      return json{{"type", "intervals"}, {"parts", parts}};
    }
  }
  return json{{"type", "empty"}};
}

// -------------------------------------------------- config file round-trip

// Binds subcommand options to a JSON config file: file values fill options
// not given on the command line; unknown keys are rejected; the effective
// configuration can be emitted and replayed to reproduce a run exactly.
class ConfigBinder {
 public:
  explicit ConfigBinder(CLI::App* app) : app_(app) {
    app->add_option("--config", config_path_,
                    "JSON config file; command-line flags override it");
    app->add_option("--emit-config", emit_path_,
                    "write the effective configuration as JSON");
  }

  template <typename T>
  CLI::Option* bind(const std::string& name, T& var, const std::string& desc) {
    CLI::Option* opt = app_->add_option("--" + name, var, desc);
    known_.insert(name);
    appliers_[name] = [&var](const json& v) { var = v.get<T>(); };
    collectors_.push_back([&var, name](json& out) { out[name] = var; });
    options_[name] = opt;
    return opt;
  }

  CLI::Option* bind_flag(const std::string& name, bool& var,
                         const std::string& desc) {
    CLI::Option* opt = app_->add_flag("--" + name, var, desc);
    known_.insert(name);
    appliers_[name] = [&var](const json& v) { var = v.get<bool>(); };
    collectors_.push_back([&var, name](json& out) { out[name] = var; });
    options_[name] = opt;
    return opt;
  }

  // call after CLI11 parsing
  void finalize() {
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw CLI::ValidationError("cannot open config: " + config_path_);
      json cfg = json::parse(in);
      if (!cfg.is_object())
        throw CLI::ValidationError("config must be a JSON object");
      for (const auto& [key, value] : cfg.items()) {
        auto it = appliers_.find(key);
        if (it == appliers_.end())
          throw CLI::ValidationError("config: unknown key '" + key + "'");
        if (options_[key]->count() == 0) it->second(value);
      }
    }
    if (!emit_path_.empty()) {
      json out = json::object();
      for (const auto& c : collectors_) c(out);
      std::ofstream os(emit_path_);
      os << out.dump(2) << "\n";
    }
  }

 private:
  CLI::App* app_;
  std::string config_path_, emit_path_;
  std::set<std::string> known_;
  std::map<std::string, std::function<void(const json&)>> appliers_;
  std::map<std::string, CLI::Option*> options_;
  std::vector<std::function<void(json&)>> collectors_;
};

dfp::RegressionFitter ls_fitter() {
  return [](const dfp::Dataset& d) {
    dfp::PredictorSpec spec;
    spec.kind = dfp::PredictorKind::kLeastSquares;
    dfp::Predictor f = dfp::Predictor::fit(spec, d);
    return [f](const std::vector<double>& x) { return f.predict(x); };
  };
}

// ------------------------------------------------------------- subcommands

struct PredictArgs {
  std::string method = "split";
  std::string train, cal, test;
  double alpha = 0.1;
  int folds = 5;
  uint64_t seed = 0;
  bool seed_given = false;
  double grid_lo = -10.0, grid_hi = 10.0;
  std::size_t grid_points = 2001;
};

int run_predict(const PredictArgs& a) {
  Table train = read_csv(a.train);
  Table test = read_csv(a.test);
  const dfp::YDomain dom =
      dfp::YDomain::from_grid(a.grid_lo, a.grid_hi, a.grid_points);

  auto emit = [](const json& j) { std::cout << j.dump() << "\n"; };

  if (a.method == "split" || a.method == "weighted-split") {
    if (a.cal.empty())
      throw CLI::ValidationError("--cal is required for the split methods");
    Table cal = read_csv(a.cal);
    dfp::PredictorSpec spec;
    spec.kind = dfp::PredictorKind::kLeastSquares;
    dfp::Predictor f = dfp::Predictor::fit(spec, train.data);
    std::vector<double> scores;
    for (std::size_t i = 0; i < cal.data.n(); ++i)
      scores.push_back(std::abs(cal.data.y[i] - f.predict(cal.data.x[i])));
    dfp::FiniteSample cal_scores(scores);
    for (std::size_t i = 0; i < test.data.n(); ++i) {
      double pred = f.predict(test.data.x[i]);
      double q;
      if (a.method == "split") {
        q = dfp::split_threshold(cal_scores, a.alpha);
      } else {
        if (!cal.has_w || !test.has_w)
          throw CLI::ValidationError(
              "weighted-split: calibration and test CSVs need a w column "
              "with the likelihood-ratio values");
        std::vector<double> vals = scores, ratios = cal.w;
        vals.push_back(std::numeric_limits<double>::infinity());
        ratios.push_back(test.w[i]);
        double total = 0.0;
        for (double v : ratios) total += v;
        if (total <= 0.0)
          throw CLI::ValidationError("weighted-split: all weights are zero");
        for (double& v : ratios) v /= total;
        q = dfp::WeightedEmpirical(vals, ratios).quantile(1.0 - a.alpha);
      }
      dfp::PredictionSet set =
          std::isinf(q) ? dfp::PredictionSet::all()
                        : dfp::PredictionSet::intervals({{pred - q, pred + q}});
      json rec = {{"row", i},
                  {"prediction", pred},
                  {"threshold", num_or_inf(q)},
                  {"set", set_to_json(set)}};
      if (test.has_y) {
        std::vector<double> with_test = scores;
        with_test.push_back(std::abs(test.data.y[i] - pred));
        rec["pvalue"] = dfp::conformal_pvalue(with_test);
      }
      emit(rec);
    }
    return 0;
  }

  if (a.method == "full-ls") {
    for (std::size_t i = 0; i < test.data.n(); ++i) {
      dfp::PredictionSet set =
          dfp::full_set_least_squares(train.data, test.data.x[i], a.alpha);
      emit(json{{"row", i}, {"set", set_to_json(set)}});
    }
    return 0;
  }

  if (a.method == "jackknife-plus") {
    auto fit = ls_fitter();
    for (std::size_t i = 0; i < test.data.n(); ++i) {
      auto iv = dfp::jackknife_interval(fit, train.data, test.data.x[i],
                                        a.alpha, dfp::JackknifeVariant::kPlus);
      emit(json{{"row", i},
                {"set", set_to_json(dfp::PredictionSet::intervals(
                            {{iv.first, iv.second}}))}});
    }
    return 0;
  }

  if (a.method == "cv-plus" || a.method == "cross-conformal") {
    if (!a.seed_given)
      throw CLI::ValidationError(
          "--seed is required for fold-based methods (stochastic fold plan)");
    dfp::FoldPlan plan = dfp::FoldPlan::make(train.data.n(), a.folds, a.seed);
    if (a.method == "cv-plus") {
      auto fit = ls_fitter();
      for (std::size_t i = 0; i < test.data.n(); ++i) {
        auto iv =
            dfp::cv_plus_interval(fit, train.data, test.data.x[i], a.alpha, plan);
        emit(json{{"row", i},
                  {"set", set_to_json(dfp::PredictionSet::intervals(
                              {{iv.first, iv.second}}))}});
      }
    } else {
      dfp::PredictorSpec spec;
      spec.kind = dfp::PredictorKind::kLeastSquares;
      dfp::ScoreFn s = dfp::ScoreFn::from_recipe(dfp::residual_refit(spec));
      for (std::size_t i = 0; i < test.data.n(); ++i) {
        dfp::PredictionSet set = dfp::cross_conformal_set(
            s, train.data, test.data.x[i], a.alpha, plan, dom);
        emit(json{{"row", i}, {"set", set_to_json(set)}});
      }
    }
    return 0;
  }

  throw CLI::ValidationError("unknown method: " + a.method);
}

struct OutlierArgs {
  std::string cal, test;
  double q = 0.1;
};

int run_outliers(const OutlierArgs& a) {
  Table cal = read_csv(a.cal);
  Table test = read_csv(a.test);
  // the y column carries the (precomputed) nonconformity scores
  dfp::FiniteSample cal_scores(cal.data.y);
  auto p = dfp::outlier_pvalues(cal_scores, test.data.y);
  auto rej = dfp::bh_procedure(p, a.q);
  json out = {{"pvalues", p},
              {"rejected", rej.indices},
              {"threshold", rej.threshold},
              {"q", a.q},
              {"num_calibration", cal.data.n()}};
  std::cout << out.dump() << "\n";
  return 0;
}

struct MonitorArgs {
  std::string events;
  double alpha = 0.05;
  double lambda = 0.5;
  double eta = 0.0;  // 0: tracker disabled
  double B = 1.0;
  double q1 = 0.0;
  std::string snapshot_in, snapshot_out;
};

int run_monitor(const MonitorArgs& a) {
  // events carry precomputed nonconformity scores in "y"
  dfp::StreamState stream(dfp::ScoreFn::from_pretrained(
      [](const std::vector<double>&, double y) { return y; }));
  dfp::Martingale mart(dfp::simple_betting(a.lambda), a.alpha);
  std::optional<dfp::QuantileTracker> tracker;
  if (a.eta > 0.0)
    tracker.emplace(a.alpha, a.B, dfp::constant_eta(a.eta), a.q1);

  std::vector<double> replayed;
  long long last_t = -1;
  if (!a.snapshot_in.empty()) {
    std::ifstream in(a.snapshot_in);
    if (!in) throw CLI::ValidationError("cannot open snapshot: " + a.snapshot_in);
    json snap = json::parse(in);
    for (double y : snap.at("scores").get<std::vector<double>>()) {
      double p = stream.step({}, y);
      mart.update(p);
      if (tracker) tracker->step(y);
      replayed.push_back(y);
      ++last_t;
    }
  }

  if (!a.events.empty()) {
    std::ifstream in(a.events);
    if (!in) throw CLI::ValidationError("cannot open events: " + a.events);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json ev;
      try {
        ev = json::parse(line);
      } catch (const std::exception& e) {
        throw CLI::ValidationError(a.events + ":" + std::to_string(lineno) +
                                   ": malformed event: " + e.what());
      }
      if (!ev.contains("y"))
        throw CLI::ValidationError(a.events + ":" + std::to_string(lineno) +
                                   ": event lacks 'y'");
      if (ev.contains("t")) {
        long long t = ev["t"].get<long long>();
        if (t <= last_t)
          throw CLI::ValidationError(a.events + ":" + std::to_string(lineno) +
                                     ": out-of-order event (t=" +
                                     std::to_string(t) + ")");
        last_t = t;
      } else {
        ++last_t;
      }
      std::vector<double> x;
      if (ev.contains("x")) x = ev["x"].get<std::vector<double>>();
      double y = ev["y"].get<double>();
      double p = stream.step(x, y);
      mart.update(p);
      json rec = ev;
      rec["t"] = last_t;
      rec["p"] = p;
      rec["log_martingale"] = num_or_inf(mart.log_wealth());
      rec["alarm"] = mart.alarm();
      if (tracker) {
        rec["q"] = tracker->q();
        rec["err"] = tracker->step(y);
      }
      replayed.push_back(y);
      std::cout << rec.dump() << "\n";
    }
  }

  if (!a.snapshot_out.empty()) {
    std::ofstream os(a.snapshot_out);
    os << json{{"scores", replayed}}.dump() << "\n";
  }
  return 0;
}

struct CalibrateArgs {
  std::string input, apply;
  std::string method = "binning";
  int bins = 10;
};

int run_calibrate(const CalibrateArgs& a) {
  Table t = read_csv(a.input);
  // x0 = raw score in [0,1], y = binary label
  if (t.data.dim() < 1)
    throw CLI::ValidationError("calibrate-probs: input needs an x0 column");
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < t.data.n(); ++i) {
    scores.push_back(t.data.x[i][0]);
    labels.push_back(static_cast<int>(t.data.y[i]));
  }
  dfp::CalibratorKind kind;
  if (a.method == "binning")
    kind = dfp::CalibratorKind::kBinning;
  else if (a.method == "isotonic")
    kind = dfp::CalibratorKind::kIsotonic;
  else if (a.method == "temperature")
    kind = dfp::CalibratorKind::kTemperature;
  else
    throw CLI::ValidationError("unknown calibration method: " + a.method);
  dfp::Calibrator c = dfp::fit_calibrator(kind, scores, labels, a.bins);
  json cj = {{"method", a.method}};
  if (kind == dfp::CalibratorKind::kBinning) {
    cj["num_bins"] = c.num_bins;
    cj["bin_value"] = c.bin_value;
  } else if (kind == dfp::CalibratorKind::kIsotonic) {
    cj["breakpoints"] = c.iso_z;
    cj["levels"] = c.iso_level;
  } else {
    cj["beta0"] = c.beta0;
    cj["beta1"] = c.beta1;
    cj["clamped"] = c.clamped;
  }
  auto ece = dfp::binned_ece_estimate(scores, labels, a.bins);
  json out = {{"calibrator", cj},
              {"binned_ece",
               {{"estimate", ece.estimate},
                {"radius", ece.radius},
                {"slack", ece.slack},
                {"bins", a.bins}}}};
  if (!a.apply.empty()) {
    Table ap = read_csv(a.apply);
    std::vector<double> calibrated;
    for (std::size_t i = 0; i < ap.data.n(); ++i)
      calibrated.push_back(c.apply(ap.data.x[i][0]));
    out["calibrated"] = calibrated;
  }
  std::cout << out.dump() << "\n";
  return 0;
}

struct TestCiArgs {
  std::string input;
  std::string stat = "abs-corr";
  std::string mode = "marginal";
  std::size_t samples = 999;
  bool exhaustive = false;
  uint64_t seed = 0;
  bool seed_given = false;
  double alpha = 0.05;
  int bins = 0;
  double lipschitz = 0.0;
};

int run_test_ci(const TestCiArgs& a) {
  Table t = read_csv(a.input);
  if (t.data.dim() < 1)
    throw CLI::ValidationError("test-ci: input needs an x0 column");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.data.n(); ++i) {
    xs.push_back(t.data.x[i][0]);
    ys.push_back(t.data.y[i]);
  }
  dfp::TestStatistic T = a.stat == "ks" ? dfp::ks_two_sample_statistic()
                                        : dfp::abs_correlation_statistic();
  if (a.stat != "ks" && a.stat != "abs-corr")
    throw CLI::ValidationError("unknown statistic: " + a.stat);
  dfp::PermutationBudget budget;
  if (a.exhaustive) {
    budget.mode = dfp::PermutationBudget::Mode::kExhaustive;
  } else {
    if (!a.seed_given)
      throw CLI::ValidationError(
          "--seed is required for sampled permutation tests");
    budget.mode = dfp::PermutationBudget::Mode::kSampled;
    budget.samples = a.samples;
    budget.seed = a.seed;
  }
  dfp::TestResult r;
  if (a.mode == "marginal") {
    r = dfp::marginal_independence_test(xs, ys, T, budget, a.alpha);
  } else {
    if (!t.has_w)
      throw CLI::ValidationError("local modes need a w column (confounder)");
    if (a.mode == "local") {
      r = dfp::local_permutation_test(xs, ys, t.w, T, budget, a.alpha);
    } else if (a.mode == "binned") {
      if (a.bins < 1)
        throw CLI::ValidationError("binned mode needs --bins >= 1");
      double lo = t.w[0], hi = t.w[0];
      for (double v : t.w) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      double width = hi > lo ? hi - lo : 1.0;
      int B = a.bins;
      auto bin_of = [lo, width, B](double v) {
        int b = static_cast<int>((v - lo) / width * B);
        return std::min(std::max(b, 0), B - 1);
      };
      r = dfp::binned_local_permutation_test(xs, ys, t.w, bin_of, T, budget,
                                             a.alpha, a.lipschitz,
                                             width / a.bins);
    } else {
      throw CLI::ValidationError("unknown mode: " + a.mode);
    }
  }
  json out = {{"pvalue", r.pvalue},
              {"reject", r.reject},
              {"inflation", r.inflation},
              {"alpha", a.alpha},
              {"mode", a.mode},
              {"stat", a.stat},
              {"n", t.data.n()}};
  std::cout << out.dump() << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite = "all";
  std::size_t trials = 0;  // 0: per-suite default
  uint64_t seed = 20240817;
  bool serial = false;
  std::string out;
};

std::size_t default_trials(const std::string& suite) {
  if (suite == "ls-full-cp") return 100;
  if (suite == "tracker-envelope") return 10;
  if (suite == "outlier-fdr" || suite == "calibration" ||
      suite == "local-perm" || suite == "regression-ci")
    return 2000;
  return 10000;
}

int run_verify(const VerifyArgs& a) {
  std::vector<std::string> suites;
  if (a.suite == "all") {
    suites = dfp::suite_names();
  } else {
    auto names = dfp::suite_names();
    bool found = false;
    for (const auto& n : names) found = found || n == a.suite;
    if (!found) throw CLI::ValidationError("unknown suite: " + a.suite);
    suites.push_back(a.suite);
  }
  json report = json::array();
  bool all_pass = true;
  for (const auto& s : suites) {
    std::size_t trials = a.trials > 0 ? a.trials : default_trials(s);
    dfp::SuiteReport r = dfp::run_suite(s, trials, a.seed, !a.serial);
    report.push_back(r.to_json());
    all_pass = all_pass && r.pass;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << s
              << "  estimate=" << r.estimate << "\n";
  }
  std::string dumped = report.dump(2);
  if (!a.out.empty()) {
    std::ofstream os(a.out);
    os << dumped << "\n";
  } else {
    std::cout << dumped << "\n";
  }
  return all_pass ? 0 : 1;
}

struct ReportArgs {
  std::string input;
};

int run_report(const ReportArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw CLI::ValidationError("cannot open report: " + a.input);
  json rep = json::parse(in);
  if (!rep.is_array()) throw CLI::ValidationError("report must be a JSON array");
  bool all_pass = true;
  std::printf("%-22s %-6s %-14s %s\n", "suite", "pass", "estimate", "band");
  for (const auto& r : rep) {
    bool pass = r.at("pass").get<bool>();
    all_pass = all_pass && pass;
    std::printf("%-22s %-6s %-14.6g %s\n",
                r.at("suite").get<std::string>().c_str(),
                pass ? "PASS" : "FAIL", r.at("estimate").get<double>(),
                r.at("band").get<std::string>().c_str());
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dfp: distribution-free predictive inference toolkit"};
  app.require_subcommand(1);

  // --- predict
  PredictArgs pa;
  CLI::App* predict = app.add_subcommand("predict", "prediction sets per test row");
  ConfigBinder pb(predict);
  pb.bind("method", pa.method,
          "split | weighted-split | full-ls | jackknife-plus | cv-plus | "
          "cross-conformal");
  pb.bind("train", pa.train, "training CSV");
  pb.bind("cal", pa.cal, "calibration CSV (split methods)");
  pb.bind("test", pa.test, "test CSV");
  pb.bind("alpha", pa.alpha, "miscoverage level");
  pb.bind("folds", pa.folds, "fold count (cv-plus / cross-conformal)");
  CLI::Option* pseed = pb.bind("seed", pa.seed, "rng seed (fold shuffles)");
  pb.bind("grid-lo", pa.grid_lo, "response grid lower bound");
  pb.bind("grid-hi", pa.grid_hi, "response grid upper bound");
  pb.bind("grid-points", pa.grid_points, "response grid resolution");

  // --- outliers
  OutlierArgs oa;
  CLI::App* outliers =
      app.add_subcommand("outliers", "conformal outlier p-values + BH");
  ConfigBinder ob(outliers);
  ob.bind("cal", oa.cal, "calibration scores CSV (y column)");
  ob.bind("test", oa.test, "test scores CSV (y column)");
  ob.bind("q", oa.q, "target false discovery rate");

  // --- monitor
  MonitorArgs ma;
  CLI::App* monitor =
      app.add_subcommand("monitor", "online p-values, martingale and tracker");
  ConfigBinder mb(monitor);
  mb.bind("events", ma.events, "JSONL event stream ({\"x\":[...],\"y\":score})");
  mb.bind("alpha", ma.alpha, "alarm level (Ville threshold 1/alpha)");
  mb.bind("lambda", ma.lambda, "simple betting parameter in [0,1]");
  mb.bind("eta", ma.eta, "tracker step size (0 disables the tracker)");
  mb.bind("B", ma.B, "tracker score bound");
  mb.bind("q1", ma.q1, "tracker start value");
  mb.bind("snapshot-in", ma.snapshot_in, "resume from snapshot");
  mb.bind("snapshot-out", ma.snapshot_out, "write snapshot after the run");

  // --- calibrate-probs
  CalibrateArgs ca;
  CLI::App* calibrate =
      app.add_subcommand("calibrate-probs", "fit a probability calibrator");
  ConfigBinder cb(calibrate);
  cb.bind("input", ca.input, "CSV with x0 = raw score, y = binary label");
  cb.bind("apply", ca.apply, "CSV of scores to transform (x0 column)");
  cb.bind("method", ca.method, "binning | isotonic | temperature");
  cb.bind("bins", ca.bins, "bin count (binning + diagnostics)");

  // --- test-ci
  TestCiArgs ta;
  CLI::App* testci = app.add_subcommand(
      "test-ci", "permutation tests of (conditional) independence");
  ConfigBinder tb(testci);
  tb.bind("input", ta.input, "CSV with x0, y and optional w (confounder)");
  tb.bind("stat", ta.stat, "abs-corr | ks");
  tb.bind("mode", ta.mode, "marginal | local | binned");
  tb.bind("samples", ta.samples, "sampled permutations");
  tb.bind_flag("exhaustive", ta.exhaustive, "enumerate all permutations (n <= 8)");
  CLI::Option* tseed = tb.bind("seed", ta.seed, "rng seed (sampled mode)");
  tb.bind("alpha", ta.alpha, "test level");
  tb.bind("bins", ta.bins, "confounder bins (binned mode)");
  tb.bind("lipschitz", ta.lipschitz, "Lipschitz constant for the inflation report");

  // --- verify
  VerifyArgs va;
  CLI::App* verify =
      app.add_subcommand("verify", "run Monte Carlo verification suites");
  ConfigBinder vb(verify);
  vb.bind("suite", va.suite, "suite id or 'all'");
  vb.bind("trials", va.trials, "trial count override (0: per-suite default)");
  vb.bind("seed", va.seed, "master seed");
  vb.bind_flag("serial", va.serial, "disable the parallel trial loop");
  vb.bind("out", va.out, "write the JSON report to a file");

  // --- report
  ReportArgs ra;
  CLI::App* report = app.add_subcommand("report", "summarize a verify report");
  ConfigBinder rb(report);
  rb.bind("input", ra.input, "JSON report from 'verify --out'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (predict->parsed()) {
      pb.finalize();
      pa.seed_given = pseed->count() > 0;
      return run_predict(pa);
    }
    if (outliers->parsed()) {
      ob.finalize();
      return run_outliers(oa);
    }
    if (monitor->parsed()) {
      mb.finalize();
      return run_monitor(ma);
    }
    if (calibrate->parsed()) {
      cb.finalize();
      return run_calibrate(ca);
    }
    if (testci->parsed()) {
      tb.finalize();
      ta.seed_given = tseed->count() > 0;
      return run_test_ci(ta);
    }
    if (verify->parsed()) {
      vb.finalize();
      return run_verify(va);
    }
    if (report->parsed()) {
      rb.finalize();
      return run_report(ra);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
