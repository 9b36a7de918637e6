#pragma once

// Experiment harness: generate or load data, select references, cluster, evaluate,
// and summarise repetitions into result tables.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/clustering.hpp"
#include "frechet/embed.hpp"
#include "frechet/error.hpp"
#include "frechet/io.hpp"
#include "frechet/kmeans.hpp"
#include "frechet/mean.hpp"
#include "frechet/metrics.hpp"
#include "frechet/refpoints.hpp"
#include "frechet/rng.hpp"
#include "frechet/synth.hpp"

namespace frechet {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Algorithm { IRC, ARC, LEC, FMC1, FMC2 };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::IRC: return "IRC";
    case Algorithm::ARC: return "ARC";
    case Algorithm::LEC: return "LEC";
    case Algorithm::FMC1: return "FMC1";
    case Algorithm::FMC2: return "FMC2";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::IRC, Algorithm::ARC, Algorithm::LEC, Algorithm::FMC1, Algorithm::FMC2})
    if (to_string(a) == s) return a;
  fail(ErrorCode::InvalidArgument, "unknown algorithm '" + s + "' (expected IRC, ARC, LEC, FMC1 or FMC2)");
}

inline bool is_fmc(Algorithm a) { return a == Algorithm::FMC1 || a == Algorithm::FMC2; }

struct GeneratorSpec {
  enum class Kind { Balls, Mirror, File };
  Kind kind = Kind::Balls;
  BallConfig balls;
  MirrorConfig mirror;
  std::string path;
};

struct RefStrategy {
  enum class Kind { Random, Principled };
  Kind kind = Kind::Random;
  int count = 2;  ///< ℓ for random selection
  PrincipledParams principled;

  std::string describe() const {
    if (kind == Kind::Random) return "random(" + std::to_string(count) + ")";
    std::ostringstream os;
    os << "principled(t_close=" << principled.t_close << ",t_far=" << principled.t_far
       << ",n_rho=" << principled.n_rho << ",eps_d=" << principled.eps_d << ")";
    return os.str();
  }
};

struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<Algorithm> algorithms{Algorithm::FMC2};
  RefStrategy refs;
  KMeansConfig kmeans;  ///< k <= 0: take k from the ground-truth labels
  std::map<Algorithm, int> restarts_override;
  MeanSolverConfig mean;
  MeanMethod dispersion_mean = MeanMethod::ICM;
  int repetitions = 1;
  std::uint64_t seed = 0;
  std::string output;

  void validate() const {
    if (repetitions < 1) fail(ErrorCode::InvalidArgument, "repetitions must be at least 1");
    if (algorithms.empty()) fail(ErrorCode::InvalidArgument, "no algorithms selected");
    if (generator.kind == GeneratorSpec::Kind::File && generator.path.empty())
      fail(ErrorCode::InvalidArgument, "file generator needs a path");
    if (refs.kind == RefStrategy::Kind::Random && refs.count < 1)
      fail(ErrorCode::InvalidArgument, "random reference count must be at least 1");
    refs.principled.validate();
    mean.validate();
  }
};

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      const std::string kind = g.value("kind", std::string("balls"));
      if (kind == "balls") {
        c.generator.kind = GeneratorSpec::Kind::Balls;
        auto& b = c.generator.balls;
        b.k = g.value("k", b.k);
        b.n = g.value("n", b.n);
        if (g.contains("radius_range")) {
          b.rho_lo = g.at("radius_range").at(0).get<double>();
          b.rho_hi = g.at("radius_range").at(1).get<double>();
        }
        b.d_low = g.value("d_low", b.d_low);
        b.d_up = g.value("d_up", b.d_up);
        b.samples_per_ball = g.value("samples_per_ball", b.samples_per_ball);
        b.center_scale = g.value("center_scale", b.center_scale);
        b.max_retries = g.value("max_retries", b.max_retries);
      } else if (kind == "mirror") {
        c.generator.kind = GeneratorSpec::Kind::Mirror;
        auto& m = c.generator.mirror;
        m.n = g.value("n", m.n);
        m.norm = g.value("norm", m.norm);
        m.perturb_var = g.value("perturb_var", m.perturb_var);
        m.min_gap = g.value("min_gap", m.min_gap);
        m.samples_per_ball = g.value("samples_per_ball", m.samples_per_ball);
        m.max_retries = g.value("max_retries", m.max_retries);
      } else if (kind == "file") {
        c.generator.kind = GeneratorSpec::Kind::File;
        c.generator.path = g.at("path").get<std::string>();
      } else {
        fail(ErrorCode::InvalidArgument, "unknown generator kind '" + kind + "'");
      }
    }
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    } else if (j.contains("algorithm")) {
      c.algorithms = {parse_algorithm(j.at("algorithm").get<std::string>())};
    }
    if (j.contains("refs")) {
      const auto& r = j.at("refs");
      const std::string strategy = r.value("strategy", std::string("random"));
      if (strategy == "random") {
        c.refs.kind = RefStrategy::Kind::Random;
        c.refs.count = r.value("count", c.refs.count);
      } else if (strategy == "principled") {
        c.refs.kind = RefStrategy::Kind::Principled;
        auto& p = c.refs.principled;
        p.t_close = r.value("t_close", p.t_close);
        p.t_far = r.value("t_far", p.t_far);
        p.n_rho = r.value("n_rho", p.n_rho);
        p.eps_d = r.value("eps_d", p.eps_d);
        p.quantile = r.value("quantile", p.quantile);
      } else {
        fail(ErrorCode::InvalidArgument, "unknown reference strategy '" + strategy + "'");
      }
    }
    c.kmeans.k = 0;
    if (j.contains("kmeans")) {
      const auto& k = j.at("kmeans");
      c.kmeans.k = k.value("k", 0);
      c.kmeans.restarts = k.value("restarts", c.kmeans.restarts);
      c.kmeans.max_iter = k.value("max_iter", c.kmeans.max_iter);
    }
    if (j.contains("restarts_by_algorithm"))
      for (const auto& [name, v] : j.at("restarts_by_algorithm").items())
        c.restarts_override[parse_algorithm(name)] = v.get<int>();
    if (j.contains("mean")) {
      const auto& m = j.at("mean");
      c.mean.eta = m.value("eta", c.mean.eta);
      c.mean.grad_tol = m.value("grad_tol", c.mean.grad_tol);
      c.mean.max_iter = m.value("max_iter", c.mean.max_iter);
    }
    const std::string dm = j.value("dispersion_mean", std::string("icm"));
    if (dm == "icm") c.dispersion_mean = MeanMethod::ICM;
    else if (dm == "gd") c.dispersion_mean = MeanMethod::GD;
    else fail(ErrorCode::InvalidArgument, "dispersion_mean must be 'icm' or 'gd'");
    c.repetitions = j.value("repetitions", c.repetitions);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json experiment_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  switch (c.generator.kind) {
    case GeneratorSpec::Kind::Balls: j["generator"] = c.generator.balls.to_json(); j["generator"]["kind"] = "balls"; break;
    case GeneratorSpec::Kind::Mirror: j["generator"] = c.generator.mirror.to_json(); j["generator"]["kind"] = "mirror"; break;
    case GeneratorSpec::Kind::File: j["generator"] = {{"kind", "file"}, {"path", c.generator.path}}; break;
  }
  j["generator"].erase("seed");
  j["algorithms"] = nlohmann::json::array();
  for (Algorithm a : c.algorithms) j["algorithms"].push_back(to_string(a));
  if (c.refs.kind == RefStrategy::Kind::Random) {
    j["refs"] = {{"strategy", "random"}, {"count", c.refs.count}};
  } else {
    const auto& p = c.refs.principled;
    j["refs"] = {{"strategy", "principled"}, {"t_close", p.t_close}, {"t_far", p.t_far},
                 {"n_rho", p.n_rho},         {"eps_d", p.eps_d},     {"quantile", p.quantile}};
  }
  j["kmeans"] = {{"k", c.kmeans.k}, {"restarts", c.kmeans.restarts}, {"max_iter", c.kmeans.max_iter}};
  j["restarts_by_algorithm"] = nlohmann::json::object();
  for (const auto& [a, r] : c.restarts_override) j["restarts_by_algorithm"][to_string(a)] = r;
  j["mean"] = {{"eta", c.mean.eta}, {"grad_tol", c.mean.grad_tol}, {"max_iter", c.mean.max_iter}};
  j["dispersion_mean"] = c.dispersion_mean == MeanMethod::ICM ? "icm" : "gd";
  j["repetitions"] = c.repetitions;
  j["seed"] = c.seed;
  j["output"] = c.output;
  return j;
}

struct ResultRow {
  int repetition = 0;
  std::uint64_t seed = 0;  ///< per-repetition seed
  std::string algorithm;
  bool ok = true;
  std::string error;
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double totdisp = std::numeric_limits<double>::quiet_NaN();
  double normalized = std::numeric_limits<double>::quiet_NaN();
  double runtime_s = 0.0;  ///< reference selection + clustering
  double refs_s = 0.0;
  double cluster_s = 0.0;
  double eval_s = 0.0;
  std::string ref_strategy;
  int n_refs = 0;
  int iterations = 0;
  bool converged = false;
};

struct SummaryRow {
  std::string algorithm;
  int runs = 0;
  int failed = 0;
  double accuracy_mean = std::numeric_limits<double>::quiet_NaN();
  double accuracy_std = std::numeric_limits<double>::quiet_NaN();
  double accuracy_min = std::numeric_limits<double>::quiet_NaN();
  double accuracy_p10 = std::numeric_limits<double>::quiet_NaN();
  double normalized_mean = std::numeric_limits<double>::quiet_NaN();
  double normalized_std = std::numeric_limits<double>::quiet_NaN();
  double runtime_mean = std::numeric_limits<double>::quiet_NaN();
  double speedup = std::numeric_limits<double>::quiet_NaN();  ///< IRC runtime / this runtime
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  nlohmann::json provenance = nlohmann::json::object();
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); zero for a single value.
inline double std_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (v.size() == 1) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Percentile with linear interpolation between order statistics.
inline double percentile_linear(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::vector<std::string>& order) {
  std::vector<SummaryRow> out;
  for (const auto& name : order) {
    SummaryRow s;
    s.algorithm = name;
    std::vector<double> acc, norm, rt;
    for (const auto& r : rows) {
      if (r.algorithm != name) continue;
      ++s.runs;
      if (!r.ok) {
        ++s.failed;
        continue;
      }
      if (!std::isnan(r.accuracy)) acc.push_back(r.accuracy);
      if (!std::isnan(r.normalized)) norm.push_back(r.normalized);
      rt.push_back(r.runtime_s);
    }
    s.accuracy_mean = detail::mean_of(acc);
    s.accuracy_std = detail::std_of(acc);
    s.accuracy_min = acc.empty() ? s.accuracy_min : *std::min_element(acc.begin(), acc.end());
    s.accuracy_p10 = percentile_linear(acc, 0.10);
    s.normalized_mean = detail::mean_of(norm);
    s.normalized_std = detail::std_of(norm);
    s.runtime_mean = detail::mean_of(rt);
    out.push_back(s);
  }
  const auto irc = std::find_if(out.begin(), out.end(), [](const SummaryRow& s) { return s.algorithm == "IRC"; });
  if (irc != out.end() && !std::isnan(irc->runtime_mean))
    for (auto& s : out)
      if (s.runtime_mean > 0.0) s.speedup = irc->runtime_mean / s.runtime_mean;
  return out;
}

/// Runs one algorithm on one dataset; the row carries timing and scores.
inline ResultRow run_algorithm(Algorithm alg, const std::vector<SpdMatrix>& data, const std::vector<int>& labels, int k,
                               const ExperimentConfig& cfg, std::uint64_t rep_seed) {
  ResultRow row;
  row.algorithm = to_string(alg);
  row.seed = rep_seed;
  KMeansConfig kcfg = cfg.kmeans;
  kcfg.k = k;
  kcfg.seed = derive_seed(rep_seed, 1);
  kcfg.init = KMeansConfig::Init::KMeansPP;
  if (auto it = cfg.restarts_override.find(alg); it != cfg.restarts_override.end()) kcfg.restarts = it->second;

  Partition part;
  auto t0 = std::chrono::steady_clock::now();
  if (is_fmc(alg)) {
    row.ref_strategy = cfg.refs.describe();
    std::vector<SpdMatrix> refs;
    if (cfg.refs.kind == RefStrategy::Kind::Random) {
      refs = select_random(data, cfg.refs.count, derive_seed(rep_seed, 2));
    } else {
      PrincipledParams p = cfg.refs.principled;
      p.seed = derive_seed(rep_seed, 3);
      refs = select_principled(data, k, p, kcfg).refs;
    }
    row.refs_s = detail::seconds_since(t0);
    row.n_refs = static_cast<int>(refs.size());
    t0 = std::chrono::steady_clock::now();
    const FrechetMapSpec spec(std::move(refs), alg == Algorithm::FMC1 ? 1 : 2);
    part = cluster_fmc(data, spec, kcfg);
  } else if (alg == Algorithm::IRC) {
    part = cluster_irc(data, kcfg, cfg.mean);
  } else if (alg == Algorithm::ARC) {
    part = cluster_arc(data, kcfg);
  } else {
    part = cluster_lec(data, kcfg);
  }
  row.cluster_s = detail::seconds_since(t0);
  row.runtime_s = row.refs_s + row.cluster_s;
  row.iterations = part.iterations;
  row.converged = part.converged;

  t0 = std::chrono::steady_clock::now();
  if (!labels.empty()) {
    const EvalReport ev = evaluate(data, labels, part.labels, k, Metric::Affine, cfg.dispersion_mean);
    row.accuracy = ev.accuracy;
    row.totdisp = ev.totdisp;
    row.normalized = ev.normalized_totdisp;
  } else {
    row.totdisp = total_dispersion(data, part.labels, k, Metric::Affine, cfg.dispersion_mean);
  }
  row.eval_s = detail::seconds_since(t0);
  return row;
}

/// Repetition r uses seed derive_seed(cfg.seed, r) for data generation and everything downstream.
/// A failing repetition is recorded as a failed row and does not stop the batch.
inline ResultsTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultsTable table;
  table.provenance = experiment_to_json(cfg);
  table.provenance["library_version"] = kLibraryVersion;
  table.provenance["seed_derivation"] = "splitmix64(master, repetition)";

  std::optional<LoadedDataset> file;
  if (cfg.generator.kind == GeneratorSpec::Kind::File) file = load_dataset(cfg.generator.path);

  std::vector<std::string> order;
  for (Algorithm a : cfg.algorithms) order.push_back(to_string(a));

  for (int r = 0; r < cfg.repetitions; ++r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    std::vector<SpdMatrix> data;
    std::vector<int> labels;
    std::string gen_error;
    try {
      if (file) {
        data = file->points;
        labels = file->labels;
      } else if (cfg.generator.kind == GeneratorSpec::Kind::Balls) {
        BallConfig b = cfg.generator.balls;
        b.seed = rep_seed;
        auto ds = gen_ball_config(b);
        data = std::move(ds.points);
        labels = std::move(ds.labels);
      } else {
        MirrorConfig m = cfg.generator.mirror;
        m.seed = rep_seed;
        auto ds = gen_mirror_config(m);
        data = std::move(ds.points);
        labels = std::move(ds.labels);
      }
    } catch (const std::exception& e) {
      gen_error = std::string("data generation: ") + e.what();
    }

    int k = cfg.kmeans.k;
    if (gen_error.empty() && k <= 0) {
      if (labels.empty()) gen_error = "k not given and the dataset has no labels";
      else k = *std::max_element(labels.begin(), labels.end()) + 1;
    }

    for (Algorithm alg : cfg.algorithms) {
      ResultRow row;
      if (gen_error.empty()) {
        try {
          row = run_algorithm(alg, data, labels, k, cfg, rep_seed);
        } catch (const std::exception& e) {
          row = ResultRow{};
          row.ok = false;
          row.error = e.what();
        }
      } else {
        row.ok = false;
        row.error = gen_error;
      }
      row.repetition = r;
      row.seed = rep_seed;
      row.algorithm = to_string(alg);
      if (row.ref_strategy.empty() && is_fmc(alg)) row.ref_strategy = cfg.refs.describe();
      table.rows.push_back(std::move(row));
    }
  }
  table.summary = summarize(table.rows, order);
  return table;
}

enum class OutputFormat { Csv, Json };

namespace detail {

inline std::string fmt_double(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt_double(v, 17);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace detail

inline const std::vector<std::string>& row_columns() {
  static const std::vector<std::string> cols{"repetition", "seed",       "algorithm", "status",     "accuracy",
                                             "totdisp",    "normalized", "runtime_s", "refs_s",     "cluster_s",
                                             "eval_s",     "ref_strategy", "n_refs",  "iterations", "converged",
                                             "error"};
  return cols;
}

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "algorithm",       "runs",           "failed",       "accuracy_mean", "accuracy_std", "accuracy_min",
      "accuracy_p10",    "normalized_mean", "normalized_std", "runtime_mean", "speedup"};
  return cols;
}

inline std::string rows_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  const auto& cols = row_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows) {
    os << r.repetition << ',' << r.seed << ',' << r.algorithm << ',' << (r.ok ? "ok" : "failed") << ','
       << detail::fmt_double(r.accuracy, 6) << ',' << detail::fmt_double(r.totdisp, 6) << ','
       << detail::fmt_double(r.normalized, 6) << ',' << detail::fmt_double(r.runtime_s, 6) << ','
       << detail::fmt_double(r.refs_s, 6) << ',' << detail::fmt_double(r.cluster_s, 6) << ','
       << detail::fmt_double(r.eval_s, 6) << ',' << detail::csv_field(r.ref_strategy) << ',' << r.n_refs << ','
       << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << detail::csv_field(r.error) << '\n';
  }
  return os.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  const auto& cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& s : rows) {
    os << s.algorithm << ',' << s.runs << ',' << s.failed << ',' << detail::fmt_double(s.accuracy_mean, 6) << ','
       << detail::fmt_double(s.accuracy_std, 6) << ',' << detail::fmt_double(s.accuracy_min, 6) << ','
       << detail::fmt_double(s.accuracy_p10, 6) << ',' << detail::fmt_double(s.normalized_mean, 6) << ','
       << detail::fmt_double(s.normalized_std, 6) << ',' << detail::fmt_double(s.runtime_mean, 6) << ','
       << detail::fmt_double(s.speedup, 6) << '\n';
  }
  return os.str();
}

/// JSON with doubles written at 17 significant digits; non-finite values become null.
inline std::string results_json(const ResultsTable& t) {
  std::ostringstream os;
  os << "{\n  \"provenance\": " << t.provenance.dump() << ",\n  \"rows\": [";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    os << (i ? ",\n    " : "\n    ") << "{\"repetition\": " << r.repetition << ", \"seed\": " << r.seed
       << ", \"algorithm\": " << detail::json_string(r.algorithm) << ", \"status\": \"" << (r.ok ? "ok" : "failed")
       << "\", \"accuracy\": " << detail::json_number(r.accuracy) << ", \"totdisp\": " << detail::json_number(r.totdisp)
       << ", \"normalized\": " << detail::json_number(r.normalized)
       << ", \"runtime_s\": " << detail::json_number(r.runtime_s) << ", \"refs_s\": " << detail::json_number(r.refs_s)
       << ", \"cluster_s\": " << detail::json_number(r.cluster_s) << ", \"eval_s\": " << detail::json_number(r.eval_s)
       << ", \"ref_strategy\": " << detail::json_string(r.ref_strategy) << ", \"n_refs\": " << r.n_refs
       << ", \"iterations\": " << r.iterations << ", \"converged\": " << (r.converged ? "true" : "false")
       << ", \"error\": " << detail::json_string(r.error) << "}";
  }
  os << (t.rows.empty() ? "],\n" : "\n  ],\n") << "  \"summary\": [";
  for (std::size_t i = 0; i < t.summary.size(); ++i) {
    const auto& s = t.summary[i];
    os << (i ? ",\n    " : "\n    ") << "{\"algorithm\": " << detail::json_string(s.algorithm)
       << ", \"runs\": " << s.runs << ", \"failed\": " << s.failed
       << ", \"accuracy_mean\": " << detail::json_number(s.accuracy_mean)
       << ", \"accuracy_std\": " << detail::json_number(s.accuracy_std)
       << ", \"accuracy_min\": " << detail::json_number(s.accuracy_min)
       << ", \"accuracy_p10\": " << detail::json_number(s.accuracy_p10)
       << ", \"normalized_mean\": " << detail::json_number(s.normalized_mean)
       << ", \"normalized_std\": " << detail::json_number(s.normalized_std)
       << ", \"runtime_mean\": " << detail::json_number(s.runtime_mean)
       << ", \"speedup\": " << detail::json_number(s.speedup) << "}";
  }
  os << (t.summary.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

/// CSV writes the per-run rows to `path` and the summary to `<path minus .csv>.summary.csv`.
inline void emit_results(const ResultsTable& t, OutputFormat format, const std::string& path) {
  auto write = [](const std::string& p, const std::string& body) {
    std::ofstream os(p, std::ios::trunc);
    if (!os) fail(ErrorCode::IoError, "cannot open " + p + " for writing");
    os << body;
    if (!os) fail(ErrorCode::IoError, "write to " + p + " failed");
  };
  if (format == OutputFormat::Json) {
    write(path, results_json(t));
    return;
  }
  write(path, rows_csv(t.rows));
  std::string stem = path;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  write(stem + ".summary.csv", summary_csv(t.summary));
}

}  // namespace frechet
