// Command-line front end: generate, cluster, evaluate, bench, refpoints, diagnose.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frechet/frechet.hpp"

namespace {

using frechet::Algorithm;
using nlohmann::json;

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path, std::ios::trunc);
  if (!os) frechet::fail(frechet::ErrorCode::IoError, "cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) frechet::fail(frechet::ErrorCode::IoError, "cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    frechet::fail(frechet::ErrorCode::ParseError, path + " at byte offset " + std::to_string(e.byte));
  }
}

json matrix_json(const frechet::SpdMatrix& p) {
  json rows = json::array();
  for (int i = 0; i < p.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < p.dim(); ++j) row.push_back(p(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct RefOptions {
  std::string strategy = "random";
  int count = 2;
  frechet::PrincipledParams params;
};

void add_ref_options(CLI::App* cmd, RefOptions& o) {
  cmd->add_option("--refs", o.strategy, "Reference strategy")->check(CLI::IsMember({"random", "principled"}));
  cmd->add_option("--n-refs", o.count, "Number of random references");
  cmd->add_option("--t-close", o.params.t_close, "Geodesic offset for close pairs");
  cmd->add_option("--t-far", o.params.t_far, "Geodesic offset for far pairs");
  cmd->add_option("--n-rho", o.params.n_rho, "Samples used for each radius estimate");
  cmd->add_option("--eps-d", o.params.eps_d, "Close/far threshold on d/(rho_i + rho_j)");
}

std::vector<frechet::SpdMatrix> choose_refs(const std::vector<frechet::SpdMatrix>& data, int k, const RefOptions& o,
                                            const frechet::KMeansConfig& kcfg, std::uint64_t seed, json* report) {
  if (o.strategy == "random") {
    if (report) *report = {{"strategy", "random"}, {"count", o.count}, {"seed", seed}};
    return frechet::select_random(data, o.count, seed);
  }
  frechet::PrincipledParams p = o.params;
  p.seed = seed;
  auto sel = frechet::select_principled(data, k, p, kcfg);
  if (report) {
    const auto& r = sel.report;
    json pairs = json::array();
    for (const auto& pp : r.pairs)
      pairs.push_back({{"i", pp.i}, {"j", pp.j}, {"mean_distance", pp.mean_distance}, {"radius_sum", pp.radius_sum},
                       {"ratio", pp.ratio}, {"case", pp.close ? "close" : "far"}, {"t", pp.t}});
    json means = json::array();
    for (const auto& m : r.means) means.push_back(matrix_json(m));
    *report = {{"strategy", "principled"}, {"t_close", p.t_close}, {"t_far", p.t_far}, {"n_rho", p.n_rho},
               {"eps_d", p.eps_d},         {"quantile", p.quantile}, {"seed", seed},  {"radii", r.radii},
               {"means", means},           {"pairs", pairs},        {"degenerate", r.degenerate},
               {"warning", r.warning}};
  }
  return sel.refs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fréchet-map clustering of SPD matrices"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic labelled dataset");
  std::string gen_kind = "balls", gen_out;
  frechet::BallConfig balls;
  frechet::MirrorConfig mirror;
  int gen_samples = 400;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "balls or mirror")->check(CLI::IsMember({"balls", "mirror"}));
  gen->add_option("--k", balls.k, "Number of balls");
  gen->add_option("--n", balls.n, "Matrix size");
  gen->add_option("--samples", gen_samples, "Samples per ball");
  gen->add_option("--d-low", balls.d_low, "Lower bound on d(C_i,C_j)/(rho_i+rho_j)");
  gen->add_option("--d-up", balls.d_up, "Upper bound on d(C_i,C_j)/(rho_i+rho_j)");
  gen->add_option("--rho-lo", balls.rho_lo, "Smallest ball radius");
  gen->add_option("--rho-hi", balls.rho_hi, "Largest ball radius");
  gen->add_option("--center-scale", balls.center_scale, "Frobenius norm of centre logarithms");
  gen->add_option("--norm", mirror.norm, "Mirror layout: norm of V_1");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("-o,--out", gen_out, "Output dataset file")->required();

  // cluster
  auto* clu = app.add_subcommand("cluster", "Cluster a dataset file");
  std::string clu_data, clu_alg = "FMC2", clu_out;
  int clu_k = 0;
  frechet::KMeansConfig clu_cfg;
  RefOptions clu_refs;
  clu->add_option("--data", clu_data, "Dataset file")->required();
  clu->add_option("--algorithm", clu_alg, "IRC, ARC, LEC, FMC1 or FMC2")
      ->check(CLI::IsMember({"IRC", "ARC", "LEC", "FMC1", "FMC2"}));
  clu->add_option("--k", clu_k, "Number of clusters (default: from labels)");
  clu->add_option("--restarts", clu_cfg.restarts, "k-means restarts");
  clu->add_option("--max-iter", clu_cfg.max_iter, "Lloyd iterations per restart");
  clu->add_option("--seed", clu_cfg.seed, "Random seed");
  clu->add_option("-o,--out", clu_out, "Output JSON (default stdout)");
  add_ref_options(clu, clu_refs);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a clustering against ground truth");
  std::string ev_data, ev_pred, ev_out, ev_mean = "icm";
  ev->add_option("--data", ev_data, "Labelled dataset file")->required();
  ev->add_option("--pred", ev_pred, "JSON from `cluster`")->required();
  ev->add_option("--mean", ev_mean, "Centroid method for dispersion")->check(CLI::IsMember({"icm", "gd"}));
  ev->add_option("-o,--out", ev_out, "Output JSON (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment grid from a JSON config");
  std::string bench_cfg, bench_out, bench_format = "csv";
  std::uint64_t bench_seed = 0;
  int bench_reps = 0;
  bench->add_option("--config", bench_cfg, "Experiment config JSON")->required();
  bench->add_option("--seed", bench_seed, "Master seed")->required();
  bench->add_option("--repetitions", bench_reps, "Override the repetition count");
  bench->add_option("--format", bench_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("-o,--out", bench_out, "Output file (default: config output field)");

  // refpoints
  auto* rp = app.add_subcommand("refpoints", "Select reference points and report the placement");
  std::string rp_data, rp_out, rp_refs_out;
  int rp_k = 0;
  std::uint64_t rp_seed = 0;
  RefOptions rp_opts;
  rp_opts.strategy = "principled";
  rp->add_option("--data", rp_data, "Dataset file")->required();
  rp->add_option("--k", rp_k, "Number of clusters (default: from labels)");
  rp->add_option("--seed", rp_seed, "Random seed");
  rp->add_option("-o,--out", rp_out, "Report JSON (default stdout)");
  rp->add_option("--save-refs", rp_refs_out, "Write the references as a dataset file");
  add_ref_options(rp, rp_opts);

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Randomised property checks");
  diag->require_subcommand(1);
  std::uint64_t diag_seed = 0;
  int diag_instances = 50;
  std::string diag_out;
  auto* diag_e = diag->add_subcommand("euclid", "Euclidean Fréchet-map checks");
  auto* diag_s = diag->add_subcommand("spd", "SPD geometry and embedding checks");
  for (auto* d : {diag_e, diag_s}) {
    d->add_option("--seed", diag_seed, "Random seed");
    d->add_option("--instances", diag_instances, "Random instances per dimension");
    d->add_option("-o,--out", diag_out, "Output JSON (default stdout)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      frechet::LabeledDataset ds;
      if (gen_kind == "balls") {
        balls.samples_per_ball = gen_samples;
        balls.seed = gen_seed;
        ds = frechet::gen_ball_config(balls);
      } else {
        mirror.n = balls.n;
        mirror.samples_per_ball = gen_samples;
        mirror.seed = gen_seed;
        ds = frechet::gen_mirror_config(mirror);
      }
      frechet::save_dataset(gen_out, ds);
      std::cerr << "wrote " << ds.points.size() << " matrices to " << gen_out << '\n';
    } else if (*clu) {
      const auto ds = frechet::load_dataset(clu_data);
      int k = clu_k;
      if (k <= 0) {
        if (ds.labels.empty()) frechet::fail(frechet::ErrorCode::InvalidArgument, "--k is required without labels");
        k = *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
      }
      clu_cfg.k = k;
      const Algorithm alg = frechet::parse_algorithm(clu_alg);
      json refs_report;
      const auto t0 = std::chrono::steady_clock::now();
      frechet::Partition part;
      if (frechet::is_fmc(alg)) {
        auto refs = choose_refs(ds.points, k, clu_refs, clu_cfg, frechet::derive_seed(clu_cfg.seed, 2), &refs_report);
        const frechet::FrechetMapSpec spec(std::move(refs), alg == Algorithm::FMC1 ? 1 : 2);
        part = frechet::cluster_fmc(ds.points, spec, clu_cfg);
      } else if (alg == Algorithm::IRC) {
        part = frechet::cluster_irc(ds.points, clu_cfg);
      } else if (alg == Algorithm::ARC) {
        part = frechet::cluster_arc(ds.points, clu_cfg);
      } else {
        part = frechet::cluster_lec(ds.points, clu_cfg);
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json centroids = json::array();
      for (const auto& c : part.spd_centroids) centroids.push_back(matrix_json(c));
      json out = {{"algorithm", clu_alg}, {"k", k},          {"labels", part.labels},
                  {"totdisp", part.totdisp}, {"iterations", part.iterations}, {"converged", part.converged},
                  {"runtime_s", secs},    {"centroids", centroids}, {"metadata", part.metadata}};
      if (!refs_report.is_null()) out["refs"] = refs_report;
      write_json(out, clu_out);
    } else if (*ev) {
      const auto ds = frechet::load_dataset(ev_data);
      if (ds.labels.empty()) frechet::fail(frechet::ErrorCode::InvalidArgument, "dataset has no ground-truth labels");
      const json pred = read_json(ev_pred);
      const auto labels = pred.at("labels").get<std::vector<int>>();
      const int k = pred.at("k").get<int>();
      const auto rep = frechet::evaluate(ds.points, ds.labels, labels, k, frechet::Metric::Affine,
                                         ev_mean == "gd" ? frechet::MeanMethod::GD : frechet::MeanMethod::ICM);
      write_json({{"accuracy", rep.accuracy},
                  {"confusion", rep.confusion},
                  {"assignment", rep.assignment},
                  {"totdisp", rep.totdisp},
                  {"truth_totdisp", rep.truth_totdisp},
                  {"normalized_totdisp", rep.normalized_totdisp},
                  {"empty_clusters", rep.empty_clusters},
                  {"dispersion_mean", ev_mean}},
                 ev_out);
    } else if (*bench) {
      auto cfg = frechet::experiment_from_json(read_json(bench_cfg));
      cfg.seed = bench_seed;
      if (bench_reps > 0) cfg.repetitions = bench_reps;
      const auto table = frechet::run_experiment(cfg);
      const std::string out = bench_out.empty() ? cfg.output : bench_out;
      if (out.empty()) {
        std::cout << (bench_format == "json" ? frechet::results_json(table) : frechet::summary_csv(table.summary));
      } else {
        frechet::emit_results(table, bench_format == "json" ? frechet::OutputFormat::Json : frechet::OutputFormat::Csv,
                              out);
        std::cout << frechet::summary_csv(table.summary);
      }
    } else if (*rp) {
      const auto ds = frechet::load_dataset(rp_data);
      int k = rp_k;
      if (k <= 0) {
        if (ds.labels.empty()) frechet::fail(frechet::ErrorCode::InvalidArgument, "--k is required without labels");
        k = *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
      }
      frechet::KMeansConfig kcfg;
      kcfg.k = k;
      kcfg.seed = rp_seed;
      json report;
      const auto refs = choose_refs(ds.points, k, rp_opts, kcfg, rp_seed, &report);
      report["n_refs"] = refs.size();
      if (!rp_refs_out.empty()) frechet::save_dataset(rp_refs_out, refs, nullptr, report);
      write_json(report, rp_out);
    } else if (*diag) {
      const json rep = *diag_e ? frechet::diagnose_euclid(diag_seed, diag_instances)
                               : frechet::diagnose_spd(diag_seed, diag_instances);
      write_json(rep, diag_out);
      return rep.at("passed").get<bool>() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
