// Command-line front end: data generation, clustering, benchmarks,
// statistics drivers, and the renormalized penalty scan.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hiap/ap.hpp"
#include "hiap/hierarchy.hpp"
#include "hiap/io.hpp"
#include "hiap/rap.hpp"
#include "hiap/stats.hpp"
#include "hiap/synth.hpp"
#include "hiap/wap.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitDivergence = 4;
constexpr int kExitNoPlateau = 5;

int soft_exit_code = kExitOk;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> origin_for(const std::string& spec,
                               const std::vector<std::vector<double>>& pts) {
  std::size_t dim = pts.front().size();
  if (spec == "auto") {
    std::vector<double> cm(dim, 0.0);
    for (const auto& p : pts)
      for (std::size_t k = 0; k < dim; ++k) cm[k] += p[k];
    for (double& x : cm) x /= static_cast<double>(pts.size());
    return cm;
  }
  auto o = parse_double_list(spec);
  if (o.size() != dim)
    throw hiap::input_error("origin dimension mismatch");
  return o;
}

std::vector<std::vector<double>> dataset_points(const hiap::Dataset& d) {
  std::vector<std::vector<double>> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto p = d.point(i);
    out[i].assign(p.begin(), p.end());
  }
  return out;
}

hiap::ShapeFactor parse_omega(const std::string& spec, std::size_t dim,
                              const hiap::Dataset& data) {
  if (spec == "unity") return hiap::ShapeFactor::unity();
  if (spec == "auto") return hiap::estimate_shape_factor(dataset_points(data));
  if (spec == "gaussian")
    return hiap::closed_form_shape_factor(hiap::ClusterShape::gaussian, dim);
  if (spec == "l2")
    return hiap::closed_form_shape_factor(hiap::ClusterShape::uniform_l2_ball,
                                          dim);
  if (spec == "l1")
    return hiap::closed_form_shape_factor(hiap::ClusterShape::uniform_l1_ball,
                                          dim);
  try {
    double v = std::stod(spec);
    if (!(v > 0.0)) throw hiap::input_error("omega must be positive");
    return {v, hiap::ShapeFactor::Source::default_unity};
  } catch (const std::invalid_argument&) {
    throw hiap::input_error("unknown omega spec: " + spec);
  }
}

void write_json(const std::string& path, const json& j) {
  hiap::write_text_file(path, j.dump(2) + "\n");
}

json solver_json(const hiap::SolverConfig& cfg) {
  json j;
  j["q"] = std::isfinite(cfg.q) ? json(cfg.q) : json("inf");
  j["damping"] = cfg.damping;
  j["max_iterations"] = cfg.max_iterations;
  j["stability_window"] = cfg.stability_window;
  return j;
}

json result_json(const hiap::ClusteringResult& res) {
  json j;
  j["energy"] = res.energy;
  j["distortion"] = res.distortion;
  j["iterations"] = res.iterations_run;
  j["converged"] = res.converged;
  j["n_exemplars"] = res.exemplars.size();
  j["exemplars"] = res.exemplars;
  return j;
}

// least-squares slope of log2(y) vs log2(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string out;
  std::size_t n_star = 1;
  std::size_t dim = 2;
  std::size_t per_cluster = 0;
  std::size_t total = 0;
  double eta = 0.0;
  double variance = 1.0;
  std::string shape = "gaussian";
  std::uint64_t seed = 0;
};

void run_gen(const GenArgs& a) {
  hiap::MixtureSpec spec;
  spec.n_star = a.n_star;
  spec.dim = a.dim;
  spec.shape = hiap::shape_from_string(a.shape);
  spec.variances.assign(a.n_star, a.variance);
  if (a.per_cluster == 0 && a.total == 0)
    throw hiap::input_error("need --per-cluster or --total");
  spec.points_per_cluster =
      a.per_cluster > 0 ? a.per_cluster : std::max<std::size_t>(1, a.total / a.n_star);

  if (a.n_star == 1) {
    spec.centers.assign(1, std::vector<double>(a.dim, 0.0));
  } else {
    if (!(a.eta > 0.0))
      throw hiap::input_error("--eta required for more than one cluster");
    spec.centers = hiap::place_centers(a.n_star, a.dim, a.eta,
                                       hiap::derive_seed(a.seed, 1),
                                       a.variance, spec.shape);
  }

  auto [data, truth] = hiap::generate(spec, a.seed);
  hiap::write_points_csv(a.out, data);

  json j;
  j["config"] = {{"n_star", a.n_star},       {"dim", a.dim},
                 {"per_cluster", spec.points_per_cluster},
                 {"variance", a.variance},   {"shape", a.shape},
                 {"eta", a.eta},             {"seed", a.seed}};
  j["centers"] = spec.centers;
  j["labels"] = truth.labels;
  if (a.n_star > 1) {
    auto rep = hiap::separability(spec);
    j["separability"] = {{"d_min", rep.d_min},
                         {"r_max", rep.r_max},
                         {"eta", rep.eta},
                         {"well_separated", rep.well_separated}};
  }
  write_json(a.out + ".json", j);
}

// ------------------------------------------------------------ cluster ----

struct ClusterArgs {
  std::string input;
  std::string out_prefix;
  bool weighted = false;
  double s = 1.0;
  double q = 0.0;  // scap only
  double damping = 0.5;
  int max_iter = 1000;
  // hiap only
  int levels = 1;
  std::size_t cap = 10;
  std::size_t branching = 0;  // 0 = from plan
  std::uint64_t seed = 0;
  std::string s_schedule;
  bool nearest_reassign = false;
  int threads = 1;
};

hiap::SolverConfig solver_from(const ClusterArgs& a, bool soft) {
  hiap::SolverConfig cfg;
  cfg.damping = a.damping;
  cfg.max_iterations = a.max_iter;
  if (soft) cfg.q = a.q;
  return cfg;
}

void write_cluster_outputs(const ClusterArgs& a, const hiap::Dataset& data,
                           const hiap::ClusteringResult& res, json summary) {
  hiap::write_assignment_csv(a.out_prefix + "_assignment.csv", res.assignment);
  auto agg = hiap::aggregate(res, data);
  hiap::write_exemplars_csv(a.out_prefix + "_exemplars.csv", agg, data.dim);
  summary["result"] = result_json(res);
  write_json(a.out_prefix + "_summary.json", summary);
}

void run_cluster_flat(const ClusterArgs& a, const std::string& algo) {
  hiap::Dataset data = hiap::read_points_csv(a.input, a.weighted);
  hiap::SolverConfig cfg = solver_from(a, algo == "scap");
  json summary;
  summary["config"] = {{"algorithm", algo}, {"input", a.input},
                       {"s", a.s},          {"solver", solver_json(cfg)}};

  hiap::ClusteringResult res;
  if (algo == "wap") {
    auto pts = hiap::to_weighted(data);
    auto sim = hiap::build_weighted_similarity(pts, a.s);
    res = hiap::solve(sim, cfg);
    summary["wap_energy"] = hiap::wap_energy(pts, res.assignment, a.s);
  } else {
    auto sim = hiap::build_similarity(data, a.s);
    res = hiap::solve(sim, cfg);
  }
  write_cluster_outputs(a, data, res, std::move(summary));
}

void run_cluster_hiap(const ClusterArgs& a) {
  hiap::Dataset data = hiap::read_points_csv(a.input, a.weighted);
  hiap::SolverConfig cfg = solver_from(a, false);
  hiap::HiApPlan plan = hiap::plan(data.size(), a.cap, a.levels);
  if (a.branching > 0) {
    plan.branching = a.branching;
    std::size_t leaves = 1;
    for (int i = 0; i < plan.depth; ++i) leaves *= plan.branching;
    if (leaves == 0 || leaves > plan.n)
      throw hiap::input_error("branching override yields empty leaves");
    plan.subset_size = plan.n / leaves;
  }

  std::vector<double> schedule;
  if (!a.s_schedule.empty()) {
    schedule = parse_double_list(a.s_schedule);
  } else {
    double s = hiap::find_leaf_preference(data, plan, cfg, a.seed);
    schedule.assign(plan.depth + 1, s);
  }

  hiap::HierarchyOptions opts;
  opts.nearest_reassignment = a.nearest_reassign;
  opts.threads = a.threads;
  auto [res, reports] =
      hiap::cluster_hierarchical(data, plan, schedule, cfg, a.seed, opts);

  json summary;
  summary["config"] = {{"algorithm", "hiap"},
                       {"input", a.input},
                       {"levels", plan.depth},
                       {"branching", plan.branching},
                       {"cap", plan.cap},
                       {"subset_size", plan.subset_size},
                       {"s_schedule", schedule},
                       {"seed", a.seed},
                       {"solver", solver_json(cfg)}};
  json level_reports = json::array();
  for (const auto& r : reports)
    level_reports.push_back({{"level", r.level},
                             {"clusterings_run", r.clusterings_run},
                             {"points_in", r.points_in},
                             {"exemplars_out", r.exemplars_out},
                             {"wall_time", r.wall_time},
                             {"operations_estimate", r.operations_estimate}});
  summary["level_reports"] = std::move(level_reports);
  write_cluster_outputs(a, data, res, std::move(summary));
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string out;
  std::size_t dim = 2;
  std::string n_list = "1024,2048,4096";
  std::string h_list = "0,1";
  std::size_t cap = 10;
  std::uint64_t seed = 0;
  double s = 0.0;  // 0 = bisect per run
  int threads = 1;
};

void run_bench(const BenchArgs& a) {
  auto n_grid = parse_int_list(a.n_list);
  auto h_grid = parse_int_list(a.h_list);
  if (n_grid.empty() || h_grid.empty())
    throw hiap::input_error("empty benchmark grid");

  std::ostringstream csv;
  csv << "n,h,wall_time,operations_estimate\n";
  json slopes;
  hiap::SolverConfig cfg;

  for (int h : h_grid) {
    std::vector<double> ns, ops;
    for (int n : n_grid) {
      std::mt19937_64 rng(hiap::derive_seed(a.seed, n));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> coords(static_cast<std::size_t>(n) * a.dim);
      for (double& x : coords) x = unit(rng);
      hiap::Dataset data =
          hiap::Dataset::from_points(a.dim, std::move(coords));

      hiap::HiApPlan plan = hiap::plan(data.size(), a.cap, h);
      double s = a.s;
      if (!(s > 0.0))
        s = hiap::find_leaf_preference(data, plan, cfg, a.seed);
      std::vector<double> schedule(h + 1, s);

      hiap::HierarchyOptions opts;
      opts.threads = a.threads;
      double t0 = now_seconds();
      auto [res, reports] =
          hiap::cluster_hierarchical(data, plan, schedule, cfg, a.seed, opts);
      double wall = now_seconds() - t0;
      (void)res;
      double op_total = 0.0;
      for (const auto& r : reports) op_total += r.operations_estimate;
      csv << n << "," << h << "," << hiap::format_double(wall) << ","
          << hiap::format_double(op_total) << "\n";
      ns.push_back(n);
      ops.push_back(op_total);
    }
    if (ns.size() > 1)
      slopes["h" + std::to_string(h)] = loglog_slope(ns, ops);
  }

  hiap::write_text_file(a.out, csv.str());
  json j;
  j["config"] = {{"dim", a.dim},   {"n", a.n_list}, {"h", a.h_list},
                 {"cap", a.cap},   {"seed", a.seed}, {"s", a.s}};
  j["slopes"] = slopes;
  write_json(a.out + ".json", j);
}

// -------------------------------------------------------------- stats ----

struct RadialArgs {
  std::string input, input2, out, origin = "auto";
  std::size_t bins = 64;
  bool weighted = false;
};

void run_stats_radial(const RadialArgs& a, bool kl_only) {
  auto pts_p = dataset_points(hiap::read_points_csv(a.input, a.weighted));
  auto origin = origin_for(a.origin, pts_p);
  auto r2_p = hiap::squared_radii(pts_p, origin);

  json j;
  j["config"] = {{"input", a.input}, {"input2", a.input2},
                 {"bins", a.bins},   {"origin", a.origin}};

  if (a.input2.empty()) {
    auto hist = hiap::radial_histogram(r2_p, hiap::equal_mass_edges(r2_p, a.bins));
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count\n";
    for (std::size_t k = 0; k < hist.counts.size(); ++k)
      csv << hiap::format_double(hist.bin_edges[k]) << ","
          << hiap::format_double(hist.bin_edges[k + 1]) << ","
          << hist.counts[k] << "\n";
    hiap::write_text_file(a.out, csv.str());
    j["total"] = hist.total;
    write_json(a.out + ".json", j);
    return;
  }

  auto pts_q = dataset_points(hiap::read_points_csv(a.input2, a.weighted));
  auto r2_q = hiap::squared_radii(pts_q, origin);
  std::vector<double> pooled = r2_p;
  pooled.insert(pooled.end(), r2_q.begin(), r2_q.end());
  auto edges = hiap::equal_mass_edges(pooled, a.bins);
  auto hp = hiap::radial_histogram(r2_p, edges);
  auto hq = hiap::radial_histogram(r2_q, edges);

  j["kl"] = hiap::kl_divergence(hp, hq);
  j["ks_stat"] = hiap::ks_statistic_two_sample(r2_p, r2_q);
  j["ks_p"] = hiap::ks_two_sample_p_value(r2_p, r2_q);
  if (!kl_only) {
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count_p,count_q\n";
    for (std::size_t k = 0; k < hp.counts.size(); ++k)
      csv << hiap::format_double(edges[k]) << ","
          << hiap::format_double(edges[k + 1]) << "," << hp.counts[k] << ","
          << hq.counts[k] << "\n";
    hiap::write_text_file(a.out, csv.str());
    write_json(a.out + ".json", j);
  } else {
    write_json(a.out, j);
  }
}

struct FitArgs {
  std::string input, out, origin = "auto";
  bool weighted = false;
};

void run_stats_fit(const FitArgs& a, bool weibull) {
  hiap::Dataset data = hiap::read_points_csv(a.input, a.weighted);
  auto pts = dataset_points(data);
  auto origin = origin_for(a.origin, pts);
  auto r2 = hiap::squared_radii(pts, origin);

  json j;
  j["config"] = {{"input", a.input}, {"origin", a.origin}, {"dim", data.dim}};
  if (weibull) {
    auto fit = hiap::fit_weibull(r2, data.dim);
    j["alpha"] = fit.alpha;
    j["half_dim"] = fit.half_dim;
    j["ks_stat"] = fit.ks_stat;
    j["ks_p"] = hiap::ks_p_value(fit.ks_stat, static_cast<double>(r2.size()));
  } else {
    auto fit = hiap::fit_gamma_radial(r2, data.dim);
    j["sigma"] = fit.sigma;
    j["ks_stat"] = fit.ks_stat;
    j["ks_p"] = hiap::ks_p_value(fit.ks_stat, static_cast<double>(r2.size()));
  }
  write_json(a.out, j);
}

struct RecurrenceArgs {
  std::string out;
  std::size_t dim = 5;
  std::size_t m = 100;
  int h_max = 3;
  std::size_t reps = 10000;
  std::string shape = "gaussian";
  std::uint64_t seed = 0;
  std::size_t batches = 10;
  int threads = 1;
};

void run_stats_recurrence(const RecurrenceArgs& a) {
  auto rows = hiap::recurrence_check(a.dim, a.m, a.h_max, a.reps,
                                     hiap::shape_from_string(a.shape), a.seed,
                                     a.batches, a.threads);
  std::ostringstream csv;
  csv << "level,sigma_hat,sigma_err,omega_hat,omega_err\n";
  for (const auto& r : rows)
    csv << r.level << "," << hiap::format_double(r.sigma_hat) << ","
        << hiap::format_double(r.sigma_err) << ","
        << hiap::format_double(r.omega_hat) << ","
        << hiap::format_double(r.omega_err) << "\n";
  hiap::write_text_file(a.out, csv.str());

  // predicted next-level shape factors from the recurrence
  double mexp = std::pow(static_cast<double>(a.m),
                         1.0 - 2.0 / static_cast<double>(a.dim));
  json pred = json::array();
  for (std::size_t h = 0; h + 1 < rows.size(); ++h)
    pred.push_back(1.0 + rows[h].omega_hat / mexp);
  json j;
  j["config"] = {{"dim", a.dim},     {"m", a.m},       {"h_max", a.h_max},
                 {"reps", a.reps},   {"shape", a.shape},
                 {"seed", a.seed},   {"batches", a.batches}};
  j["predicted_next_omega"] = pred;
  write_json(a.out + ".json", j);
}

struct Fig4Args {
  std::string out;
  std::size_t dim = 2;
  std::size_t total = 100000;
  std::string levels = "1,2,3";
  std::size_t reps = 1000;
  std::string shape = "gaussian";
  std::uint64_t seed = 0;
  int threads = 1;
};

void run_stats_fig4(const Fig4Args& a) {
  auto levels = parse_int_list(a.levels);
  if (levels.empty()) throw hiap::input_error("empty level list");
  hiap::ClusterShape shape = hiap::shape_from_string(a.shape);

  // Depth-h runs use h selection stages over groups of M = N^{1/h}, so the
  // total sample count stays (approximately) fixed across levels.
  std::ostringstream csv;
  csv << "h,r2\n";
  std::vector<std::vector<double>> samples;
  std::vector<std::size_t> group_sizes;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    int h = levels[li];
    if (h < 1) throw hiap::input_error("levels must be >= 1");
    auto m = static_cast<std::size_t>(std::llround(
        std::pow(static_cast<double>(a.total), 1.0 / h)));
    m = std::max<std::size_t>(m, 2);
    group_sizes.push_back(m);
    auto r2 = hiap::exemplar_radii(a.dim, shape, m, h, a.reps,
                                   hiap::derive_seed(a.seed, li), a.threads);
    for (double x : r2) csv << h << "," << hiap::format_double(x) << "\n";
    samples.push_back(std::move(r2));
  }
  hiap::write_text_file(a.out, csv.str());

  json per_level = json::array();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    auto fit = hiap::fit_weibull(samples[li], a.dim);
    per_level.push_back({{"h", levels[li]},
                         {"alpha", fit.alpha},
                         {"ks_stat", fit.ks_stat}});
  }
  // Raw KS compares absolute radial laws; the rescaled variant divides by
  // each set's mean first, testing the universality claim "up to rescaling".
  json ratios = json::array();
  json ks_p = json::array();
  json ks_p_rescaled = json::array();
  auto normalized = [](const std::vector<double>& v) {
    double m = std::accumulate(v.begin(), v.end(), 0.0) /
               static_cast<double>(v.size());
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / m;
    return out;
  };
  for (std::size_t li = 0; li + 1 < levels.size(); ++li) {
    double a0 = per_level[li]["alpha"].get<double>();
    double a1 = per_level[li + 1]["alpha"].get<double>();
    ratios.push_back(a1 / a0);
    ks_p.push_back(hiap::ks_two_sample_p_value(samples[li], samples[li + 1]));
    ks_p_rescaled.push_back(hiap::ks_two_sample_p_value(
        normalized(samples[li]), normalized(samples[li + 1])));
  }
  json j;
  j["config"] = {{"dim", a.dim},   {"total", a.total},
                 {"levels", a.levels}, {"reps", a.reps},
                 {"shape", a.shape},   {"seed", a.seed}};
  j["group_sizes"] = group_sizes;
  j["fits"] = per_level;
  j["alpha_ratios"] = ratios;
  j["ks_p_adjacent"] = ks_p;
  j["ks_p_adjacent_rescaled"] = ks_p_rescaled;
  write_json(a.out + ".json", j);
}

// ------------------------------------------------------------ rap-scan ----

struct RapArgs {
  std::string input, out_prefix, centers;
  double s_min = 0.0, s_max = 0.0;
  std::size_t s_points = 10;
  int levels = 2;
  std::size_t subset_size = 300;
  std::string omega = "unity";
  std::uint64_t seed = 0;
  int threads = 1;
  double damping = 0.5;
  int max_iter = 1000;
  bool weighted = false;
};

void run_rap_scan(const RapArgs& a) {
  hiap::Dataset data = hiap::read_points_csv(a.input, a.weighted);
  if (!(a.s_min > 0.0) || !(a.s_max > a.s_min) || a.s_points < 2)
    throw hiap::input_error("need 0 < --s-min < --s-max and --s-points >= 2");

  hiap::RapScanConfig cfg;
  cfg.levels = a.levels;
  cfg.subset_size = a.subset_size;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.solver.damping = a.damping;
  cfg.solver.max_iterations = a.max_iter;
  cfg.omega_first_level = parse_omega(a.omega, data.dim, data);

  double ratio = std::pow(a.s_max / a.s_min,
                          1.0 / static_cast<double>(a.s_points - 1));
  double s = a.s_min;
  for (std::size_t i = 0; i < a.s_points; ++i, s *= ratio)
    cfg.s_grid.push_back(s);

  if (!a.centers.empty()) {
    hiap::Dataset c = hiap::read_points_csv(a.centers, false);
    if (c.dim != data.dim)
      throw hiap::input_error("centers dimension mismatch");
    cfg.true_centers = dataset_points(c);
  }

  auto res = hiap::rap_scan(data, cfg);

  std::ostringstream csv;
  csv << "s,level,n_clusters,mean_clusters,mean_error,count_variance,"
         "penalty_used\n";
  for (std::size_t si = 0; si < res.s_grid.size(); ++si)
    for (const auto& rec : res.records[si])
      csv << hiap::format_double(res.s_grid[si]) << "," << rec.level << ","
          << rec.cluster_count << "," << hiap::format_double(rec.mean_clusters)
          << "," << hiap::format_double(rec.mean_error) << ","
          << hiap::format_double(rec.count_variance) << ","
          << hiap::format_double(rec.penalty_used) << "\n";
  hiap::write_text_file(a.out_prefix + "_scan.csv", csv.str());

  json j;
  j["config"] = {{"input", a.input},         {"s_min", a.s_min},
                 {"s_max", a.s_max},         {"s_points", a.s_points},
                 {"levels", a.levels},       {"subset_size", a.subset_size},
                 {"omega", a.omega},         {"omega_value", cfg.omega_first_level.omega},
                 {"seed", a.seed},           {"solver", solver_json(cfg.solver)}};
  j["detected_s_star"] =
      res.detected_s_star ? json(*res.detected_s_star) : json();
  j["detected_n_star"] =
      res.detected_n_star ? json(*res.detected_n_star) : json();
  j["diagnostics"] = res.diagnostics;
  write_json(a.out_prefix + "_summary.json", j);

  if (!res.detected_s_star) soft_exit_code = kExitNoPlateau;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exemplar-based clustering toolkit: AP, SCAP, WAP, Hi-AP, RAP"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML-style file");

  // gen
  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a synthetic mixture");
  cmd_gen->add_option("--out", gen.out, "Output CSV path")->required();
  cmd_gen->add_option("--n-star", gen.n_star, "Number of clusters");
  cmd_gen->add_option("--dim", gen.dim, "Dimension")->required();
  cmd_gen->add_option("--per-cluster", gen.per_cluster, "Points per cluster");
  cmd_gen->add_option("--total", gen.total, "Total points (alternative)");
  cmd_gen->add_option("--eta", gen.eta, "Separability target");
  cmd_gen->add_option("--variance", gen.variance, "Cluster variance E|r-c|^2");
  cmd_gen->add_option("--shape", gen.shape,
                      "gaussian|l2|l1|weibull cluster shape");
  cmd_gen->add_option("--seed", gen.seed, "PRNG seed");
  cmd_gen->callback([&] { run_gen(gen); });

  // cluster
  ClusterArgs cl;
  auto* cmd_cluster = app.add_subcommand("cluster", "Run a clustering");
  cmd_cluster->require_subcommand(1);
  std::vector<CLI::App*> algos;
  auto* cl_ap = cmd_cluster->add_subcommand("ap", "Plain affinity propagation");
  auto* cl_scap = cmd_cluster->add_subcommand("scap", "Soft-constraint AP");
  auto* cl_wap = cmd_cluster->add_subcommand("wap", "Weighted AP");
  auto* cl_hiap = cmd_cluster->add_subcommand("hiap", "Hierarchical AP");
  for (auto* c : {cl_ap, cl_scap, cl_wap, cl_hiap}) {
    c->add_option("--input", cl.input, "Points CSV")->required();
    c->add_option("--out-prefix", cl.out_prefix, "Output path prefix")
        ->required();
    c->add_flag("--weighted", cl.weighted, "Input has a weight column");
    c->add_option("--damping", cl.damping, "Message damping");
    c->add_option("--max-iter", cl.max_iter, "Iteration cap");
    algos.push_back(c);
  }
  for (auto* c : {cl_ap, cl_scap, cl_wap})
    c->add_option("--s", cl.s, "Exemplar penalty (preference -s)")->required();
  cl_scap->add_option("--q", cl.q, "Soft-constraint charge")->required();
  cl_hiap->add_option("--levels", cl.levels, "Hierarchy depth h")->required();
  cl_hiap->add_option("--cap", cl.cap, "Target exemplars per clustering K");
  cl_hiap->add_option("--branching", cl.branching, "Branching override");
  cl_hiap->add_option("--seed", cl.seed, "Shuffle seed");
  cl_hiap->add_option("--s-schedule", cl.s_schedule,
                      "Comma list s0,...,sh (root to leaves)");
  cl_hiap->add_flag("--nearest-reassign", cl.nearest_reassign,
                    "Reassign points to nearest top exemplar");
  cl_hiap->add_option("--threads", cl.threads, "Worker threads");
  cl_ap->callback([&] { run_cluster_flat(cl, "ap"); });
  cl_scap->callback([&] { run_cluster_flat(cl, "scap"); });
  cl_wap->callback([&] { run_cluster_flat(cl, "wap"); });
  cl_hiap->callback([&] { run_cluster_hiap(cl); });

  // bench
  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Complexity benchmark");
  cmd_bench->add_option("--out", bench.out, "Output CSV path")->required();
  cmd_bench->add_option("--dim", bench.dim, "Dimension");
  cmd_bench->add_option("--n", bench.n_list, "Comma list of N values");
  cmd_bench->add_option("--levels", bench.h_list, "Comma list of h values");
  cmd_bench->add_option("--cap", bench.cap, "Exemplar cap K");
  cmd_bench->add_option("--seed", bench.seed, "PRNG seed");
  cmd_bench->add_option("--s", bench.s, "Fixed penalty (default: bisect)");
  cmd_bench->add_option("--threads", bench.threads, "Worker threads");
  cmd_bench->callback([&] { run_bench(bench); });

  // stats
  auto* cmd_stats = app.add_subcommand("stats", "Statistics suite");
  cmd_stats->require_subcommand(1);

  RadialArgs radial;
  auto* st_radial = cmd_stats->add_subcommand(
      "radial", "Radial histogram of squared distances");
  st_radial->add_option("--input", radial.input, "Points CSV")->required();
  st_radial->add_option("--input2", radial.input2, "Second points CSV");
  st_radial->add_option("--origin", radial.origin, "auto or comma list");
  st_radial->add_option("--bins", radial.bins, "Bin count");
  st_radial->add_flag("--weighted", radial.weighted, "Weight column present");
  st_radial->add_option("--out", radial.out, "Output CSV path")->required();
  st_radial->callback([&] { run_stats_radial(radial, false); });

  RadialArgs klargs;
  auto* st_kl = cmd_stats->add_subcommand("kl", "KL divergence of two files");
  st_kl->add_option("--input", klargs.input, "Points CSV")->required();
  st_kl->add_option("--input2", klargs.input2, "Second points CSV")->required();
  st_kl->add_option("--origin", klargs.origin, "auto or comma list");
  st_kl->add_option("--bins", klargs.bins, "Bin count");
  st_kl->add_flag("--weighted", klargs.weighted, "Weight column present");
  st_kl->add_option("--out", klargs.out, "Output JSON path")->required();
  st_kl->callback([&] { run_stats_radial(klargs, true); });

  FitArgs fitw, fitg;
  auto* st_fitw = cmd_stats->add_subcommand("fit-weibull",
                                            "Weibull extreme-value fit");
  st_fitw->add_option("--input", fitw.input, "Points CSV")->required();
  st_fitw->add_option("--origin", fitw.origin, "auto or comma list");
  st_fitw->add_flag("--weighted", fitw.weighted, "Weight column present");
  st_fitw->add_option("--out", fitw.out, "Output JSON path")->required();
  st_fitw->callback([&] { run_stats_fit(fitw, true); });

  auto* st_fitg = cmd_stats->add_subcommand("fit-gamma",
                                            "Center-of-mass gamma fit");
  st_fitg->add_option("--input", fitg.input, "Points CSV")->required();
  st_fitg->add_option("--origin", fitg.origin, "auto or comma list");
  st_fitg->add_flag("--weighted", fitg.weighted, "Weight column present");
  st_fitg->add_option("--out", fitg.out, "Output JSON path")->required();
  st_fitg->callback([&] { run_stats_fit(fitg, false); });

  RecurrenceArgs rec;
  auto* st_rec = cmd_stats->add_subcommand("recurrence",
                                           "Finite-size recurrence check");
  st_rec->add_option("--dim", rec.dim, "Dimension (> 2)")->required();
  st_rec->add_option("--m", rec.m, "Selection group size M");
  st_rec->add_option("--h-max", rec.h_max, "Deepest level");
  st_rec->add_option("--reps", rec.reps, "Monte Carlo repetitions");
  st_rec->add_option("--shape", rec.shape, "Starting shape");
  st_rec->add_option("--seed", rec.seed, "PRNG seed");
  st_rec->add_option("--batches", rec.batches, "Error-bar batches");
  st_rec->add_option("--threads", rec.threads, "Worker threads");
  st_rec->add_option("--out", rec.out, "Output CSV path")->required();
  st_rec->callback([&] { run_stats_recurrence(rec); });

  Fig4Args fig4;
  auto* st_fig4 = cmd_stats->add_subcommand(
      "fig4", "Exemplar radial law across hierarchy levels");
  st_fig4->add_option("--dim", fig4.dim, "Dimension")->required();
  st_fig4->add_option("--total", fig4.total, "Total samples per run");
  st_fig4->add_option("--levels", fig4.levels, "Comma list of depths");
  st_fig4->add_option("--reps", fig4.reps, "Monte Carlo repetitions");
  st_fig4->add_option("--shape", fig4.shape, "Cluster shape");
  st_fig4->add_option("--seed", fig4.seed, "PRNG seed");
  st_fig4->add_option("--threads", fig4.threads, "Worker threads");
  st_fig4->add_option("--out", fig4.out, "Output CSV path")->required();
  st_fig4->callback([&] { run_stats_fig4(fig4); });

  // rap-scan
  RapArgs rap;
  auto* cmd_rap = app.add_subcommand("rap-scan",
                                     "Renormalized penalty scan for n*");
  cmd_rap->add_option("--input", rap.input, "Points CSV")->required();
  cmd_rap->add_option("--out-prefix", rap.out_prefix, "Output path prefix")
      ->required();
  cmd_rap->add_option("--centers", rap.centers, "True centers CSV (optional)");
  cmd_rap->add_option("--s-min", rap.s_min, "Grid start")->required();
  cmd_rap->add_option("--s-max", rap.s_max, "Grid end")->required();
  cmd_rap->add_option("--s-points", rap.s_points, "Grid size");
  cmd_rap->add_option("--levels", rap.levels, "Hierarchy levels");
  cmd_rap->add_option("--subset-size", rap.subset_size, "Points per run");
  cmd_rap->add_option("--omega", rap.omega,
                      "auto|unity|gaussian|l1|l2|<value>");
  cmd_rap->add_option("--seed", rap.seed, "PRNG seed");
  cmd_rap->add_option("--threads", rap.threads, "Worker threads");
  cmd_rap->add_option("--damping", rap.damping, "Message damping");
  cmd_rap->add_option("--max-iter", rap.max_iter, "Iteration cap");
  cmd_rap->add_flag("--weighted", rap.weighted, "Weight column present");
  cmd_rap->callback([&] { run_rap_scan(rap); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const hiap::numeric_divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const hiap::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hiap::size_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hiap::generation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return soft_exit_code;
}
