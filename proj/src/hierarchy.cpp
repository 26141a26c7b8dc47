#include "hiap/hierarchy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace hiap {

namespace {

// b^e with saturation at `limit` to avoid overflow.
std::size_t ipow_capped(std::size_t b, int e, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > limit / std::max<std::size_t>(b, 1)) return limit + 1;
    r *= b;
  }
  return r;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

}  // namespace

void HiApPlan::validate() const {
  if (n < 1) throw input_error("plan: N must be >= 1");
  if (cap < 1 || cap > n) throw input_error("plan: need 1 <= K <= N");
  if (depth < 0) throw input_error("plan: depth must be >= 0");
  if (branching < 1) throw input_error("plan: branching must be >= 1");
  if (subset_size < 1) throw input_error("plan: empty leaf subsets");
}

HiApPlan plan(std::size_t n, std::size_t cap, int depth) {
  if (n < 1) throw input_error("plan: N must be >= 1");
  if (cap < 1) throw input_error("plan: K must be >= 1");
  if (cap > n) throw input_error("plan: K exceeds N");
  if (depth < 0) throw input_error("plan: depth must be >= 0");

  HiApPlan p;
  p.n = n;
  p.cap = cap;
  p.depth = depth;

  // smallest b with K * b^(h+1) >= N
  double guess = std::pow(static_cast<double>(n) / cap,
                          1.0 / (depth + 1));
  std::size_t b = static_cast<std::size_t>(
      std::max(1.0, std::floor(guess) - 1.0));
  while (ipow_capped(b, depth + 1, n) * cap < n) ++b;
  p.branching = b;

  std::size_t leaves = ipow_capped(b, depth, n);
  if (leaves > n) throw input_error("plan: empty leaf subsets");
  p.subset_size = n / leaves;

  double h = static_cast<double>(depth);
  p.predicted_cost = std::pow(static_cast<double>(cap), h / (h + 1.0)) *
                     std::pow(static_cast<double>(n), (h + 2.0) / (h + 1.0));
  p.validate();
  return p;
}

std::pair<ClusteringResult, std::vector<LevelReport>> cluster_hierarchical(
    const Dataset& data, const HiApPlan& p,
    const std::vector<double>& s_schedule, const SolverConfig& cfg,
    std::uint64_t seed, const HierarchyOptions& opts) {
  data.validate();
  p.validate();
  cfg.validate();
  if (data.size() != p.n) throw input_error("plan does not match dataset");
  if (s_schedule.size() != static_cast<std::size_t>(p.depth) + 1)
    throw input_error("s_schedule length must be depth + 1");
  for (double s : s_schedule)
    if (!(s > 0.0)) throw input_error("preferences must be positive");

  std::size_t n = data.size();
  std::vector<LevelReport> reports;

  if (p.depth == 0) {
    double t0 = now_seconds();
    SimilarityMatrix sim = build_similarity(data, s_schedule[0]);
    ClusteringResult res = solve(sim, cfg);
    LevelReport rep;
    rep.level = 0;
    rep.clusterings_run = 1;
    rep.points_in = n;
    rep.exemplars_out = res.exemplars.size();
    rep.wall_time = now_seconds() - t0;
    rep.operations_estimate = static_cast<double>(n) * n * res.iterations_run;
    reports.push_back(rep);
    return {std::move(res), std::move(reports)};
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t leaves = ipow_capped(p.branching, p.depth, n);
  if (leaves > n) throw input_error("plan: empty leaf subsets");

  // Subset boundaries: base size N/leaves, remainder one-per-subset from the
  // front.
  std::size_t base = n / leaves;
  std::size_t rem = n % leaves;
  std::vector<std::size_t> offsets(leaves + 1, 0);
  for (std::size_t j = 0; j < leaves; ++j)
    offsets[j + 1] = offsets[j] + base + (j < rem ? 1 : 0);

  std::vector<std::vector<WeightedExemplar>> groups(leaves);
  std::vector<std::size_t> rep_of(n);  // current representative per point
  std::vector<int> run_iters_leaf(leaves);
  std::vector<double> run_ops_leaf(leaves);
  bool all_converged = true;
  int max_iterations_run = 0;

  // --- leaf level -----------------------------------------------------
  double t0 = now_seconds();
  std::vector<bool> leaf_conv(leaves, true);
  parallel_for(leaves, opts.threads, [&](std::size_t j) {
    std::size_t lo = offsets[j], hi = offsets[j + 1];
    std::vector<WeightedExemplar> chunk(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t src = order[i];
      auto pt = data.point(src);
      chunk[i - lo].position.assign(pt.begin(), pt.end());
      chunk[i - lo].weight = data.weights[src];
      chunk[i - lo].origin = src;
    }
    SimilarityMatrix sim =
        build_weighted_similarity(chunk, s_schedule[p.depth]);
    ClusteringResult res = solve(sim, cfg);
    for (std::size_t i = lo; i < hi; ++i)
      rep_of[chunk[i - lo].origin] = chunk[res.assignment[i - lo]].origin;
    auto agg = aggregate(res, chunk);
    run_iters_leaf[j] = res.iterations_run;
    run_ops_leaf[j] = static_cast<double>(hi - lo) * (hi - lo) *
                      res.iterations_run;
    leaf_conv[j] = res.converged;
    groups[j] = std::move(agg);
  });
  {
    LevelReport rep;
    rep.level = p.depth;
    rep.clusterings_run = leaves;
    rep.points_in = n;
    for (const auto& g : groups) rep.exemplars_out += g.size();
    rep.wall_time = now_seconds() - t0;
    rep.operations_estimate =
        std::accumulate(run_ops_leaf.begin(), run_ops_leaf.end(), 0.0);
    max_iterations_run = *std::max_element(run_iters_leaf.begin(),
                                           run_iters_leaf.end());
    for (bool c : leaf_conv) all_converged = all_converged && c;
    reports.push_back(rep);
  }

  // --- interior levels ------------------------------------------------
  for (int level = p.depth - 1; level >= 0; --level) {
    t0 = now_seconds();
    std::size_t runs = (groups.size() + p.branching - 1) / p.branching;
    std::vector<std::vector<WeightedExemplar>> next(runs);
    std::vector<std::unordered_map<std::size_t, std::size_t>> redirects(runs);
    std::vector<int> run_iters(runs);
    std::vector<double> run_ops(runs);
    std::vector<bool> run_conv(runs, true);
    std::size_t points_in = 0;
    for (const auto& g : groups) points_in += g.size();

    parallel_for(runs, opts.threads, [&](std::size_t r) {
      std::vector<WeightedExemplar> chunk;
      for (std::size_t j = r * p.branching;
           j < std::min((r + 1) * p.branching, groups.size()); ++j)
        chunk.insert(chunk.end(), groups[j].begin(), groups[j].end());
      SimilarityMatrix sim = build_weighted_similarity(chunk, s_schedule[level]);
      ClusteringResult res = solve(sim, cfg);
      for (std::size_t i = 0; i < chunk.size(); ++i)
        redirects[r][chunk[i].origin] = chunk[res.assignment[i]].origin;
      auto agg = aggregate(res, chunk);
      run_iters[r] = res.iterations_run;
      run_ops[r] = static_cast<double>(chunk.size()) * chunk.size() *
                   res.iterations_run;
      run_conv[r] = res.converged;
      next[r] = std::move(agg);
    });

    std::unordered_map<std::size_t, std::size_t> redirect;
    for (auto& m : redirects) redirect.merge(m);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = redirect.find(rep_of[i]);
      if (it != redirect.end()) rep_of[i] = it->second;
    }

    LevelReport rep;
    rep.level = level;
    rep.clusterings_run = runs;
    rep.points_in = points_in;
    for (const auto& g : next) rep.exemplars_out += g.size();
    rep.wall_time = now_seconds() - t0;
    rep.operations_estimate =
        std::accumulate(run_ops.begin(), run_ops.end(), 0.0);
    max_iterations_run = std::max(
        max_iterations_run, *std::max_element(run_iters.begin(),
                                              run_iters.end()));
    for (bool c : run_conv) all_converged = all_converged && c;
    reports.push_back(rep);
    groups = std::move(next);
  }

  // --- final assignment over the original points ----------------------
  ClusteringResult result;
  result.assignment = std::move(rep_of);
  result.converged = all_converged;
  result.iterations_run = max_iterations_run;

  std::vector<std::size_t> exemplars;
  for (const auto& g : groups)
    for (const auto& e : g) exemplars.push_back(e.origin);
  std::sort(exemplars.begin(), exemplars.end());

  if (opts.nearest_reassignment) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = exemplars.front();
      for (std::size_t e : exemplars) {
        double d2 = squared_distance(data.point(i), data.point(e));
        if (d2 < best) {
          best = d2;
          arg = e;
        }
      }
      result.assignment[i] = arg;
    }
    for (std::size_t e : exemplars) result.assignment[e] = e;
  }

  double dist = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    dist += data.weights[i] *
            squared_distance(data.point(i), data.point(result.assignment[i]));
  result.distortion = dist;
  result.energy = dist + static_cast<double>(exemplars.size()) * s_schedule[0];
  result.exemplars = std::move(exemplars);
  return {std::move(result), std::move(reports)};
}

double find_leaf_preference(const Dataset& data, const HiApPlan& p,
                            const SolverConfig& cfg, std::uint64_t seed) {
  data.validate();
  p.validate();
  std::size_t n = data.size();
  std::size_t m = std::min(p.subset_size, n);
  if (m < 2) throw input_error("pilot subset too small");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(m);

  std::vector<double> coords(m * data.dim);
  std::vector<double> weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto pt = data.point(order[i]);
    std::copy(pt.begin(), pt.end(), coords.begin() + i * data.dim);
    weights[i] = data.weights[order[i]];
  }
  Dataset pilot = Dataset::from_points(data.dim, std::move(coords),
                                       std::move(weights));

  auto count_at = [&](double s) {
    SimilarityMatrix sim = build_similarity(pilot, s);
    return solve(sim, cfg).exemplars.size();
  };

  // scale guess: mean pairwise squared distance on the pilot
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j, ++pairs)
      acc += squared_distance(pilot.point(i), pilot.point(j));
  double s_mid = pairs > 0 ? acc / pairs : 1.0;
  if (!(s_mid > 0.0)) s_mid = 1.0;

  double lo = s_mid, hi = s_mid;
  // grow hi until the count drops under the cap
  for (int it = 0; it < 60 && count_at(hi) > p.cap; ++it) hi *= 4.0;
  if (count_at(hi) > p.cap)
    throw generation_error("could not reach the exemplar cap");
  // shrink lo until the count exceeds the cap (or give up and accept hi)
  for (int it = 0; it < 60 && count_at(lo) <= p.cap; ++it) lo /= 4.0;
  if (count_at(lo) <= p.cap) return lo;

  for (int it = 0; it < 40; ++it) {
    double mid = std::sqrt(lo * hi);
    if (count_at(mid) <= p.cap)
      hi = mid;
    else
      lo = mid;
    if (hi / lo < 1.001) break;
  }
  return hi;
}

}  // namespace hiap
