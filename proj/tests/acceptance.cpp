// Acceptance gate: end-to-end checks of the solver, the weighted and
// hierarchical layers, the statistics suite, the renormalized scan, and the
// CLI. Prints one PASS/FAIL line per criterion; exits nonzero on any
// failure. argv[1] is the path to the CLI binary; an optional argv[2]
// restricts the run to a single criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hiap/hierarchy.hpp"
#include "hiap/rap.hpp"

using namespace hiap;

namespace {

std::string g_cli;

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

Dataset uniform_square(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(2 * n);
  for (auto& c : coords) c = u(rng);
  return Dataset::from_points(2, std::move(coords));
}

// ---- 1. exact and near-exact agreement with brute force ------------------

bool criterion1(std::string& detail) {
  int exact = 0;
  for (int i = 1; i <= 100; ++i) {
    MixtureSpec spec;
    spec.dim = 2;
    spec.n_star = 2;
    spec.points_per_cluster = 3 + (i % 2);
    double v = 0.05;
    spec.variances.assign(spec.n_star, v);
    double eta = 1.2 + 0.3 * (i % 7);
    spec.centers = place_centers(spec.n_star, 2, eta, derive_seed(10, i), v);
    auto [data, truth] = generate(spec, derive_seed(20, i));
    const double s_opts[4] = {0.1, 0.3, 1.0, 2.5};
    auto sim = build_similarity(data, s_opts[i % 4]);
    auto ref = brute_force_minimize(sim);
    auto res = solve(sim, {});
    if (res.energy <= ref.energy * (1.0 + 1e-9)) ++exact;
  }

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<int> sz(2, 8);
  int near = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int n = sz(rng);
    std::vector<double> coords;
    for (int j = 0; j < 2 * n; ++j) coords.push_back(coord(rng));
    auto data = Dataset::from_points(2, std::move(coords));
    auto sim = build_similarity(data, 0.1 + 0.2 * (rep % 5));
    auto ref = brute_force_minimize(sim);
    auto res = solve(sim, {});
    if (res.energy <= ref.energy * 1.05 + 1e-12) ++near;
  }

  std::ostringstream os;
  os << "separated exact " << exact << "/100, random within 1.05x " << near
     << "/100";
  detail = os.str();
  return exact == 100 && near >= 95;
}

// ---- 2. duplicate collapse vs weighted dedup -----------------------------

bool criterion2(std::string& detail) {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> jitter(0.0, 0.3);
  int pass = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t k = 2 + (rep % 3);
    const double centers[3][2] = {{0.0, 0.0}, {8.0, 0.0}, {0.0, 8.0}};
    std::vector<double> base;
    for (std::size_t i = 0; i < 12; ++i) {
      base.push_back(centers[i / 4][0] + jitter(rng));
      base.push_back(centers[i / 4][1] + jitter(rng));
    }
    std::vector<double> dup;
    for (std::size_t c = 0; c < k; ++c)
      dup.insert(dup.end(), base.begin(), base.end());
    auto expanded = Dataset::from_points(2, dup);
    double s = 5.0;
    // Exact duplicates destabilize message passing at light damping.
    SolverConfig cfg;
    cfg.damping = 0.9;
    // The penalty scales with the dataset size: the k-fold expanded run at
    // k*s corresponds to the deduplicated weighted run at s.
    auto res_dup = solve(build_similarity(expanded, k * s), cfg);
    auto weighted =
        Dataset::from_points(2, base, std::vector<double>(12, double(k)));
    auto pts = to_weighted(weighted);
    auto res_w =
        solve(build_weighted_similarity({pts.data(), pts.size()}, s), cfg);

    std::vector<std::vector<double>> pd, pw;
    for (auto e : res_dup.exemplars) {
      auto p = expanded.point(e);
      pd.push_back({p.begin(), p.end()});
    }
    for (auto e : res_w.exemplars) {
      auto p = weighted.point(e);
      pw.push_back({p.begin(), p.end()});
    }
    std::sort(pd.begin(), pd.end());
    pd.erase(std::unique(pd.begin(), pd.end()), pd.end());
    std::sort(pw.begin(), pw.end());
    if (pd == pw &&
        std::abs(res_dup.energy - res_w.energy) <=
            1e-9 * std::abs(res_w.energy))
      ++pass;
  }
  std::ostringstream os;
  os << pass << "/50 instances identical";
  detail = os.str();
  return pass == 50;
}

// ---- 3. operations-estimate scaling --------------------------------------

bool criterion3(std::string& detail) {
  double slopes[2] = {0.0, 0.0};
  for (int h : {0, 1}) {
    std::vector<double> lx, ly;
    // The flat grid stops at 2^13: a dense 2^16 similarity matrix would
    // need tens of GB. The hierarchical grid runs the full range.
    for (int p = 10; p <= (h == 0 ? 13 : 16); ++p) {
      std::size_t n = std::size_t(1) << p;
      auto data = uniform_square(n, derive_seed(5, p));
      auto pl = plan(n, 30, h);
      std::vector<double> sched(h + 1, 0.02);
      // A fixed sweep budget isolates the per-iteration message cost the
      // scaling law describes; convergence time on unstructured uniform
      // data drifts with N and would contaminate the fit.
      SolverConfig scfg;
      scfg.max_iterations = 50;
      scfg.stability_window = 50;
      auto [res, reports] = cluster_hierarchical(data, pl, sched, scfg, 7);
      double ops = 0;
      for (auto& r : reports) ops += r.operations_estimate;
      lx.push_back(std::log(double(n)));
      ly.push_back(std::log(ops));
    }
    slopes[h] = fit_slope(lx, ly);
  }
  std::ostringstream os;
  os << "slope(h=0) " << slopes[0] << ", slope(h=1) " << slopes[1];
  detail = os.str();
  return std::abs(slopes[0] - 2.0) <= 0.2 && std::abs(slopes[1] - 1.5) <= 0.2;
}

// ---- 4. information loss across hierarchy depth --------------------------

void rescale_mean(std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= double(v.size());
  for (double& x : v) x /= m;
}

bool criterion4(std::string& detail) {
  std::size_t N = 100000;
  std::size_t M3 = std::llround(std::pow(double(N), 1.0 / 3.0));
  std::ostringstream os;
  bool ok = true;
  // The depth comparison is scale-free: each level contracts the law by a
  // known factor, so the h=1 and h=3 samples are compared after dividing
  // out their means.
  for (std::size_t d : {3, 4}) {
    auto a = exemplar_radii(d, ClusterShape::gaussian, N, 1, 1000,
                            derive_seed(40, d), 1);
    auto b = exemplar_radii(d, ClusterShape::gaussian, M3, 3, 1000,
                            derive_seed(41, d), 1);
    rescale_mean(a);
    rescale_mean(b);
    double p = ks_two_sample_p_value(a, b);
    os << "d=" << d << " KS p " << p << "; ";
    ok = ok && p >= 0.01;
  }
  // d=2: the radial law stays exponential and its rate halves per level.
  const std::size_t Ms[3] = {N, 316, M3};
  double alpha[3];
  for (int h = 1; h <= 3; ++h) {
    auto r = exemplar_radii(2, ClusterShape::gaussian, Ms[h - 1], h, 2000,
                            derive_seed(42, h), 1);
    alpha[h - 1] = fit_weibull(r, 2).alpha;
  }
  for (int h = 0; h < 2; ++h) {
    double ratio = alpha[h + 1] / alpha[h];
    os << "d=2 rate ratio " << ratio << "; ";
    ok = ok && std::abs(ratio - 0.5) <= 0.1;
  }
  detail = os.str();
  return ok;
}

// ---- 5. finite-size recurrence -------------------------------------------

bool criterion5(std::string& detail) {
  std::size_t M = 100;
  std::size_t d = 5;
  double Mfac = std::pow(double(M), 1.0 - 2.0 / double(d));
  std::ostringstream os;
  bool ok = true;
  auto rows = recurrence_check(d, M, 2, 10000, ClusterShape::gaussian, 31, 10, 1);
  for (int h = 0; h < 2; ++h) {
    double pred = 1.0 + rows[h].omega_hat / Mfac;
    double se = std::sqrt(rows[h + 1].omega_err * rows[h + 1].omega_err +
                          std::pow(rows[h].omega_err / Mfac, 2));
    double dev = std::abs(rows[h + 1].omega_hat - pred) / se;
    os << "omega " << h << "->" << h + 1 << " dev " << dev << " se; ";
    ok = ok && dev <= 3.0;
  }
  // Weibull start: the asymptotic variance contraction per level is
  // M^{-2/d}, with the finite-size correction 1 + 1/M^{1-2/d} on top.
  auto wrows =
      recurrence_check(d, M, 1, 10000, ClusterShape::weibull_radial, 32, 10, 1);
  double scale = std::pow(double(M), 2.0 / double(d));
  double obs = wrows[1].sigma_hat * scale;
  double se = wrows[1].sigma_err * scale;
  double pred = 1.0 + 1.0 / Mfac;
  double dev = std::abs(obs - pred) / se;
  os << "weibull sigma dev " << dev << " se";
  detail = os.str();
  return ok && dev <= 3.0;
}

// ---- 6. shape-factor estimator vs closed forms ---------------------------

bool criterion6(std::string& detail) {
  const ClusterShape shapes[4] = {
      ClusterShape::gaussian, ClusterShape::uniform_l2_ball,
      ClusterShape::uniform_l1_ball, ClusterShape::weibull_radial};
  const std::size_t dims[4] = {2, 3, 5, 10};
  double worst = 0.0;
  for (auto sh : shapes)
    for (auto d : dims) {
      double target = sh == ClusterShape::weibull_radial
                          ? 1.0
                          : closed_form_shape_factor(sh, d).omega;
      double acc = 0.0;
      const int reps = 25;
      for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 rng(derive_seed(600 + rep, d * 10 + int(sh)));
        std::vector<std::vector<double>> pts(10000, std::vector<double>(d));
        for (auto& p : pts) sample_cluster_point(sh, d, 1.0, rng, p.data());
        acc += estimate_shape_factor(pts).omega;
      }
      worst = std::max(worst, std::abs(acc / reps / target - 1.0));
    }
  std::ostringstream os;
  os << "worst cell relative error " << worst;
  detail = os.str();
  return worst <= 0.10;
}

// ---- 7. renormalized scan transition detection ---------------------------

struct ScanOutcome {
  bool detected = false;
  bool signatures = false;
};

ScanOutcome run_scan(double eta, unsigned seed, double omega_mult) {
  std::size_t n_star = 10, d = 5;
  MixtureSpec spec;
  spec.n_star = n_star;
  spec.dim = d;
  spec.shape = ClusterShape::uniform_l2_ball;
  spec.variances.assign(n_star, 1.0);
  spec.points_per_cluster = 300;
  spec.centers =
      place_centers(n_star, d, eta, derive_seed(seed, 99), 1.0, spec.shape);
  auto [data, truth] = generate(spec, seed);

  RapScanConfig cfg;
  for (double s = 2.0; s < 5000.0; s *= 1.7) cfg.s_grid.push_back(s);
  cfg.levels = 2;
  cfg.subset_size = 300;
  auto om = closed_form_shape_factor(spec.shape, d);
  om.omega *= omega_mult;
  cfg.omega_first_level = om;
  cfg.seed = seed;
  // Heavy damping keeps the coalescence regime from oscillating.
  cfg.solver.damping = 0.9;
  auto r = rap_scan(data, cfg);

  ScanOutcome out;
  out.detected = r.detected_n_star.value_or(0) == n_star;
  if (!out.detected) return out;

  // Phase signatures: deep in fragmentation the deeper level splinters more
  // (n2 >= n1 >= n*); past the transition the levels agree and the counts
  // only fall as the penalty grows.
  bool sig = r.records.front()[1].mean_clusters >=
                 r.records.front()[0].mean_clusters - 0.5 &&
             r.records.front()[0].mean_clusters >= double(n_star);
  double s_star = *r.detected_s_star;
  std::size_t prev1 = 0, prev2 = 0;
  bool first = true;
  for (std::size_t i = 0; i < r.s_grid.size(); ++i) {
    if (r.s_grid[i] < s_star) continue;
    std::size_t n1 = r.records[i][0].cluster_count;
    std::size_t n2 = r.records[i][1].cluster_count;
    std::size_t diff = n1 > n2 ? n1 - n2 : n2 - n1;
    if (diff > 1) sig = false;
    if (!first && (n1 > prev1 || n2 > prev2)) sig = false;
    prev1 = n1;
    prev2 = n2;
    first = false;
  }
  out.signatures = sig;
  return out;
}

bool criterion7(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  int detected_total = 0, control_total = 0;
  for (double eta : {2.13, 0.85}) {
    int good = 0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
      auto r = run_scan(eta, seed, 1.0);
      if (r.detected) ++detected_total;
      if (r.detected && r.signatures) ++good;
    }
    os << "eta " << eta << ": " << good << "/20; ";
    ok = ok && good >= 18;
  }
  // Negative control: a shape factor off by 3x must hurt detection.
  for (double eta : {2.13, 0.85})
    for (unsigned seed = 1; seed <= 20; ++seed)
      if (run_scan(eta, seed, 1.0 / 3.0).detected) ++control_total;
  os << "control " << control_total << "/40 vs " << detected_total << "/40";
  detail = os.str();
  return ok && control_total < detected_total;
}

// ---- 8. CLI reproducibility ----------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool same_file(const std::string& a, const std::string& b) {
  std::string ca = slurp(a), cb = slurp(b);
  return !ca.empty() && ca == cb;
}

int run_cmd(const std::string& args) {
  std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void shell(const std::string& cmd) {
  if (std::system(cmd.c_str()) != 0)
    std::fprintf(stderr, "command failed: %s\n", cmd.c_str());
}

bool criterion8(std::string& detail) {
  std::string dir = "acceptance_cli_tmp";
  shell("rm -rf " + dir + " && mkdir -p " + dir);
  auto p = [&](const std::string& name) { return dir + "/" + name; };
  bool ok = true;
  std::ostringstream os;

  // gen: identical seed, identical bytes (CSV and sidecar).
  for (int r = 1; r <= 2; ++r)
    ok = ok && run_cmd("gen --out " + p("g" + std::to_string(r) + ".csv") +
                       " --dim 2 --n-star 3 --per-cluster 60 --eta 2.2 "
                       "--variance 0.5 --seed 11") == 0;
  ok = ok && same_file(p("g1.csv"), p("g2.csv")) &&
       same_file(p("g1.csv.json"), p("g2.csv.json"));
  os << (ok ? "" : "gen mismatch; ");

  // flat clustering: byte-identical outputs.
  for (int r = 1; r <= 2; ++r)
    ok = ok && run_cmd("cluster ap --input " + p("g1.csv") + " --s 30 " +
                       "--out-prefix " + p("c" + std::to_string(r))) == 0;
  ok = ok && same_file(p("c1_assignment.csv"), p("c2_assignment.csv")) &&
       same_file(p("c1_exemplars.csv"), p("c2_exemplars.csv")) &&
       same_file(p("c1_summary.json"), p("c2_summary.json"));

  // hierarchical: byte-identical at one thread, identical clustering with
  // more threads (the summary carries wall times, so only the CSVs count).
  std::string hbase = "cluster hiap --input " + p("g1.csv") +
                      " --levels 1 --cap 10 --seed 3 --s-schedule 8,8";
  ok = ok && run_cmd(hbase + " --threads 1 --out-prefix " + p("h1")) == 0;
  ok = ok && run_cmd(hbase + " --threads 1 --out-prefix " + p("h2")) == 0;
  ok = ok && run_cmd(hbase + " --threads 3 --out-prefix " + p("h3")) == 0;
  ok = ok && same_file(p("h1_assignment.csv"), p("h2_assignment.csv")) &&
       same_file(p("h1_exemplars.csv"), p("h2_exemplars.csv")) &&
       same_file(p("h1_assignment.csv"), p("h3_assignment.csv")) &&
       same_file(p("h1_exemplars.csv"), p("h3_exemplars.csv"));

  // scan: byte-identical at one thread, identical records with more.
  std::string rbase = "rap-scan --input " + p("g1.csv") +
                      " --s-min 2 --s-max 40 --s-points 6 --levels 2 "
                      "--subset-size 60 --omega gaussian --seed 5";
  ok = ok && run_cmd(rbase + " --threads 1 --out-prefix " + p("r1")) == 0;
  ok = ok && run_cmd(rbase + " --threads 1 --out-prefix " + p("r2")) == 0;
  ok = ok && run_cmd(rbase + " --threads 2 --out-prefix " + p("r3")) == 0;
  ok = ok && same_file(p("r1_scan.csv"), p("r2_scan.csv")) &&
       same_file(p("r1_scan.csv"), p("r3_scan.csv"));

  shell("rm -rf " + dir);
  os << (ok ? "gen/cluster/hiap/rap-scan outputs reproducible"
            : "output mismatch");
  detail = os.str();
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> [criterion]\n");
    return 2;
  }
  g_cli = argv[1];
  int only = argc > 2 ? std::atoi(argv[2]) : 0;

  struct Entry {
    int id;
    const char* label;
    bool (*fn)(std::string&);
  };
  const Entry entries[] = {
      {1, "solver optimality vs brute force", criterion1},
      {2, "duplicate collapse equals weighted dedup", criterion2},
      {3, "operations scaling N^2 flat, N^1.5 one level", criterion3},
      {4, "radial law stable across depth", criterion4},
      {5, "finite-size recurrence", criterion5},
      {6, "shape-factor estimator vs closed forms", criterion6},
      {7, "scan detects the underlying cluster count", criterion7},
      {8, "CLI reproducibility", criterion8},
  };

  bool all = true;
  for (const auto& e : entries) {
    if (only && e.id != only) continue;
    std::string detail;
    bool pass = e.fn(detail);
    all = all && pass;
    std::printf("criterion %d (%s): %s — %s\n", e.id, e.label,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
