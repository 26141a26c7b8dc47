#include "hiap/ap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hiap {

void SolverConfig::validate() const {
  if (!(damping >= 0.0 && damping < 1.0))
    throw input_error("damping must be in [0,1)");
  if (max_iterations < 1) throw input_error("max_iterations must be >= 1");
  if (stability_window < 1 || stability_window > max_iterations)
    throw input_error("stability_window must be in [1, max_iterations]");
  if (std::isfinite(q) && q < 0.0)
    throw input_error("constraint charge q must be nonnegative");
}

namespace {

// Raw argmax extraction of eq. c_i = argmax_mu(S(i,mu) + a_{mu->i}),
// ties broken by smallest index.
std::vector<std::size_t> extract_assignment(const SimilarityMatrix& sim,
                                            const Matrix& avail) {
  std::size_t n = sim.size();
  std::vector<std::size_t> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = avail.row(i);
    std::size_t best = 0;
    double best_val = sim(i, 0) + arow[0];
    for (std::size_t mu = 1; mu < n; ++mu) {
      double v = sim(i, mu) + arow[mu];
      if (v > best_val) {
        best_val = v;
        best = mu;
      }
    }
    c[i] = best;
  }
  return c;
}

std::vector<std::size_t> self_pointers(const std::vector<std::size_t>& c) {
  std::vector<std::size_t> ex;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] == i) ex.push_back(i);
  return ex;
}

}  // namespace

ClusteringResult solve(const SimilarityMatrix& sim0, const SolverConfig& cfg) {
  sim0.validate();
  cfg.validate();
  std::size_t n = sim0.size();

  // Degenerate instances (e.g. a two-point cluster, where either member
  // works as exemplar) put the messages exactly on a decision boundary and
  // the updates oscillate forever. Following Frey-Dueck practice, break
  // ties with a tiny deterministic jitter; energies are still reported
  // against the unperturbed similarities.
  SimilarityMatrix sim = sim0;
  {
    std::mt19937_64 jrng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> g(0.0, 1.0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = 100.0 * std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        sim(i, k) += (eps * sim(i, k) + tiny) * g(jrng);
  }

  // R(i,mu) = r_{i->mu}; A(i,mu) = a_{mu->i}.
  Matrix resp(n, n, 0.0);
  Matrix avail(n, n, 0.0);
  std::vector<double> col_sum(n);  // sum_j max(0, r_{j->mu}) per column mu

  const double lambda = cfg.damping;
  const double keep = lambda;
  const double mix = 1.0 - lambda;
  const bool hard = cfg.hard_constraint();

  ClusteringResult out;
  std::vector<std::size_t> prev_exemplars;
  int stable = 0;
  int iter = 0;

  for (iter = 1; iter <= cfg.max_iterations; ++iter) {
    double checksum = 0.0;

    // Responsibilities: r_{i->mu} = S(i,mu) - max_{nu != mu}(a_{nu->i} + S(i,nu)).
    for (std::size_t i = 0; i < n; ++i) {
      const double* arow = avail.row(i);
      double m1 = -std::numeric_limits<double>::infinity();
      double m2 = m1;
      std::size_t arg1 = 0;
      for (std::size_t nu = 0; nu < n; ++nu) {
        double v = arow[nu] + sim(i, nu);
        if (v > m1) {
          m2 = m1;
          m1 = v;
          arg1 = nu;
        } else if (v > m2) {
          m2 = v;
        }
      }
      double* rrow = resp.row(i);
      if (n == 1) {
        // No competing candidate: the max over nu != mu is empty; keep r at 0.
        rrow[0] = 0.0;
        continue;
      }
      for (std::size_t mu = 0; mu < n; ++mu) {
        double upd = sim(i, mu) - (mu == arg1 ? m2 : m1);
        double v = keep * rrow[mu] + mix * upd;
        rrow[mu] = v;
        checksum += v;
      }
    }

    // Availabilities, via per-column running totals of max(0, r).
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double* rrow = resp.row(j);
      for (std::size_t mu = 0; mu < n; ++mu)
        col_sum[mu] += std::max(0.0, rrow[mu]);
    }
    for (std::size_t mu = 0; mu < n; ++mu) {
      double r_self = resp(mu, mu);
      double cap = std::min(0.0, r_self);
      if (!hard) cap = std::max(-cfg.q, cap);
      double total = col_sum[mu];
      for (std::size_t i = 0; i < n; ++i) {
        double others = total - std::max(0.0, resp(i, mu));
        double upd;
        if (i == mu) {
          upd = others;
          if (!hard) upd = std::min(cfg.q, upd);
        } else {
          upd = std::min(0.0, cap + others);
        }
        double v = keep * avail(i, mu) + mix * upd;
        avail(i, mu) = v;
        checksum += v;
      }
    }

    if (!std::isfinite(checksum)) throw numeric_divergence_error(iter);

    auto c = extract_assignment(sim, avail);
    auto ex = self_pointers(c);
    if (ex == prev_exemplars && !ex.empty()) {
      if (++stable >= cfg.stability_window) break;
    } else {
      stable = 1;
      prev_exemplars = std::move(ex);
    }
  }

  out.iterations_run = std::min(iter, cfg.max_iterations);
  out.converged = stable >= cfg.stability_window;

  // Extraction plus post-processing: every point must map to a
  // self-pointing exemplar.
  out.assignment = extract_assignment(sim, avail);
  out.exemplars = self_pointers(out.assignment);
  if (out.exemplars.empty()) {
    std::size_t forced = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double v = avail(i, i) + resp(i, i);
      if (v > best) {
        best = v;
        forced = i;
      }
    }
    out.assignment[forced] = forced;
    out.exemplars.push_back(forced);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.assignment[i] == i) continue;
    std::size_t best = out.exemplars.front();
    double best_sim = sim(i, best);
    for (std::size_t mu : out.exemplars) {
      if (sim(i, mu) > best_sim) {
        best_sim = sim(i, mu);
        best = mu;
      }
    }
    out.assignment[i] = best;
  }

  // Final refinement (standard AP practice): within each cluster, move the
  // exemplar to the member maximizing the summed similarity from all
  // members. Evaluated on the unperturbed similarities; ties keep the
  // smallest index.
  {
    std::vector<std::vector<std::size_t>> members(out.exemplars.size());
    std::vector<std::size_t> slot(n, n);
    for (std::size_t k = 0; k < out.exemplars.size(); ++k)
      slot[out.exemplars[k]] = k;
    for (std::size_t i = 0; i < n; ++i)
      members[slot[out.assignment[i]]].push_back(i);
    for (auto& cluster : members) {
      std::size_t best = cluster.front();
      double best_score = 0.0;
      for (std::size_t i : cluster) best_score += sim0(i, best);
      for (std::size_t mu : cluster) {
        double score = 0.0;
        for (std::size_t i : cluster) score += sim0(i, mu);
        if (score > best_score + 1e-12 * std::abs(best_score)) {
          best_score = score;
          best = mu;
        }
      }
      for (std::size_t i : cluster) out.assignment[i] = best;
    }
    out.exemplars.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (out.assignment[i] == i) out.exemplars.push_back(i);
    std::sort(out.exemplars.begin(), out.exemplars.end());
  }

  out.energy = energy(sim0, out.assignment, cfg.q);
  out.distortion = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (out.assignment[i] != i) out.distortion += -sim0(i, out.assignment[i]);
  return out;
}

double energy(const SimilarityMatrix& sim,
              const std::vector<std::size_t>& assignment, double q) {
  std::size_t n = sim.size();
  if (assignment.size() != n)
    throw input_error("assignment length does not match matrix size");
  for (std::size_t c : assignment)
    if (c >= n) throw input_error("assignment index out of range");

  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) e -= sim(i, assignment[i]);

  std::vector<char> targeted(n, 0);
  for (std::size_t i = 0; i < n; ++i) targeted[assignment[i]] = 1;
  std::size_t violations = 0;
  for (std::size_t mu = 0; mu < n; ++mu)
    if (targeted[mu] && assignment[mu] != mu) ++violations;

  if (violations == 0) return e;
  if (!std::isfinite(q)) return std::numeric_limits<double>::infinity();
  return e + q * static_cast<double>(violations);
}

ClusteringResult brute_force_minimize(const SimilarityMatrix& sim, double q) {
  sim.validate();
  std::size_t n = sim.size();
  if (n > 10) throw size_error("brute_force_minimize limited to n <= 10");
  const bool hard = !std::isfinite(q);

  // Each index is an exemplar (self-pointing), a tolerated non-self target
  // (SCAP only), or a plain point. Per-point best targets within a given
  // split, then exact evaluation via energy(); scanning all splits covers
  // the optimum.
  std::vector<int> state(n, 0);  // 0 plain, 1 exemplar, 2 tolerated
  std::vector<std::size_t> candidate(n);
  ClusteringResult best;
  bool have_best = false;

  auto consider = [&]() {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] != 0) targets.push_back(i);
    if (targets.empty()) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) {
        candidate[i] = i;
        continue;
      }
      bool found = false;
      double best_sim = 0.0;
      std::size_t best_mu = 0;
      for (std::size_t mu : targets) {
        if (mu == i) continue;
        if (!found || sim(i, mu) > best_sim) {
          found = true;
          best_sim = sim(i, mu);
          best_mu = mu;
        }
      }
      if (!found) return;  // lone tolerated index with nothing to point at
      candidate[i] = best_mu;
    }
    double e = energy(sim, candidate, q);
    if (!std::isfinite(e)) return;
    auto ex = self_pointers(candidate);
    if (!have_best || e < best.energy ||
        (e == best.energy && ex < best.exemplars)) {
      have_best = true;
      best.assignment = candidate;
      best.exemplars = std::move(ex);
      best.energy = e;
    }
  };

  // Odometer over states; tolerated targets only make sense for finite q.
  const int radix = hard ? 2 : 3;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= radix;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rem % radix);
      rem /= radix;
    }
    consider();
  }

  best.iterations_run = 0;
  best.converged = true;
  best.distortion = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (best.assignment[i] != i) best.distortion += -sim(i, best.assignment[i]);
  return best;
}

}  // namespace hiap
