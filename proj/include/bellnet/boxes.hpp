// Copyright 2026 The bellnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The no-signalling box model: PR and deterministic boxes, seeded sampling
// of biseparable NS sources, wiring-based simulation of the inflated tests
// in the box world, and the minimum-NS-weight LP decomposition.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bellnet/distribution.hpp"
#include "bellnet/inflation.hpp"
#include "bellnet/lp.hpp"
#include "bellnet/rng.hpp"

namespace bellnet {

// A validated no-signalling behavior.
class NsBox {
 public:
  explicit NsBox(ConditionalDistribution dist) : dist_(std::move(dist)) {
    dist_.validate();
    if (no_signalling_residual(dist_) >= 1e-10)
      throw std::invalid_argument("NsBox: distribution signals");
  }

  const ConditionalDistribution& dist() const { return dist_; }

 private:
  ConditionalDistribution dist_;
};

// PR-type box: P(a,b|x,y) = 1/2 iff a (+) b = x*y (+) alpha*x (+) beta*y (+) gamma.
inline NsBox make_pr_box(int alpha = 0, int beta = 0, int gamma = 0) {
  ConditionalDistribution d({2, 2}, {2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) % 2) == ((x * y + alpha * x + beta * y + gamma) % 2))
            d.set_p({x, y}, {a, b}, 0.5);
  return NsBox(std::move(d));
}

// Deterministic product box a = a_of_x[x], b = b_of_y[y].
inline NsBox make_deterministic_box(const std::array<int, 2>& a_of_x,
                                    const std::array<int, 2>& b_of_y) {
  for (int v : {a_of_x[0], a_of_x[1], b_of_y[0], b_of_y[1]})
    if (v != 0 && v != 1) throw std::invalid_argument("make_deterministic_box: binary outputs");
  ConditionalDistribution d({2, 2}, {2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      d.set_p({x, y}, {a_of_x[static_cast<std::size_t>(x)], b_of_y[static_cast<std::size_t>(y)]},
              1.0);
  return NsBox(std::move(d));
}

// The 16 local deterministic vertices, ordered by (a0, a1, b0, b1) with a0
// the most significant bit.
inline std::vector<ConditionalDistribution> local_deterministic_boxes() {
  std::vector<ConditionalDistribution> out;
  out.reserve(16);
  for (int k = 0; k < 16; ++k)
    out.push_back(make_deterministic_box({(k >> 3) & 1, (k >> 2) & 1}, {(k >> 1) & 1, k & 1})
                      .dist());
  return out;
}

// All 24 extremal points of the two-party binary NS polytope: 16 local
// vertices followed by the 8 PR variants ordered by (alpha, beta, gamma).
inline std::vector<ConditionalDistribution> ns_extremal_boxes() {
  std::vector<ConditionalDistribution> out = local_deterministic_boxes();
  for (int k = 0; k < 8; ++k)
    out.push_back(make_pr_box((k >> 2) & 1, (k >> 1) & 1, k & 1).dist());
  return out;
}

inline ConditionalDistribution mix_distributions(const std::vector<ConditionalDistribution>& parts,
                                                 const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size())
    throw std::invalid_argument("mix_distributions: size mismatch");
  std::vector<double> table(parts.front().table().size(), 0.0);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].settings() != parts.front().settings() ||
        parts[k].outcomes() != parts.front().outcomes())
      throw std::invalid_argument("mix_distributions: scenario mismatch");
    if (weights[k] < -1e-15) throw std::invalid_argument("mix_distributions: negative weight");
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += weights[k] * parts[k].table()[i];
  }
  return ConditionalDistribution(parts.front().settings(), parts.front().outcomes(),
                                 std::move(table));
}

// Isotropic family: (c/4) PR + (1 - c/4) uniform, with CHSH value c.
inline NsBox make_isotropic_box(double chsh) {
  if (chsh < 0.0 || chsh > 4.0)
    throw std::invalid_argument("make_isotropic_box: CHSH value must lie in [0, 4]");
  const double w = chsh / 4.0;
  ConditionalDistribution uniform({2, 2}, {2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) uniform.set_p({x, y}, {a, b}, 0.25);
  return NsBox(mix_distributions({make_pr_box().dist(), uniform}, {w, 1.0 - w}));
}

// Random convex mixture of the 24 NS extremal boxes.
inline ConditionalDistribution random_ns_box(Rng& rng) {
  static const std::vector<ConditionalDistribution> verts = ns_extremal_boxes();
  return mix_distributions(verts, rng.simplex_weights(24));
}

inline ConditionalDistribution random_one_party_box(Rng& rng) {
  ConditionalDistribution d({2}, {2});
  for (int x = 0; x < 2; ++x) {
    const double p0 = rng.uniform();
    d.set_p({x}, {0}, p0);
    d.set_p({x}, {1}, 1.0 - p0);
  }
  return d;
}

// Reindexes parties: party k of the result is party perm[k] of the input.
inline ConditionalDistribution permute_parties(const ConditionalDistribution& p,
                                               const std::vector<int>& perm) {
  const int n = p.n_parties();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_parties: rank mismatch");
  std::vector<int> settings(perm.size()), outcomes(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    settings[k] = p.settings()[static_cast<std::size_t>(perm[k])];
    outcomes[k] = p.outcomes()[static_cast<std::size_t>(perm[k])];
  }
  ConditionalDistribution out(settings, outcomes);
  std::vector<int> xo(perm.size()), ao(perm.size());
  for (long x = 0; x < out.n_setting_combos(); ++x) {
    const std::vector<int> xs = out.unflat_settings(x);
    for (long a = 0; a < out.n_outcome_combos(); ++a) {
      const std::vector<int> as = out.unflat_outcomes(a);
      for (std::size_t k = 0; k < perm.size(); ++k) {
        xo[static_cast<std::size_t>(perm[k])] = xs[k];
        ao[static_cast<std::size_t>(perm[k])] = as[k];
      }
      out.set_p(xs, as, p.p(xo, ao));
    }
  }
  return out;
}

// Random k-party NS behavior with binary settings and outcomes.  Built from
// the constructions that provably preserve no-signalling: extremal mixtures
// for pairs, and for larger groups either products across a random split or
// chains of pair boxes wired through local response functions.
inline ConditionalDistribution random_ns_behavior(int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("random_ns_behavior: k must be >= 1");
  if (k == 1) return random_one_party_box(rng);
  if (k == 2) return random_ns_box(rng);
  if (rng.uniform() < 0.5) {
    // Product across a random proper bipartition.
    std::vector<int> left, right;
    do {
      left.clear();
      right.clear();
      for (int i = 0; i < k; ++i) (rng.uniform() < 0.5 ? left : right).push_back(i);
    } while (left.empty() || right.empty());
    const ConditionalDistribution prod =
        product_distribution(random_ns_behavior(static_cast<int>(left.size()), rng),
                             random_ns_behavior(static_cast<int>(right.size()), rng));
    std::vector<int> perm = left;
    perm.insert(perm.end(), right.begin(), right.end());
    // prod has parties (left..., right...); position them at their labels.
    std::vector<int> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      inverse[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    return permute_parties(prod, inverse);
  }
  // Wired chain: pair boxes B_i between parties (i, i+1); every party feeds
  // its input into all its shares, middle parties output a random binary
  // function of their two share outcomes.
  std::vector<ConditionalDistribution> pair_boxes;
  for (int i = 0; i + 1 < k; ++i) pair_boxes.push_back(random_ns_box(rng));
  std::vector<std::array<int, 4>> response(static_cast<std::size_t>(k));
  for (int i = 1; i + 1 < k; ++i)
    for (int& r : response[static_cast<std::size_t>(i)]) r = rng.uniform_int(2);
  ConditionalDistribution out(std::vector<int>(static_cast<std::size_t>(k), 2),
                              std::vector<int>(static_cast<std::size_t>(k), 2));
  const int n_share_combos = 1 << (2 * (k - 1));
  std::vector<int> a(static_cast<std::size_t>(k));
  for (long xf = 0; xf < out.n_setting_combos(); ++xf) {
    const std::vector<int> x = out.unflat_settings(xf);
    for (int shares = 0; shares < n_share_combos; ++shares) {
      // Bit 2i is B_i's left outcome, bit 2i+1 its right outcome.
      double w = 1.0;
      for (int i = 0; i + 1 < k; ++i) {
        const int l = (shares >> (2 * i)) & 1;
        const int r = (shares >> (2 * i + 1)) & 1;
        w *= pair_boxes[static_cast<std::size_t>(i)].p({x[static_cast<std::size_t>(i)],
                                                        x[static_cast<std::size_t>(i + 1)]},
                                                       {l, r});
      }
      if (w == 0.0) continue;
      a[0] = shares & 1;
      a[static_cast<std::size_t>(k - 1)] = (shares >> (2 * (k - 2) + 1)) & 1;
      for (int i = 1; i + 1 < k; ++i) {
        const int from_left = (shares >> (2 * (i - 1) + 1)) & 1;
        const int from_right = (shares >> (2 * i)) & 1;
        a[static_cast<std::size_t>(i)] =
            response[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 * from_left +
                                                                           from_right)];
      }
      out.set_p(x, a, out.p(x, a) + w);
    }
  }
  return out;
}

// One biseparable term: independent NS behaviors on the two sides of a
// bipartition.
struct BiseparableTerm {
  double weight = 0.0;
  std::vector<int> left;  // party labels; the complement forms the right side
  ConditionalDistribution left_box;
  ConditionalDistribution right_box;
};

struct BiseparableNsSource {
  int n_parties = 0;
  std::vector<BiseparableTerm> terms;

  // The mixture behavior Sum_k w_k box_left (x) box_right.
  ConditionalDistribution mixture() const {
    if (terms.empty()) throw std::invalid_argument("BiseparableNsSource: no terms");
    std::vector<ConditionalDistribution> parts;
    std::vector<double> weights;
    double total = 0.0;
    for (const auto& t : terms) {
      std::vector<int> right;
      std::vector<bool> in_left(static_cast<std::size_t>(n_parties), false);
      for (int p : t.left) in_left[static_cast<std::size_t>(p)] = true;
      for (int p = 0; p < n_parties; ++p)
        if (!in_left[static_cast<std::size_t>(p)]) right.push_back(p);
      std::vector<int> order = t.left;
      order.insert(order.end(), right.begin(), right.end());
      std::vector<int> inverse(order.size());
      for (std::size_t i = 0; i < order.size(); ++i)
        inverse[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
      parts.push_back(
          permute_parties(product_distribution(t.left_box, t.right_box), inverse));
      weights.push_back(t.weight);
      total += t.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("BiseparableNsSource: weights do not sum to 1");
    return mix_distributions(parts, weights);
  }
};

// Seeded biseparable source on n parties: a few terms with random proper
// bipartitions and random NS behaviors on each side.
inline BiseparableNsSource random_biseparable_source(int n, Rng& rng, int n_terms = 3) {
  if (n < 2) throw std::invalid_argument("random_biseparable_source: n must be >= 2");
  BiseparableNsSource src;
  src.n_parties = n;
  const std::vector<double> weights = rng.simplex_weights(n_terms);
  for (int t = 0; t < n_terms; ++t) {
    BiseparableTerm term;
    term.weight = weights[static_cast<std::size_t>(t)];
    do {
      term.left.clear();
      for (int p = 0; p < n; ++p)
        if (rng.uniform() < 0.5) term.left.push_back(p);
    } while (term.left.empty() || static_cast<int>(term.left.size()) == n);
    term.left_box = random_ns_behavior(static_cast<int>(term.left.size()), rng);
    term.right_box = random_ns_behavior(n - static_cast<int>(term.left.size()), rng);
    src.terms.push_back(std::move(term));
  }
  return src;
}

// Wiring of one cross-copy joint measurement in the box world: fixed inputs
// fed into the two shares and a response function mapping the pair of share
// outcomes to the 4-valued joint outcome (response[2*v + vhat]).
struct JointWiring {
  std::array<int, 2> inputs = {0, 0};
  std::array<int, 4> response = {0, 1, 2, 3};
};

struct ActivatedTuple {
  std::array<int, 3> tuple = {0, 0, 0};  // (u, uhat, joint outcome)
  bool defined = false;
  double probability = 0.0;  // conditioning-event probability (context mean)
  ConditionalDistribution dist;
};

namespace detail {

// Copy-local table t[u][v][x][w] = P(outcomes | x_U = 0, x_V = v_input,
// x_W = x) for a tripartite behavior with the given party roles.
struct CopyTable {
  double t[2][2][2][2] = {};
  double marginal_uv[2][2] = {};  // x-independent by no-signalling
};

inline CopyTable copy_table(const ConditionalDistribution& p, int u_party, int v_party,
                            int w_party, int v_input) {
  CopyTable ct;
  std::vector<int> x(3), a(3);
  for (int v = 0; v < 2; ++v)
    for (int u = 0; u < 2; ++u)
      for (int xw = 0; xw < 2; ++xw)
        for (int w = 0; w < 2; ++w) {
          x[static_cast<std::size_t>(u_party)] = 0;
          x[static_cast<std::size_t>(v_party)] = v_input;
          x[static_cast<std::size_t>(w_party)] = xw;
          a[static_cast<std::size_t>(u_party)] = u;
          a[static_cast<std::size_t>(v_party)] = v;
          a[static_cast<std::size_t>(w_party)] = w;
          ct.t[u][v][xw][w] = p.p(x, a);
          if (xw == 0) ct.marginal_uv[u][v] += ct.t[u][v][xw][w];
        }
  return ct;
}

}  // namespace detail

// Reference box-world simulation of one tripartite test: both copies run the
// source behavior independently, the joint pair is wired per `wiring`, the
// conditioned parties use input 0, and the activated pair keeps both inputs
// free.  Returns one activated behavior per conditioning tuple (u, uhat, j),
// normalized per activated-setting context.
inline std::vector<ActivatedTuple> simulate_inflated_test(const ConditionalDistribution& source,
                                                          const ConditionalDistribution& copy,
                                                          const TestSpec& test,
                                                          const JointWiring& wiring) {
  if (source.n_parties() != 3 || copy.n_parties() != 3)
    throw std::invalid_argument("simulate_inflated_test: tripartite behaviors required");
  // Party labels inside one copy.
  const int u_party = test.conditioned[0] % 3;
  const int v_party = test.joint[0] % 3;
  const int w_party = test.activated[0] % 3;
  const detail::CopyTable t1 = detail::copy_table(source, u_party, v_party, w_party,
                                                  wiring.inputs[0]);
  const detail::CopyTable t2 = detail::copy_table(copy, u_party, v_party, w_party,
                                                  wiring.inputs[1]);
  std::vector<ActivatedTuple> out;
  for (int u = 0; u < 2; ++u)
    for (int uhat = 0; uhat < 2; ++uhat)
      for (int j = 0; j < 4; ++j) {
        ActivatedTuple at;
        at.tuple = {u, uhat, j};
        double numer[2][2][2][2];  // [x][xhat][w][what]
        for (auto& q : numer)
          for (auto& r : q)
            for (auto& s : r) s[0] = s[1] = 0.0;
        for (int v = 0; v < 2; ++v)
          for (int vhat = 0; vhat < 2; ++vhat) {
            if (wiring.response[static_cast<std::size_t>(2 * v + vhat)] != j) continue;
            for (int x = 0; x < 2; ++x)
              for (int xhat = 0; xhat < 2; ++xhat)
                for (int w = 0; w < 2; ++w)
                  for (int what = 0; what < 2; ++what)
                    numer[x][xhat][w][what] += t1.t[u][v][x][w] * t2.t[uhat][vhat][xhat][what];
          }
        bool defined = true;
        double prob_sum = 0.0;
        ConditionalDistribution dist({2, 2}, {2, 2});
        for (int x = 0; x < 2; ++x)
          for (int xhat = 0; xhat < 2; ++xhat) {
            double norm = 0.0;
            for (int w = 0; w < 2; ++w)
              for (int what = 0; what < 2; ++what) norm += numer[x][xhat][w][what];
            prob_sum += norm;
            if (norm < 1e-12) {
              defined = false;
              continue;
            }
            for (int w = 0; w < 2; ++w)
              for (int what = 0; what < 2; ++what)
                dist.set_p({x, xhat}, {w, what}, numer[x][xhat][w][what] / norm);
          }
        at.defined = defined;
        at.probability = prob_sum / 4.0;
        if (defined) at.dist = std::move(dist);
        out.push_back(std::move(at));
      }
  return out;
}

// Minimum NS weight p such that P = R + sum_k mu_k D_k with R a subnormalized
// no-signalling block of weight p, the D_k the 16 local deterministic
// vertices, and mu >= 0, sum mu + p = 1.  Equivalently the smallest p with
// P = p Q + (1-p) L, Q no-signalling and L local.
inline double lp_min_p(const ConditionalDistribution& p) {
  if (p.n_parties() != 2 || p.settings() != std::vector<int>{2, 2} ||
      p.outcomes() != std::vector<int>{2, 2})
    throw std::invalid_argument("lp_min_p: need a (2,2,2,2) behavior");
  static const std::vector<ConditionalDistribution> dets = local_deterministic_boxes();
  // Variables: R[16], mu[16], p; R and table entries indexed in the
  // distribution's own layout order.
  const int nR = 16, nMu = 16, nVar = nR + nMu + 1, pIdx = nR + nMu;
  const int rows = 16 + 8 + 1 + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, nVar);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  auto idx = [](int x, int y, int aa, int bb) { return (2 * x + y) * 4 + (2 * aa + bb); };
  int row = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int aa = 0; aa < 2; ++aa)
        for (int bb = 0; bb < 2; ++bb) {
          const int i = idx(x, y, aa, bb);
          a(row, i) = 1.0;
          for (int k = 0; k < 16; ++k) a(row, nR + k) = dets[static_cast<std::size_t>(k)].p({x, y}, {aa, bb});
          b(row) = p.p({x, y}, {aa, bb});
          ++row;
        }
  // No-signalling of the R block: each side's marginals match across the
  // other side's settings.
  for (int aa = 0; aa < 2; ++aa)
    for (int x = 0; x < 2; ++x) {
      for (int bb = 0; bb < 2; ++bb) {
        a(row, idx(x, 0, aa, bb)) += 1.0;
        a(row, idx(x, 1, aa, bb)) -= 1.0;
      }
      ++row;
    }
  for (int bb = 0; bb < 2; ++bb)
    for (int y = 0; y < 2; ++y) {
      for (int aa = 0; aa < 2; ++aa) {
        a(row, idx(0, y, aa, bb)) += 1.0;
        a(row, idx(1, y, aa, bb)) -= 1.0;
      }
      ++row;
    }
  // R's weight equals p, and weights form a convex combination.
  for (int aa = 0; aa < 2; ++aa)
    for (int bb = 0; bb < 2; ++bb) a(row, idx(0, 0, aa, bb)) = 1.0;
  a(row, pIdx) = -1.0;
  ++row;
  for (int k = 0; k < 16; ++k) a(row, nR + k) = 1.0;
  a(row, pIdx) = 1.0;
  b(row) = 1.0;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nVar);
  c(pIdx) = 1.0;
  const LpResult res = solve_lp(a, b, c);
  if (res.status != LpResult::Status::optimal)
    throw std::invalid_argument("lp_min_p: LP infeasible (input violates no-signalling?)");
  return std::min(1.0, std::max(0.0, res.objective));
}

}  // namespace bellnet
