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

// Conditional probability tables P(a1...an | x1...xn), the Born-rule engine
// that produces them from states and measurement assignments, conditioning,
// marginals and the no-signalling residual.

#pragma once

#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellnet/measurements.hpp"
#include "bellnet/tensor.hpp"

namespace bellnet {

// Dense table of a conditional distribution.  Layout: settings-major, then
// outcomes, each flattened party-major (party 0 slowest), so the entry for
// (x, a) sits at flat(x) * prod(outcomes) + flat(a).
class ConditionalDistribution {
 public:
  ConditionalDistribution() = default;

  ConditionalDistribution(std::vector<int> settings, std::vector<int> outcomes)
      : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
    check_cards();
    table_.assign(static_cast<std::size_t>(n_setting_combos()) * n_outcome_combos(), 0.0);
  }

  ConditionalDistribution(std::vector<int> settings, std::vector<int> outcomes,
                          std::vector<double> table)
      : settings_(std::move(settings)), outcomes_(std::move(outcomes)), table_(std::move(table)) {
    check_cards();
    validate();
  }

  int n_parties() const { return static_cast<int>(settings_.size()); }
  const std::vector<int>& settings() const { return settings_; }
  const std::vector<int>& outcomes() const { return outcomes_; }
  const std::vector<double>& table() const { return table_; }

  long n_setting_combos() const { return combos(settings_); }
  long n_outcome_combos() const { return combos(outcomes_); }

  long flat_settings(const std::vector<int>& x) const { return flatten(settings_, x); }
  long flat_outcomes(const std::vector<int>& a) const { return flatten(outcomes_, a); }

  double p(const std::vector<int>& x, const std::vector<int>& a) const {
    return table_[static_cast<std::size_t>(flat_settings(x) * n_outcome_combos() +
                                           flat_outcomes(a))];
  }

  void set_p(const std::vector<int>& x, const std::vector<int>& a, double value) {
    table_[static_cast<std::size_t>(flat_settings(x) * n_outcome_combos() + flat_outcomes(a))] =
        value;
  }

  // Raises on a malformed table: wrong size, negative entries beyond
  // roundoff, or per-setting totals away from 1.
  void validate() const {
    if (table_.size() !=
        static_cast<std::size_t>(n_setting_combos()) * static_cast<std::size_t>(n_outcome_combos()))
      throw std::invalid_argument("ConditionalDistribution: table size mismatch");
    const long no = n_outcome_combos();
    for (long x = 0; x < n_setting_combos(); ++x) {
      double sum = 0.0;
      for (long a = 0; a < no; ++a) {
        const double v = table_[static_cast<std::size_t>(x * no + a)];
        if (v < -1e-12) throw std::invalid_argument("ConditionalDistribution: negative entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kProbTol)
        throw std::invalid_argument("ConditionalDistribution: setting block does not sum to 1");
    }
  }

  std::vector<int> unflat_settings(long idx) const { return unflatten(settings_, idx); }
  std::vector<int> unflat_outcomes(long idx) const { return unflatten(outcomes_, idx); }

 private:
  static long combos(const std::vector<int>& cards) {
    long c = 1;
    for (int k : cards) c *= k;
    return c;
  }

  static long flatten(const std::vector<int>& cards, const std::vector<int>& idx) {
    if (idx.size() != cards.size())
      throw std::invalid_argument("ConditionalDistribution: index rank mismatch");
    long f = 0;
    for (std::size_t k = 0; k < cards.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= cards[k])
        throw std::out_of_range("ConditionalDistribution: index component out of range");
      f = f * cards[k] + idx[k];
    }
    return f;
  }

  static std::vector<int> unflatten(const std::vector<int>& cards, long idx) {
    std::vector<int> out(cards.size());
    for (std::size_t k = cards.size(); k-- > 0;) {
      out[k] = static_cast<int>(idx % cards[k]);
      idx /= cards[k];
    }
    return out;
  }

  void check_cards() const {
    if (settings_.empty() || settings_.size() != outcomes_.size())
      throw std::invalid_argument("ConditionalDistribution: bad cardinality vectors");
    for (int s : settings_)
      if (s < 1) throw std::invalid_argument("ConditionalDistribution: settings must be >= 1");
    for (int o : outcomes_)
      if (o < 2) throw std::invalid_argument("ConditionalDistribution: outcomes must be >= 2");
  }

  std::vector<int> settings_;
  std::vector<int> outcomes_;
  std::vector<double> table_;
};

// One measured unit: a single party or a jointly measured group of parties.
// `settings` holds one POVM per measurement choice; all of them must share
// the unit dimension and the number of outcomes.
struct MeasurementUnit {
  std::vector<int> parties;
  std::vector<Povm> settings;
};

struct MeasurementAssignment {
  std::vector<MeasurementUnit> units;

  // Raises unless the units partition all parties of `shape` and every POVM
  // is well-formed with a consistent outcome count per unit.
  void validate(const SystemShape& shape) const {
    if (units.empty()) throw std::invalid_argument("MeasurementAssignment: no units");
    std::vector<bool> covered(static_cast<std::size_t>(shape.n_parties()), false);
    for (const auto& unit : units) {
      if (unit.parties.empty() || unit.settings.empty())
        throw std::invalid_argument("MeasurementAssignment: empty unit");
      Eigen::Index dim = 1;
      for (int p : unit.parties) {
        shape.check_axis(p);
        if (covered[static_cast<std::size_t>(p)])
          throw std::invalid_argument("MeasurementAssignment: party measured twice");
        covered[static_cast<std::size_t>(p)] = true;
        dim *= shape.dim(p);
      }
      const int n_out = unit.settings.front().n_outcomes();
      for (const auto& povm : unit.settings) {
        povm.validate();
        if (povm.dim != dim)
          throw std::invalid_argument("MeasurementAssignment: POVM dimension mismatch");
        if (povm.n_outcomes() != n_out)
          throw std::invalid_argument("MeasurementAssignment: outcome count varies per unit");
      }
    }
    for (bool c : covered)
      if (!c) throw std::invalid_argument("MeasurementAssignment: party left unmeasured");
  }
};

namespace detail {

inline double clamp_probability(double p) {
  if (p < -1e-9) throw std::logic_error("joint_distribution: negative probability");
  return p < 0.0 ? 0.0 : p;
}

}  // namespace detail

// Born-rule table P(a|x) = tr[(E^{(1)}_{a1|x1} (x) ... ) rho] for a pure
// global state.
inline ConditionalDistribution joint_distribution(const StateVector& psi,
                                                  const MeasurementAssignment& m) {
  m.validate(psi.shape());
  std::vector<int> settings, outcomes;
  for (const auto& u : m.units) {
    settings.push_back(static_cast<int>(u.settings.size()));
    outcomes.push_back(u.settings.front().n_outcomes());
  }
  ConditionalDistribution dist(settings, outcomes);
  const int n_units = static_cast<int>(m.units.size());
  std::vector<int> x(static_cast<std::size_t>(n_units), 0);
  std::vector<int> a(static_cast<std::size_t>(n_units), 0);
  // Depth-first over units: apply one unit's effect per level, take the
  // overlap with psi at the leaves.
  std::function<void(int, const Eigen::VectorXcd&)> walk = [&](int u,
                                                               const Eigen::VectorXcd& vec) {
    if (u == n_units) {
      const double p = (psi.amplitudes().adjoint() * vec)(0).real();
      dist.set_p(x, a, detail::clamp_probability(p));
      return;
    }
    const auto& unit = m.units[static_cast<std::size_t>(u)];
    const auto& povm = unit.settings[static_cast<std::size_t>(x[static_cast<std::size_t>(u)])];
    for (int out = 0; out < povm.n_outcomes(); ++out) {
      a[static_cast<std::size_t>(u)] = out;
      walk(u + 1, apply_operator_on_axes(vec, psi.shape(), unit.parties,
                                         povm.effects[static_cast<std::size_t>(out)]));
    }
  };
  const long nx = dist.n_setting_combos();
  for (long xi = 0; xi < nx; ++xi) {
    x = dist.unflat_settings(xi);
    walk(0, psi.amplitudes());
  }
  return dist;
}

// Born-rule table for a mixed global state.
inline ConditionalDistribution joint_distribution(const DensityOperator& rho,
                                                  const MeasurementAssignment& m) {
  m.validate(rho.shape());
  std::vector<int> settings, outcomes;
  for (const auto& u : m.units) {
    settings.push_back(static_cast<int>(u.settings.size()));
    outcomes.push_back(u.settings.front().n_outcomes());
  }
  ConditionalDistribution dist(settings, outcomes);
  const int n_units = static_cast<int>(m.units.size());
  std::vector<int> x(static_cast<std::size_t>(n_units), 0);
  std::vector<int> a(static_cast<std::size_t>(n_units), 0);
  std::function<void(int, const Eigen::MatrixXcd&)> walk = [&](int u,
                                                               const Eigen::MatrixXcd& acc) {
    if (u == n_units) {
      dist.set_p(x, a, detail::clamp_probability(acc.trace().real()));
      return;
    }
    const auto& unit = m.units[static_cast<std::size_t>(u)];
    const auto& povm = unit.settings[static_cast<std::size_t>(x[static_cast<std::size_t>(u)])];
    for (int out = 0; out < povm.n_outcomes(); ++out) {
      a[static_cast<std::size_t>(u)] = out;
      const Eigen::MatrixXcd e =
          embed_operator(rho.shape(), unit.parties, povm.effects[static_cast<std::size_t>(out)]);
      walk(u + 1, Eigen::MatrixXcd(e * acc));
    }
  };
  const long nx = dist.n_setting_combos();
  for (long xi = 0; xi < nx; ++xi) {
    x = dist.unflat_settings(xi);
    walk(0, rho.matrix());
  }
  return dist;
}

// One conditioning clause: party `party` uses setting `setting` and is
// observed to output `outcome`.
struct ConditionClause {
  int party = 0;
  int setting = 0;
  int outcome = 0;
};

struct ConditionResult {
  bool defined = false;
  // Conditioning-event probability, averaged over the remaining parties'
  // setting contexts, and its max-min spread across those contexts (zero for
  // any no-signalling input).
  double probability = 0.0;
  double probability_spread = 0.0;
  ConditionalDistribution dist;
};

// Conditions on the clauses' outcomes; the result is a distribution over the
// remaining parties, normalized independently in each remaining-setting
// context.  `defined` is false when any context gives the conditioning event
// a probability below 1e-12.
inline ConditionResult condition_on(const ConditionalDistribution& p,
                                    const std::vector<ConditionClause>& clauses) {
  const int n = p.n_parties();
  std::vector<int> fixed_setting(static_cast<std::size_t>(n), -1);
  std::vector<int> fixed_outcome(static_cast<std::size_t>(n), -1);
  for (const auto& c : clauses) {
    if (c.party < 0 || c.party >= n) throw std::out_of_range("condition_on: party out of range");
    if (fixed_setting[static_cast<std::size_t>(c.party)] != -1)
      throw std::invalid_argument("condition_on: party conditioned twice");
    if (c.setting < 0 || c.setting >= p.settings()[static_cast<std::size_t>(c.party)])
      throw std::out_of_range("condition_on: setting out of range");
    if (c.outcome < 0 || c.outcome >= p.outcomes()[static_cast<std::size_t>(c.party)])
      throw std::out_of_range("condition_on: outcome out of range");
    fixed_setting[static_cast<std::size_t>(c.party)] = c.setting;
    fixed_outcome[static_cast<std::size_t>(c.party)] = c.outcome;
  }
  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (fixed_setting[static_cast<std::size_t>(k)] == -1) rest.push_back(k);
  if (rest.empty()) throw std::invalid_argument("condition_on: no parties left");

  std::vector<int> rest_settings, rest_outcomes;
  for (int k : rest) {
    rest_settings.push_back(p.settings()[static_cast<std::size_t>(k)]);
    rest_outcomes.push_back(p.outcomes()[static_cast<std::size_t>(k)]);
  }
  ConditionResult res;
  res.dist = ConditionalDistribution(rest_settings, rest_outcomes);

  double prob_min = std::numeric_limits<double>::infinity();
  double prob_max = 0.0;
  double prob_sum = 0.0;
  bool defined = true;

  const long nrx = res.dist.n_setting_combos();
  const long nra = res.dist.n_outcome_combos();
  std::vector<int> x(static_cast<std::size_t>(n)), a(static_cast<std::size_t>(n));
  for (long rx = 0; rx < nrx; ++rx) {
    const std::vector<int> xr = res.dist.unflat_settings(rx);
    for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = fixed_setting[static_cast<std::size_t>(k)];
    for (std::size_t k = 0; k < rest.size(); ++k)
      x[static_cast<std::size_t>(rest[k])] = xr[k];
    // Event probability in this context: sum over the free outcomes with the
    // fixed outcomes pinned.
    double event = 0.0;
    std::vector<double> slice(static_cast<std::size_t>(nra));
    for (long ra = 0; ra < nra; ++ra) {
      const std::vector<int> ar = res.dist.unflat_outcomes(ra);
      for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] = fixed_outcome[static_cast<std::size_t>(k)];
      for (std::size_t k = 0; k < rest.size(); ++k)
        a[static_cast<std::size_t>(rest[k])] = ar[k];
      const double v = p.p(x, a);
      slice[static_cast<std::size_t>(ra)] = v;
      event += v;
    }
    prob_min = std::min(prob_min, event);
    prob_max = std::max(prob_max, event);
    prob_sum += event;
    if (event < 1e-12) {
      defined = false;
      continue;
    }
    for (long ra = 0; ra < nra; ++ra) {
      const std::vector<int> ar = res.dist.unflat_outcomes(ra);
      res.dist.set_p(xr, ar, slice[static_cast<std::size_t>(ra)] / event);
    }
  }
  res.defined = defined;
  res.probability = prob_sum / static_cast<double>(nrx);
  res.probability_spread = prob_max - prob_min;
  return res;
}

// Largest variation of any single-party outcome marginal across the other
// parties' setting contexts.  Zero (up to roundoff) iff no-signalling holds.
inline double no_signalling_residual(const ConditionalDistribution& p) {
  const int n = p.n_parties();
  double residual = 0.0;
  std::vector<int> x(static_cast<std::size_t>(n)), a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> other_settings, other_outcomes;
    std::vector<int> others;
    for (int k = 0; k < n; ++k)
      if (k != i) {
        others.push_back(k);
        other_settings.push_back(p.settings()[static_cast<std::size_t>(k)]);
        other_outcomes.push_back(p.outcomes()[static_cast<std::size_t>(k)]);
      }
    ConditionalDistribution ctx(other_settings.empty() ? std::vector<int>{1} : other_settings,
                                other_outcomes.empty() ? std::vector<int>{2} : other_outcomes);
    const long nctx = other_settings.empty() ? 1 : ctx.n_setting_combos();
    const long nout = other_settings.empty() ? 1 : ctx.n_outcome_combos();
    for (int xi = 0; xi < p.settings()[static_cast<std::size_t>(i)]; ++xi) {
      for (int ai = 0; ai < p.outcomes()[static_cast<std::size_t>(i)]; ++ai) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (long c = 0; c < nctx; ++c) {
          const std::vector<int> xo = other_settings.empty() ? std::vector<int>{} : ctx.unflat_settings(c);
          x[static_cast<std::size_t>(i)] = xi;
          for (std::size_t k = 0; k < others.size(); ++k)
            x[static_cast<std::size_t>(others[k])] = xo[k];
          double marg = 0.0;
          for (long o = 0; o < nout; ++o) {
            const std::vector<int> ao = other_outcomes.empty() ? std::vector<int>{} : ctx.unflat_outcomes(o);
            a[static_cast<std::size_t>(i)] = ai;
            for (std::size_t k = 0; k < others.size(); ++k)
              a[static_cast<std::size_t>(others[k])] = ao[k];
            marg += p.p(x, a);
          }
          lo = std::min(lo, marg);
          hi = std::max(hi, marg);
        }
        residual = std::max(residual, hi - lo);
      }
    }
  }
  return residual;
}

// Drops one party by fixing its setting and summing its outcomes.
inline ConditionalDistribution marginalize(const ConditionalDistribution& p, int drop_party,
                                           int drop_setting) {
  const int n = p.n_parties();
  if (drop_party < 0 || drop_party >= n) throw std::out_of_range("marginalize: party out of range");
  if (n < 2) throw std::invalid_argument("marginalize: need >= 2 parties");
  if (drop_setting < 0 || drop_setting >= p.settings()[static_cast<std::size_t>(drop_party)])
    throw std::out_of_range("marginalize: setting out of range");
  std::vector<int> rest, rest_settings, rest_outcomes;
  for (int k = 0; k < n; ++k)
    if (k != drop_party) {
      rest.push_back(k);
      rest_settings.push_back(p.settings()[static_cast<std::size_t>(k)]);
      rest_outcomes.push_back(p.outcomes()[static_cast<std::size_t>(k)]);
    }
  ConditionalDistribution out(rest_settings, rest_outcomes);
  std::vector<int> x(static_cast<std::size_t>(n)), a(static_cast<std::size_t>(n));
  for (long rx = 0; rx < out.n_setting_combos(); ++rx) {
    const std::vector<int> xr = out.unflat_settings(rx);
    for (long ra = 0; ra < out.n_outcome_combos(); ++ra) {
      const std::vector<int> ar = out.unflat_outcomes(ra);
      x[static_cast<std::size_t>(drop_party)] = drop_setting;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        x[static_cast<std::size_t>(rest[k])] = xr[k];
        a[static_cast<std::size_t>(rest[k])] = ar[k];
      }
      double sum = 0.0;
      for (int d = 0; d < p.outcomes()[static_cast<std::size_t>(drop_party)]; ++d) {
        a[static_cast<std::size_t>(drop_party)] = d;
        sum += p.p(x, a);
      }
      out.set_p(xr, ar, sum);
    }
  }
  return out;
}

// Product of two independent behaviors on disjoint party sets (parties of
// `b` appended after those of `a`).
inline ConditionalDistribution product_distribution(const ConditionalDistribution& a,
                                                    const ConditionalDistribution& b) {
  std::vector<int> settings = a.settings(), outcomes = a.outcomes();
  settings.insert(settings.end(), b.settings().begin(), b.settings().end());
  outcomes.insert(outcomes.end(), b.outcomes().begin(), b.outcomes().end());
  ConditionalDistribution out(settings, outcomes);
  for (long xa = 0; xa < a.n_setting_combos(); ++xa) {
    const std::vector<int> xav = a.unflat_settings(xa);
    for (long xb = 0; xb < b.n_setting_combos(); ++xb) {
      const std::vector<int> xbv = b.unflat_settings(xb);
      std::vector<int> x = xav;
      x.insert(x.end(), xbv.begin(), xbv.end());
      for (long aa = 0; aa < a.n_outcome_combos(); ++aa) {
        const std::vector<int> aav = a.unflat_outcomes(aa);
        const double pa = a.p(xav, aav);
        for (long ab = 0; ab < b.n_outcome_combos(); ++ab) {
          const std::vector<int> abv = b.unflat_outcomes(ab);
          std::vector<int> o = aav;
          o.insert(o.end(), abv.begin(), abv.end());
          out.set_p(x, o, pa * b.p(xbv, abv));
        }
      }
    }
  }
  return out;
}

// CSV export: header x1,...,xn,a1,...,an,p, one row per table entry in
// layout order, probabilities with round-trip precision.
inline void to_csv(const ConditionalDistribution& p, std::ostream& os) {
  const int n = p.n_parties();
  for (int k = 1; k <= n; ++k) os << "x" << k << ",";
  for (int k = 1; k <= n; ++k) os << "a" << k << ",";
  os << "p\n";
  char buf[32];
  for (long x = 0; x < p.n_setting_combos(); ++x) {
    const std::vector<int> xs = p.unflat_settings(x);
    for (long a = 0; a < p.n_outcome_combos(); ++a) {
      const std::vector<int> as = p.unflat_outcomes(a);
      for (int v : xs) os << v << ",";
      for (int v : as) os << v << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", p.p(xs, as));
      os << buf << "\n";
    }
  }
}

inline nlohmann::ordered_json to_json(const ConditionalDistribution& p) {
  nlohmann::ordered_json j;
  j["settings"] = p.settings();
  j["outcomes"] = p.outcomes();
  j["layout"] = "settings-major,outcomes-minor,party-major";
  j["table"] = p.table();
  return j;
}

inline ConditionalDistribution distribution_from_json(const nlohmann::json& j) {
  return ConditionalDistribution(j.at("settings").get<std::vector<int>>(),
                                 j.at("outcomes").get<std::vector<int>>(),
                                 j.at("table").get<std::vector<double>>());
}

}  // namespace bellnet
