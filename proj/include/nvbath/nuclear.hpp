// Copyright 2026 The nvbath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "nvbath/errors.hpp"
#include "nvbath/expm.hpp"
#include "nvbath/parallel.hpp"

namespace nvbath {

using RateFunction = std::function<double(double)>;

/// Single nuclear flip from one configuration to another.
struct FlipEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double multiplicity = 1;
  int direction = +1;  // +1 raises the Overhauser field
};

/// Nuclear configurations with their Overhauser values and single-flip connectivity.
struct ConfigSpace {
  std::vector<double> h;
  std::vector<double> log_thermal;  // log of the infinite-temperature weight
  std::vector<FlipEdge> edges;

  std::size_t size() const { return h.size(); }
};

/// Collective sectors k = number of up spins, h_k = a (k - N/2).
inline ConfigSpace sector_space(int n, double a) {
  if (n < 1) throw InvalidArgument("N must be positive");
  ConfigSpace s;
  for (int k = 0; k <= n; ++k) {
    s.h.push_back(a * (k - 0.5 * n));
    s.log_thermal.push_back(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                            n * std::log(2.0));
    if (k < n) s.edges.push_back({std::size_t(k), std::size_t(k + 1), double(n - k), +1});
    if (k > 0) s.edges.push_back({std::size_t(k), std::size_t(k - 1), double(k), -1});
  }
  return s;
}

/// Product basis of spin-1/2 nuclei with couplings a_n; bit n set means m_n = +1/2.
inline ConfigSpace product_space(const std::vector<double>& couplings) {
  const int n = static_cast<int>(couplings.size());
  if (n < 1 || n > 20) throw InvalidArgument("product space needs 1 <= N <= 20");
  ConfigSpace s;
  const std::size_t dim = std::size_t(1) << n;
  for (std::size_t c = 0; c < dim; ++c) {
    double h = 0;
    for (int j = 0; j < n; ++j) h += couplings[j] * (((c >> j) & 1u) ? 0.5 : -0.5);
    s.h.push_back(h);
    s.log_thermal.push_back(-n * std::log(2.0));
    for (int j = 0; j < n; ++j) s.edges.push_back({c, c ^ (std::size_t(1) << j), 1.0, ((c >> j) & 1u) ? -1 : +1});
  }
  return s;
}

inline ConfigSpace product_space(int n, double a) { return product_space(std::vector<double>(n, a)); }

/// Up-spin count of every product configuration.
inline std::vector<int> product_sector_index(int n) {
  std::vector<int> out(std::size_t(1) << n);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::popcount(c);
  return out;
}

struct RateTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0;
};

/// Generator G with dp/dt = G p; columns sum to zero.
inline Eigen::MatrixXd build_rate_matrix(std::size_t n, const std::vector<RateTransition>& transitions) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : transitions) {
    if (!(t.rate >= 0) || !std::isfinite(t.rate)) throw NegativeRate("nuclear transition rate");
    if (t.from >= n || t.to >= n) throw DimensionMismatch("transition index");
    if (t.from == t.to) continue;
    g(t.to, t.from) += t.rate;
    g(t.from, t.from) -= t.rate;
  }
  return g;
}

/// Evaluates a rate function once per distinct Overhauser value.
class RateTable {
 public:
  RateTable(const ConfigSpace& s, const RateFunction& w, unsigned workers = 1) {
    std::vector<double> keys;
    for (double h : s.h) keys.push_back(h);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
               keys.end());
    const auto vals = parallel_map<double>(keys.size(), workers, [&](std::size_t i) { return w(keys[i]); });
    for (std::size_t i = 0; i < keys.size(); ++i) table_.emplace(keys[i], vals[i]);
    for (double h : s.h) at_.push_back(lookup(h));
  }
  double operator[](std::size_t state) const { return at_[state]; }

 private:
  double lookup(double h) const {
    auto it = table_.lower_bound(h - 1e-12 * std::max(1.0, std::abs(h)));
    return it->second;
  }
  std::map<double, double> table_;
  std::vector<double> at_;
};

/// Generator for flips at rates multiplicity * (W_dir(h_from) + gamma_C/2).
inline Eigen::MatrixXd build_rate_matrix(const ConfigSpace& s, const RateFunction& w_up, const RateFunction& w_down,
                                         double gamma_c, unsigned workers = 1) {
  if (!(gamma_c >= 0)) throw NegativeRate("gamma_C");
  const RateTable up(s, w_up, workers);
  const RateTable down(s, w_down, workers);
  std::vector<RateTransition> tr;
  tr.reserve(s.edges.size());
  for (const auto& e : s.edges) {
    const double w = e.direction > 0 ? up[e.from] : down[e.from];
    if (!(w >= 0)) throw NegativeRate("flip rate at h = " + std::to_string(s.h[e.from]));
    tr.push_back({e.from, e.to, e.multiplicity * (w + 0.5 * gamma_c)});
  }
  return build_rate_matrix(s.size(), tr);
}

inline Eigen::VectorXd evolve_populations(const Eigen::MatrixXd& g, const Eigen::VectorXd& p0, double t) {
  if (p0.size() != g.rows()) throw DimensionMismatch("population vector");
  if (!(t >= 0)) throw InvalidArgument("negative time");
  if (t == 0) return p0;
  return expm(Eigen::MatrixXd(g * t)) * p0;
}

/// Stationary distribution from the null vector of the generator.
inline Eigen::VectorXd steady_populations(const Eigen::MatrixXd& g) {
  const auto n = g.rows();
  if (n == 1) return Eigen::VectorXd::Ones(1);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0) || sv(n - 2) < 1e-12 * sv(0)) throw DegenerateSteadyState("nuclear generator kernel");
  Eigen::VectorXd p = svd.matrixV().col(n - 1);
  p /= p.sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p(i) < -1e-10) throw NoStationaryState("negative stationary weight");
    p(i) = std::max(p(i), 0.0);
  }
  return p / p.sum();
}

/// Sums configuration probabilities into bins of equal Overhauser value.
inline Eigen::VectorXd project_to_sectors(const Eigen::VectorXd& p, const std::vector<int>& sector, int n_sectors) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_sectors);
  for (Eigen::Index i = 0; i < p.size(); ++i) out(sector[i]) += p(i);
  return out;
}

inline double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw DimensionMismatch("total variation");
  return 0.5 * (p - q).cwiseAbs().sum();
}

struct Moments {
  double mean = 0;
  double variance = 0;
};

inline Moments lattice_moments(const std::vector<double>& h, const Eigen::VectorXd& p) {
  Moments m;
  for (std::size_t k = 0; k < h.size(); ++k) m.mean += p(k) * h[k];
  for (std::size_t k = 0; k < h.size(); ++k) m.variance += p(k) * (h[k] - m.mean) * (h[k] - m.mean);
  return m;
}

/// p_mn(t) = p_mn(0) e^{-Gamma t}
inline double coherence_trace(double gamma_total, double p0, double t) {
  if (!(gamma_total >= 0)) throw NegativeRate("coherence decay");
  return p0 * std::exp(-gamma_total * t);
}

struct NoiseOptions {
  int grid_points = 512;
  int refine = 4;
  double dip_threshold = 0.1;  // relative second difference marking a dip
  unsigned workers = 1;
};

struct FixedPoint {
  double h = 0;
  double slope = 0;  // H'(h)
  bool stable = false;
};

/// Steady Overhauser distribution of the feedback model.
struct NoiseDistribution {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<FixedPoint> roots;
  double h_star = 0;
  double sigma2 = 0;
  double sigma_th2 = 0;
  double h_max = 0;
  int n = 0;
  double a = 0;
  bool integrated_form = false;

  /// Unnormalized log density at h given W_up + W_down and H at that point.
  double log_density(double h, double w_sum, double field) const {
    const double factor = 1 - h * field / (h_max * h_max);
    if (factor <= 0 || w_sum <= 0) return -INFINITY;
    return exponent(h) - std::log(w_sum) - std::log(factor);
  }

  double exponent(double h) const {
    if (!integrated_form) return -(h - h_star) * (h - h_star) / (2 * sigma2);
    auto it = std::lower_bound(grid.begin(), grid.end(), h);
    if (it == grid.begin()) return cumulative_.front();
    if (it == grid.end()) return cumulative_.back();
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    const double t = (h - grid[k - 1]) / (grid[k] - grid[k - 1]);
    return (1 - t) * cumulative_[k - 1] + t * cumulative_[k];
  }

  std::vector<double> cumulative_;
};

/// Polarization field H(h) = N a <I_Z>, <I_Z> = (1/2)(W_up - W_down)/(W_up + W_down).
inline double polarization_field(int n, double a, double w_up, double w_down) {
  const double s = w_up + w_down;
  return s > 0 ? n * a * 0.5 * (w_up - w_down) / s : 0.0;
}

inline NoiseDistribution noise_distribution(const RateFunction& w_up, const RateFunction& w_down, int n, double a,
                                            const NoiseOptions& opt = {}) {
  if (n < 1 || !(a > 0)) throw InvalidArgument("noise distribution needs N >= 1 and a > 0");
  if (opt.grid_points < 3) throw InvalidArgument("grid too small");
  NoiseDistribution out;
  out.n = n;
  out.a = a;
  out.h_max = 0.5 * a * n;
  out.sigma_th2 = 0.25 * a * a * n;
  const double hm = out.h_max;

  struct Sample {
    double up = 0, down = 0;
  };
  auto sample = [&](double h) { return Sample{w_up(h), w_down(h)}; };
  auto field = [&](const Sample& s) { return polarization_field(n, a, s.up, s.down); };

  std::vector<double> grid(opt.grid_points);
  for (int k = 0; k < opt.grid_points; ++k) grid[k] = -hm + 2 * hm * k / (opt.grid_points - 1);
  std::vector<Sample> vals = parallel_map<Sample>(grid.size(), opt.workers, [&](std::size_t k) { return sample(grid[k]); });

  if (opt.refine > 1) {
    std::vector<char> mark(grid.size(), 0);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double w0 = vals[k].up + vals[k].down;
      const double wl = vals[k - 1].up + vals[k - 1].down;
      const double wr = vals[k + 1].up + vals[k + 1].down;
      if (w0 <= wl && w0 <= wr && (wl + wr - 2 * w0) > opt.dip_threshold * std::max(w0, 1e-300)) {
        for (std::size_t j = (k >= 4 ? k - 4 : 0); j < std::min(grid.size() - 1, k + 4); ++j) mark[j] = 1;
      }
    }
    std::vector<double> extra;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
      if (mark[k])
        for (int r = 1; r < opt.refine; ++r) extra.push_back(grid[k] + (grid[k + 1] - grid[k]) * r / opt.refine);
    if (!extra.empty()) {
      const auto ev = parallel_map<Sample>(extra.size(), opt.workers, [&](std::size_t k) { return sample(extra[k]); });
      std::vector<std::pair<double, Sample>> all;
      for (std::size_t k = 0; k < grid.size(); ++k) all.emplace_back(grid[k], vals[k]);
      for (std::size_t k = 0; k < extra.size(); ++k) all.emplace_back(extra[k], ev[k]);
      std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      grid.clear();
      vals.clear();
      for (auto& [h, s] : all) {
        grid.push_back(h);
        vals.push_back(s);
      }
    }
  }

  std::vector<double> hf(grid.size()), wsum(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    hf[k] = field(vals[k]);
    wsum[k] = vals[k].up + vals[k].down;
    if (!(wsum[k] > 0)) throw InvalidArgument("W_up + W_down must be positive on the grid");
  }
  for (std::size_t k = 1; k + 1 < grid.size(); ++k)
    if (1 - grid[k] * hf[k] / (hm * hm) <= 0)
      throw FactorNonpositive("1 - h H(h)/h_max^2 <= 0 at h = " + std::to_string(grid[k]));

  // fixed points of H(h) = h
  auto g = [&](double h) { return field(sample(h)) - h; };
  const double step = 1e-4 * hm;
  auto slope = [&](double h) { return (field(sample(h + step)) - field(sample(h - step))) / (2 * step); };
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double g0 = hf[k] - grid[k], g1 = hf[k + 1] - grid[k + 1];
    double root;
    if (g0 == 0) {
      root = grid[k];
    } else if (g0 * g1 < 0) {
      double lo = grid[k], hi = grid[k + 1], glo = g0;
      for (int it = 0; it < 80 && hi - lo > 1e-13 * hm; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    } else {
      continue;
    }
    const double s = slope(root);
    out.roots.push_back({root, s, s < 1});
  }
  if (out.roots.empty()) throw NoFixedPoint("H(h) - h has no root in [-h_max, h_max]");

  std::vector<FixedPoint> stable;
  for (const auto& r : out.roots)
    if (r.stable) stable.push_back(r);
  out.grid = grid;
  if (stable.size() == 1) {
    out.h_star = stable[0].h;
    out.sigma2 = out.sigma_th2 * (1 - out.h_star * out.h_star / (hm * hm)) / (1 - stable[0].slope);
  } else {
    out.integrated_form = true;
    out.cumulative_.assign(grid.size(), 0.0);
    auto integrand = [&](std::size_t k) {
      const double f = 1 - grid[k] * hf[k] / (hm * hm);
      return f > 0 ? (hf[k] - grid[k]) / (out.sigma_th2 * f) : 0.0;
    };
    for (std::size_t k = 1; k < grid.size(); ++k)
      out.cumulative_[k] = out.cumulative_[k - 1] + 0.5 * (integrand(k - 1) + integrand(k)) * (grid[k] - grid[k - 1]);
    const FixedPoint* best = stable.empty() ? &out.roots.front() : &stable.front();
    out.h_star = best->h;
    out.sigma2 = out.sigma_th2 * (1 - out.h_star * out.h_star / (hm * hm)) / std::max(1 - best->slope, 1e-300);
  }

  std::vector<double> logp(grid.size());
  double mx = -INFINITY;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool edge = k == 0 || k + 1 == grid.size();
    logp[k] = edge ? -INFINITY : out.log_density(grid[k], wsum[k], hf[k]);
    mx = std::max(mx, logp[k]);
  }
  out.density.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out.density[k] = std::exp(logp[k] - mx);
  double norm = 0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    norm += 0.5 * (out.density[k] + out.density[k + 1]) * (grid[k + 1] - grid[k]);
  for (auto& v : out.density) v /= norm;
  return out;
}

/// Analytic density evaluated on the configuration lattice and normalized there.
inline Eigen::VectorXd noise_on_lattice(const NoiseDistribution& d, const std::vector<double>& lattice,
                                        const std::vector<double>& w_up, const std::vector<double>& w_down) {
  const std::size_t n = lattice.size();
  std::vector<double> lp(n);
  double mx = -INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    lp[k] = d.log_density(lattice[k], w_up[k] + w_down[k], polarization_field(d.n, d.a, w_up[k], w_down[k]));
    mx = std::max(mx, lp[k]);
  }
  Eigen::VectorXd p(n);
  for (std::size_t k = 0; k < n; ++k) p(k) = std::exp(lp[k] - mx);
  return p / p.sum();
}

}  // namespace nvbath
