#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floq/observables.hpp"

namespace floq {

// ---------------------------------------------------------------------------
// Exact eigen-solve oracle.
// ---------------------------------------------------------------------------

// Strong connectivity of the transition digraph (edge in -> out when
// M(out,in) > 0), checked by forward and backward reachability from state 0.
inline bool is_irreducible(const Matrix<Rat>& markov, int* forward_reach = nullptr) {
  const int n = markov.rows();
  auto reach_count = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (seen[w]) continue;
        const Rat& entry = forward ? markov(w, v) : markov(v, w);
        if (entry != 0) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count;
  };
  int fwd = reach_count(true);
  if (forward_reach) *forward_reach = fwd;
  return fwd == n && reach_count(false) == n;
}

// Unique stationary vector of a column-stochastic matrix: exact kernel of
// M - I, normalized to sum one.
inline std::vector<Rat> stationary_eigensolve(const Matrix<Rat>& markov) {
  const int n = markov.rows();
  int reach = 0;
  if (!is_irreducible(markov, &reach))
    throw Error("eigensolve: reducible chain (" + std::to_string(reach) + "/" +
                std::to_string(n) + " states reachable from state 0)");
  Matrix<Rat> shifted = markov - Matrix<Rat>::identity(n);
  auto basis = kernel_basis(shifted);
  if (basis.size() != 1)
    throw Error("eigensolve: kernel dimension " + std::to_string(basis.size()));
  Rat total(0);
  for (auto& x : basis[0]) total += x;
  if (total == 0) throw Error("eigensolve: zero-sum kernel vector");
  std::vector<Rat> probs(n);
  for (int i = 0; i < n; ++i) {
    probs[i] = basis[0][i] / total;
    if (probs[i] < 0) throw Error("eigensolve: negative stationary entry");
  }
  return probs;
}

inline std::vector<Rat> stationary_eigensolve(const ChainSpec& chain) {
  if (chain.state_count() > 2187) throw Error("eigensolve: dimension too large for exact mode");
  return stationary_eigensolve(build_floquet(chain).markov);
}

// Restriction of the periodic dynamics to a fixed-particle-number sector.
inline std::vector<Rat> sector_stationary(const ChainSpec& chain, int particles) {
  const ModelSpec& m = chain.model;
  const int d = m.dim_local();
  const int L = chain.length;
  auto ops = build_floquet(chain);
  std::vector<size_t> sector;
  for (size_t idx = 0; idx < chain.state_count(); ++idx) {
    size_t rem = idx;
    int total = 0;
    for (int i = 0; i < L; ++i) {
      total += int(rem % d);
      rem /= d;
    }
    if (total == particles) sector.push_back(idx);
  }
  if (sector.empty()) throw Error("sector solve: empty sector");
  Matrix<Rat> restricted{int(sector.size()), int(sector.size())};
  for (size_t j = 0; j < sector.size(); ++j) {
    Rat col_sum(0);
    for (size_t i = 0; i < sector.size(); ++i) {
      restricted(int(i), int(j)) = ops.markov(int(sector[i]), int(sector[j]));
      col_sum += restricted(int(i), int(j));
    }
    if (col_sum != 1) throw Error("sector solve: dynamics leaves the sector");
  }
  return stationary_eigensolve(restricted);
}

// Rejection sampling of parameter sets whose local operators are genuinely
// stochastic (all entries in [0,1]) and, optionally, give an irreducible
// chain at the probe length. The proposal windows per family were found
// empirically and are generous; rejection trims them exactly.
inline ModelSpec sample_valid_model(Family family, std::mt19937_64& rng,
                                    int irreducible_probe_length = 0) {
  auto draw = [&](int lo_num, int hi_num, int den) {
    return rat(lo_num + long(rng() % uint64_t(hi_num - lo_num + 1)), den);
  };
  for (int attempt = 0; attempt < 20000; ++attempt) {
    ModelSpec m;
    m.family = family;
    switch (family) {
      case Family::SSEP:
        m.kappa = draw(1, 8, 16);
        m.a = draw(1, 8, 16);
        m.b = draw(1, 8, 16);
        m.c = draw(0, 4, 16);
        m.d = draw(0, 4, 16);
        break;
      case Family::FusedSSEP:
        m.kappa = draw(9, 14, 16);
        m.a = draw(1, 8, 16);
        m.b = draw(1, 8, 16);
        m.c = draw(0, 4, 16);
        m.d = draw(0, 4, 16);
        break;
      case Family::ASEP:
        m.t = draw(2, 10, 16);
        m.kappa = draw(2, 14, 16);
        m.a = draw(4, 56, 16);
        m.b = draw(4, 56, 16);
        m.c = draw(0, 4, 16);
        m.d = draw(0, 4, 16);
        break;
      case Family::FusedASEP:
        m.t = draw(2, 10, 16);
        m.kappa = draw(1, 12, 16);
        m.a = draw(4, 56, 16);
        m.b = draw(4, 56, 16);
        m.c = draw(0, 4, 16);
        m.d = draw(0, 4, 16);
        break;
    }
    try {
      m.check_basic();
      if (m.a * m.b == m.c * m.d) continue;
      auto dom = validate_parameters(m);
      if (!dom.valid || dom.degenerate) continue;
      if (irreducible_probe_length > 0) {
        ChainSpec chain{m, irreducible_probe_length, Boundary::Open};
        if (!is_irreducible(build_floquet(chain).markov)) continue;
      }
      return m;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error("valid-parameter sampling exhausted for " + family_name(family));
}

// ---------------------------------------------------------------------------
// Monte Carlo sampler of the two-step parallel dynamics.
// ---------------------------------------------------------------------------

struct MCConfig {
  uint64_t seed = 1;
  long burn_in = 1000;
  long measure = 10000;
  int replicas = 4;

  void check() const {
    if (measure <= 0) throw Error("monte carlo: measure > 0 required");
    if (replicas < 1) throw Error("monte carlo: replicas >= 1 required");
    if (burn_in < 0) throw Error("monte carlo: negative burn-in");
  }
};

struct MCReport {
  int length = 0;
  long periods = 0;
  int replicas = 0;
  std::vector<double> density, density_err;
  std::vector<double> bond_current, bond_current_err;
  double left_flux = 0, left_flux_err = 0;
  double right_flux = 0, right_flux_err = 0;
  double current = 0, current_err = 0;
};

namespace detail {

// Counter-based stream: one hash per decision, keyed on
// (seed, replica, period, phase, site). splitmix64-style finalizer.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform01(uint64_t seed, uint64_t replica, uint64_t period, uint64_t phase,
                        uint64_t site) {
  uint64_t stream = mix64(seed + 0x632be59bd9b4e019ULL * (replica + 1));
  uint64_t counter = (period * 2 + phase) * 0x9e3779b97f4a7c15ULL + site;
  uint64_t h = mix64(mix64(stream ^ counter) + site);
  return double(h >> 11) * 0x1.0p-53;
}

// Cumulative column tables for sampling a stochastic matrix in floats.
inline std::vector<double> cumulative_table(const Matrix<Rat>& op) {
  const int n = op.rows();
  std::vector<double> cum(size_t(n) * n);
  for (int j = 0; j < n; ++j) {
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      acc += op(i, j).get_d();
      cum[size_t(j) * n + i] = acc;
    }
    cum[size_t(j) * n + (n - 1)] = 1.0;  // guard against rounding
  }
  return cum;
}

inline int sample_column(const std::vector<double>& cum, int n, int col, double u) {
  const double* c = &cum[size_t(col) * n];
  int lo = 0, hi = n - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (u < c[mid])
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

struct ReplicaStats {
  std::vector<double> density;
  std::vector<double> bond;
  double left = 0, right = 0;
};

}  // namespace detail

inline MCReport mc_run(const ChainSpec& chain, const MCConfig& cfg) {
  chain.check();
  cfg.check();
  const ModelSpec& m = chain.model;
  const int L = chain.length;
  const int d = m.dim_local();
  const bool open = chain.boundary == Boundary::Open;
  auto u_table = detail::cumulative_table(local_update(m));
  std::vector<double> b_table, bbar_table;
  if (open) {
    b_table = detail::cumulative_table(boundary_left(m));
    bbar_table = detail::cumulative_table(boundary_right(m));
  }
  const int n_bonds = open ? L - 1 : L;

  std::vector<detail::ReplicaStats> stats(cfg.replicas);
  for (int rep = 0; rep < cfg.replicas; ++rep) {
    auto& st = stats[rep];
    st.density.assign(L, 0.0);
    st.bond.assign(n_bonds, 0.0);
    std::vector<int> occ(L, 0);
    // deterministic scrambled initial condition
    for (int i = 0; i < L; ++i)
      occ[i] = int(detail::mix64(cfg.seed ^ detail::mix64(uint64_t(rep) * 31 + i)) % d);

    auto update_pair = [&](int site_i, int site_j, uint64_t period, uint64_t phase) -> int {
      int in = occ[site_i] * d + occ[site_j];
      double u = detail::uniform01(cfg.seed, rep, period, phase, uint64_t(site_i));
      int out = detail::sample_column(u_table, d * d, in, u);
      int moved = occ[site_i] - out / d;
      occ[site_i] = out / d;
      occ[site_j] = out % d;
      return moved;
    };
    auto update_site = [&](const std::vector<double>& table, int site, uint64_t period,
                           uint64_t phase) -> int {
      double u = detail::uniform01(cfg.seed, rep, period, phase, uint64_t(site) | (1ULL << 20));
      int out = detail::sample_column(table, d, occ[site], u);
      int delta = out - occ[site];
      occ[site] = out;
      return delta;
    };

    const long total = cfg.burn_in + cfg.measure;
    for (long period = 0; period < total; ++period) {
      const bool measuring = period >= cfg.burn_in;
      if (open) {
        // odd half-step: odd bonds then the right boundary
        for (int i = 0; i + 1 < L; i += 2) {
          int moved = update_pair(i, i + 1, period, 0);
          if (measuring) st.bond[i] += moved;
        }
        int extracted = -update_site(bbar_table, L - 1, period, 0);
        if (measuring) st.right += extracted;
        if (measuring)
          for (int i = 0; i < L; ++i) st.density[i] += 0.5 * occ[i];
        // even half-step: left boundary then even bonds
        int injected = update_site(b_table, 0, period, 1);
        if (measuring) st.left += injected;
        for (int i = 1; i + 1 < L; i += 2) {
          int moved = update_pair(i, i + 1, period, 1);
          if (measuring) st.bond[i] += moved;
        }
        if (measuring)
          for (int i = 0; i < L; ++i) st.density[i] += 0.5 * occ[i];
      } else {
        for (int i = 0; i + 1 < L; i += 2) {
          int moved = update_pair(i, i + 1, period, 0);
          if (measuring) st.bond[i] += moved;
        }
        if (measuring)
          for (int i = 0; i < L; ++i) st.density[i] += 0.5 * occ[i];
        for (int i = 1; i + 1 < L; i += 2) {
          int moved = update_pair(i, i + 1, period, 1);
          if (measuring) st.bond[i] += moved;
        }
        {
          // wraparound bond (L, 1)
          int in = occ[L - 1] * d + occ[0];
          double u = detail::uniform01(cfg.seed, rep, period, 1, uint64_t(L - 1));
          int out = detail::sample_column(u_table, d * d, in, u);
          int moved = occ[L - 1] - out / d;
          occ[L - 1] = out / d;
          occ[0] = out % d;
          if (measuring) st.bond[L - 1] += moved;
        }
        if (measuring)
          for (int i = 0; i < L; ++i) st.density[i] += 0.5 * occ[i];
      }
    }
    const double norm = 1.0 / double(cfg.measure);
    for (auto& x : st.density) x *= norm;
    for (auto& x : st.bond) x *= norm;
    st.left *= norm;
    st.right *= norm;
  }

  // replica mean and standard error
  MCReport report;
  report.length = L;
  report.periods = cfg.measure;
  report.replicas = cfg.replicas;
  const int r = cfg.replicas;
  auto mean_err = [&](auto getter, double& mean, double& err) {
    mean = 0;
    for (int k = 0; k < r; ++k) mean += getter(stats[k]);
    mean /= r;
    double var = 0;
    for (int k = 0; k < r; ++k) {
      double dev = getter(stats[k]) - mean;
      var += dev * dev;
    }
    err = r > 1 ? std::sqrt(var / (r - 1) / r) : 0.0;
  };
  report.density.resize(L);
  report.density_err.resize(L);
  for (int i = 0; i < L; ++i)
    mean_err([&](const detail::ReplicaStats& s) { return s.density[i]; }, report.density[i],
             report.density_err[i]);
  report.bond_current.resize(n_bonds);
  report.bond_current_err.resize(n_bonds);
  for (int i = 0; i < n_bonds; ++i)
    mean_err([&](const detail::ReplicaStats& s) { return s.bond[i]; }, report.bond_current[i],
             report.bond_current_err[i]);
  if (open) {
    mean_err([&](const detail::ReplicaStats& s) { return s.left; }, report.left_flux,
             report.left_flux_err);
    mean_err([&](const detail::ReplicaStats& s) { return s.right; }, report.right_flux,
             report.right_flux_err);
  }
  report.current = report.bond_current.empty() ? report.left_flux : report.bond_current.front();
  report.current_err =
      report.bond_current_err.empty() ? report.left_flux_err : report.bond_current_err.front();
  return report;
}

}  // namespace floq
