#pragma once

#include <string>
#include <vector>

#include "floq/mpa.hpp"

namespace floq {

struct ObservableReport {
  std::string model;
  int length = 0;
  Rat z_l;
  std::vector<Rat> density;        // <tau_i>, Floquet averaged
  std::vector<Rat> bond_currents;  // bond (i, i+1), i = 1..L-1
  Rat left_flux, right_flux;       // boundary injection / extraction per period
  Rat current;                     // the common stationary value
  std::string method;
};

inline Rat rising_factorial(const Rat& u, int n) {
  Rat r(1);
  for (int k = 0; k < n; ++k) r *= u + k;
  return r;
}

namespace detail {
inline void require_symmetric(const ModelSpec& m, const char* what) {
  if (is_asymmetric(m.family)) throw Error(std::string(what) + ": symmetric families only");
}
inline Rat pow_rat(const Rat& x, int n) {
  Rat r(1);
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}
}  // namespace detail

// Z_L = ((a+c)(b+d)/(ab-cd))^l * Gamma(l+u)/Gamma(u), u = 1/(a+c) + 1/(b+d),
// with l = L for strict exclusion and l = 2L for the fused process.
inline Rat z_l_closed(const ModelSpec& m, int length) {
  detail::require_symmetric(m, "closed-form normalization");
  if (m.a * m.b == m.c * m.d) throw Error("closed-form normalization: ab = cd");
  int l = m.s() * length;
  Rat u = 1 / (m.a + m.c) + 1 / (m.b + m.d);
  Rat pref = (m.a + m.c) * (m.b + m.d) / (m.a * m.b - m.c * m.d);
  return detail::pow_rat(pref, l) * rising_factorial(u, l);
}

inline Rat density_closed(const ModelSpec& m, int length, int site) {
  detail::require_symmetric(m, "closed-form density");
  if (site < 1 || site > length) throw Error("density: site out of range");
  Rat ia = 1 / (m.a + m.c), ib = 1 / (m.b + m.d);
  Rat ra = m.a / (m.a + m.c), rd = m.d / (m.b + m.d);
  if (m.family == Family::SSEP)
    return (ra * (length + ib - site) + rd * (site - 1 + ia)) / (length + ia + ib - 1);
  // The published form of this profile carries a spurious overall 1/2; the
  // factor below restores agreement with the exact stationary state.
  return 2 * (ra * (2 * length + ib - 2 * site + rat(1, 2)) + rd * (2 * site - rat(3, 2) + ia)) /
         (2 * length + ia + ib - 1);
}

inline Rat current_closed(const ModelSpec& m, int length) {
  detail::require_symmetric(m, "closed-form current");
  Rat ia = 1 / (m.a + m.c), ib = 1 / (m.b + m.d);
  Rat drive = m.a / (m.a + m.c) - m.d / (m.b + m.d);
  if (m.family == Family::SSEP) return 2 * m.kappa * drive / (length + ia + ib - 1);
  return 4 * m.kappa * drive / (2 * length + ia + ib - 1);
}

// Z_L as the closure evaluation of C(z_1)...C(z_L) with the staggered
// arguments.
inline Rat z_l_mpa(const ModelSpec& m, int length, const BoundaryClosure& closure) {
  Rat kc = reflected(m.convention(), m.kappa);
  NCPolynomial p{Rat(1)};
  for (int i = 1; i <= length; ++i) p = p * c_poly(m, i % 2 == 1 ? m.kappa : kc);
  return closure.scalar_eval(p);
}

inline Rat z_l_mpa(const ModelSpec& m, int length) {
  BoundaryClosure closure(m, default_n_max(m, length));
  return z_l_mpa(m, length, closure);
}

namespace detail {

// Two-site marginal of a configuration distribution on sites (i, i+1),
// cyclic allowed.
template <class T>
std::vector<T> pair_marginal(const std::vector<T>& probs, int length, int d, int site_i,
                             int site_j) {
  std::vector<T> marg(size_t(d) * d, T(0));
  for (size_t idx = 0; idx < probs.size(); ++idx) {
    size_t rem = idx;
    std::vector<int> occ(length);
    for (int k = length - 1; k >= 0; --k) {
      occ[k] = int(rem % d);
      rem /= d;
    }
    marg[size_t(occ[site_i - 1]) * d + occ[site_j - 1]] += probs[idx];
  }
  return marg;
}

// Expected rightward particle transfer of one application of the two-site
// update to the given pair marginal.
inline Rat bond_transfer(const Matrix<Rat>& u, const std::vector<Rat>& marg, int d) {
  Rat flux(0);
  for (int in = 0; in < d * d; ++in) {
    if (marg[in] == 0) continue;
    int tau_left = in / d;
    for (int out = 0; out < d * d; ++out)
      if (!is_zero(u(out, in))) flux += marg[in] * u(out, in) * (tau_left - out / d);
  }
  return flux;
}

// Expected occupancy change of one application of a single-site boundary
// matrix to the site marginal.
inline Rat site_transfer(const Matrix<Rat>& k, const std::vector<Rat>& marg, int d) {
  Rat flux(0);
  for (int in = 0; in < d; ++in) {
    if (marg[in] == 0) continue;
    for (int out = 0; out < d; ++out)
      if (!is_zero(k(out, in))) flux += marg[in] * k(out, in) * (out - in);
  }
  return flux;
}

template <class T>
std::vector<T> site_marginal(const std::vector<T>& probs, int length, int d, int site) {
  std::vector<T> marg(d, T(0));
  for (size_t idx = 0; idx < probs.size(); ++idx) {
    size_t rem = idx;
    int occ = 0;
    for (int k = length - 1; k >= 0; --k) {
      if (k == site - 1) occ = int(rem % d);
      rem /= d;
    }
    marg[occ] += probs[idx];
  }
  return marg;
}

}  // namespace detail

// Densities and currents from the two Floquet-phase stationary vectors.
// Odd bonds are updated while the system is in phase S, even bonds and the
// left boundary in phase S'; the right boundary in phase S.
inline ObservableReport observables_from_state(const ChainSpec& chain,
                                               const std::vector<Rat>& probs,
                                               const std::vector<Rat>& companion_probs,
                                               const std::string& method) {
  chain.check();
  if (chain.boundary != Boundary::Open)
    throw Error("state observables: open chains only");
  const ModelSpec& m = chain.model;
  const int L = chain.length;
  const int d = m.dim_local();
  ObservableReport rep;
  rep.model = family_name(m.family);
  rep.length = L;
  rep.method = method;
  for (int i = 1; i <= L; ++i) {
    auto ms = detail::site_marginal(probs, L, d, i);
    auto mc = detail::site_marginal(companion_probs, L, d, i);
    Rat mean(0);
    for (int occ = 0; occ < d; ++occ) mean += Rat(occ) * (ms[occ] + mc[occ]);
    rep.density.push_back(mean / 2);
  }
  Matrix<Rat> u = local_update(m);
  for (int i = 1; i < L; ++i) {
    const auto& phase = (i % 2 == 1) ? probs : companion_probs;
    auto marg = detail::pair_marginal(phase, L, d, i, i + 1);
    rep.bond_currents.push_back(detail::bond_transfer(u, marg, d));
  }
  rep.left_flux = detail::site_transfer(boundary_left(m),
                                        detail::site_marginal(companion_probs, L, d, 1), d);
  rep.right_flux =
      -detail::site_transfer(boundary_right(m), detail::site_marginal(probs, L, d, L), d);
  rep.current = rep.bond_currents.empty() ? rep.left_flux : rep.bond_currents.front();
  return rep;
}

}  // namespace floq
