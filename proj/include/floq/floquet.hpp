#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floq/kernels.hpp"

namespace floq {

struct ChainSpec {
  ModelSpec model;
  int length = 3;
  Boundary boundary = Boundary::Open;

  void check() const {
    model.check_basic();
    if (length < 2) throw Error("chain too short");
    if (boundary == Boundary::Open && length % 2 == 0)
      throw Error("open chains need an odd number of sites");
    if (boundary == Boundary::Periodic && length % 2 == 1)
      throw Error("periodic chains need an even number of sites");
  }

  size_t state_count() const {
    size_t n = 1;
    for (int i = 0; i < length; ++i) n *= model.dim_local();
    return n;
  }
};

// Local two-site update U = P R(2 kappa) (additive) or P R(kappa^2)
// (multiplicative).
inline Matrix<Rat> local_update(const ModelSpec& m) {
  Rat arg = m.convention() == Convention::Additive ? Rat(2 * m.kappa) : Rat(m.kappa * m.kappa);
  return permutation_op<Rat>(m.dim_local()) * r_matrix(m, arg);
}

inline Matrix<Rat> boundary_left(const ModelSpec& m) { return k_left(m, m.kappa); }
inline Matrix<Rat> boundary_right(const ModelSpec& m) {
  return k_right(m, reflected(m.convention(), m.kappa));
}

struct FloquetOperators {
  Matrix<Rat> u_local;               // U
  Matrix<Rat> u_odd;                 // odd half-step (includes Bbar_L when open)
  Matrix<Rat> u_even;                // even half-step (includes B_1 when open)
  std::optional<Matrix<Rat>> b_left;
  std::optional<Matrix<Rat>> b_right;
  Matrix<Rat> markov;                // open: U^e U^o ; periodic: U^o U^e
};

inline FloquetOperators build_floquet(const ChainSpec& chain) {
  chain.check();
  const ModelSpec& m = chain.model;
  const int L = chain.length;
  const int d = m.dim_local();
  FloquetOperators ops;
  ops.u_local = local_update(m);
  const size_t dim = chain.state_count();
  Matrix<Rat> u_odd = Matrix<Rat>::identity(int(dim));
  Matrix<Rat> u_even = Matrix<Rat>::identity(int(dim));
  if (chain.boundary == Boundary::Open) {
    for (int k = 1; 2 * k <= L - 1; ++k)
      u_odd = u_odd * embed_chain(ops.u_local, {2 * k - 1, 2 * k}, L, d);
    ops.b_right = boundary_right(m);
    u_odd = u_odd * embed_chain(*ops.b_right, {L}, L, d);
    ops.b_left = boundary_left(m);
    u_even = embed_chain(*ops.b_left, {1}, L, d);
    for (int k = 1; 2 * k + 1 <= L; ++k)
      u_even = u_even * embed_chain(ops.u_local, {2 * k, 2 * k + 1}, L, d);
    ops.markov = u_even * u_odd;
  } else {
    for (int k = 1; 2 * k <= L; ++k)
      u_odd = u_odd * embed_chain(ops.u_local, {2 * k - 1, 2 * k}, L, d);
    for (int k = 1; 2 * k < L; ++k)
      u_even = u_even * embed_chain(ops.u_local, {2 * k, 2 * k + 1}, L, d);
    u_even = u_even * embed_chain(ops.u_local, {L, 1}, L, d);  // wraps around
    ops.markov = u_odd * u_even;
  }
  ops.u_odd = u_odd;
  ops.u_even = u_even;
  return ops;
}

// Staggered inhomogeneity fill: open z_odd = kappa, z_even = kappa-check;
// periodic z_odd = kappa-check, z_even = kappa.
inline std::vector<Rat> staggered_inhomogeneities(const ChainSpec& chain) {
  const ModelSpec& m = chain.model;
  Rat kc = reflected(m.convention(), m.kappa);
  std::vector<Rat> zs(chain.length);
  for (int i = 1; i <= chain.length; ++i) {
    bool odd = (i % 2 == 1);
    if (chain.boundary == Boundary::Open)
      zs[i - 1] = odd ? m.kappa : kc;
    else
      zs[i - 1] = odd ? kc : m.kappa;
  }
  return zs;
}

// Inhomogeneous transfer matrix: trace over the auxiliary space of the
// ordered R (and K) product. Periodic: tr_0( R_0L ... R_01 ). Open
// (Sklyanin): tr_0( Ktilde_0 R_0L ... R_01 K_0 R_10 ... R_L0 ).
inline Matrix<Rat> transfer_matrix(const ChainSpec& chain, const Rat& z,
                                   const std::vector<Rat>& inhomogeneities) {
  chain.check();
  const ModelSpec& m = chain.model;
  const int L = chain.length;
  const int d = m.dim_local();
  if (int(inhomogeneities.size()) != L) throw Error("transfer matrix: need L inhomogeneities");
  const Convention conv = m.convention();
  std::vector<int> dims(L + 1, d);  // factor 0 is the auxiliary space

  Matrix<Rat> prod = embed(Matrix<Rat>::identity(d), {0}, dims);
  if (chain.boundary == Boundary::Open) prod = embed(k_dual(m, z), {0}, dims);
  for (int i = L; i >= 1; --i)
    prod = prod * embed(r_matrix(m, arg_diff(conv, z, inhomogeneities[i - 1])), {0, i}, dims);
  if (chain.boundary == Boundary::Open) {
    prod = prod * embed(k_left(m, z), {0}, dims);
    for (int i = 1; i <= L; ++i)
      prod = prod * embed(r_matrix(m, arg_sum(conv, z, inhomogeneities[i - 1])), {i, 0}, dims);
  }
  return partial_trace_first(prod, d);
}

inline Matrix<Rat> transfer_matrix_staggered(const ChainSpec& chain, const Rat& z) {
  return transfer_matrix(chain, z, staggered_inhomogeneities(chain));
}

// ---------------------------------------------------------------------------
// Parameter-domain validation: every local transition probability of the
// model (entries of U, B, Bbar) must land in [0,1]. Report-only.
// ---------------------------------------------------------------------------

struct DomainViolation {
  std::string context;  // "bulk", "left-boundary", "right-boundary"
  int row = 0, col = 0;
  Rat value;
};

struct DomainReport {
  bool valid = true;
  bool degenerate = false;  // frozen local dynamics (U = identity)
  std::vector<DomainViolation> violations;
};

inline DomainReport validate_parameters(const ModelSpec& m) {
  m.check_basic();
  DomainReport report;
  auto scan = [&](const std::string& ctx, const Matrix<Rat>& mat) {
    for (int i = 0; i < mat.rows(); ++i)
      for (int j = 0; j < mat.cols(); ++j)
        if (mat(i, j) < 0 || mat(i, j) > 1) {
          report.valid = false;
          report.violations.push_back({ctx, i, j, mat(i, j)});
        }
  };
  Matrix<Rat> u = local_update(m);
  scan("bulk", u);
  scan("left-boundary", boundary_left(m));
  scan("right-boundary", boundary_right(m));
  report.degenerate = (u == Matrix<Rat>::identity(u.rows()));
  return report;
}

// Diagonal operator counting total occupancy; the periodic Markov matrix
// commutes with it.
inline Matrix<Rat> total_occupancy_op(int L, int d) {
  size_t dim = 1;
  for (int i = 0; i < L; ++i) dim *= d;
  Matrix<Rat> n{int(dim), int(dim)};
  for (size_t idx = 0; idx < dim; ++idx) {
    size_t rem = idx;
    long tot = 0;
    for (int i = 0; i < L; ++i) {
      tot += long(rem % d);
      rem /= d;
    }
    n(int(idx), int(idx)) = Rat(tot);
  }
  return n;
}

}  // namespace floq
