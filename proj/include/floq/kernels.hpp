#pragma once

#include <cmath>

#include "floq/matrix.hpp"
#include "floq/model.hpp"

namespace floq {

// ---------------------------------------------------------------------------
// Fundamental (s = 1) R and K matrices.
// Basis ordering for two-site operators: |00>, |01>, |10>, |11>.
// ---------------------------------------------------------------------------

template <class T>
Matrix<T> ssep_r(const T& z) {
  T den = z + T(1);
  if (is_zero(den)) throw Error("ssep_r: pole at z = -1");
  Matrix<T> r(4, 4);
  r(0, 0) = T(1);
  r(1, 1) = z / den;
  r(1, 2) = T(1) / den;
  r(2, 1) = T(1) / den;
  r(2, 2) = z / den;
  r(3, 3) = T(1);
  return r;
}

template <class T>
Matrix<T> asep_r(const T& t, const T& z) {
  T t2 = t * t;
  T den = T(1) - t2 * z;
  if (is_zero(den)) throw Error("asep_r: pole at t^2 z = 1");
  Matrix<T> r(4, 4);
  r(0, 0) = T(1);
  r(1, 1) = (T(1) - z) * t2 / den;
  r(1, 2) = z * (T(1) - t2) / den;
  r(2, 1) = (T(1) - t2) / den;
  r(2, 2) = (T(1) - z) / den;
  r(3, 3) = T(1);
  return r;
}

template <class T>
Matrix<T> ssep_k(const T& a, const T& c, const T& z) {
  T den = (a + c) * z + T(1);
  if (is_zero(den)) throw Error("ssep_k: pole");
  Matrix<T> k(2, 2);
  k(0, 0) = ((c - a) * z + T(1)) / den;
  k(0, 1) = T(2) * c * z / den;
  k(1, 0) = T(2) * a * z / den;
  k(1, 1) = ((a - c) * z + T(1)) / den;
  return k;
}

template <class T>
Matrix<T> ssep_kbar(const T& b, const T& d, const T& z) {
  T den = (b + d) * z - T(1);
  if (is_zero(den)) throw Error("ssep_kbar: pole");
  Matrix<T> k(2, 2);
  k(0, 0) = ((b - d) * z - T(1)) / den;
  k(0, 1) = T(2) * b * z / den;
  k(1, 0) = T(2) * d * z / den;
  k(1, 1) = ((d - b) * z - T(1)) / den;
  return k;
}

template <class T>
Matrix<T> asep_k(const T& a, const T& c, const T& z) {
  T den = c * z * z + z - a;
  if (is_zero(den)) throw Error("asep_k: pole");
  Matrix<T> k(2, 2);
  k(0, 0) = ((c - a) * z * z + z) / den;
  k(0, 1) = c * (z * z - T(1)) / den;
  k(1, 0) = a * (z * z - T(1)) / den;
  k(1, 1) = (c - a + z) / den;
  return k;
}

template <class T>
Matrix<T> asep_kbar(const T& b, const T& d, const T& z) {
  T den = b * z * z - z - d;
  if (is_zero(den)) throw Error("asep_kbar: pole");
  Matrix<T> k(2, 2);
  k(0, 0) = ((b - d) * z * z - z) / den;
  k(0, 1) = b * (z * z - T(1)) / den;
  k(1, 0) = d * (z * z - T(1)) / den;
  k(1, 1) = (b - d - z) / den;
  return k;
}

// ---------------------------------------------------------------------------
// Hand-coded fused (s = 2) matrices, exactly as printed. The fusion-built
// versions below must agree with these entrywise; that equality is the
// strongest transcription test in the repo, and on any mismatch the
// fusion-built matrix is authoritative.
// Basis ordering: |00>,|01>,|02>,|10>,|11>,|12>,|20>,|21>,|22>.
// ---------------------------------------------------------------------------

template <class T>
Matrix<T> fused_ssep_r_explicit(const T& z) {
  T d1 = z + T(1), d2 = z + T(2);
  if (is_zero(d1) || is_zero(d2)) throw Error("fused_ssep_r: pole");
  T dd = d1 * d2;
  Matrix<T> r(9, 9);
  r(0, 0) = T(1);
  r(1, 1) = z / d2;
  r(1, 3) = T(2) / d2;
  r(2, 2) = z * (z - T(1)) / dd;
  r(2, 4) = z / dd;
  r(2, 6) = T(2) / dd;
  r(3, 1) = T(2) / d2;
  r(3, 3) = z / d2;
  r(4, 2) = T(4) * z / dd;
  r(4, 4) = (z * z + z + T(2)) / dd;
  r(4, 6) = T(4) * z / dd;
  r(5, 5) = z / d2;
  r(5, 7) = T(2) / d2;
  r(6, 2) = T(2) / dd;
  r(6, 4) = z / dd;
  r(6, 6) = z * (z - T(1)) / dd;
  r(7, 5) = T(2) / d2;
  r(7, 7) = z / d2;
  r(8, 8) = T(1);
  return r;
}

template <class T>
Matrix<T> fused_asep_r_explicit(const T& t, const T& z) {
  T t2 = t * t, t4 = t2 * t2, t6 = t4 * t2;
  T d1 = T(1) - z * t4, d2 = T(1) - z * t2;
  if (is_zero(d1) || is_zero(d2) || is_zero(t2)) throw Error("fused_asep_r: pole");
  T dd = d1 * d2;
  Matrix<T> r(9, 9);
  r(0, 0) = T(1);
  r(1, 1) = t4 * (T(1) - z) / d1;
  r(1, 3) = z * (T(1) - t4) / d1;
  r(2, 2) = t6 * (t2 - z) * (T(1) - z) / dd;
  r(2, 4) = z * t4 * (T(1) - t2) * (T(1) - z) / dd;
  r(2, 6) = z * z * (T(1) - t2) * (T(1) - t4) / dd;
  r(3, 1) = (T(1) - t4) / d1;
  r(3, 3) = (T(1) - z) / d1;
  r(4, 2) = t2 * (T(1) + t2) * (T(1) - t4) * (T(1) - z) / dd;
  r(4, 4) = (z * t6 + z * z * t4 - T(2) * z * t4 - T(2) * z * t2 + t2 + z) / dd;
  r(4, 6) = z * (T(1) - z) * (T(1) + t2) * (T(1) - t4) / (t2 * dd);
  r(5, 5) = t4 * (T(1) - z) / d1;
  r(5, 7) = z * (T(1) - t4) / d1;
  r(6, 2) = (T(1) - t2) * (T(1) - t4) / dd;
  r(6, 4) = (T(1) - z) * (T(1) - t2) / dd;
  r(6, 6) = (t2 - z) * (T(1) - z) / (t2 * dd);
  r(7, 5) = (T(1) - t4) / d1;
  r(7, 7) = (T(1) - z) / d1;
  r(8, 8) = T(1);
  return r;
}

namespace detail {
// Diagonal entries of the fused K matrices are never transcribed; they are
// Markovian completions (1 minus the column sum of the printed entries).
template <class T>
void complete_diagonal(Matrix<T>& k) {
  for (int j = 0; j < k.cols(); ++j) {
    T s(0);
    for (int i = 0; i < k.rows(); ++i)
      if (i != j) s += k(i, j);
    k(j, j) = T(1) - s;
  }
}
}  // namespace detail

template <class T>
Matrix<T> fused_ssep_k_explicit(const T& a, const T& c, const T& z) {
  T g1 = (T(2) * z - T(1)) * (a + c) + T(2);
  T g2 = (T(2) * z + T(1)) * (a + c) + T(2);
  if (is_zero(g1) || is_zero(g2)) throw Error("fused_ssep_k: pole");
  T dd = g1 * g2;
  T pm = (T(2) * z - T(1)) * (c - a) + T(2);
  T mp = (T(2) * z - T(1)) * (a - c) + T(2);
  Matrix<T> k(3, 3);
  k(0, 1) = T(4) * c * z * pm / dd;
  k(0, 2) = T(8) * c * c * z * (T(2) * z - T(1)) / dd;
  k(1, 0) = T(8) * a * z * pm / dd;
  k(1, 2) = T(8) * c * z * mp / dd;
  k(2, 0) = T(8) * a * a * z * (T(2) * z - T(1)) / dd;
  k(2, 1) = T(4) * a * z * mp / dd;
  detail::complete_diagonal(k);
  return k;
}

template <class T>
Matrix<T> fused_ssep_kbar_explicit(const T& b, const T& d, const T& z) {
  T g1 = (T(2) * z - T(1)) * (b + d) - T(2);
  T g2 = (T(2) * z + T(1)) * (b + d) - T(2);
  if (is_zero(g1) || is_zero(g2)) throw Error("fused_ssep_kbar: pole");
  T dd = g1 * g2;
  T bd = (T(2) * z + T(1)) * (b - d) - T(2);
  T db = (T(2) * z + T(1)) * (d - b) - T(2);
  Matrix<T> k(3, 3);
  k(0, 1) = T(4) * b * z * bd / dd;
  k(0, 2) = T(8) * b * b * z * (T(2) * z + T(1)) / dd;
  k(1, 0) = T(8) * d * z * bd / dd;
  k(1, 2) = T(8) * b * z * db / dd;
  k(2, 0) = T(8) * d * d * z * (T(2) * z + T(1)) / dd;
  k(2, 1) = T(4) * d * z * db / dd;
  detail::complete_diagonal(k);
  return k;
}

template <class T>
Matrix<T> fused_asep_k_explicit(const T& t, const T& a, const T& c, const T& z) {
  T t2 = t * t;
  T g1 = a * t2 - c * z * z - z * t;
  T g2 = a - c * t2 * z * z - z * t;
  if (is_zero(g1) || is_zero(g2)) throw Error("fused_asep_k: pole");
  T dd = g1 * g2;
  T omz2 = T(1) - z * z;
  T acz = a * z - c * z - t;
  T act = a * t - c * t - z;
  Matrix<T> k(3, 3);
  k(0, 1) = c * t2 * z * omz2 * acz / dd;
  k(0, 2) = c * c * t2 * (t2 - z * z) * omz2 / dd;
  k(1, 0) = a * (T(1) + t2) * z * omz2 * acz / dd;
  k(1, 2) = c * t * (T(1) + t2) * omz2 * act / dd;
  k(2, 0) = a * a * (t2 - z * z) * omz2 / dd;
  k(2, 1) = a * t * omz2 * act / dd;
  detail::complete_diagonal(k);
  return k;
}

template <class T>
Matrix<T> fused_asep_kbar_explicit(const T& t, const T& b, const T& d, const T& z) {
  T t2 = t * t;
  T g1 = b * z * z - d * t2 - z * t;
  T g2 = b * t2 * z * z - d - z * t;
  if (is_zero(g1) || is_zero(g2)) throw Error("fused_asep_kbar: pole");
  T dd = g1 * g2;
  T omz2 = T(1) - z * z;
  T bdz = T(1) + d * z * t - b * z * t;
  T dbz = d - b + z * t;
  Matrix<T> k(3, 3);
  k(0, 1) = b * t * z * omz2 * bdz / dd;
  k(0, 2) = b * b * omz2 * (T(1) - t2 * z * z) / dd;
  k(1, 0) = d * t * (T(1) + t2) * z * omz2 * bdz / dd;
  k(1, 2) = b * (T(1) + t2) * omz2 * dbz / dd;
  k(2, 0) = d * d * t2 * omz2 * (T(1) - t2 * z * z) / dd;
  k(2, 1) = d * t2 * omz2 * dbz / dd;
  detail::complete_diagonal(k);
  return k;
}

// ---------------------------------------------------------------------------
// Fusion machinery: rectangular projectors and the fused matrices built from
// the fundamental ones.
// ---------------------------------------------------------------------------

template <class T>
struct FusionProjectors {
  Matrix<T> q_left;   // 3 x 4
  Matrix<T> q_right;  // 4 x 3
  T mu;               // projector point: 1 (symmetric) or t^2 (asymmetric)
};

template <class T>
FusionProjectors<T> fusion_projectors(bool asymmetric, const T& t = T(1)) {
  FusionProjectors<T> p;
  p.q_left = Matrix<T>(3, 4);
  p.q_left(0, 0) = T(1);
  p.q_left(1, 1) = T(1);
  p.q_left(1, 2) = T(1);
  p.q_left(2, 3) = T(1);
  p.q_right = Matrix<T>(4, 3);
  p.q_right(0, 0) = T(1);
  if (asymmetric) {
    T t2 = t * t;
    T den = T(1) + t2;
    p.q_right(1, 1) = t2 / den;
    p.q_right(2, 1) = T(1) / den;
    p.mu = t2;
  } else {
    p.q_right(1, 1) = T(1) / T(2);
    p.q_right(2, 1) = T(1) / T(2);
    p.mu = T(1);
  }
  p.q_right(3, 2) = T(1);
  return p;
}

namespace detail {

// Argument shifts entering the fusion: (z -/+ 1/2) additive, (z/t, z t)
// multiplicative.
template <class T>
std::pair<T, T> fusion_shifts(bool asymmetric, const T& t, const T& z) {
  if (asymmetric) return {z / t, z * t};
  return {z - T(1) / T(2), z + T(1) / T(2)};
}

template <class T>
Matrix<T> fundamental_r(bool asymmetric, const T& t, const T& z) {
  return asymmetric ? asep_r<T>(t, z) : ssep_r<T>(z);
}

// Half-fused R acting on C^2 (x) C^3, fusing the second space.
template <class T>
Matrix<T> half_fused_r(bool asymmetric, const T& t, const T& z) {
  auto p = fusion_projectors<T>(asymmetric, t);
  auto [lo, hi] = fusion_shifts(asymmetric, t, z);
  std::vector<int> dims = {2, 2, 2};
  Matrix<T> rij = embed(fundamental_r(asymmetric, t, lo), {0, 1}, dims);
  Matrix<T> rik = embed(fundamental_r(asymmetric, t, hi), {0, 2}, dims);
  Matrix<T> ql = kron(Matrix<T>::identity(2), p.q_left);
  Matrix<T> qr = kron(Matrix<T>::identity(2), p.q_right);
  return ql * rij * rik * qr;
}

}  // namespace detail

// Fully fused 9x9 R-matrix built from fundamental matrices and projectors
// only (no transcription).
template <class T>
Matrix<T> fuse_r(bool asymmetric, const T& t, const T& z) {
  auto p = fusion_projectors<T>(asymmetric, t);
  auto [lo, hi] = detail::fusion_shifts(asymmetric, t, z);
  std::vector<int> dims = {2, 2, 3};
  Matrix<T> rh = embed(detail::half_fused_r(asymmetric, t, hi), {0, 2}, dims);
  Matrix<T> ri = embed(detail::half_fused_r(asymmetric, t, lo), {1, 2}, dims);
  Matrix<T> ql = kron(p.q_left, Matrix<T>::identity(3));
  Matrix<T> qr = kron(p.q_right, Matrix<T>::identity(3));
  return ql * rh * ri * qr;
}

namespace detail {
// Shared scaffold of the fused K constructions: Ql . K1(lo) . R21(arg) or its
// inverse . K2(hi) . Qr on C^2 (x) C^2.
template <class T>
Matrix<T> fuse_boundary(bool asymmetric, const T& t, const Matrix<T>& k_lo, const Matrix<T>& k_hi,
                        const T& r_arg, bool invert_r) {
  auto p = fusion_projectors<T>(asymmetric, t);
  Matrix<T> perm = permutation_op<T>(2);
  Matrix<T> r21 = perm * fundamental_r(asymmetric, t, r_arg) * perm;
  if (invert_r) r21 = invert(r21);
  Matrix<T> id2 = Matrix<T>::identity(2);
  return p.q_left * kron(k_lo, id2) * r21 * kron(id2, k_hi) * p.q_right;
}
}  // namespace detail

template <class T>
Matrix<T> fuse_k(bool asymmetric, const T& t, const T& a, const T& c, const T& z) {
  auto [lo, hi] = detail::fusion_shifts(asymmetric, t, z);
  T arg = asymmetric ? z * z : T(2) * z;
  Matrix<T> klo = asymmetric ? asep_k<T>(a, c, lo) : ssep_k<T>(a, c, lo);
  Matrix<T> khi = asymmetric ? asep_k<T>(a, c, hi) : ssep_k<T>(a, c, hi);
  return detail::fuse_boundary(asymmetric, t, klo, khi, arg, false);
}

template <class T>
Matrix<T> fuse_kbar(bool asymmetric, const T& t, const T& b, const T& d, const T& z) {
  auto [lo, hi] = detail::fusion_shifts(asymmetric, t, z);
  T arg = asymmetric ? z * z : T(2) * z;
  Matrix<T> klo = asymmetric ? asep_kbar<T>(b, d, lo) : ssep_kbar<T>(b, d, lo);
  Matrix<T> khi = asymmetric ? asep_kbar<T>(b, d, hi) : ssep_kbar<T>(b, d, hi);
  return detail::fuse_boundary(asymmetric, t, klo, khi, arg, true);
}

// ---------------------------------------------------------------------------
// Family dispatch on ModelSpec, exact scalar field.
// ---------------------------------------------------------------------------

inline Matrix<Rat> r_matrix(const ModelSpec& m, const Rat& z) {
  switch (m.family) {
    case Family::SSEP: return ssep_r<Rat>(z);
    case Family::ASEP: return asep_r<Rat>(m.t, z);
    case Family::FusedSSEP: return fused_ssep_r_explicit<Rat>(z);
    case Family::FusedASEP: return fused_asep_r_explicit<Rat>(m.t, z);
  }
  throw Error("unreachable");
}

inline Matrix<Rat> k_left(const ModelSpec& m, const Rat& z) {
  switch (m.family) {
    case Family::SSEP: return ssep_k<Rat>(m.a, m.c, z);
    case Family::ASEP: return asep_k<Rat>(m.a, m.c, z);
    case Family::FusedSSEP: return fused_ssep_k_explicit<Rat>(m.a, m.c, z);
    case Family::FusedASEP: return fused_asep_k_explicit<Rat>(m.t, m.a, m.c, z);
  }
  throw Error("unreachable");
}

inline Matrix<Rat> k_right(const ModelSpec& m, const Rat& z) {
  switch (m.family) {
    case Family::SSEP: return ssep_kbar<Rat>(m.b, m.d, z);
    case Family::ASEP: return asep_kbar<Rat>(m.b, m.d, z);
    case Family::FusedSSEP: return fused_ssep_kbar_explicit<Rat>(m.b, m.d, z);
    case Family::FusedASEP: return fused_asep_kbar_explicit<Rat>(m.t, m.b, m.d, z);
  }
  throw Error("unreachable");
}

// R matrix at the same point via the fusion route (fused families only).
inline Matrix<Rat> r_matrix_fused_route(const ModelSpec& m, const Rat& z) {
  if (!is_fused(m.family)) throw Error("fusion route: fused families only");
  return fuse_r<Rat>(is_asymmetric(m.family), m.t, z);
}
inline Matrix<Rat> k_left_fused_route(const ModelSpec& m, const Rat& z) {
  if (!is_fused(m.family)) throw Error("fusion route: fused families only");
  return fuse_k<Rat>(is_asymmetric(m.family), m.t, m.a, m.c, z);
}
inline Matrix<Rat> k_right_fused_route(const ModelSpec& m, const Rat& z) {
  if (!is_fused(m.family)) throw Error("fusion route: fused families only");
  return fuse_kbar<Rat>(is_asymmetric(m.family), m.t, m.b, m.d, z);
}

// ---------------------------------------------------------------------------
// Dual boundary matrix K-tilde.
// Multiplicative convention: the printed partial-transpose construction.
// Additive convention: obtained by inverting the linear relation
// Kbar_1(z) = tr_0( Ktilde_0(-z) R_01(-2z) P_01 ).
// ---------------------------------------------------------------------------

namespace detail {
// tr_0( X_0 R_01 P_01 ) as a function of the single-site matrix X.
template <class T>
Matrix<T> wrap_trace(const Matrix<T>& x, const Matrix<T>& r, int d) {
  Matrix<T> full = kron(x, Matrix<T>::identity(d)) * r * permutation_op<T>(d);
  return partial_trace_first(full, d);
}
}  // namespace detail

inline Matrix<Rat> k_dual(const ModelSpec& m, const Rat& z) {
  const int d = m.dim_local();
  if (m.convention() == Convention::Multiplicative) {
    Matrix<Rat> kbar = k_right(m, reflected(m.convention(), z));
    Matrix<Rat> r = r_matrix(m, z * z);
    Matrix<Rat> rt1 = partial_transpose(r, 1, d);
    Matrix<Rat> inner = partial_transpose(invert(rt1), 1, d);
    Matrix<Rat> full = kron(kbar, Matrix<Rat>::identity(d)) * inner * permutation_op<Rat>(d);
    return partial_trace_first(full, d);
  }
  // Solve tr_0( X_0 R_01(2z) P_01 ) = Kbar(-z) entrywise for X = Ktilde(z).
  Matrix<Rat> target = k_right(m, -z);
  Matrix<Rat> r = r_matrix(m, 2 * z);
  int n = d * d;
  Matrix<Rat> sys(n, n);
  for (int basis = 0; basis < n; ++basis) {
    Matrix<Rat> e(d, d);
    e(basis / d, basis % d) = Rat(1);
    Matrix<Rat> img = detail::wrap_trace(e, r, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sys(i * d + j, basis) = img(i, j);
  }
  std::vector<Rat> rhs(n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rhs[i * d + j] = target(i, j);
  std::vector<Rat> sol = invert(sys).apply(rhs);
  Matrix<Rat> x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = sol[i * d + j];
  return x;
}

// Rebuild Kbar from the dual matrix; the round trip Kbar -> Ktilde -> Kbar
// must be the identity.
inline Matrix<Rat> k_right_from_dual(const ModelSpec& m, const Rat& z) {
  const int d = m.dim_local();
  Rat zc = reflected(m.convention(), z);
  Matrix<Rat> ktilde = k_dual(m, zc);
  Rat arg = m.convention() == Convention::Multiplicative ? Rat(Rat(1) / (z * z)) : Rat(Rat(-2) * z);
  return detail::wrap_trace(ktilde, r_matrix(m, arg), d);
}

// ---------------------------------------------------------------------------
// SSEP as the h -> 0 limit of the ASEP R-matrix: max-entry deviation of
// R_ASEP(e^{h z})|_{t^2 = e^h} from R_SSEP(z), expected O(h).
// ---------------------------------------------------------------------------

inline double ssep_limit_check(double z, double h) {
  double t = std::exp(h / 2);
  Matrix<double> ra = asep_r<double>(t, std::exp(h * z));
  Matrix<double> rs = ssep_r<double>(z);
  return max_abs_entry(ra - rs);
}

}  // namespace floq
