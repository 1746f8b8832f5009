#pragma once

#include <vector>

#include "floq/ncpoly.hpp"
#include "floq/verifier.hpp"

namespace floq {

// Algebra-valued ansatz vector; one polynomial component per occupancy.
struct MPAVector {
  std::vector<NCPolynomial> comp;
  Rat z;
};

namespace detail {

inline MPAVector base_a_vector(bool asymmetric, const Rat& z) {
  MPAVector a;
  a.z = z;
  if (asymmetric) {
    if (z == 0) throw Error("ansatz vector: z = 0");
    a.comp = {NCPolynomial(z) + NCPolynomial::word("E"),
              NCPolynomial(Rat(1) / z) + NCPolynomial::word("D")};
  } else {
    a.comp = {NCPolynomial(-z) + NCPolynomial::word("E"),
              NCPolynomial(z) + NCPolynomial::word("D")};
  }
  return a;
}

}  // namespace detail

// A(z) for the strict-exclusion families; for the fused families the vector
// is assembled from two shifted copies through the left fusion projector,
// component i = sum of the products A_lo[j1] A_hi[j2] with j1 + j2 = i.
inline MPAVector a_vector(const ModelSpec& m, const Rat& z) {
  const bool asym = is_asymmetric(m.family);
  if (!is_fused(m.family)) return detail::base_a_vector(asym, z);
  Rat lo = asym ? Rat(z / m.t) : Rat(z - rat(1, 2));
  Rat hi = asym ? Rat(z * m.t) : Rat(z + rat(1, 2));
  MPAVector a_lo = detail::base_a_vector(asym, lo);
  MPAVector a_hi = detail::base_a_vector(asym, hi);
  MPAVector a;
  a.z = z;
  a.comp.resize(3);
  for (int j1 = 0; j1 < 2; ++j1)
    for (int j2 = 0; j2 < 2; ++j2) a.comp[j1 + j2] = a.comp[j1 + j2] + a_lo.comp[j1] * a_hi.comp[j2];
  return a;
}

// The explicit printed form of the fused vector, used as a cross-check
// against the projected construction.
inline MPAVector fused_a_explicit(const ModelSpec& m, const Rat& z) {
  if (!is_fused(m.family)) throw Error("explicit fused vector: fused family required");
  MPAVector a;
  a.z = z;
  a.comp.resize(3);
  auto E = [](const Rat& c) { return NCPolynomial::word("E", c); };
  auto D = [](const Rat& c) { return NCPolynomial::word("D", c); };
  if (m.family == Family::FusedSSEP) {
    Rat zz = z * z - rat(1, 4);
    a.comp[0] = NCPolynomial(zz) + E(-2 * z) + NCPolynomial::word("EE");
    a.comp[1] = NCPolynomial(-2 * zz) + E(2 * z) + D(-2 * z) + NCPolynomial::word("ED") +
                NCPolynomial::word("DE");
    a.comp[2] = NCPolynomial(zz) + D(2 * z) + NCPolynomial::word("DD");
  } else {
    if (z == 0) throw Error("ansatz vector: z = 0");
    Rat tp = m.t + 1 / m.t;
    a.comp[0] = NCPolynomial(z * z) + E(z * tp) + NCPolynomial::word("EE");
    a.comp[1] = NCPolynomial(m.t * m.t + 1 / (m.t * m.t)) + D(z * tp) + E(tp / z) +
                NCPolynomial::word("ED") + NCPolynomial::word("DE");
    a.comp[2] = NCPolynomial(1 / (z * z)) + D(tp / z) + NCPolynomial::word("DD");
  }
  return a;
}

// C(z): sum of the components of A(z).
inline NCPolynomial c_poly(const ModelSpec& m, const Rat& z) {
  NCPolynomial c;
  for (auto& p : a_vector(m, z).comp) c = c + p;
  return c;
}

// Rcheck(z1/z2) A(z1) (x) A(z2) = A(z2) (x) A(z1), componentwise in the
// algebra after normal ordering.
inline PropertyReport check_zf(const ModelSpec& m, const Rat& z1, const Rat& z2) {
  const int d = m.dim_local();
  auto rcheck = permutation_op<Rat>(d) * r_matrix(m, arg_diff(m.convention(), z1, z2));
  MPAVector a1 = a_vector(m, z1), a2 = a_vector(m, z2);
  PropertyReport rep;
  rep.check = "zf";
  rep.model = family_name(m.family);
  rep.params = detail::params_string(m);
  rep.point = to_string(z1) + "," + to_string(z2);
  rep.pass = true;
  rep.deviation = "0";
  RewriteRule rule = rewrite_rule(m);
  for (int i = 0; i < d * d; ++i) {
    NCPolynomial lhs;
    for (int j = 0; j < d * d; ++j) {
      if (is_zero(rcheck(i, j))) continue;
      lhs = lhs + (a1.comp[j / d] * a2.comp[j % d]) * rcheck(i, j);
    }
    NCPolynomial rhs = a2.comp[i / d] * a1.comp[i % d];
    if (!normal_form(lhs - rhs, rule).is_zero()) {
      rep.pass = false;
      rep.deviation = "component " + std::to_string(i) + ": " +
                      normal_form(lhs - rhs, rule).str();
      break;
    }
  }
  return rep;
}

// Boundary combinations annihilated by <<W| (left) and |V>> (right).
inline NCPolynomial left_boundary_combination(const ModelSpec& m) {
  Rat unit = is_asymmetric(m.family) ? Rat(1) : Rat(-1);
  return NCPolynomial::word("E", m.a) - NCPolynomial::word("D", m.c) + NCPolynomial(unit);
}
inline NCPolynomial right_boundary_combination(const ModelSpec& m) {
  Rat unit = is_asymmetric(m.family) ? Rat(1) : Rat(-1);
  return NCPolynomial::word("D", m.b) - NCPolynomial::word("E", m.d) + NCPolynomial(unit);
}

namespace detail {

// Whether the linear system A x = b admits any solution (existence only).
inline bool system_consistent(const Matrix<Rat>& a, const std::vector<Rat>& b) {
  const int rows = a.rows(), cols = a.cols();
  Matrix<Rat> aug(rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = b[i];
  }
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (aug(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int j = 0; j <= cols; ++j) std::swap(aug(pivot, j), aug(rank, j));
    Rat p = aug(rank, col);
    for (int j = 0; j <= cols; ++j) aug(rank, j) /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || aug(r, col) == 0) continue;
      Rat f = aug(r, col);
      for (int j = 0; j <= cols; ++j) aug(r, j) -= f * aug(rank, j);
    }
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (aug(r, cols) != 0) return false;
  return true;
}

// Membership of p in the one-sided ideal generated by g: p = sum_w c_w g w
// (left ideal) or sum_w c_w w g (right ideal), multipliers running over
// normal words up to the degree of p.
inline bool ideal_member(const NCPolynomial& p, const NCPolynomial& g, bool left_ideal,
                         const RewriteRule& rule) {
  NCPolynomial pn = normal_form(p, rule);
  if (pn.is_zero()) return true;
  int deg = pn.degree();
  std::vector<NCPolynomial> gens;
  for (int total = 0; total <= deg; ++total)
    for (int mm = 0; mm <= total; ++mm) {
      NCPolynomial w = NCPolynomial::word(normal_word(mm, total - mm));
      gens.push_back(normal_form(left_ideal ? g * w : w * g, rule));
    }
  // collect the word basis appearing anywhere
  std::map<std::string, int> word_index;
  auto index_words = [&](const NCPolynomial& q) {
    for (auto& [w, c] : q.terms)
      if (!word_index.count(w)) {
        int next = int(word_index.size());
        word_index[w] = next;
      }
  };
  index_words(pn);
  for (auto& q : gens) index_words(q);
  Matrix<Rat> sys(int(word_index.size()), int(gens.size()));
  std::vector<Rat> rhs(word_index.size(), Rat(0));
  for (size_t j = 0; j < gens.size(); ++j)
    for (auto& [w, c] : gens[j].terms) sys(word_index[w], int(j)) = c;
  for (auto& [w, c] : pn.terms) rhs[word_index[w]] = c;
  return system_consistent(sys, rhs);
}

}  // namespace detail

enum class Side { Left, Right };

// GZ relation: componentwise, K(z) A(zc) - A(z) vanishes against <<W| (left)
// resp. |V>> (right), i.e. lies in the corresponding one-sided ideal.
inline PropertyReport check_gz(const ModelSpec& m, const Rat& z, Side side) {
  const int d = m.dim_local();
  Rat zc = reflected(m.convention(), z);
  Matrix<Rat> k = side == Side::Left ? k_left(m, z) : k_right(m, z);
  MPAVector az = a_vector(m, z), azc = a_vector(m, zc);
  NCPolynomial g =
      side == Side::Left ? left_boundary_combination(m) : right_boundary_combination(m);
  RewriteRule rule = rewrite_rule(m);
  PropertyReport rep;
  rep.check = side == Side::Left ? "gz-left" : "gz-right";
  rep.model = family_name(m.family);
  rep.params = detail::params_string(m);
  rep.point = to_string(z);
  rep.pass = true;
  rep.deviation = "0";
  for (int i = 0; i < d; ++i) {
    NCPolynomial p;
    for (int j = 0; j < d; ++j)
      if (!is_zero(k(i, j))) p = p + azc.comp[j] * k(i, j);
    p = p - az.comp[i];
    if (!detail::ideal_member(p, g, side == Side::Left, rule)) {
      rep.pass = false;
      rep.deviation = "component " + std::to_string(i) + " not in ideal";
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary closure: the scalars f(m,n) = <<W| E^m D^n |V>>, determined by the
// boundary relations and the bulk rewriting, solved as one exact linear
// system with the normalization f(0,0) = 1.
// ---------------------------------------------------------------------------

class BoundaryClosure {
 public:
  BoundaryClosure(const ModelSpec& m, int n_max) : model_(m), n_max_(n_max) {
    m.check_basic();
    if (m.a * m.b == m.c * m.d) throw Error("boundary closure: ab = cd");
    solve();
  }

  int n_max() const { return n_max_; }
  const ModelSpec& model() const { return model_; }

  Rat f(int mm, int nn) const {
    if (mm < 0 || nn < 0 || mm + nn > n_max_) throw Error("closure: degree overflow");
    return f_[index(mm, nn)];
  }

  Rat scalar_eval(const NCPolynomial& p) const {
    NCPolynomial pn = normal_form(p, rewrite_rule(model_));
    Rat sum(0);
    for (auto& [w, c] : pn.terms) {
      auto split = w.find('D');
      int mm = int(split == std::string::npos ? w.size() : split);
      int nn = int(w.size()) - mm;
      if (w.find('E', size_t(mm)) != std::string::npos)
        throw Error("closure: word not normal ordered");
      sum += c * f(mm, nn);
    }
    return sum;
  }

 private:
  int index(int mm, int nn) const {
    // triangular layout over m + n <= n_max
    int total = mm + nn;
    return total * (total + 1) / 2 + nn;
  }

  void solve() {
    const bool asym = is_asymmetric(model_.family);
    const Rat sign = asym ? Rat(-1) : Rat(1);
    const RewriteRule rule = rewrite_rule(model_);
    const int unknowns = (n_max_ + 1) * (n_max_ + 2) / 2;
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    auto accumulate = [&](std::vector<Rat>& row, const NCPolynomial& p, const Rat& w) {
      for (auto& [word, c] : p.terms) {
        auto split = word.find('D');
        int mm = int(split == std::string::npos ? word.size() : split);
        int nn = int(word.size()) - mm;
        row[index(mm, nn)] += w * c;
      }
    };
    {
      std::vector<Rat> row(unknowns, Rat(0));
      row[index(0, 0)] = 1;
      rows.push_back(row);
      rhs.push_back(Rat(1));
    }
    for (int total = 1; total <= n_max_; ++total) {
      for (int nn = 0; nn <= total; ++nn) {
        int mm = total - nn;
        if (mm >= 1) {
          // peel the leftmost E with the <<W| relation
          std::vector<Rat> row(unknowns, Rat(0));
          row[index(mm, nn)] += model_.a;
          NCPolynomial interior = normal_form(
              NCPolynomial::word("D" + normal_word(mm - 1, nn)), rule);
          accumulate(row, interior, -model_.c);
          row[index(mm - 1, nn)] -= sign;
          rows.push_back(row);
          rhs.push_back(Rat(0));
        }
        if (nn >= 1) {
          // peel the rightmost D with the |V>> relation
          std::vector<Rat> row(unknowns, Rat(0));
          row[index(mm, nn)] += model_.b;
          NCPolynomial interior = normal_form(
              NCPolynomial::word(normal_word(mm, nn - 1) + "E"), rule);
          accumulate(row, interior, -model_.d);
          row[index(mm, nn - 1)] -= sign;
          rows.push_back(row);
          rhs.push_back(Rat(0));
        }
      }
    }
    Matrix<Rat> sys(int(rows.size()), unknowns);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < unknowns; ++j) sys(int(i), j) = rows[i][j];
    f_ = solve_unique(sys, rhs);
  }

  ModelSpec model_;
  int n_max_;
  std::vector<Rat> f_;
};

inline int default_n_max(const ModelSpec& m, int length) { return m.s() * length + 2; }

// ---------------------------------------------------------------------------
// Staggered matrix product stationary state for open chains.
// ---------------------------------------------------------------------------

struct StationaryState {
  std::vector<Rat> probs;            // |S>
  std::vector<Rat> companion_probs;  // |S'>
  Rat normalization;                 // Z_L, the sum of raw weights of |S>
};

inline std::vector<Rat> mpa_weights(const ChainSpec& chain, const BoundaryClosure& closure,
                                    bool swapped) {
  const ModelSpec& m = chain.model;
  const int L = chain.length;
  const int d = m.dim_local();
  Rat kc = reflected(m.convention(), m.kappa);
  std::vector<MPAVector> site_vectors;
  for (int i = 1; i <= L; ++i) {
    bool first_arg = (i % 2 == 1) != swapped;
    site_vectors.push_back(a_vector(m, first_arg ? m.kappa : kc));
  }
  std::vector<Rat> weights(chain.state_count());
  for (size_t idx = 0; idx < weights.size(); ++idx) {
    NCPolynomial p(Rat(1));
    size_t rem = idx;
    std::vector<int> occ(L);
    for (int i = L - 1; i >= 0; --i) {
      occ[i] = int(rem % d);
      rem /= d;
    }
    for (int i = 0; i < L; ++i) p = p * site_vectors[i].comp[occ[i]];
    weights[idx] = closure.scalar_eval(p);
  }
  return weights;
}

// |S> and its Floquet companion |S'>; checks U^o |S> = |S'> and
// U^e |S'> = |S> exactly unless verify is cleared.
inline StationaryState mpa_stationary(const ChainSpec& chain, bool verify = true) {
  chain.check();
  if (chain.boundary != Boundary::Open) throw Error("matrix product state: open chains only");
  BoundaryClosure closure(chain.model, default_n_max(chain.model, chain.length));
  auto weights = mpa_weights(chain, closure, false);
  auto weights_sw = mpa_weights(chain, closure, true);
  Rat z(0), z_sw(0);
  for (auto& w : weights) z += w;
  for (auto& w : weights_sw) z_sw += w;
  if (z == 0 || z_sw == 0) throw Error("matrix product state: zero normalization");
  StationaryState state;
  state.normalization = z;
  state.probs.resize(weights.size());
  state.companion_probs.resize(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) {
    state.probs[i] = weights[i] / z;
    state.companion_probs[i] = weights_sw[i] / z_sw;
  }
  if (verify) {
    auto ops = build_floquet(chain);
    if (ops.u_odd.apply(state.probs) != state.companion_probs)
      throw Error("matrix product state: U^o |S> != |S'>");
    if (ops.u_even.apply(state.companion_probs) != state.probs)
      throw Error("matrix product state: U^e |S'> != |S>");
  }
  return state;
}

}  // namespace floq
