#pragma once

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "floq/floquet.hpp"

namespace floq {

struct PropertyReport {
  std::string check;
  std::string model;
  std::string params;     // model parameters as "key=value key=value"
  std::string point;      // sampled spectral parameters
  bool pass = false;
  std::string deviation;  // "0" on exact pass, else first counterexample
};

namespace detail {

inline std::string params_string(const ModelSpec& m) {
  std::ostringstream os;
  if (is_asymmetric(m.family)) os << "t=" << to_string(m.t) << " ";
  os << "kappa=" << to_string(m.kappa) << " a=" << to_string(m.a) << " b=" << to_string(m.b)
     << " c=" << to_string(m.c) << " d=" << to_string(m.d);
  return os.str();
}

inline std::string point_string(const std::vector<Rat>& zs) {
  std::string s;
  for (size_t i = 0; i < zs.size(); ++i) {
    if (i) s += ",";
    s += to_string(zs[i]);
  }
  return s;
}

// First entry where two matrices differ, formatted for a report.
inline bool first_mismatch(const Matrix<Rat>& lhs, const Matrix<Rat>& rhs, std::string& where) {
  for (int i = 0; i < lhs.rows(); ++i)
    for (int j = 0; j < lhs.cols(); ++j)
      if (lhs(i, j) != rhs(i, j)) {
        where = "(" + std::to_string(i) + "," + std::to_string(j) +
                "): " + to_string(Rat(lhs(i, j) - rhs(i, j)));
        return true;
      }
  where = "0";
  return false;
}

inline PropertyReport equality_report(const std::string& check, const ModelSpec& m,
                                      const std::vector<Rat>& point, const Matrix<Rat>& lhs,
                                      const Matrix<Rat>& rhs) {
  PropertyReport rep;
  rep.check = check;
  rep.model = family_name(m.family);
  rep.params = params_string(m);
  rep.point = point_string(point);
  rep.pass = !first_mismatch(lhs, rhs, rep.deviation);
  return rep;
}

}  // namespace detail

// R12 R13 R23 = R23 R13 R12 with ratio (or difference) arguments, on three
// sites.
inline PropertyReport check_ybe(const ModelSpec& m, const Rat& z1, const Rat& z2, const Rat& z3) {
  const int d = m.dim_local();
  const Convention c = m.convention();
  std::vector<int> dims{d, d, d};
  auto r12 = embed(r_matrix(m, arg_diff(c, z1, z2)), {0, 1}, dims);
  auto r13 = embed(r_matrix(m, arg_diff(c, z1, z3)), {0, 2}, dims);
  auto r23 = embed(r_matrix(m, arg_diff(c, z2, z3)), {1, 2}, dims);
  return detail::equality_report("ybe", m, {z1, z2, z3}, r12 * r13 * r23, r23 * r13 * r12);
}

// R12(z1-z2) K1(z1) R21(z1+z2) K2(z2) = K2(z2) R12(z1+z2) K1(z1) R21(z1-z2),
// with ratio/product arguments in the multiplicative convention.
inline PropertyReport check_reflection(const ModelSpec& m, const Rat& z1, const Rat& z2) {
  const int d = m.dim_local();
  const Convention c = m.convention();
  std::vector<int> dims{d, d};
  Rat zd = arg_diff(c, z1, z2), zs = arg_sum(c, z1, z2);
  auto r12d = embed(r_matrix(m, zd), {0, 1}, dims);
  auto r21d = embed(r_matrix(m, zd), {1, 0}, dims);
  auto r12s = embed(r_matrix(m, zs), {0, 1}, dims);
  auto r21s = embed(r_matrix(m, zs), {1, 0}, dims);
  auto k1 = embed(k_left(m, z1), {0}, dims);
  auto k2 = embed(k_left(m, z2), {1}, dims);
  return detail::equality_report("reflection", m, {z1, z2}, r12d * k1 * r21s * k2,
                                 k2 * r12s * k1 * r21d);
}

// Same with Kbar and every R replaced by its inverse.
inline PropertyReport check_reversed_reflection(const ModelSpec& m, const Rat& z1, const Rat& z2) {
  const int d = m.dim_local();
  const Convention c = m.convention();
  std::vector<int> dims{d, d};
  Rat zd = arg_diff(c, z1, z2), zs = arg_sum(c, z1, z2);
  auto r12d = invert(embed(r_matrix(m, zd), {0, 1}, dims));
  auto r21d = invert(embed(r_matrix(m, zd), {1, 0}, dims));
  auto r12s = invert(embed(r_matrix(m, zs), {0, 1}, dims));
  auto r21s = invert(embed(r_matrix(m, zs), {1, 0}, dims));
  auto k1 = embed(k_right(m, z1), {0}, dims);
  auto k2 = embed(k_right(m, z2), {1}, dims);
  return detail::equality_report("reversed-reflection", m, {z1, z2}, r12d * k1 * r21s * k2,
                                 k2 * r12s * k1 * r21d);
}

// Kt2(z2) ((R21(z1 z2)^t1)^-1)^t1 Kt1(z1) R21(z2/z1)
//   = R12(z2/z1) Kt1(z1) ((R12(z1 z2)^t2)^-1)^t2 Kt2(z2).
inline PropertyReport check_dual_reflection(const ModelSpec& m, const Rat& z1, const Rat& z2) {
  const int d = m.dim_local();
  const Convention c = m.convention();
  std::vector<int> dims{d, d};
  Rat zd = arg_diff(c, z2, z1), zs = arg_sum(c, z1, z2);
  auto r12d = embed(r_matrix(m, zd), {0, 1}, dims);
  auto r21d = embed(r_matrix(m, zd), {1, 0}, dims);
  auto twisted21 =
      partial_transpose(invert(partial_transpose(embed(r_matrix(m, zs), {1, 0}, dims), 1, d)), 1, d);
  auto twisted12 =
      partial_transpose(invert(partial_transpose(embed(r_matrix(m, zs), {0, 1}, dims), 2, d)), 2, d);
  auto kt1 = embed(k_dual(m, z1), {0}, dims);
  auto kt2 = embed(k_dual(m, z2), {1}, dims);
  return detail::equality_report("dual-reflection", m, {z1, z2}, kt2 * twisted21 * kt1 * r21d,
                                 r12d * kt1 * twisted12 * kt2);
}

// Column sums must be exactly one; negative entries are reported in the
// deviation string but only fail the check when assert_range is set (entry
// ranges depend on the parameter domain, sums do not).
inline PropertyReport check_stochastic(const Matrix<Rat>& op, const std::string& label,
                                       bool assert_range = false) {
  PropertyReport rep;
  rep.check = "stochastic";
  rep.model = label;
  rep.point = "";
  rep.pass = true;
  rep.deviation = "0";
  auto sums = op.column_sums();
  for (size_t j = 0; j < sums.size(); ++j)
    if (sums[j] != 1) {
      rep.pass = false;
      rep.deviation = "column " + std::to_string(j) + " sums to " + to_string(sums[j]);
      return rep;
    }
  for (int i = 0; i < op.rows(); ++i)
    for (int j = 0; j < op.cols(); ++j)
      if (op(i, j) < 0) {
        rep.deviation =
            "negative entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (assert_range) rep.pass = false;
        return rep;
      }
  return rep;
}

inline PropertyReport check_regularity(const ModelSpec& m) {
  const int d = m.dim_local();
  Rat reg = regular_point(m.convention());
  bool r_ok = (r_matrix(m, reg) == permutation_op<Rat>(d));
  bool k_ok = (k_left(m, reg) == Matrix<Rat>::identity(d));
  bool kb_ok = (k_right(m, reg) == Matrix<Rat>::identity(d));
  PropertyReport rep;
  rep.check = "regularity";
  rep.model = family_name(m.family);
  rep.params = detail::params_string(m);
  rep.point = to_string(reg);
  rep.pass = r_ok && k_ok && kb_ok;
  rep.deviation = rep.pass ? "0"
                           : std::string(!r_ok ? "R(reg) != P" : (!k_ok ? "K(reg) != 1" : "Kbar(reg) != 1"));
  return rep;
}

// R12(z) R21(zc) = 1, K(z) K(zc) = 1, Kbar(z) Kbar(zc) = 1.
inline PropertyReport check_unitarity(const ModelSpec& m, const Rat& z) {
  const int d = m.dim_local();
  const Convention c = m.convention();
  Rat zc = reflected(c, z);
  std::vector<int> dims{d, d};
  auto lhs = embed(r_matrix(m, z), {0, 1}, dims) * embed(r_matrix(m, zc), {1, 0}, dims);
  bool r_ok = (lhs == Matrix<Rat>::identity(d * d));
  bool k_ok = (k_left(m, z) * k_left(m, zc) == Matrix<Rat>::identity(d));
  bool kb_ok = (k_right(m, z) * k_right(m, zc) == Matrix<Rat>::identity(d));
  PropertyReport rep;
  rep.check = "unitarity";
  rep.model = family_name(m.family);
  rep.params = detail::params_string(m);
  rep.point = to_string(z);
  rep.pass = r_ok && k_ok && kb_ok;
  rep.deviation =
      rep.pass ? "0"
               : std::string(!r_ok ? "R12 R21 != 1" : (!k_ok ? "K K != 1" : "Kbar Kbar != 1"));
  return rep;
}

inline PropertyReport check_markovian(const ModelSpec& m, const Rat& z) {
  auto merge = [](PropertyReport acc, const PropertyReport& next) {
    if (!next.pass && acc.pass) {
      acc.pass = false;
      acc.deviation = next.model + ": " + next.deviation;
    }
    return acc;
  };
  PropertyReport rep;
  rep.check = "markovian";
  rep.model = family_name(m.family);
  rep.params = detail::params_string(m);
  rep.point = to_string(z);
  rep.pass = true;
  rep.deviation = "0";
  rep = merge(rep, check_stochastic(r_matrix(m, z), "R"));
  rep = merge(rep, check_stochastic(k_left(m, z), "K"));
  rep = merge(rep, check_stochastic(k_right(m, z), "Kbar"));
  return rep;
}

inline PropertyReport check_transfer_commutation(const ModelSpec& m, int length, Boundary boundary,
                                                 const Rat& x, const Rat& y) {
  ChainSpec chain{m, length, boundary};
  auto tx = transfer_matrix_staggered(chain, x);
  auto ty = transfer_matrix_staggered(chain, y);
  auto rep = detail::equality_report("transfer-commutation", m, {x, y}, tx * ty, ty * tx);
  rep.params += boundary == Boundary::Open ? " open" : " periodic";
  rep.params += " L=" + std::to_string(length);
  return rep;
}

inline PropertyReport check_m_t_commutation(const ModelSpec& m, int length, Boundary boundary,
                                            const Rat& z) {
  ChainSpec chain{m, length, boundary};
  auto ops = build_floquet(chain);
  auto tz = transfer_matrix_staggered(chain, z);
  auto rep =
      detail::equality_report("m-t-commutation", m, {z}, ops.markov * tz, tz * ops.markov);
  rep.params += boundary == Boundary::Open ? " open" : " periodic";
  rep.params += " L=" + std::to_string(length);
  return rep;
}

// ---------------------------------------------------------------------------
// Deterministic sampling of generic rational spectral points. Points hitting
// a pole or a singular inverse are discarded and redrawn, so every emitted
// report corresponds to a completed exact check.
// ---------------------------------------------------------------------------

class RationalSampler {
 public:
  explicit RationalSampler(uint64_t seed) : rng_(seed) {}

  // Nonzero rational with numerator in [-9,9] and denominator in [1,9];
  // positive_only keeps multiplicative-convention arguments off the negative
  // axis where square roots of arguments (kappa^2 patterns) live.
  Rat draw(bool positive_only) {
    while (true) {
      long num = long(rng_() % 19) - 9;
      long den = long(rng_() % 9) + 1;
      if (num == 0) continue;
      if (positive_only && num < 0) num = -num;
      return rat(num, den);
    }
  }

 private:
  std::mt19937_64 rng_;
};

// Runs fn on freshly drawn points until it completes without throwing
// (poles/singular matrices abort a draw), up to a bounded number of retries.
inline PropertyReport sample_until_ok(RationalSampler& sampler, bool positive_only, int arity,
                                      const std::function<PropertyReport(const std::vector<Rat>&)>& fn) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Rat> zs;
    for (int i = 0; i < arity; ++i) zs.push_back(sampler.draw(positive_only));
    try {
      return fn(zs);
    } catch (const Error&) {
      continue;  // pole or singular point: redraw
    }
  }
  throw Error("sampling could not avoid poles after 200 attempts");
}

// Full certification suite for one model: every structural identity at
// `samples` generic rational points (plus the fixed-point checks).
inline std::vector<PropertyReport> run_identity_suite(const ModelSpec& m, int samples = 20,
                                                      uint64_t seed = 20240901) {
  m.check_basic();
  std::vector<PropertyReport> reports;
  const bool mult = m.convention() == Convention::Multiplicative;
  RationalSampler sampler(seed ^ std::hash<std::string>{}(family_name(m.family)));
  reports.push_back(check_regularity(m));
  for (int i = 0; i < samples; ++i) {
    reports.push_back(sample_until_ok(
        sampler, mult, 3, [&](const std::vector<Rat>& z) { return check_ybe(m, z[0], z[1], z[2]); }));
    reports.push_back(sample_until_ok(
        sampler, mult, 2, [&](const std::vector<Rat>& z) { return check_reflection(m, z[0], z[1]); }));
    reports.push_back(sample_until_ok(sampler, mult, 2, [&](const std::vector<Rat>& z) {
      return check_reversed_reflection(m, z[0], z[1]);
    }));
    reports.push_back(sample_until_ok(sampler, mult, 2, [&](const std::vector<Rat>& z) {
      return check_dual_reflection(m, z[0], z[1]);
    }));
    reports.push_back(sample_until_ok(
        sampler, mult, 1, [&](const std::vector<Rat>& z) { return check_unitarity(m, z[0]); }));
    reports.push_back(sample_until_ok(
        sampler, mult, 1, [&](const std::vector<Rat>& z) { return check_markovian(m, z[0]); }));
  }
  return reports;
}

inline std::vector<PropertyReport> run_chain_suite(const ModelSpec& m, int open_length = 3,
                                                   int periodic_length = 4, int samples = 3,
                                                   uint64_t seed = 20240902) {
  std::vector<PropertyReport> reports;
  const bool mult = m.convention() == Convention::Multiplicative;
  RationalSampler sampler(seed ^ std::hash<std::string>{}(family_name(m.family)));
  for (Boundary b : {Boundary::Open, Boundary::Periodic}) {
    int L = b == Boundary::Open ? open_length : periodic_length;
    for (int i = 0; i < samples; ++i) {
      reports.push_back(sample_until_ok(sampler, mult, 2, [&](const std::vector<Rat>& z) {
        return check_transfer_commutation(m, L, b, z[0], z[1]);
      }));
      reports.push_back(sample_until_ok(sampler, mult, 1, [&](const std::vector<Rat>& z) {
        return check_m_t_commutation(m, L, b, z[0]);
      }));
    }
    ChainSpec chain{m, L, b};
    auto rep = check_stochastic(build_floquet(chain).markov,
                                family_name(m.family) + (b == Boundary::Open ? " open M" : " periodic M"));
    rep.check = "markov-stochastic";
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace floq
