// Acceptance runner: one line per criterion, exit 0 iff everything passes.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "floq/observables.hpp"
#include "floq/simulate.hpp"
#include "floq/verifier.hpp"

using namespace floq;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
}

ModelSpec generic(Family f) {
  ModelSpec m;
  m.family = f;
  m.t = rat(2, 5);
  m.kappa = rat(1, 3);
  m.a = rat(1, 2);
  m.b = rat(2, 3);
  m.c = rat(1, 8);
  m.d = rat(1, 6);
  return m;
}

const Family all_families[] = {Family::SSEP, Family::ASEP, Family::FusedSSEP, Family::FusedASEP};

bool flux_uniform(const ObservableReport& rep) {
  bool ok = rep.left_flux == rep.current && rep.right_flux == rep.current;
  for (auto& b : rep.bond_currents) ok = ok && b == rep.current;
  return ok;
}

ObservableReport eigensolve_observables(const ChainSpec& chain) {
  auto probs = stationary_eigensolve(chain);
  auto companion = build_floquet(chain).u_odd.apply(probs);
  return observables_from_state(chain, probs, companion, "eigensolve");
}

}  // namespace

int main() {
  criterion(1, "algebraic certification at 20 random points per family", [](std::string& detail) {
    auto start = Clock::now();
    int checks = 0;
    for (Family f : all_families)
      for (auto& rep : run_identity_suite(generic(f), 20)) {
        ++checks;
        if (!rep.pass) {
          detail = rep.check + " failed for " + rep.model + " at " + rep.point;
          return false;
        }
      }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream os;
    os << checks << " checks in " << secs << " s";
    detail = os.str();
    return secs < 60.0;
  });

  criterion(2, "fusion-built matrices equal the explicit ones at 20 random points",
            [](std::string&) {
    for (Family f : {Family::FusedSSEP, Family::FusedASEP}) {
      ModelSpec m = generic(f);
      RationalSampler sampler(2024 + int(f));
      const bool mult = is_asymmetric(f);
      for (int i = 0; i < 20; ++i) {
        for (int attempt = 0;; ++attempt) {
          if (attempt > 200) return false;
          Rat z = sampler.draw(mult);
          try {
            if (r_matrix(m, z) != r_matrix_fused_route(m, z)) return false;
            if (k_left(m, z) != k_left_fused_route(m, z)) return false;
            if (k_right(m, z) != k_right_fused_route(m, z)) return false;
            break;
          } catch (const Error&) {
            continue;  // pole: redraw
          }
        }
      }
    }
    return true;
  });

  criterion(3, "Floquet operator equals the transfer-matrix evaluations", [](std::string& detail) {
    for (Family f : all_families) {
      ModelSpec m = generic(f);
      const bool mult = is_asymmetric(f);
      std::vector<int> open_lengths = is_fused(f) ? std::vector<int>{3} : std::vector<int>{3, 5};
      for (int L : open_lengths) {
        ChainSpec chain{m, L, Boundary::Open};
        if (build_floquet(chain).markov != transfer_matrix_staggered(chain, m.kappa)) {
          detail = "open mismatch for " + family_name(f);
          return false;
        }
      }
      if (!is_fused(f)) {
        ChainSpec ring{m, 4, Boundary::Periodic};
        auto tk = transfer_matrix_staggered(ring, m.kappa);
        auto tkc = transfer_matrix_staggered(ring, reflected(m.convention(), m.kappa));
        if (build_floquet(ring).markov != invert(tkc) * tk) {
          detail = "periodic mismatch for " + family_name(f);
          return false;
        }
      }
      RationalSampler sampler(77 + int(f));
      for (int i = 0; i < 5; ++i) {
        auto rep = sample_until_ok(sampler, mult, 1, [&](const std::vector<Rat>& z) {
          return check_m_t_commutation(m, 3, Boundary::Open, z[0]);
        });
        if (!rep.pass) {
          detail = "[M, t(z)] != 0 for " + family_name(f) + " at " + rep.point;
          return false;
        }
      }
    }
    return true;
  });

  criterion(4, "matrix product state equals the exact kernel for sampled parameters",
            [](std::string& detail) {
    std::mt19937_64 rng(42);
    for (Family f : all_families) {
      std::vector<int> lengths = is_fused(f) ? std::vector<int>{3} : std::vector<int>{3, 5};
      for (int done = 0; done < 5;) {
        ModelSpec m = sample_valid_model(f, rng, 3);
        try {
          for (int L : lengths) {
            ChainSpec chain{m, L, Boundary::Open};
            auto st = mpa_stationary(chain);  // verifies the half-step identities
            if (st.probs != stationary_eigensolve(chain)) {
              detail = "state mismatch for " + family_name(f);
              return false;
            }
          }
        } catch (const Error&) {
          continue;  // e.g. reducible at L = 5: draw another parameter set
        }
        ++done;
      }
    }
    return true;
  });

  criterion(5, "symmetric closed forms reproduce the exact state", [](std::string& detail) {
    {
      ModelSpec ref;  // a = b = 1, c = d = 0, kappa = 1/2
      ref.kappa = rat(1, 2);
      ChainSpec chain{ref, 3, Boundary::Open};
      auto rep = eigensolve_observables(chain);
      bool ok = z_l_closed(ref, 3) == 24 && rep.current == rat(1, 4) &&
                rep.density == std::vector<Rat>{rat(3, 4), rat(1, 2), rat(1, 4)} &&
                current_closed(ref, 3) == rat(1, 4);
      if (!ok) {
        detail = "reference chain values";
        return false;
      }
    }
    ModelSpec m = generic(Family::SSEP);
    for (int L = 2; L <= 6; ++L)
      if (z_l_closed(m, L) != z_l_mpa(m, L)) {
        detail = "Z_" + std::to_string(L);
        return false;
      }
    for (int L : {3, 5}) {
      ChainSpec chain{m, L, Boundary::Open};
      auto rep = eigensolve_observables(chain);
      if (rep.current != current_closed(m, L) || !flux_uniform(rep)) {
        detail = "ssep current L=" + std::to_string(L);
        return false;
      }
      for (int i = 1; i <= L; ++i)
        if (rep.density[i - 1] != density_closed(m, L, i)) {
          detail = "ssep density L=" + std::to_string(L);
          return false;
        }
    }
    {
      ModelSpec fm;
      fm.family = Family::FusedSSEP;
      fm.kappa = rat(5, 8);
      fm.a = rat(1, 4);
      fm.b = rat(1, 4);
      ChainSpec chain{fm, 3, Boundary::Open};
      auto rep = eigensolve_observables(chain);
      if (rep.current != current_closed(fm, 3)) {
        detail = "fused current";
        return false;
      }
      for (int i = 1; i <= 3; ++i)
        if (rep.density[i - 1] != density_closed(fm, 3, i)) {
          detail = "fused density";
          return false;
        }
      // reference filling at the degeneration point: the chain is reducible
      // there, so certify via the fixed-point property of the exact state
      ModelSpec fr;
      fr.family = Family::FusedSSEP;
      fr.kappa = rat(1, 2);
      if (current_closed(fr, 3) != rat(2, 7)) {
        detail = "fused reference current";
        return false;
      }
      ChainSpec cr{fr, 3, Boundary::Open};
      auto st = mpa_stationary(cr);
      if (build_floquet(cr).markov.apply(st.probs) != st.probs || st.normalization != 5040) {
        detail = "fused reference state";
        return false;
      }
    }
    return true;
  });

  criterion(6, "asymmetric current: closure engine vs exact state", [](std::string& detail) {
    std::mt19937_64 rng(4242);
    for (int done = 0; done < 5;) {
      ModelSpec m = sample_valid_model(Family::ASEP, rng, 3);
      try {
        BoundaryClosure cl(m, default_n_max(m, 5));
        for (int L : {3, 5}) {
          ChainSpec chain{m, L, Boundary::Open};
          auto rep = eigensolve_observables(chain);
          Rat j = (1 / m.kappa - m.kappa) * z_l_mpa(m, L - 1, cl) / z_l_mpa(m, L, cl);
          if (rep.current != j || !flux_uniform(rep)) {
            detail = "asep mismatch at L=" + std::to_string(L);
            return false;
          }
        }
      } catch (const Error&) {
        continue;
      }
      ++done;
    }
    ModelSpec m = generic(Family::FusedASEP);
    m.t = rat(1, 2);
    m.kappa = rat(1, 4);
    m.a = rat(9, 4); m.b = rat(9, 4); m.c = rat(1, 8); m.d = rat(1, 8);
    ChainSpec chain{m, 3, Boundary::Open};
    auto rep = eigensolve_observables(chain);
    BoundaryClosure cl(m, 8);
    auto ed = NCPolynomial::word("E") + NCPolynomial::word("D");
    Rat tp = m.t + 1 / m.t;
    auto clo = NCPolynomial(m.kappa / m.t + m.t / m.kappa) + ed;
    auto chi = NCPolynomial(m.kappa * m.t + 1 / (m.kappa * m.t)) + ed;
    auto mid = NCPolynomial(2 * (m.kappa + 1 / m.kappa)) + ed * tp;
    Rat j = (1 / m.kappa - m.kappa) * cl.scalar_eval(clo * clo * mid * chi * chi) /
            cl.scalar_eval(clo * clo * clo * chi * chi * chi);
    if (rep.current != j) {
      detail = "fused asep current";
      return false;
    }
    return true;
  });

  criterion(7, "no simultaneous two-particle jumps at the degeneration points",
            [](std::string& detail) {
    auto check = [&](ModelSpec m, const char* tag) {
      auto u = local_update(m);
      const int d = 3;
      for (int in = 0; in < d * d; ++in)
        for (int out = 0; out < d * d; ++out)
          if (std::abs(in / d - out / d) == 2 && u(out, in) != 0) {
            detail = std::string(tag) + " entry (" + std::to_string(out) + "," +
                     std::to_string(in) + ") nonzero";
            return false;
          }
      return true;
    };
    ModelSpec fs;
    fs.family = Family::FusedSSEP;
    fs.kappa = rat(1, 2);
    if (!check(fs, "fused-ssep kappa=1/2")) return false;
    ModelSpec fa;
    fa.family = Family::FusedASEP;
    fa.t = rat(2, 5);
    fa.kappa = rat(2, 5);
    if (!check(fa, "fused-asep kappa=t")) return false;
    // contrast: away from the degeneration point such jumps do occur
    fs.kappa = rat(5, 8);
    auto u = local_update(fs);
    if (u(0 * 3 + 2, 2 * 3 + 0) == 0) {
      detail = "generic point has no two-particle transfer";
      return false;
    }
    return true;
  });

  criterion(8, "symmetric limit of the asymmetric R-matrix", [](std::string& detail) {
    for (double z : {0.5, 1.0, 2.0}) {
      double dev = ssep_limit_check(z, 1e-6);
      if (!(dev < 1e-4)) {
        std::ostringstream os;
        os << "deviation " << dev << " at z = " << z;
        detail = os.str();
        return false;
      }
    }
    return true;
  });

  criterion(9, "monte carlo reproduces the exact profile within five sigma",
            [](std::string& detail) {
    ModelSpec m;
    m.kappa = rat(1, 2);
    ChainSpec chain{m, 5, Boundary::Open};
    MCConfig small;
    small.seed = 9;
    small.burn_in = 100;
    small.measure = 10000;
    small.replicas = 8;
    auto a = mc_run(chain, small);
    auto b = mc_run(chain, small);
    if (a.density != b.density || a.bond_current != b.bond_current || a.current != b.current) {
      detail = "determinism";
      return false;
    }
    MCConfig cfg;
    cfg.seed = 9;
    cfg.burn_in = 10000;
    cfg.measure = 1000000;
    cfg.replicas = 8;
    auto rep = mc_run(chain, cfg);
    for (int i = 0; i < 5; ++i) {
      double exact = density_closed(m, 5, i + 1).get_d();
      double dev = std::fabs(rep.density[i] - exact);
      if (dev > 5 * std::max(rep.density_err[i], 1e-5)) {
        std::ostringstream os;
        os << "site " << i + 1 << " off by " << dev << " (err " << rep.density_err[i] << ")";
        detail = os.str();
        return false;
      }
    }
    double jexact = current_closed(m, 5).get_d();
    if (std::fabs(rep.current - jexact) > 5 * std::max(rep.current_err, 1e-5)) {
      std::ostringstream os;
      os << "current " << rep.current << " vs " << jexact;
      detail = os.str();
      return false;
    }
    return true;
  });

  criterion(10, "throughput and exact-solver time bounds", [](std::string& detail) {
    ModelSpec m;
    m.kappa = rat(1, 2);
    ChainSpec chain{m, 10001, Boundary::Open};
    MCConfig cfg;
    cfg.seed = 1;
    cfg.burn_in = 0;
    cfg.measure = 3000;
    cfg.replicas = 1;
    auto start = Clock::now();
    mc_run(chain, cfg);
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    double rate = cfg.measure / secs;

    ModelSpec fm;
    fm.family = Family::FusedSSEP;
    fm.kappa = rat(5, 8);
    fm.a = rat(1, 4);
    fm.b = rat(1, 4);
    ChainSpec fchain{fm, 3, Boundary::Open};
    auto estart = Clock::now();
    stationary_eigensolve(fchain);
    double esecs = std::chrono::duration<double>(Clock::now() - estart).count();

    std::ostringstream os;
    os << long(rate) << " periods/s at L=10001, 27-state solve " << esecs << " s";
    detail = os.str();
    return rate >= 1000.0 && esecs < 10.0;
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
