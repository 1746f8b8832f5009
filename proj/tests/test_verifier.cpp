#include "doctest.h"
#include "floq/verifier.hpp"

using namespace floq;

namespace {
ModelSpec make(Family f) {
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
}  // namespace

TEST_CASE("identity suite passes for every family") {
  for (Family f : {Family::SSEP, Family::ASEP, Family::FusedSSEP, Family::FusedASEP}) {
    ModelSpec m = make(f);
    for (auto& rep : run_identity_suite(m, 5)) {
      INFO(rep.check << " " << rep.model << " at " << rep.point << ": " << rep.deviation);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("chain suite passes for every family") {
  for (Family f : {Family::SSEP, Family::ASEP, Family::FusedSSEP, Family::FusedASEP}) {
    ModelSpec m = make(f);
    for (auto& rep : run_chain_suite(m, 3, 4, 2)) {
      INFO(rep.check << " " << rep.model << " at " << rep.point << ": " << rep.deviation);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("negative control: a perturbed matrix is caught") {
  ModelSpec m = make(Family::SSEP);
  auto bad = r_matrix(m, rat(1, 2));
  bad(0, 0) += rat(1, 1000000);
  auto rep = check_stochastic(bad, "perturbed R");
  CHECK_FALSE(rep.pass);
  CHECK(rep.deviation.find("column") != std::string::npos);
}

TEST_CASE("reports carry model and point metadata") {
  ModelSpec m = make(Family::ASEP);
  auto rep = check_ybe(m, rat(1, 2), rat(1, 3), rat(1, 5));
  CHECK(rep.pass);
  CHECK(rep.model == "asep");
  CHECK(rep.check == "ybe");
  CHECK(rep.point.find("1/2") != std::string::npos);
  CHECK(rep.params.find("t=2/5") != std::string::npos);
}
