#include <catch_amalgamated.hpp>

#include "bnls/darboux.hpp"
#include "bnls/soliton.hpp"
#include "bnls/zs.hpp"

using namespace bnls;

namespace {

// Norming constant of the eigenvalue i mu of u, from the proportionality of
// the decaying Jost columns psi_1^+ = gamma psi_2^- at x = 0.
Complex gamma_from_jost(const SampledField& u, double mu) {
  const Complex z{0.0, mu};
  const auto m1 = jost_m1p_trajectory(u, z);
  const auto m2 = jost_m2m_trajectory(u, z);
  const int i0 = u.grid.zero_index();
  const Complex ra = m1[i0].a / m2[i0].a;
  const Complex rb = m1[i0].b / m2[i0].b;
  REQUIRE(std::abs(ra - rb) < 1e-5 * (1.0 + std::abs(ra)));
  return 0.5 * (ra + rb);
}

// Insert the poles i mu_k with norming constants gamma_k into the vacuum in
// the given order, using the cumulative-product couplings.
SampledField dress_vacuum(const SpatialGrid& g, const RVec& mus, const CVec& gammas) {
  SampledField u(g);
  PsiPointEval psi = psi_vacuum();
  std::vector<Complex> inserted;
  SpectrumUpdate spectrum;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const Complex zk{0.0, mus[k]};
    Complex ap = 1.0 / (zk - std::conj(zk));
    for (const auto& zj : inserted) ap *= (zk - zj) / (zk - std::conj(zj));
    const DarbouxStep step{zk, gammas[k] / ap};
    auto psi_grid = [&psi](Complex) { return std::vector<Mat2>{}; };
    (void)psi_grid;
    DarbouxFieldResult res = darboux_add(psi, u, step, spectrum);
    u = res.u_tilde;
    psi = res.psi_tilde;
    spectrum = res.spectrum;
    inserted.push_back(zk);
  }
  return u;
}

}  // namespace

TEST_CASE("adding (xi = i, c~ = 2) to the vacuum gives i sech x") {
  const SpatialGrid g = symmetric_grid(25.0, 1000);
  const SampledField u0(g);
  const DarbouxFieldResult res = darboux_add(psi_vacuum(), u0, DarbouxStep{I, 2.0});
  double sup = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    sup = std::max(sup,
                   std::abs(res.u_tilde.values[i] - I / std::cosh(g.x(i))));
  REQUIRE(sup < 1e-12);
  const int i0 = g.zero_index();
  REQUIRE(std::abs(std::abs(res.u_tilde.values[i0]) - 1.0) < 1e-12);
  // localized addition: tail below 1e-6 once Im xi * x_max > 20
  REQUIRE(std::abs(res.u_tilde.values.front()) < 1e-6);
  REQUIRE(std::abs(res.u_tilde.values.back()) < 1e-6);
}

TEST_CASE("the coupling phase only rotates the added soliton") {
  const SpatialGrid g = symmetric_grid(20.0, 400);
  const SampledField u0(g);
  const DarbouxFieldResult base =
      darboux_add(psi_vacuum(), u0, DarbouxStep{I, 2.0});
  for (double phi : {0.5, 2.2, -1.1}) {
    const DarbouxFieldResult rot =
        darboux_add(psi_vacuum(), u0, DarbouxStep{I, 2.0 * std::exp(I * phi)});
    for (int i = 0; i < g.n_points; i += 13)
      REQUIRE(std::abs(std::abs(rot.u_tilde.values[i]) -
                       std::abs(base.u_tilde.values[i])) < 1e-12);
  }
}

TEST_CASE("add then remove the same pole is the identity") {
  // Im xi * x_max is kept large enough that the inserted soliton clears the
  // relative tail guard of the removal's Volterra solves
  const SpatialGrid g = symmetric_grid(22.0, 2200);
  const SampledField u0 = SampledField::sample(
      g, [](double x) { return Complex{0.2 * std::exp(-x * x), 0.1 * std::exp(-x * x)}; });
  const JostOptions fine{.refine = 4};
  const PsiPointEval psi0 = psi_from_potential(u0, fine);
  const DarbouxStep step{Complex{0.0, 1.2}, Complex{1.3, 0.4}};
  const DarbouxFieldResult added = darboux_add(psi0, u0, step);
  const DarbouxFieldResult back =
      darboux_remove(added.psi_tilde, added.u_tilde, step.xi, added.spectrum, fine);
  REQUIRE(back.spectrum.poles.empty());
  double sup = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    sup = std::max(sup, std::abs(back.u_tilde.values[i] - u0.values[i]));
  REQUIRE(sup < 1e-8);
}

TEST_CASE("remove then add restores the soliton") {
  const SpatialGrid g = symmetric_grid(22.0, 1400);
  const SampledField u0(g);
  const DarbouxStep step{I, 2.0};
  const DarbouxFieldResult sol = darboux_add(psi_vacuum(), u0, step);
  const DarbouxFieldResult removed = darboux_remove(sol.psi_tilde, sol.u_tilde, step.xi);
  REQUIRE(removed.u_tilde.max_abs() < 1e-8);
  const DarbouxFieldResult again =
      darboux_add(removed.psi_tilde, removed.u_tilde, step);
  double sup = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    sup = std::max(sup, std::abs(std::abs(again.u_tilde.values[i]) -
                                 std::abs(sol.u_tilde.values[i])));
  REQUIRE(sup < 1e-8);
}

TEST_CASE("removing the bound state of a sampled one-soliton flattens it") {
  const SpatialGrid g = symmetric_grid(25.0, 1600);
  const SampledField u = SampledField::sample(
      g, [](double x) { return Complex{1.0 / std::cosh(x), 0.0}; });
  const PsiPointEval psi = psi_from_potential(u);
  const DarbouxFieldResult removed = darboux_remove(psi, u, I);
  REQUIRE(removed.u_tilde.max_abs() < 1e-6);
}

TEST_CASE("two-pole insertion order does not matter") {
  const SpatialGrid g = symmetric_grid(30.0, 900);
  const RVec mus_a = {1.0, 0.3};
  const CVec gam_a = {Complex{1.1, 0.2}, Complex{0.4, -0.9}};
  const RVec mus_b = {0.3, 1.0};
  const CVec gam_b = {gam_a[1], gam_a[0]};
  const SampledField ua = dress_vacuum(g, mus_a, gam_a);
  const SampledField ub = dress_vacuum(g, mus_b, gam_b);
  double sup = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    sup = std::max(sup, std::abs(ua.values[i] - ub.values[i]));
  REQUIRE(sup < 1e-7);
}

TEST_CASE("spectrum bookkeeping: a picks up the Blaschke factor") {
  const SpatialGrid g = symmetric_grid(28.0, 2200);
  const SampledField u0 = SampledField::sample(
      g, [](double x) { return Complex{0.3 * std::exp(-x * x), 0.0}; });
  const Complex xi{0.0, 0.8};
  const DarbouxFieldResult res =
      darboux_add(psi_from_potential(u0), u0, DarbouxStep{xi, Complex{1.5, 0.0}});
  int checked = 0;
  for (Complex z : {Complex{0.5, 0.0}, Complex{-1.2, 0.0}, Complex{2.5, 0.0},
                    Complex{0.0, 0.4}, Complex{0.0, 1.5}, Complex{0.9, 0.7},
                    Complex{-2.0, 0.3}, Complex{3.5, 0.0}}) {
    const Complex a0 = jost_solve(u0, z).a;
    const Complex a1 = jost_solve(res.u_tilde, z).a;
    REQUIRE(std::abs(a1 - a0 * (z - xi) / (z - std::conj(xi))) < 1e-5);
    ++checked;
  }
  REQUIRE(checked == 8);
}

TEST_CASE("pre-existing norming constants are preserved") {
  const double q = 0.25;
  const SpatialGrid g = symmetric_grid(45.0, 2800);
  const SampledField eta = sample_soliton(g, 1.0, q);
  const Complex gamma_before = gamma_from_jost(eta, 1.0);
  REQUIRE(std::abs(gamma_before - Complex{1.2909944487358056, 0.0}) < 1e-6);

  const DarbouxFieldResult res = darboux_add(psi_from_potential(eta), eta,
                                             DarbouxStep{Complex{0.0, 0.5}, Complex{2.0, 0.0}});
  const Complex gamma_after = gamma_from_jost(res.u_tilde, 1.0);
  REQUIRE(std::abs(gamma_after - gamma_before) < 1e-5);

  // reflection samples transform by the pure Blaschke phase
  const SpectralGrid sg = SpectralGrid::symmetric(3.0, 30);
  CVec r(sg.size(), Complex{0.1, 0.05});
  const CVec r2 = reflect_after_add(sg, r, Complex{0.0, 0.5});
  const CVec r3 = reflect_after_remove(sg, r2, Complex{0.0, 0.5});
  for (std::size_t i = 0; i < sg.size(); ++i) {
    REQUIRE(std::abs(std::abs(r2[i]) - std::abs(r[i])) < 1e-15);
    REQUIRE(std::abs(r3[i] - r[i]) < 1e-15);
  }
}

TEST_CASE("guards: pole collision and not-a-pole") {
  const SpatialGrid g = symmetric_grid(10.0, 200);
  const SampledField u0(g);
  SpectrumUpdate spectrum;
  spectrum.poles = {Complex{0.0, 1.0}};
  REQUIRE_THROWS_AS(
      darboux_add(psi_vacuum(), u0, DarbouxStep{Complex{0.0, 1.0}, 1.0}, spectrum),
      PoleCollision);
  REQUIRE_THROWS_AS(darboux_add(psi_vacuum(), u0, DarbouxStep{Complex{0.0, -1.0}, 1.0}),
                    PoleCollision);
  REQUIRE_THROWS_AS(darboux_remove(psi_vacuum(), u0, Complex{0.0, 0.5}, spectrum),
                    NotAPole);
}
