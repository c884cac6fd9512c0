#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "covertq/covert.hpp"
#include "oracles.hpp"

using namespace covertq;
using namespace covertq::covert;

namespace {

DensityOperator diag2(double a, double b) {
  const double p[] = {a, b};
  return DensityOperator::diagonal(p);
}

DensityOperator diag_state(const std::vector<double>& p) { return DensityOperator::diagonal(p); }

std::vector<double> random_probs(std::size_t d, std::mt19937_64& rng, double floor = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(d);
  double s = 0.0;
  for (auto& x : p) s += (x = floor + u(rng));
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace

TEST_CASE("quantum relative entropy") {
  std::mt19937_64 rng(31);
  const DensityOperator rho(oracle::random_density(3, rng));
  CHECK(qre(rho, rho) == doctest::Approx(0.0).scale(1.0));
  const double kl = 0.5 * std::log2(0.5 / 0.9) + 0.5 * std::log2(0.5 / 0.1);
  CHECK(qre(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(kl).epsilon(1e-13));
  CHECK(qre(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(0.7369655941662061).epsilon(1e-13));
  CHECK(qre(DensityOperator::basis_state(2, 0), DensityOperator::maximally_mixed(2)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isinf(qre(DensityOperator::maximally_mixed(2), DensityOperator::basis_state(2, 0))));
  CHECK_THROWS_AS(qre(DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(3)), Error);

  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = oracle::random_density(3, rng), b = oracle::random_density(3, rng);
    CHECK(qre(DensityOperator(a), DensityOperator(b)) == doctest::Approx(oracle::qre_dense(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("qre is additive over products") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 50; ++t) {
    const DensityOperator r1(oracle::random_density(2, rng)), s1(oracle::random_density(2, rng));
    const DensityOperator r2(oracle::random_density(3, rng)), s2(oracle::random_density(3, rng));
    const double joint = qre(DensityOperator::tensor(r1, r2), DensityOperator::tensor(s1, s2));
    CHECK(std::abs(joint - qre(r1, s1) - qre(r2, s2)) < 1e-9);
  }
}

TEST_CASE("qre on tensor powers with small eigenvalues") {
  CHECK(tensor_power_cutoff(diag2(0.99, 0.01), 6) == 0.0);
  CHECK(tensor_power_cutoff(diag_state({0.9, 0.1, 0.0}), 3) == doctest::Approx(0.5e-3).epsilon(1e-12));

  // λ_min(σ^{⊗6}) = 1e-12 sits below the absolute support cutoff
  const DensityOperator sigma = diag2(0.99, 0.01), rho = diag2(0.9, 0.1);
  const auto sigma_n = DensityOperator::tensor_power(sigma, 6);
  const auto rho_n = DensityOperator::tensor_power(rho, 6);
  CHECK(std::isinf(qre(rho_n, sigma_n)));
  const double d = qre_given_support(rho_n, sigma_n, tensor_power_cutoff(sigma, 6));
  CHECK(d == doctest::Approx(6.0 * oracle::kl_bits({0.9, 0.1}, {0.99, 0.01})).epsilon(1e-12));

  // kernel directions stay outside the support
  const DensityOperator s3 = diag_state({0.5, 0.5, 0.0}), r3 = diag_state({0.2, 0.8, 0.0});
  CHECK(qre_given_support(DensityOperator::tensor_power(r3, 2), DensityOperator::tensor_power(s3, 2),
                          tensor_power_cutoff(s3, 2)) ==
        doctest::Approx(2.0 * oracle::kl_bits({0.2, 0.8}, {0.5, 0.5})).epsilon(1e-12));
}

TEST_CASE("chi-square divergence") {
  std::mt19937_64 rng(33);
  const DensityOperator rho(oracle::random_density(3, rng));
  CHECK(std::abs(chi2(rho, rho)) < 1e-12);
  CHECK(chi2(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(std::isinf(chi2(DensityOperator::maximally_mixed(2), DensityOperator::basis_state(2, 1))));
  for (int t = 0; t < 50; ++t) {
    const auto p = random_probs(4, rng), q = random_probs(4, rng, 0.05);
    CHECK(chi2(diag_state(p), diag_state(q)) == doctest::Approx(oracle::chi2(p, q)).epsilon(1e-12));
    CHECK(qre(diag_state(p), diag_state(q)) == doctest::Approx(oracle::kl_bits(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("divergence ordering on commuting pairs") {
  // chi2 >= D in nats >= Pinsker's squared distance term
  std::mt19937_64 rng(34);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_probs(3, rng), q = random_probs(3, rng, 0.02);
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
    const double d_nats = kNatsPerBit * qre(diag_state(p), diag_state(q));
    CHECK(chi2(diag_state(p), diag_state(q)) >= d_nats - 1e-12);
    CHECK(d_nats >= 0.5 * l1 * l1 - 1e-12);
  }
}

TEST_CASE("mixture bound against chi-square") {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 100; ++t) {
    const DensityOperator sigma(oracle::random_density(2 + t % 2, rng));
    const DensityOperator pi(oracle::random_density(2 + t % 2, rng));
    const double x = chi2(pi, sigma);
    for (double q = 0.01; q <= 0.5 + 1e-12; q += 0.049) {
      const DensityOperator bar(ComplexMatrix((1.0 - q) * sigma.matrix() + q * pi.matrix()));
      CHECK(qre(bar, sigma) <= q * q * x + 1e-12);
    }
  }
}

TEST_CASE("support containment") {
  std::mt19937_64 rng(36);
  const DensityOperator full(oracle::random_density(3, rng));
  for (int t = 0; t < 10; ++t) {
    const DensityOperator any(oracle::random_density(3, rng, 1 + t % 3));
    CHECK(support_contained(any, full));
  }
  CHECK_FALSE(support_contained(DensityOperator::maximally_mixed(2), DensityOperator::basis_state(2, 0)));

  // rank-2 sigma on a qutrit, rotated; rank-1 rho inside and outside its span
  const auto u = oracle::random_kraus(3, 3, 1, rng).front();
  const ComplexMatrix sigma_m = u * ComplexMatrix(ComplexVector((ComplexVector(3) << 0.7, 0.3, 0.0).finished())
                                                      .asDiagonal()) * u.adjoint();
  const DensityOperator sigma(sigma_m);
  const ComplexMatrix proj = u.leftCols(2) * u.leftCols(2).adjoint();
  ComplexVector inside = u.col(0) * 0.6 + u.col(1) * cplx(0.0, 0.8);
  ComplexVector outside = u.col(0) * 0.6 + u.col(2) * 0.8;
  auto residual = [&](const ComplexVector& v) { return ((ComplexMatrix::Identity(3, 3) - proj) * v).norm(); };
  CHECK(residual(inside) < 1e-12);
  CHECK(residual(outside) > 0.5);
  CHECK(support_contained(DensityOperator::pure(inside), sigma));
  CHECK_FALSE(support_contained(DensityOperator::pure(outside), sigma));
}

TEST_CASE("helstrom error and trace distance") {
  std::mt19937_64 rng(37);
  const DensityOperator rho(oracle::random_density(2, rng));
  CHECK(helstrom_error(rho, rho) == doctest::Approx(0.5));
  CHECK(helstrom_error(DensityOperator::basis_state(2, 0), DensityOperator::basis_state(2, 1)) ==
        doctest::Approx(0.0).scale(1.0));
  CHECK(helstrom_error(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(trace_distance(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("pinsker gap") {
  std::mt19937_64 rng(38);
  const DensityOperator rho(oracle::random_density(2, rng));
  const auto same = pinsker_gap(rho, rho);
  CHECK(same.lhs == doctest::Approx(0.0).scale(1.0));
  CHECK(same.rhs == doctest::Approx(0.0).scale(1.0));

  const auto g = pinsker_gap(diag2(0.5, 0.5), diag2(0.9, 0.1));
  const double kl_nats = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
  CHECK(g.lhs == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(g.rhs == doctest::Approx(std::sqrt(kl_nats / 8.0)).epsilon(1e-13));
  CHECK(g.lhs <= g.rhs);

  CHECK(std::isinf(pinsker_gap(DensityOperator::maximally_mixed(2), DensityOperator::basis_state(2, 0)).rhs));
  for (int t = 0; t < 1000; ++t) {
    const DensityOperator a(oracle::random_density(2, rng, 1 + t % 2)), b(oracle::random_density(2, rng));
    const auto r = pinsker_gap(a, b);
    CHECK(r.lhs <= r.rhs + 1e-12);
  }
}

TEST_CASE("covert constant") {
  const channels::WillieModel m{diag2(0.9, 0.1), diag2(0.5, 0.5)};
  const auto c = covert_constant(m);
  CHECK(c.chi2 == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(c.value == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_FALSE(c.trivially_covert);

  const auto triv = covert_constant({diag2(0.6, 0.4), diag2(0.6, 0.4)});
  CHECK(triv.trivially_covert);
  CHECK(std::isinf(triv.value));

  try {
    covert_constant({DensityOperator::basis_state(2, 0), DensityOperator::maximally_mixed(2)});
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportViolation);
  }

  // complementary of amplitude damping 0.5: innocent |0> leaves a pure output and fails,
  // innocent |1> gives rho0 = diag(0.5,0.5), rho_pi = diag(0.75,0.25), chi2 = 0.25
  const auto env = channels::complementary(channels::amplitude_damping(0.5));
  CHECK_THROWS_AS(covert_constant(channels::willie_model(env, DensityOperator::basis_state(2, 0))), Error);
  const auto one = covert_constant(channels::willie_model(env, DensityOperator::basis_state(2, 1)));
  CHECK(one.chi2 == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(one.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("budget amplitude") {
  CHECK(q_for_budget(0.75, 0.01, 10000) == doctest::Approx(7.5e-4).epsilon(1e-14));
  CHECK(q_for_budget(0.75, 0.0, 100) == 0.0);
  const auto b = covertness_budget(1e6, 0.05, 10);
  CHECK(b.clamped);
  CHECK(b.q == 1.0);
  CHECK_FALSE(covertness_budget(0.75, 0.05, 1000).clamped);
  CHECK_THROWS_AS(q_for_budget(0.0, 0.1, 10), Error);
  CHECK_THROWS_AS(q_for_budget(1.0, -0.1, 10), Error);
  CHECK_THROWS_AS(q_for_budget(1.0, 0.1, 0), Error);
}

TEST_CASE("entropies") {
  CHECK(von_neumann_entropy(DensityOperator::maximally_mixed(4)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityOperator::basis_state(3, 1)) == doctest::Approx(0.0).scale(1.0));
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-14));
}

TEST_CASE("gibbs states") {
  const double h2[] = {0.0, 1.0};
  auto g = gibbs_state(linops::diagonal(h2), 0.5);
  CHECK(std::abs(g.beta) < 1e-12);
  CHECK((g.state.matrix() - 0.5 * linops::identity(2)).cwiseAbs().maxCoeff() < 1e-12);

  g = gibbs_state(linops::diagonal(h2), 0.1);
  CHECK(g.beta == doctest::Approx(std::log(9.0)).epsilon(1e-10));
  CHECK(g.state.matrix()(0, 0).real() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(g.energy == doctest::Approx(0.1).epsilon(1e-12));

  // three levels: independent bisection on the partition function
  const double h3[] = {0.0, 1.0, 2.0};
  g = gibbs_state(linops::diagonal(h3), 0.5);
  auto energy = [](double b) {
    const double z = 1.0 + std::exp(-b) + std::exp(-2.0 * b);
    return (std::exp(-b) + 2.0 * std::exp(-2.0 * b)) / z;
  };
  double lo = 0.0, hi = 50.0;
  for (int i = 0; i < 200; ++i) ((energy(0.5 * (lo + hi)) > 0.5) ? lo : hi) = 0.5 * (lo + hi);
  CHECK(g.beta == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
  CHECK(g.beta == doctest::Approx(0.8341151943524011).epsilon(1e-9));
  CHECK(g.energy == doctest::Approx(0.5).epsilon(1e-10));

  // above the maximally mixed energy the temperature is negative
  g = gibbs_state(linops::diagonal(h3), 1.5);
  CHECK(g.beta < 0.0);
  CHECK(g.energy == doctest::Approx(1.5).epsilon(1e-10));

  CHECK_THROWS_AS(gibbs_state(linops::diagonal(h3), 2.0), Error);
  CHECK_THROWS_AS(gibbs_state(linops::diagonal(h3), -0.1), Error);
}

TEST_CASE("gibbs state maximizes entropy at fixed energy") {
  std::mt19937_64 rng(39);
  const ComplexMatrix h = oracle::random_hermitian(3, rng);
  const auto es = linops::eig_hermitian(h);
  const double e0 = 0.7 * es.values(0) + 0.3 * es.values(2);
  const double s_gibbs = von_neumann_entropy(gibbs_state(h, e0).state);
  const ComplexVector ground = es.vectors.col(0), top = es.vectors.col(2);
  int checked = 0;
  while (checked < 100) {
    const ComplexMatrix r = oracle::random_density(3, rng);
    const double er = (r * h).trace().real();
    // mix toward the ground or top level to land on the target energy
    const ComplexVector v = er > e0 ? ground : top;
    const double ev = (v.adjoint() * h * v)(0, 0).real();
    const double t = (e0 - ev) / (er - ev);
    if (!(t >= 0.0 && t <= 1.0)) continue;
    const DensityOperator rho(ComplexMatrix(t * r + (1.0 - t) * v * v.adjoint()));
    CHECK((rho.matrix() * h).trace().real() == doctest::Approx(e0).epsilon(1e-10));
    CHECK(von_neumann_entropy(rho) <= s_gibbs + 1e-8);
    ++checked;
  }
}

TEST_CASE("chi-square tail diagnostic") {
  const double h3[] = {0.0, 1.0, 2.0};
  const double p[] = {0.6, 0.3, 0.1};
  const DensityOperator pi = DensityOperator::diagonal(p);
  const auto rows = chi2_tail_diagnostic(pi, linops::diagonal(h3), 0.5);
  REQUIRE(rows.size() == 3);
  const double beta = gibbs_state(linops::diagonal(h3), 0.5).beta;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(rows[k].k == k + 1);
    CHECK(rows[k].weight == doctest::Approx(p[k] * p[k]).epsilon(1e-14));
    CHECK(rows[k].envelope == doctest::Approx(std::exp(-beta * h3[k]) / (k + 1.0)).epsilon(1e-12));
    CHECK(rows[k].ratio == doctest::Approx(rows[k].weight / rows[k].envelope).epsilon(1e-14));
  }
  CHECK_THROWS_AS(chi2_tail_diagnostic(DensityOperator::maximally_mixed(2), linops::diagonal(h3), 0.5), Error);
}
