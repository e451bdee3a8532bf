#include <cmath>
#include <vector>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sdanc/config.hpp"
#include "sdanc/errors.hpp"
#include "sdanc/lti.hpp"

using namespace sdanc;

namespace {

ContinuousStateSpace lag(double p) {
  return ContinuousStateSpace(Matrix::Constant(1, 1, -p), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
}

double rel(const Matrix& a, const Matrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

const double kTestOmegas[] = {0.0, 0.3, 1.0, 2.2, 7.5, 40.0};

}  // namespace

TEST_SUITE("lti") {

TEST_CASE("state space dimensions are checked") {
  CHECK_THROWS_AS(ContinuousStateSpace(Matrix::Zero(2, 3), Matrix::Zero(2, 1), Matrix::Zero(1, 2)), DimensionError);
  CHECK_THROWS_AS(ContinuousStateSpace(Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(1, 2)), DimensionError);
  CHECK_THROWS_AS(ContinuousStateSpace(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 3)), DimensionError);
  CHECK_THROWS_AS(ContinuousStateSpace(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(2, 2)),
                  DimensionError);
  const ContinuousStateSpace ok(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 2));
  CHECK(ok.states() == 2);
  CHECK(ok.is_siso());
  CHECK(ok.is_strictly_proper());
}

TEST_CASE("single first-order section") {
  const double poles[] = {1.1};
  const auto sys = from_second_order_bank({}, {}, {}, poles);
  REQUIRE(sys.states() == 1);
  CHECK(sys.a()(0, 0) == doctest::Approx(-1.1));
  CHECK(sys.b()(0, 0) == 1.0);
  CHECK(sys.c()(0, 0) == 1.0);
}

TEST_CASE("secondary path of the experiment has nine states and resonant peaks") {
  const auto F = secondary_path(default_config());
  CHECK(F.states() == 9);
  CHECK(F.is_stable());
  CHECK(F.is_strictly_proper());
  for (double w : {1.0, 2.0, 3.0, 4.0}) {
    const double peak = std::abs(freq_response_siso(F, w));
    CHECK(peak > std::abs(freq_response_siso(F, w - 0.3)));
    CHECK(peak > std::abs(freq_response_siso(F, w + 0.3)));
  }
  // w = 2 against its neighbours at 1.5 and 2.5
  const double at2 = std::abs(freq_response_siso(F, 2.0));
  CHECK(at2 > std::abs(freq_response_siso(F, 1.5)));
  CHECK(at2 > std::abs(freq_response_siso(F, 2.5)));
}

TEST_CASE("primary path of the experiment is stable with peaks at 1.2k") {
  const auto P = primary_path(default_config());
  CHECK(P.states() == 10);
  CHECK(P.is_stable());
  // the low-pass factor pulls each maximum slightly below 1.2k
  std::vector<double> peaks;
  double prev2 = 0.0, prev = 0.0;
  for (int i = 0; i <= 6000; ++i) {
    const double w = 0.001 * i;
    const double m = std::abs(freq_response_siso(P, w));
    if (i > 1 && prev > prev2 && prev > m) peaks.push_back(w - 0.001);
    prev2 = prev;
    prev = m;
  }
  REQUIRE(peaks.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(peaks[static_cast<std::size_t>(k)] - 1.2 * (k + 1)) <= 0.2);
}

TEST_CASE("resonant bank matches its transfer function") {
  SectionBank bank;
  bank.gain = 0.25;
  bank.first_order_poles = {0.7, 2.0};
  bank.sections = {{1.0, 0.1, 1.0}, {2.0, 0.3, 3.0}};
  const auto sys = from_second_order_bank(bank);
  for (double w : kTestOmegas) {
    const std::complex<double> s(0.0, w);
    std::complex<double> sum = 0.0;
    for (const auto& sec : bank.sections) {
      const double wn = sec.frequency;
      sum += sec.gain * wn * wn / (s * s + 2.0 * sec.damping * wn * s + wn * wn);
    }
    const auto expected = bank.gain * sum / ((s + 0.7) * (s + 2.0));
    CHECK(std::abs(freq_response_siso(sys, w) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("zero-gain bank has zero response") {
  const double gains[] = {0.0, 0.0};
  const double damp[] = {0.1, 0.1};
  const double freq[] = {1.0, 2.0};
  const double poles[] = {1.0};
  const auto sys = from_second_order_bank(gains, damp, freq, poles);
  for (double w : kTestOmegas) CHECK(std::abs(freq_response_siso(sys, w)) == 0.0);
}

TEST_CASE("unstable or improper banks are rejected") {
  const double bad_pole[] = {-1.0};
  CHECK_THROWS_AS(from_second_order_bank({}, {}, {}, bad_pole), ModelError);
  const double g[] = {1.0}, zero_damp[] = {0.0}, f[] = {1.0}, p[] = {1.0};
  CHECK_THROWS_AS(from_second_order_bank(g, zero_damp, f, p), ModelError);
  const double neg_freq[] = {-2.0}, d[] = {0.1};
  CHECK_THROWS_AS(from_second_order_bank(g, d, neg_freq, p), ModelError);
  CHECK_THROWS_AS(from_second_order_bank({}, {}, {}, {}), ModelError);
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(from_second_order_bank(two, d, f, p), DimensionError);
}

TEST_CASE("flipping a pole sign reports unstable") {
  const auto F = secondary_path(default_config());
  CHECK(F.is_stable());
  Matrix a = F.a();
  a(0, 0) = -a(0, 0);
  CHECK_FALSE(ContinuousStateSpace(a, F.b(), F.c()).is_stable());
  CHECK(lag(1.0).spectral_abscissa() == doctest::Approx(-1.0));
}

TEST_CASE("series and parallel composition") {
  std::mt19937_64 rng(11);
  const auto G = oracle::random_stable_plant(rng, 4);
  const auto H = oracle::random_stable_plant(rng, 3);
  const auto gi = series(G, identity_system());
  const auto cancel = parallel(G, negate(G));
  const auto gh = series(G, H);
  const auto sum = parallel(G, H);
  for (double w : kTestOmegas) {
    const auto g = freq_response_siso(G, w);
    const auto h = freq_response_siso(H, w);
    CHECK(std::abs(freq_response_siso(gi, w) - g) <= 1e-12 * std::abs(g));
    CHECK(std::abs(freq_response_siso(cancel, w)) <= 1e-12);
    CHECK(std::abs(freq_response_siso(gh, w) - g * h) <= 1e-10 * std::abs(g * h));
    CHECK(std::abs(freq_response_siso(sum, w) - (g + h)) <= 1e-10 * std::abs(g + h));
  }
  CHECK(freq_response_siso(series(lag(1.0), lag(2.0)), 0.0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(series(G, identity_system(2)), DimensionError);
  CHECK_THROWS_AS(parallel(G, identity_system(2)), DimensionError);
}

TEST_CASE("frequency response of a unit lag") {
  CHECK(std::abs(freq_response_siso(lag(1.0), 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(freq_response_siso(lag(1.0), 1.0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(freq_response_siso(identity_system(2), 1.0), ModelError);
}

TEST_CASE("expm closed forms and group property") {
  CHECK(expm(Matrix::Zero(3, 3)).isApprox(Matrix::Identity(3, 3)));
  CHECK(expm(Matrix::Constant(1, 1, -1.0))(0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK_THROWS_AS(expm(Matrix::Zero(2, 3)), DimensionError);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sys = oracle::random_stable_plant(rng, 2 + trial % 9);
    const Matrix& A = sys.a();
    const auto n = A.rows();
    CHECK((expm(A) * expm(-A) - Matrix::Identity(n, n)).norm() <= 1e-10);
    CHECK(rel(expm(A * 0.7), expm(A * 0.3) * expm(A * 0.4)) <= 1e-10);
    CHECK(rel(expm(A * 0.9), oracle::ModalExp(A).at(0.9)) <= 1e-12);
  }
}

TEST_CASE("vanloan on an integrator") {
  const ContinuousStateSpace integ(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  const auto r = vanloan(integ, 1.0);
  CHECK(r.phi(0, 0) == doctest::Approx(1.0));
  CHECK(r.gamma(0, 0) == doctest::Approx(1.0));
  CHECK(r.lambda(0, 0) == doctest::Approx(1.0));
  CHECK(r.theta(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("vanloan on a unit lag") {
  const auto r = vanloan(lag(1.0), 1.0);
  CHECK(r.gamma(0, 0) == doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(r.lambda(0, 0) == doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(r.theta(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("vanloan small-time expansion and bad horizon") {
  std::mt19937_64 rng(5);
  const auto sys = oracle::random_stable_plant(rng, 5);
  const double t = 1e-8;
  const auto r = vanloan(sys, t);
  CHECK(rel(r.gamma, t * sys.b()) <= 1e-7);
  CHECK(rel(r.phi, Matrix::Identity(5, 5)) <= 1e-7);
  CHECK_THROWS_AS(vanloan(sys, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(vanloan(sys, -1.0), std::invalid_argument);
}

TEST_CASE("gamma derivative is e^{At} B") {
  std::mt19937_64 rng(8);
  const auto sys = oracle::random_stable_plant(rng, 6);
  const double t = 0.8, dt = 1e-5;
  const Matrix fd = (vanloan(sys, t + dt).gamma - vanloan(sys, t - dt).gamma) / (2.0 * dt);
  CHECK(rel(fd, expm(sys.a() * t) * sys.b()) <= 1e-8);
}

TEST_CASE("vanloan agrees with quadrature on random plants") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const auto sys = oracle::random_stable_plant(rng, 1 + trial);
    const double t = 0.5 + 0.25 * trial;
    const auto r = vanloan(sys, t);
    const auto q = oracle::quad_blocks(sys, t);
    CHECK(rel(r.phi, q.phi) <= 1e-9);
    CHECK(rel(r.gamma, q.gamma) <= 1e-9);
    CHECK(rel(r.lambda, q.lambda) <= 1e-9);
    CHECK(rel(r.theta, q.theta) <= 1e-9);
  }
}

}  // TEST_SUITE
