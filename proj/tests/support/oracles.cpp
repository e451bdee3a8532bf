#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

ModalExp::ModalExp(const Matrix& a) {
  Eigen::EigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  v_ = eig.eigenvectors();
  lambda_ = eig.eigenvalues();
  v_inv_ = v_.inverse();
}

Matrix ModalExp::at(double t) const {
  const Eigen::VectorXcd d = (lambda_ * t).array().exp();
  return (v_ * d.asDiagonal() * v_inv_).real();
}

Matrix integrate(const std::function<Matrix(double)>& f, double a, double b, double tol) {
  const Matrix probe = f(a);
  Matrix out(probe.rows(), probe.cols());
  for (Eigen::Index i = 0; i < probe.rows(); ++i) {
    for (Eigen::Index j = 0; j < probe.cols(); ++j) {
      auto entry = [&](double t) { return f(t)(i, j); };
      out(i, j) = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(entry, a, b, 20, tol);
    }
  }
  return out;
}

QuadBlocks quad_blocks(const ContinuousStateSpace& sys, double t) {
  const ModalExp e(sys.a());
  const Matrix& B = sys.b();
  const Matrix& C = sys.c();
  QuadBlocks q;
  q.phi = e.at(t);
  q.gamma = integrate([&](double s) -> Matrix { return e.at(s) * B; }, 0.0, t);
  q.lambda = integrate([&](double s) -> Matrix { return C * e.at(s); }, 0.0, t);
  // int_0^t int_0^r k(s) ds dr = int_0^t (t - s) k(s) ds
  q.theta = integrate([&](double s) -> Matrix { return (t - s) * (C * e.at(s) * B); }, 0.0, t);
  return q;
}

QuadLift quad_lift(const ContinuousStateSpace& sys, double h, int L) {
  const ModalExp e(sys.a());
  const Matrix& B = sys.b();
  const Matrix& C = sys.c();
  QuadLift q;
  q.Ah = e.at(h);
  q.Bh = integrate([&](double s) -> Matrix { return e.at(s) * B; }, 0.0, h).col(0);
  q.Ch.resize(L, sys.states());
  q.Dh.resize(L);
  const double dt = h / L;
  for (int l = 0; l < L; ++l) {
    const double lo = l * dt;
    const double hi = lo + dt;
    q.Ch.row(l) = integrate([&](double s) -> Matrix { return C * e.at(s); }, lo, hi).row(0);
    // int_lo^hi int_0^r k = (hi - lo) int_0^lo k + int_lo^hi (hi - s) k
    auto k = [&](double s) -> Matrix { return C * e.at(s) * B; };
    double v = integrate([&](double s) -> Matrix { return (hi - s) * k(s); }, lo, hi)(0, 0);
    if (lo > 0.0) v += (hi - lo) * integrate(k, 0.0, lo)(0, 0);
    q.Dh(l) = v;
  }
  return q;
}

ContinuousStateSpace random_stable_plant(std::mt19937_64& rng, int states) {
  std::uniform_real_distribution<double> re(0.2, 3.0);
  std::uniform_real_distribution<double> im(0.3, 5.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a = Matrix::Zero(states, states);
  int i = 0;
  while (i < states) {
    if (states - i >= 2 && gauss(rng) > 0.0) {
      const double s = -re(rng);
      const double w = im(rng);
      a(i, i) = s;
      a(i, i + 1) = w;
      a(i + 1, i) = -w;
      a(i + 1, i + 1) = s;
      i += 2;
    } else {
      a(i, i) = -re(rng);
      i += 1;
    }
  }
  Matrix g(states, states);
  for (Eigen::Index r = 0; r < states; ++r)
    for (Eigen::Index c = 0; c < states; ++c) g(r, c) = gauss(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Matrix b(states, 1), c(1, states);
  for (Eigen::Index r = 0; r < states; ++r) {
    b(r, 0) = gauss(rng);
    c(0, r) = gauss(rng);
  }
  return ContinuousStateSpace(q * a * q.transpose(), b, c);
}

namespace {

// One RK4 step of x' = A x + B u with constant u.
Vector rk4(const Matrix& A, const Vector& b, const Vector& x, double u, double dt) {
  auto f = [&](const Vector& s) -> Vector { return A * s + b * u; };
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * dt * k1);
  const Vector k3 = f(x + 0.5 * dt * k2);
  const Vector k4 = f(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<Vector> rk4_held(const ContinuousStateSpace& sys, const std::vector<double>& u, double h,
                             int substeps) {
  const Vector b = sys.b().col(0);
  Vector x = Vector::Zero(sys.states());
  std::vector<Vector> out{x};
  const double dt = h / substeps;
  for (double un : u) {
    for (int s = 0; s < substeps; ++s) x = rk4(sys.a(), b, x, un, dt);
    out.push_back(x);
  }
  return out;
}

std::vector<double> rk4_held_output(const ContinuousStateSpace& sys, const std::vector<double>& u, double h,
                                    int substeps) {
  const Vector b = sys.b().col(0);
  const Eigen::RowVectorXd c = sys.c().row(0);
  Vector x = Vector::Zero(sys.states());
  std::vector<double> y;
  const double dt = h / substeps;
  for (double un : u) {
    for (int s = 0; s < substeps; ++s) {
      y.push_back(c.dot(x));
      x = rk4(sys.a(), b, x, un, dt);
    }
  }
  y.push_back(c.dot(x));
  return y;
}

double trapezoid(const std::vector<double>& y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

}  // namespace oracle
