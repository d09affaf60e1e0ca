#include "adrc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "adrc/errors.hpp"

namespace adrc::linalg {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square()) throw ValidationError(std::string(what) + ": matrix is not square");
}

void require_symmetric(const Matrix& s) {
  require_square(s, "symmetric eigenproblem");
  const double scale = std::max(1.0, max_abs(s));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      if (std::fabs(s(i, j) - s(j, i)) > kTolerances.symmetry * scale) {
        throw ValidationError("matrix is not symmetric");
      }
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

Matrix symmetrized(const Matrix& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

Vector solve_linear(const Matrix& m, std::span<const double> b) {
  require_square(m, "solve_linear");
  const std::size_t n = m.rows();
  if (b.size() != n) throw ValidationError("solve_linear: dimension mismatch");

  Matrix a = m;
  Vector x(b.begin(), b.end());
  const double threshold = kTolerances.pivot * std::max(max_abs(m), 1e-300);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (std::fabs(a(pivot, col)) <= threshold) {
      throw NumericError("singular matrix (pivot below tolerance in column " + std::to_string(col) + ")");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(x[col], x[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      x[r] -= factor * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = x[i];
    for (std::size_t c = i + 1; c < n; ++c) sum -= a(i, c) * x[c];
    x[i] = sum / a(i, i);
  }
  return x;
}

SymmetricEigen eigen_symmetric(const Matrix& s) {
  require_symmetric(s);
  const std::size_t n = s.rows();
  Matrix a = symmetrized(s);
  Matrix v = Matrix::identity(n);
  const double target = kTolerances.jacobi_off_diag * std::max(1.0, frobenius_norm(a));

  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        // Rotation angle that annihilates a(p, q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > target) throw NumericError("Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double min_eigenvalue_symmetric(const Matrix& s) {
  if (s.rows() == 0) throw ValidationError("empty matrix");
  return eigen_symmetric(s).values.front();
}

Matrix solve_lyapunov(const Matrix& f, const Matrix& q) {
  require_square(f, "solve_lyapunov");
  const std::size_t n = f.rows();
  if (q.rows() != n || q.cols() != n) throw ValidationError("solve_lyapunov: dimension mismatch");

  // Row (i, j) of F^T X + X F: sum_k F(k,i) X(k,j) + sum_k X(i,k) F(k,j).
  const std::size_t nn = n * n;
  Matrix op(nn, nn);
  Vector rhs(nn);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        op(row, k * n + j) += f(k, i);
        op(row, i * n + k) += f(k, j);
      }
      rhs[row] = -q(i, j);
    }
  }

  Vector vec;
  try {
    vec = solve_linear(op, rhs);
  } catch (const NumericError&) {
    throw NumericError("Lyapunov operator is singular; F is not Hurwitz");
  }
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = vec[i * n + j];
  x = symmetrized(x);

  const Matrix q_sym = symmetrized(q);
  const double q_scale = std::max(1.0, max_abs(q_sym));
  if (min_eigenvalue_symmetric(q_sym) >= -kTolerances.symmetry * q_scale) {
    const double x_scale = std::max(1.0, max_abs(x));
    if (min_eigenvalue_symmetric(x) < -1e-9 * x_scale) {
      throw NumericError("Lyapunov solution is indefinite; F is not Hurwitz");
    }
  }
  return x;
}

Matrix chain_a(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  return a;
}

Matrix chain_b(std::size_t n) {
  Matrix b(n, 1);
  b(n - 1, 0) = 1.0;
  return b;
}

double care_residual(const Matrix& p, double mu0) {
  const std::size_t n = p.rows();
  const Matrix a = chain_a(n);
  const Matrix b = chain_b(n);
  const Matrix pb = p * b;
  const Matrix defect = a.transpose() * p + p * a - mu0 * (pb * pb.transpose()) + Matrix::identity(n);
  return frobenius_norm(defect);
}

RiccatiSolution solve_care(std::size_t n, double mu0) {
  if (n == 0) throw ValidationError("solve_care: order must be at least 1");
  if (!(mu0 > 0.0)) throw ValidationError("solve_care: mu0 must be positive");

  const Matrix a = chain_a(n);
  const Matrix b = chain_b(n);
  const Matrix identity = Matrix::identity(n);

  // Row gain G with F = A - B G. Initial G gives (lambda + 1)^n.
  Matrix gain(1, n);
  double binom = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    gain(0, j) = binom;
    binom = binom * static_cast<double>(n - j) / static_cast<double>(j + 1);
  }

  Matrix p;
  RiccatiSolution out;
  for (int it = 1; it <= kTolerances.newton_max_iterations; ++it) {
    const Matrix f = a - b * gain;
    const Matrix q = identity + (1.0 / mu0) * (gain.transpose() * gain);
    Matrix next = solve_lyapunov(f, q);
    const bool converged =
        !p.rows() ? false : max_abs(next - p) <= kTolerances.newton_step * std::max(1.0, max_abs(next));
    p = std::move(next);
    gain = mu0 * (b.transpose() * p);
    out.iterations = it;
    if (converged) break;
  }

  out.residual = care_residual(p, mu0);
  if (out.residual > kTolerances.care_residual) {
    throw NumericError("Newton-Kleinman iteration did not converge (residual " + std::to_string(out.residual) + ")");
  }
  out.k.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.k[j] = -p(n - 1, j);
  out.p = std::move(p);
  return out;
}

RouthVerdict routh_hurwitz(std::span<const double> coeffs) {
  if (coeffs.empty() || coeffs.front() != 1.0) throw ValidationError("polynomial must be monic");
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return RouthVerdict::Hurwitz;

  const double zero = kTolerances.routh_zero * std::max(1.0, max_abs(coeffs));
  const std::size_t width = degree / 2 + 1;
  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (std::size_t i = 0; i <= degree; ++i) (i % 2 == 0 ? upper : lower)[i / 2] = coeffs[i];

  // First column entries after the leading 1; each must be strictly positive.
  for (std::size_t row = 1; row <= degree; ++row) {
    const double pivot = lower[0];
    if (std::fabs(pivot) <= zero) return RouthVerdict::Indeterminate;
    if (pivot < 0.0) return RouthVerdict::NotHurwitz;
    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      next[j] = (pivot * upper[j + 1] - upper[0] * lower[j + 1]) / pivot;
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  return RouthVerdict::Hurwitz;
}

bool positive_definite(const Matrix& s) {
  if (!s.square() || s.rows() == 0) return false;
  // Pivots of elimination without row exchange are ratios of consecutive
  // leading principal minors.
  Matrix a = s;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(a(k, k) > 0.0)) return false;
    for (std::size_t r = k + 1; r < n; ++r) {
      const double factor = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  return true;
}

}  // namespace adrc::linalg
