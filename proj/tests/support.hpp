#pragma once

#include <random>

#include "pcqo/pcqo.hpp"

namespace pcqo::testing {

inline Matrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix A(dim, dim);
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) A(r, c) = cplx(g(rng), g(rng));
  return (A + A.adjoint()) / 2.0;
}

inline Matrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  return hermitian_exp({dim, 1, kDefaultHbar, random_hermitian(dim, rng)}, 1.0).entries;
}

inline ModeState random_state(std::size_t N, std::size_t D, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ModeState s(N, D);
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) s.amplitudes()(i) = cplx(g(rng), g(rng));
  s.amplitudes() /= s.amplitudes().norm();
  return s;
}

/// Random polynomial with up to `terms` monomials of total degree <= max_degree.
inline BosonPolynomial random_polynomial(std::size_t N, int max_degree, int terms, std::mt19937_64& rng,
                                         bool hermitian = false) {
  std::uniform_int_distribution<int> pick_mode(0, static_cast<int>(N) - 1), pick_deg(1, max_degree);
  std::uniform_int_distribution<int> coin(0, 1);
  std::normal_distribution<double> g;
  BosonPolynomial P(N);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    const int deg = pick_deg(rng);
    for (int k = 0; k < deg; ++k) {
      const auto mode = static_cast<std::size_t>(pick_mode(rng));
      ++m.e[2 * mode + static_cast<std::size_t>(coin(rng))];
    }
    P.add_term(m, cplx(g(rng), g(rng)));
  }
  if (hermitian) P = (P + P.adjoint()) * cplx(0.5);
  return P;
}

inline std::vector<double> random_params(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline double max_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace pcqo::testing
