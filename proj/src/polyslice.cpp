#include "relspace/polyslice.hpp"

#include <stdexcept>
#include <utility>

namespace relspace {

Integer binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r *= Integer(n - i);
    r /= Integer(i + 1);
  }
  return r;
}

namespace {

void monomials_rec(std::size_t pos, std::size_t n, int left, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (pos + 1 == n) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[pos] = e;
    monomials_rec(pos + 1, n, left - e, cur, out);
  }
}

}  // namespace

PolyDegreewise::PolyDegreewise(std::size_t generators, int max_deg)
    : n_(generators), max_deg_(max_deg) {
  if (max_deg < 0) throw std::invalid_argument("PolyDegreewise: negative max degree");
  expo_.resize(max_deg + 1);
  index_.resize(max_deg + 1);
  for (int d = 0; d <= max_deg; ++d) {
    if (n_ == 0) {
      if (d == 0) expo_[d].push_back({});
    } else {
      std::vector<int> cur(n_);
      monomials_rec(0, n_, d, cur, expo_[d]);
    }
    for (std::size_t i = 0; i < expo_[d].size(); ++i) index_[d][expo_[d][i]] = i;
  }
  if (max_deg > 0) {
    raise_.resize(max_deg);
    for (int d = 0; d < max_deg; ++d) {
      raise_[d].assign(expo_[d].size(), std::vector<std::size_t>(n_));
      for (std::size_t m = 0; m < expo_[d].size(); ++m)
        for (std::size_t g = 0; g < n_; ++g) {
          std::vector<int> e = expo_[d][m];
          ++e[g];
          raise_[d][m][g] = index_[d + 1].at(e);
        }
    }
  }
}

void PolyDegreewise::check_degree(int d) const {
  if (d < 0 || d > max_deg_) throw std::invalid_argument("PolyDegreewise: degree out of range");
}

std::size_t PolyDegreewise::slice_dim(int d) const {
  check_degree(d);
  return expo_[d].size();
}

const std::vector<std::vector<int>>& PolyDegreewise::exponents(int d) const {
  check_degree(d);
  return expo_[d];
}

std::size_t PolyDegreewise::index_of(int d, const std::vector<int>& expo) const {
  check_degree(d);
  return index_[d].at(expo);
}

std::size_t PolyDegreewise::raise(int d, std::size_t m, std::size_t g) const {
  check_degree(d + 1);
  return raise_[d][m][g];
}

QVec PolyDegreewise::multiply(int d1, const QVec& u, int d2, const QVec& v) const {
  check_degree(d1);
  check_degree(d2);
  check_degree(d1 + d2);
  QVec out(slice_dim(d1 + d2), Rational(0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      std::vector<int> e = expo_[d1][i];
      const std::vector<int>& f = expo_[d2][j];
      for (std::size_t g = 0; g < n_; ++g) e[g] += f[g];
      out[index_[d1 + d2].at(e)] += u[i] * v[j];
    }
  }
  return out;
}

Subspace LinearIdeal::slice(int d) const {
  if (!ring) throw std::logic_error("LinearIdeal: no ring");
  if (generators.ambient() != ring->generators_dim())
    throw std::invalid_argument("LinearIdeal: generators live in the wrong slice");
  std::size_t out_dim = ring->slice_dim(d);
  if (d == 0 || generators.dim() == 0) return Subspace(out_dim);
  const QMatrix& G = generators.basis();
  std::size_t lower = ring->slice_dim(d - 1);
  std::vector<QVec> rows;
  rows.reserve(G.rows() * lower);
  for (std::size_t r = 0; r < G.rows(); ++r)
    for (std::size_t m = 0; m < lower; ++m) {
      QVec v(out_dim, Rational(0));
      for (std::size_t g = 0; g < ring->generators_dim(); ++g)
        if (G.at(r, g) != 0) v[ring->raise(d - 1, m, g)] += G.at(r, g);
      rows.push_back(std::move(v));
    }
  return Subspace::span_of(rows, out_dim);
}

}  // namespace relspace
