#include "conleygp/zmod.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "conleygp/error.hpp"

namespace conleygp {

Z5 Z5::inverse() const {
  static constexpr std::uint8_t kInv[5] = {0, 1, 3, 2, 4};
  if (v_ == 0) throw InternalError("division by zero in Z5");
  return Z5(kInv[v_]);
}

// ---------------------------------------------------------------- matrices

Z5Matrix::Z5Matrix(std::initializer_list<std::initializer_list<int>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ConfigError("ragged matrix literal");
    for (int v : r) data_.emplace_back(v);
  }
}

Z5Matrix Z5Matrix::identity(std::size_t n) {
  Z5Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Z5Matrix Z5Matrix::transpose() const {
  Z5Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Z5Matrix operator*(const Z5Matrix& a, const Z5Matrix& b) {
  if (a.cols_ != b.rows_) throw InternalError("matrix product dimension mismatch");
  Z5Matrix out(a.rows_, b.cols_);
  std::vector<int> acc(b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const int s = a(i, k).value();
      if (s == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) acc[j] += s * b(k, j).value();
    }
    for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) = Z5(acc[j]);
  }
  return out;
}

Z5Matrix operator+(const Z5Matrix& a, const Z5Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InternalError("matrix sum dimension mismatch");
  Z5Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

std::vector<std::vector<int>> Z5Matrix::to_rows() const {
  std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c).value();
  return out;
}

std::vector<std::size_t> row_reduce(Z5Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
    const Z5 inv = m(row, col).inverse();
    for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Z5 f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(Z5Matrix m) { return row_reduce(m).size(); }

Z5Matrix column_space(const Z5Matrix& m) {
  Z5Matrix r = m;
  const auto piv = row_reduce(r);
  Z5Matrix out(m.rows(), piv.size());
  for (std::size_t j = 0; j < piv.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, piv[j]);
  return out;
}

Z5Matrix null_space(const Z5Matrix& m) {
  Z5Matrix r = m;
  const auto piv = row_reduce(r);
  std::vector<std::uint8_t> is_pivot(m.cols(), 0);
  for (auto p : piv) is_pivot[p] = 1;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Z5Matrix out(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    out(free[k], k) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) out(piv[i], k) = -r(i, free[k]);
  }
  return out;
}

Z5Matrix solve_full_column_rank(const Z5Matrix& a, const Z5Matrix& b) {
  if (a.rows() != b.rows()) throw InternalError("solve dimension mismatch");
  Z5Matrix aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  const auto piv = row_reduce(aug);
  if (piv.size() < a.cols() || (piv.size() > a.cols()) || (!piv.empty() && piv.back() >= a.cols())) {
    throw InternalError("system has no unique solution");
  }
  Z5Matrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = aug(i, a.cols() + j);
  return x;
}

Z5Matrix inverse(const Z5Matrix& m) {
  if (!m.square()) throw InternalError("inverse of a non-square matrix");
  return solve_full_column_rank(m, Z5Matrix::identity(m.rows()));
}

Z5Matrix block_diagonal(const Z5Matrix& a, const Z5Matrix& b) {
  Z5Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

// ------------------------------------------------------------- polynomials

Z5Poly::Z5Poly(std::vector<Z5> coeffs) : c_(std::move(coeffs)) { trim(); }

Z5Poly::Z5Poly(std::initializer_list<int> coeffs) {
  for (int v : coeffs) c_.emplace_back(v);
  trim();
}

void Z5Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Z5Poly Z5Poly::constant(Z5 c) { return Z5Poly(std::vector<Z5>{c}); }

Z5Poly Z5Poly::x_power(std::size_t k) {
  std::vector<Z5> c(k + 1);
  c[k] = 1;
  return Z5Poly(std::move(c));
}

Z5Poly Z5Poly::monic() const {
  if (is_zero()) return *this;
  return leading().inverse() * *this;
}

Z5Poly operator+(const Z5Poly& a, const Z5Poly& b) {
  std::vector<Z5> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return Z5Poly(std::move(c));
}

Z5Poly operator-(const Z5Poly& a, const Z5Poly& b) {
  std::vector<Z5> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return Z5Poly(std::move(c));
}

Z5Poly operator*(const Z5Poly& a, const Z5Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<int> acc(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i].value() * b.c_[j].value();
  std::vector<Z5> c(acc.begin(), acc.end());
  return Z5Poly(std::move(c));
}

Z5Poly operator*(Z5 s, const Z5Poly& a) {
  std::vector<Z5> c = a.c_;
  for (auto& v : c) v *= s;
  return Z5Poly(std::move(c));
}

void Z5Poly::divmod(const Z5Poly& a, const Z5Poly& b, Z5Poly& q, Z5Poly& r) {
  if (b.is_zero()) throw InternalError("polynomial division by zero");
  std::vector<Z5> rem = a.c_;
  const int db = b.degree();
  std::vector<Z5> quo(std::max(0, a.degree() - db + 1));
  const Z5 inv = b.leading().inverse();
  for (int k = a.degree(); k >= db; --k) {
    const Z5 f = rem[static_cast<std::size_t>(k)] * inv;
    if (f.is_zero()) continue;
    quo[static_cast<std::size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
  }
  q = Z5Poly(std::move(quo));
  r = Z5Poly(std::move(rem));
}

Z5 Z5Poly::evaluate(Z5 x) const {
  Z5 acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string Z5Poly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const int c = c_[static_cast<std::size_t>(k)].lifted();
    if (c == 0) continue;
    const int mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || k == 0) out += std::to_string(mag);
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

Z5Poly Z5Poly::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw DataError("empty polynomial string");
  std::vector<int> acc;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    int coef = 1;
    bool had_digits = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coef = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) coef = coef * 10 + (s[i++] - '0');
      had_digits = true;
    }
    std::size_t power = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        power = 0;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) throw DataError("bad exponent in '" + text + "'");
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) power = power * 10 + static_cast<std::size_t>(s[i++] - '0');
      }
    } else if (!had_digits) {
      throw DataError("cannot parse polynomial '" + text + "'");
    }
    if (acc.size() <= power) acc.resize(power + 1, 0);
    acc[power] += sign * coef;
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw DataError("cannot parse polynomial '" + text + "'");
  }
  std::vector<Z5> c(acc.begin(), acc.end());
  return Z5Poly(std::move(c));
}

Z5Poly gcd(Z5Poly a, Z5Poly b) {
  while (!b.is_zero()) {
    Z5Poly q, r;
    Z5Poly::divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// --------------------------------------------------------- normal forms

std::vector<Z5Poly> invariant_factors(const Z5Matrix& a) {
  if (!a.square()) throw InternalError("invariant factors of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<std::vector<Z5Poly>> m(n, std::vector<Z5Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? Z5Poly{0, 1} : Z5Poly{}) - Z5Poly::constant(a(i, j));

  std::vector<Z5Poly> diag;
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t bi = n, bj = n;
      int best = -1;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (!m[i][j].is_zero() && (best < 0 || m[i][j].degree() < best)) {
            best = m[i][j].degree();
            bi = i;
            bj = j;
          }
      if (best < 0) throw InternalError("characteristic matrix is singular");
      std::swap(m[t], m[bi]);
      for (std::size_t i = 0; i < n; ++i) std::swap(m[i][t], m[i][bj]);

      bool clean = true;
      const Z5Poly pivot = m[t][t];
      for (std::size_t i = t + 1; i < n; ++i) {
        if (m[i][t].is_zero()) continue;
        Z5Poly q, r;
        Z5Poly::divmod(m[i][t], pivot, q, r);
        for (std::size_t j = t; j < n; ++j) m[i][j] = m[i][j] - q * m[t][j];
        if (!r.is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m[t][j].is_zero()) continue;
        Z5Poly q, r;
        Z5Poly::divmod(m[t][j], pivot, q, r);
        for (std::size_t i = t; i < n; ++i) m[i][j] = m[i][j] - q * m[i][t];
        if (!r.is_zero()) clean = false;
      }
      if (!clean) continue;

      bool divides_rest = true;
      for (std::size_t i = t + 1; i < n && divides_rest; ++i)
        for (std::size_t j = t + 1; j < n; ++j) {
          Z5Poly q, r;
          Z5Poly::divmod(m[i][j], pivot, q, r);
          if (!r.is_zero()) {
            for (std::size_t k = t; k < n; ++k) m[t][k] = m[t][k] + m[i][k];
            divides_rest = false;
            break;
          }
        }
      if (divides_rest) break;
    }
    diag.push_back(m[t][t].monic());
  }
  std::vector<Z5Poly> out;
  for (auto& d : diag)
    if (d.degree() > 0) out.push_back(std::move(d));
  std::stable_sort(out.begin(), out.end(), [](const Z5Poly& x, const Z5Poly& y) { return x.degree() < y.degree(); });
  return out;
}

Z5Poly characteristic_polynomial(const Z5Matrix& a0) {
  if (!a0.square()) throw InternalError("characteristic polynomial of a non-square matrix");
  Z5Matrix h = a0;
  const std::size_t n = h.rows();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t p = j + 1;
    while (p < n && h(p, j).is_zero()) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h(p, c), h(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, p), h(r, j + 1));
    }
    const Z5 inv = h(j + 1, j).inverse();
    for (std::size_t r = j + 2; r < n; ++r) {
      const Z5 f = h(r, j) * inv;
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) h(r, c) -= f * h(j + 1, c);
      for (std::size_t rr = 0; rr < n; ++rr) h(rr, j + 1) += f * h(rr, r);
    }
  }
  // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{m=i+1..k} h_{m,m-1}) p_{i-1}
  std::vector<Z5Poly> p(n + 1);
  p[0] = Z5Poly::constant(1);
  const Z5Poly x{0, 1};
  for (std::size_t k = 1; k <= n; ++k) {
    p[k] = (x - Z5Poly::constant(h(k - 1, k - 1))) * p[k - 1];
    Z5 prod = 1;
    for (std::size_t i = k - 1; i >= 1; --i) {
      prod *= h(i, i - 1);
      if (prod.is_zero()) break;
      p[k] = p[k] - (prod * h(i - 1, k - 1)) * p[i - 1];
    }
  }
  return p[n];
}

}  // namespace conleygp
