#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace conleygp {

/// Element of the prime field Z/5, kept in canonical form {0..4}.
class Z5 {
 public:
  static constexpr int kModulus = 5;

  constexpr Z5() = default;
  constexpr Z5(int v) : v_(static_cast<std::uint8_t>(((v % kModulus) + kModulus) % kModulus)) {}  // NOLINT

  constexpr int value() const { return v_; }
  /// Representative in {-2..2}.
  constexpr int lifted() const { return v_ > 2 ? v_ - kModulus : v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  Z5 inverse() const;

  friend constexpr Z5 operator+(Z5 a, Z5 b) { return Z5(a.v_ + b.v_); }
  friend constexpr Z5 operator-(Z5 a, Z5 b) { return Z5(a.v_ - b.v_ + kModulus); }
  friend constexpr Z5 operator-(Z5 a) { return Z5(kModulus - a.v_); }
  friend constexpr Z5 operator*(Z5 a, Z5 b) { return Z5(a.v_ * b.v_); }
  friend Z5 operator/(Z5 a, Z5 b) { return a * b.inverse(); }
  Z5& operator+=(Z5 o) { return *this = *this + o; }
  Z5& operator-=(Z5 o) { return *this = *this - o; }
  Z5& operator*=(Z5 o) { return *this = *this * o; }

  friend constexpr bool operator==(Z5, Z5) = default;

 private:
  std::uint8_t v_ = 0;
};

/// Dense row-major matrix over Z5.
class Z5Matrix {
 public:
  Z5Matrix() = default;
  Z5Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Z5Matrix(std::initializer_list<std::initializer_list<int>> rows);

  static Z5Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Z5& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Z5 operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Z5Matrix transpose() const;

  friend Z5Matrix operator*(const Z5Matrix& a, const Z5Matrix& b);
  friend Z5Matrix operator+(const Z5Matrix& a, const Z5Matrix& b);
  friend bool operator==(const Z5Matrix&, const Z5Matrix&) = default;

  /// Rows as lifted integers {0..4}, for serialization.
  std::vector<std::vector<int>> to_rows() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Z5> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(Z5Matrix& m);
std::size_t rank(Z5Matrix m);
/// Columns form a basis of the column space of m (a subset of m's columns).
Z5Matrix column_space(const Z5Matrix& m);
/// Columns form a basis of {x : m x = 0}.
Z5Matrix null_space(const Z5Matrix& m);
/// Solves a x = b for x when b lies in the column space of a (a of full column rank).
Z5Matrix solve_full_column_rank(const Z5Matrix& a, const Z5Matrix& b);
/// Inverse of a square invertible matrix; throws InternalError otherwise.
Z5Matrix inverse(const Z5Matrix& m);
Z5Matrix block_diagonal(const Z5Matrix& a, const Z5Matrix& b);

/// Polynomial over Z5 with coefficients stored lowest degree first and no
/// trailing zeros; the zero polynomial has no coefficients.
class Z5Poly {
 public:
  Z5Poly() = default;
  explicit Z5Poly(std::vector<Z5> coeffs);
  Z5Poly(std::initializer_list<int> coeffs);

  static Z5Poly constant(Z5 c);
  static Z5Poly x_power(std::size_t k);

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Z5 coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Z5(0); }
  Z5 leading() const { return c_.empty() ? Z5(0) : c_.back(); }
  const std::vector<Z5>& coeffs() const { return c_; }

  Z5Poly monic() const;

  friend Z5Poly operator+(const Z5Poly& a, const Z5Poly& b);
  friend Z5Poly operator-(const Z5Poly& a, const Z5Poly& b);
  friend Z5Poly operator*(const Z5Poly& a, const Z5Poly& b);
  friend Z5Poly operator*(Z5 s, const Z5Poly& a);
  friend bool operator==(const Z5Poly&, const Z5Poly&) = default;

  /// Long division; throws on a zero divisor.
  static void divmod(const Z5Poly& a, const Z5Poly& b, Z5Poly& q, Z5Poly& r);
  Z5 evaluate(Z5 x) const;

  /// "x^2 - 1", "x + 2", "1"; coefficients printed in {-2..2}. The zero
  /// polynomial prints as "0".
  std::string to_string() const;
  /// Inverse of to_string for the same grammar.
  static Z5Poly parse(const std::string& text);

 private:
  void trim();
  std::vector<Z5> c_;
};

Z5Poly gcd(Z5Poly a, Z5Poly b);

/// Monic invariant factors of x I - a, excluding the units, ascending by
/// divisibility (each divides the next). Their product is the characteristic
/// polynomial of a.
std::vector<Z5Poly> invariant_factors(const Z5Matrix& a);

/// Characteristic polynomial det(x I - a) via Hessenberg reduction.
Z5Poly characteristic_polynomial(const Z5Matrix& a);

}  // namespace conleygp
