#include "toricdeg/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

#include "toricdeg/errors.hpp"

namespace toricdeg {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw NonRationalInput("not a rational number: '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw NonRationalInput("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), whole);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw NonRationalInput("not a rational number: '" + std::string(whole) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw NonRationalInput("zero denominator: '" + std::string(whole) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot_pos = text.find('.'); dot_pos != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot_pos);
    std::string_view frac_part = text.substr(dot_pos + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw NonRationalInput("not a rational number: '" + std::string(whole) + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational q(negative ? mpz_class(-num) : num, den);
    q.canonicalize();
    return q;
  }

  return Rational(parse_integer(text, whole));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(std::span<const std::int64_t> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(static_cast<long>(a[i])) * b[i];
  return s;
}

Rational determinant(std::vector<RationalVector> rows) {
  const std::size_t n = rows.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && rows[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(rows[pivot], rows[col]);
      det = -det;
    }
    det *= rows[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (rows[r][col] == 0) continue;
      Rational factor = rows[r][col] / rows[col][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= factor * rows[col][c];
    }
  }
  return det;
}

int rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int r = 0;
  for (std::size_t col = 0; col < cols && r < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      Rational factor = rows[i][col] / rows[r][col];
      for (std::size_t c = col; c < cols; ++c) rows[i][c] -= factor * rows[r][c];
    }
    ++r;
  }
  return r;
}

IntVector primitive_integer(std::span<const Rational> v) {
  mpz_class lcm = 1;
  for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  mpz_class g = 0;
  for (const auto& q : v) {
    mpz_class z = q.get_num() * (lcm / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    ints.push_back(z);
  }
  if (g == 0) throw std::invalid_argument("primitive_integer: zero vector");
  IntVector out;
  out.reserve(v.size());
  for (auto& z : ints) {
    z /= g;
    if (!z.fits_slong_p()) throw std::overflow_error("primitive_integer: entry exceeds 64 bits");
    out.push_back(z.get_si());
  }
  return out;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::int64_t floor_to_int(const Rational& q) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z.get_si();
}

std::int64_t ceil_to_int(const Rational& q) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z.get_si();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

}  // namespace toricdeg
