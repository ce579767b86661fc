#include "gridsec/modarith.hpp"

#include <algorithm>

#include "gridsec/errors.hpp"

namespace gridsec {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

void check_distinct(std::span<const std::uint64_t> xs) {
  std::vector<std::uint64_t> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw MalformedInput("interpolation points must have distinct x");
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (std::uint64_t{1} << 63)) throw InvalidParameter("field modulus must be below 2^63");
  if (!is_prime(p)) throw InvalidParameter("field modulus must be prime");
}

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exp) const { return powmod(base, exp, p_); }

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  a %= p_;
  if (a == 0) throw InvalidParameter("zero has no inverse");
  return powmod(a, p_ - 2, p_);
}

namespace poly {

std::uint64_t evaluate(const PrimeField& f, std::span<const std::uint64_t> coeffs, std::uint64_t x) {
  std::uint64_t acc = 0;
  x = f.reduce(x);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = f.add(f.mul(acc, x), f.reduce(*it));
  return acc;
}

std::vector<std::uint64_t> from_roots(const PrimeField& f, std::span<const std::uint64_t> roots) {
  std::vector<std::uint64_t> c{1};
  for (std::uint64_t r : roots) {
    // c(x) * (x - r)
    std::vector<std::uint64_t> next(c.size() + 1, 0);
    const std::uint64_t neg_r = f.neg(f.reduce(r));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] = f.add(next[i + 1], c[i]);
      next[i] = f.add(next[i], f.mul(c[i], neg_r));
    }
    c = std::move(next);
  }
  return c;
}

std::uint64_t interpolate_at_zero(const PrimeField& f, std::span<const std::uint64_t> xs,
                                  std::span<const std::uint64_t> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw MalformedInput("interpolation needs matching, non-empty points");
  check_distinct(xs);
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    // l_j(0) = prod_{m != j} x_m / (x_m - x_j)
    std::uint64_t num = 1, den = 1;
    for (std::size_t m = 0; m < xs.size(); ++m) {
      if (m == j) continue;
      num = f.mul(num, f.reduce(xs[m]));
      den = f.mul(den, f.sub(f.reduce(xs[m]), f.reduce(xs[j])));
    }
    acc = f.add(acc, f.mul(f.reduce(ys[j]), f.mul(num, f.inv(den))));
  }
  return acc;
}

std::vector<std::uint64_t> interpolate(const PrimeField& f, std::span<const std::uint64_t> xs,
                                       std::span<const std::uint64_t> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw MalformedInput("interpolation needs matching, non-empty points");
  check_distinct(xs);
  const std::size_t n = xs.size();

  // Master polynomial M(x) = prod (x - x_m); each basis numerator is M / (x - x_j).
  std::vector<std::uint64_t> roots(xs.begin(), xs.end());
  const auto master = from_roots(f, roots);

  std::vector<std::uint64_t> out(n, 0);
  std::vector<std::uint64_t> q(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t xj = f.reduce(xs[j]);
    // Synthetic division of M by (x - xj).
    std::uint64_t carry = 0;
    for (std::size_t k = n; k-- > 0;) {
      carry = f.add(master[k + 1], f.mul(carry, xj));
      q[k] = carry;
    }
    const std::uint64_t denom = poly::evaluate(f, q, xj);
    const std::uint64_t scale = f.mul(f.reduce(ys[j]), f.inv(denom));
    for (std::size_t k = 0; k < n; ++k) out[k] = f.add(out[k], f.mul(q[k], scale));
  }
  return out;
}

}  // namespace poly
}  // namespace gridsec
