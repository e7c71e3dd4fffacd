#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "epflow/errors.hpp"
#include "epflow/rational.hpp"

// Complete exponential Bell polynomials and the manipulations built on them:
// the binomial recurrence, the scaling identity, the alternating sign flip,
// a set-partition oracle for tests, the exponential chain rule and its
// inverse, and the inequality-chain checker for sign-constrained sequences.
//
// Everything here is a pure function of its arguments. Sequences follow the
// classical 1-based convention: element k of a sequence X_1..X_n is stored at
// index k-1.

namespace epflow::bell {

// Binomial coefficients from Pascal's triangle in big integers. Factorials
// overflow 64-bit integers by n = 21, so no fixed-width shortcut is taken.
const bigint& binomial(int n, int k);

bigint factorial_exact(int n);

inline constexpr int kPartitionOracleMaxN = 12;

// B_0..B_{n_max} of X_1..X_n via the recurrence
//   B_{n+1} = sum_{i=0}^{n} C(n,i) B_{n-i} X_{i+1}.
// Exact when T is rational.
template <class T>
std::vector<T> bell_complete_all(std::span<const T> seq, int n_max) {
  if (n_max < 0) throw invalid_input("bell_complete_all: n_max must be nonnegative");
  if (static_cast<std::size_t>(n_max) > seq.size()) {
    throw invalid_input("bell_complete_all: n_max " + std::to_string(n_max) +
                        " exceeds sequence length " + std::to_string(seq.size()));
  }
  std::vector<T> b(static_cast<std::size_t>(n_max) + 1);
  b[0] = T(1);
  for (int n = 0; n < n_max; ++n) {
    T acc(0);
    for (int i = 0; i <= n; ++i) {
      acc += scalar_from_bigint<T>(binomial(n, i)) * b[static_cast<std::size_t>(n - i)] *
             seq[static_cast<std::size_t>(i)];
    }
    b[static_cast<std::size_t>(n) + 1] = acc;
  }
  return b;
}

template <class T>
T bell_complete(std::span<const T> seq, int n) {
  return bell_complete_all<T>(seq, n).back();
}

namespace detail {

// Sums prod_{blocks} X_{|block|} over all set partitions of {1..n}. Elements
// are placed one at a time into an existing block or a fresh one; only block
// sizes matter for the product.
template <class T>
void partition_sum(std::span<const T> x, int n, int next, std::vector<int>& block_sizes, T& total) {
  if (next == n) {
    T term(1);
    for (int s : block_sizes) term *= x[static_cast<std::size_t>(s) - 1];
    total += term;
    return;
  }
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    ++block_sizes[j];
    partition_sum(x, n, next + 1, block_sizes, total);
    --block_sizes[j];
  }
  block_sizes.push_back(1);
  partition_sum(x, n, next + 1, block_sizes, total);
  block_sizes.pop_back();
}

}  // namespace detail

// Independent evaluation of B_n by direct enumeration of set partitions.
// Exponential cost; intended as a test oracle only, hence the hard guard.
template <class T>
T bell_partition_oracle(std::span<const T> seq, int n) {
  if (n < 0) throw invalid_input("bell_partition_oracle: n must be nonnegative");
  if (static_cast<std::size_t>(n) > seq.size()) {
    throw invalid_input("bell_partition_oracle: n exceeds sequence length");
  }
  if (n > kPartitionOracleMaxN) {
    throw invalid_input("bell_partition_oracle: refusing n = " + std::to_string(n) +
                        " > " + std::to_string(kPartitionOracleMaxN) +
                        " (enumeration oracle is for tests only)");
  }
  if (n == 0) return T(1);
  T total(0);
  std::vector<int> block_sizes{1};
  detail::partition_sum(seq, n, 1, block_sizes, total);
  return total;
}

// (X_1, X_2, ..., X_n) -> (b X_1, b^2 X_2, ..., b^n X_n), the argument
// rescaling under which B_n picks up a factor b^n.
template <class T>
std::vector<T> bell_scale(std::span<const T> seq, const T& beta) {
  std::vector<T> out(seq.size());
  T p(1);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    p *= beta;
    out[i] = p * seq[i];
  }
  return out;
}

// Y_k = (-1)^k * derivs_k. Applied to (ydot, ydot', ydot'', ...) this is the
// beta = -1 specialization of bell_scale that turns the alternating-sign
// derivative conditions into one-sided ones.
template <class T>
std::vector<T> sign_flip(std::span<const T> derivs) {
  std::vector<T> out(derivs.size());
  for (std::size_t i = 0; i < derivs.size(); ++i) {
    out[i] = (i % 2 == 0) ? T(-derivs[i]) : derivs[i];
  }
  return out;
}

// d^m/dt^m e^{y(t)} = e^{y} B_m(y', y'', ...). `derivs` holds the first
// derivative of y in slot 1 and so on; m = 0 returns e^{y}.
double faa_di_bruno_exp(double y_value, std::span<const double> derivs, int m);

// Inverse of the exponential chain rule: given p, p', ..., p^{(n)} with p > 0,
// recovers (log p)', ..., (log p)^{(n)} from
//   f^{(k)} = [p^{(k)} - sum_{j=1}^{k-1} C(k-1,j) p^{(j)} f^{(k-j)}] / p.
// Result index i holds (log p)^{(i+1)}.
template <class T>
std::vector<T> log_derivatives_from_function_derivatives(std::span<const T> p_derivs, int n) {
  if (p_derivs.empty() || !(p_derivs[0] > T(0))) {
    throw invalid_input("log_derivatives: p must be positive at the evaluation point");
  }
  if (n < 0 || static_cast<std::size_t>(n) + 1 > p_derivs.size()) {
    throw invalid_input("log_derivatives: order exceeds supplied derivatives");
  }
  std::vector<T> f(static_cast<std::size_t>(n) + 1);  // f[k] = (log p)^{(k)}, f[0] unused
  for (int k = 1; k <= n; ++k) {
    T acc = p_derivs[static_cast<std::size_t>(k)];
    for (int j = 1; j <= k - 1; ++j) {
      acc -= scalar_from_bigint<T>(binomial(k - 1, j)) * p_derivs[static_cast<std::size_t>(j)] *
             f[static_cast<std::size_t>(k - j)];
    }
    f[static_cast<std::size_t>(k)] = acc / p_derivs[0];
  }
  return std::vector<T>(f.begin() + 1, f.end());
}

// Outcome of checking, for n = 1..order,
//   premise:    B_n(Y_1, ..., Y_n) <= 0
//   conclusion: Y_n <= -(n-1)! (-Y_1)^n.
// The inequality chain asserts premise-for-all implies conclusion-for-all;
// `implication_holds` false on exact input falsifies either the chain or the
// implementation and is treated as a hard failure by callers.
template <class T>
struct Lemma1Report {
  int order = 0;
  std::vector<unsigned char> premise_ok;
  std::vector<unsigned char> conclusion_ok;
  std::vector<T> premise_margin;     // -B_n; nonnegative when the premise holds
  std::vector<T> conclusion_margin;  // -(n-1)!(-Y_1)^n - Y_n; nonnegative when the conclusion holds
  bool premises_all_hold = false;
  bool conclusions_all_hold = false;
  bool implication_holds = false;
};

inline constexpr double kLemma1FloatTolerance = 1e-9;

// `tol` absorbs roundoff only: pass 0 for exact input, a small absolute
// slack for floating point.
template <class T>
Lemma1Report<T> lemma1_check(std::span<const T> y, int order, const T& tol) {
  if (order < 0 || static_cast<std::size_t>(order) > y.size()) {
    throw invalid_input("lemma1_check: order exceeds sequence length");
  }
  Lemma1Report<T> rep;
  rep.order = order;
  rep.premise_ok.resize(static_cast<std::size_t>(order));
  rep.conclusion_ok.resize(static_cast<std::size_t>(order));
  rep.premise_margin.resize(static_cast<std::size_t>(order));
  rep.conclusion_margin.resize(static_cast<std::size_t>(order));

  std::vector<T> b = bell_complete_all<T>(y, order);
  rep.premises_all_hold = true;
  rep.conclusions_all_hold = true;
  T neg_y1 = order > 0 ? T(-y[0]) : T(0);
  T neg_y1_pow(1);
  for (int n = 1; n <= order; ++n) {
    const std::size_t i = static_cast<std::size_t>(n) - 1;
    rep.premise_margin[i] = -b[static_cast<std::size_t>(n)];
    rep.premise_ok[i] = rep.premise_margin[i] >= -tol;
    if (!rep.premise_ok[i]) rep.premises_all_hold = false;

    neg_y1_pow *= neg_y1;  // (-Y_1)^n
    T bound = -scalar_from_bigint<T>(factorial_exact(n - 1)) * neg_y1_pow;
    rep.conclusion_margin[i] = bound - y[i];
    rep.conclusion_ok[i] = rep.conclusion_margin[i] >= -tol;
    if (!rep.conclusion_ok[i]) rep.conclusions_all_hold = false;
  }
  rep.implication_holds = !rep.premises_all_hold || rep.conclusions_all_hold;
  return rep;
}

inline Lemma1Report<rational> lemma1_check_exact(std::span<const rational> y, int order) {
  return lemma1_check<rational>(y, order, rational(0));
}

}  // namespace epflow::bell
