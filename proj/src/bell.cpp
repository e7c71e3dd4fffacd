#include "epflow/bell.hpp"

#include <mutex>

namespace epflow::bell {

namespace {

// Pascal's triangle, grown on demand. Guarded by a mutex; rows are appended
// only, so returned references stay valid.
class PascalTriangle {
 public:
  const bigint& at(int n, int k) {
    std::scoped_lock lock(mu_);
    while (static_cast<int>(rows_.size()) <= n) {
      const std::size_t m = rows_.size();
      std::vector<bigint> row(m + 1);
      row.front() = 1;
      row.back() = 1;
      for (std::size_t j = 1; j < m; ++j) row[j] = rows_[m - 1][j - 1] + rows_[m - 1][j];
      rows_.push_back(std::move(row));
    }
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

 private:
  std::mutex mu_;
  std::vector<std::vector<bigint>> rows_ = {{bigint(1)}};
};

PascalTriangle& triangle() {
  static PascalTriangle t;
  return t;
}

const bigint& zero_bigint() {
  static const bigint z(0);
  return z;
}

}  // namespace

const bigint& binomial(int n, int k) {
  if (n < 0) throw invalid_input("binomial: negative order");
  if (k < 0 || k > n) return zero_bigint();
  return triangle().at(n, k);
}

bigint factorial_exact(int n) {
  if (n < 0) throw invalid_input("factorial: negative argument");
  bigint f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double faa_di_bruno_exp(double y_value, std::span<const double> derivs, int m) {
  if (m < 0) throw invalid_input("faa_di_bruno_exp: order must be nonnegative");
  if (static_cast<std::size_t>(m) > derivs.size()) {
    throw invalid_input("faa_di_bruno_exp: order exceeds supplied derivatives");
  }
  const std::vector<double> b = bell_complete_all<double>(derivs, m);
  return std::exp(y_value) * b[static_cast<std::size_t>(m)];
}

}  // namespace epflow::bell
