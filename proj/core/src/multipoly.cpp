#include "hagedorn/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hagedorn/error.hpp"

namespace hagedorn {

int order(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double factorial(const MultiIndex& alpha) {
  double f = 1.0;
  for (int a : alpha) f *= std::tgamma(a + 1.0);
  return f;
}

std::string to_string(const MultiIndex& alpha) {
  std::string s;
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(alpha[i]);
  }
  return s;
}

MultiIndex parse_multi_index(const std::string& text) {
  MultiIndex out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    size_t pos = 0;
    int v = -1;
    try {
      v = std::stoi(part, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != part.size() || v < 0) {
      throw Error(ErrorCode::ConfigError, "bad multi-index '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, "empty multi-index");
  return out;
}

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int oa = order(a), ob = order(b);
  if (oa != ob) return oa < ob;
  return a < b;
}

std::vector<MultiIndex> indices_up_to(int n, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex k(n, 0);
  // odometer over the box [0, max_order]^n, filtered by |k|
  while (true) {
    if (order(k) <= max_order) out.push_back(k);
    int j = n - 1;
    while (j >= 0 && k[j] == max_order) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  std::sort(out.begin(), out.end(), GradedLess{});
  return out;
}

MultiPoly::MultiPoly(int n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "polynomial needs at least one variable");
}

MultiPoly MultiPoly::constant(int n, Complex c) {
  MultiPoly p(n);
  p.add(MultiIndex(n, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(const MultiIndex& k, Complex c) {
  MultiPoly p(static_cast<int>(k.size()));
  p.add(k, c);
  return p;
}

MultiPoly MultiPoly::linear(const CVector& a) {
  const int n = static_cast<int>(a.size());
  MultiPoly p(n);
  for (int j = 0; j < n; ++j) {
    MultiIndex k(n, 0);
    k[j] = 1;
    p.add(k, a(j));
  }
  return p;
}

int MultiPoly::degree() const { return terms_.empty() ? -1 : order(terms_.rbegin()->first); }

Complex MultiPoly::coefficient(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

void MultiPoly::add(const MultiIndex& k, Complex c) {
  if (static_cast<int>(k.size()) != n_) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match variable count");
  }
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "polynomial variable counts differ");
  for (const auto& [k, c] : other.terms_) add(k, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "polynomial variable counts differ");
  for (const auto& [k, c] : other.terms_) add(k, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(Complex c) {
  if (c == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.second *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.n_ != b.n_) throw Error(ErrorCode::DimensionMismatch, "polynomial variable counts differ");
  MultiPoly out(a.n_);
  MultiIndex k(a.n_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      for (int j = 0; j < a.n_; ++j) k[j] = ka[j] + kb[j];
      out.add(k, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::times_variable(int j) const {
  MultiPoly out(n_);
  for (const auto& [k, c] : terms_) {
    MultiIndex kk = k;
    ++kk[j];
    out.terms_.emplace(std::move(kk), c);
  }
  return out;
}

MultiPoly MultiPoly::derivative(int j) const {
  MultiPoly out(n_);
  for (const auto& [k, c] : terms_) {
    if (k[j] == 0) continue;
    MultiIndex kk = k;
    --kk[j];
    out.add(kk, c * static_cast<double>(k[j]));
  }
  return out;
}

Complex MultiPoly::evaluate(const CVector& x) const {
  if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  Complex sum{};
  for (const auto& [k, c] : terms_) {
    Complex term = c;
    for (int j = 0; j < n_; ++j) {
      for (int e = 0; e < k[j]; ++e) term *= x(j);
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::substitute_linear(const CMatrix& a) const { return substitute_affine(a, CVector::Zero(n_)); }

MultiPoly MultiPoly::substitute_affine(const CMatrix& a, const CVector& c) const {
  if (a.rows() != n_ || a.cols() != n_ || c.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "substitution must be n x n with an n-vector offset");
  }
  std::vector<MultiPoly> rows;
  for (int j = 0; j < n_; ++j) rows.push_back(MultiPoly::linear(a.row(j).transpose()) + MultiPoly::constant(n_, c(j)));
  // powers of each substituted variable, cached by exponent
  std::vector<std::vector<MultiPoly>> powers(n_);
  auto power = [&](int j, int e) -> const MultiPoly& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(MultiPoly::constant(n_, 1.0));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * rows[j]);
    return cache[e];
  };
  MultiPoly out(n_);
  for (const auto& [k, c] : terms_) {
    MultiPoly term = MultiPoly::constant(n_, c);
    for (int j = 0; j < n_; ++j) {
      if (k[j] > 0) term = term * power(j, k[j]);
    }
    out += term;
  }
  return out;
}

double MultiPoly::distance(const MultiPoly& other) const {
  const MultiPoly d = *this - other;
  double m = 0.0;
  for (const auto& term : d.terms_) m = std::max(m, std::abs(term.second));
  return m;
}

namespace {

void check_symmetric(const CMatrix& m, size_t n, double tol) {
  if (m.rows() != static_cast<Eigen::Index>(n) || m.cols() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "recursion matrix must be n x n");
  }
  const double scale = tolerance_scale(max_abs(m));
  if (max_abs(CMatrix(m - m.transpose())) > tol * scale) {
    throw Error(ErrorCode::AsymmetricM, "recursion matrix is not symmetric");
  }
}

// Mixed-radix enumeration of the box {b : 0 <= b <= alpha}.
struct Box {
  explicit Box(const MultiIndex& alpha) : alpha(alpha), stride(alpha.size()) {
    size = 1;
    for (size_t j = alpha.size(); j-- > 0;) {
      stride[j] = size;
      size *= alpha[j] + 1;
    }
  }
  MultiIndex unflatten(size_t flat) const {
    MultiIndex b(alpha.size());
    for (size_t j = 0; j < alpha.size(); ++j) {
      b[j] = static_cast<int>(flat / stride[j]);
      flat %= stride[j];
    }
    return b;
  }
  const MultiIndex& alpha;
  std::vector<size_t> stride;
  size_t size;
};

// Runs the recursion over the box in increasing flat order; every
// predecessor b - e_j, b - e_j - e_k has a smaller flat index.
template <class T, class Init, class TimesVar>
std::vector<T> box_recursion(const CMatrix& m, const MultiIndex& alpha, Init init, TimesVar times_var) {
  const Box box(alpha);
  const size_t n = alpha.size();
  std::vector<T> r;
  r.reserve(box.size);
  r.push_back(init());
  for (size_t flat = 1; flat < box.size; ++flat) {
    const MultiIndex b = box.unflatten(flat);
    size_t j = 0;
    while (b[j] == 0) ++j;
    MultiIndex prev = b;
    --prev[j];
    const size_t prev_flat = flat - box.stride[j];
    T next = times_var(r[prev_flat], static_cast<int>(j));
    for (size_t k = 0; k < n; ++k) {
      if (prev[k] == 0 || m(j, k) == Complex{}) continue;
      next -= r[prev_flat - box.stride[k]] * (m(j, k) * static_cast<double>(prev[k]));
    }
    r.push_back(std::move(next));
  }
  return r;
}

}  // namespace

MultiPoly poly_recursion(const CMatrix& m, const MultiIndex& alpha, double tol) {
  check_symmetric(m, alpha.size(), tol);
  for (int a : alpha) {
    if (a < 0) throw Error(ErrorCode::DimensionMismatch, "negative multi-index component");
  }
  const int n = static_cast<int>(alpha.size());
  auto r = box_recursion<MultiPoly>(
      m, alpha, [n] { return MultiPoly::constant(n, 1.0); },
      [](const MultiPoly& p, int j) { return p.times_variable(j); });
  return r.back();
}

std::vector<MultiPoly> poly_gradient(const MultiPoly& p, const MultiIndex& alpha) {
  if (static_cast<int>(alpha.size()) != p.n()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match variable count");
  }
  if (p.degree() != order(alpha) || p.coefficient(alpha) != Complex{1.0}) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial is not a recursion polynomial of this index");
  }
  std::vector<MultiPoly> grad;
  for (int j = 0; j < p.n(); ++j) grad.push_back(p.derivative(j));
  return grad;
}

CVector recursion_values(const CMatrix& m, const MultiIndex& alpha, const CMatrix& y) {
  if (y.rows() != static_cast<Eigen::Index>(alpha.size()) || m.rows() != y.rows() || m.cols() != y.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "recursion_values: inconsistent dimensions");
  }
  const Eigen::Index npts = y.cols();
  auto r = box_recursion<CVector>(
      m, alpha, [npts] { return CVector::Ones(npts).eval(); },
      [&y](const CVector& v, int j) { return CVector(v.cwiseProduct(y.row(j).transpose())); });
  return r.back();
}

}  // namespace hagedorn
