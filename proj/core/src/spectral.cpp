#include "tdrk/spectral.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "tdrk/errors.hpp"

namespace tdrk {

namespace {

using Key = std::tuple<std::size_t, Format, OperatorKind, Implementation>;

struct OperatorCache {
  std::mutex mutex;
  std::map<Key, std::shared_ptr<const SpectralOperator>> entries;
};

OperatorCache& cache() {
  static OperatorCache instance;
  return instance;
}

void check_size(std::size_t n) {
  if (n < 4) throw ConfigError("spectral grid needs at least 4 points, got " + std::to_string(n));
}

// First row of the circulant D1 in EXT: v[m] = D_{j, j-m}.
std::vector<Real> d1_offsets(std::size_t n) {
  std::vector<Real> v(n, Real(0.0));
  const Real half_pi = kPi * Real(0.5);
  const bool even = n % 2 == 0;
  for (std::size_t m = 1; m <= n / 2; ++m) {
    const Real arg = Real(static_cast<double>(m)) / Real(static_cast<double>(n));
    DoubleDouble s, c;
    sincospi(arg, s, c);
    Real value = even ? c / s : Real(1.0) / s;
    value = half_pi * value;
    if (m % 2 == 1) value = -value;
    if (even && 2 * m == n) value = Real(0.0);
    v[m] = value;
    v[n - m] = -value;
  }
  return v;
}

std::vector<Real> d1_ext_entries(std::size_t n) {
  const auto v = d1_offsets(n);
  std::vector<Real> entries(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) entries[j * n + k] = v[(j + n - k) % n];
  }
  return entries;
}

std::vector<Real> square_in(const std::vector<Real>& d, std::size_t n, Format f) {
  std::vector<Real> out(n * n);
  dispatch(f, [&](auto tag) {
    using A = Arith<decltype(tag)::value>;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Real acc(0.0);
        for (std::size_t l = 0; l < n; ++l) acc = A::add(acc, A::mul(d[j * n + l], d[l * n + k]));
        out[j * n + k] = acc;
      }
    }
  });
  return out;
}

std::vector<Real> rounded(std::vector<Real> entries, Format f) {
  for (auto& e : entries) e = round_value(e, f);
  return entries;
}

std::shared_ptr<const SpectralOperator> build(std::size_t n, Format f, OperatorKind kind,
                                              Implementation impl) {
  if (kind == OperatorKind::D1) {
    return std::make_shared<SpectralOperator>(n, f, kind, impl, rounded(d1_ext_entries(n), f));
  }
  if (impl == Implementation::Impl1) {
    const auto d1 = fourier_d1(n, f, impl);
    return std::make_shared<SpectralOperator>(n, f, kind, impl, square_in(d1->entries(), n, f));
  }
  const auto d1 = fourier_d1(n, Format::EXT, impl);
  return std::make_shared<SpectralOperator>(n, f, kind, impl,
                                            rounded(square_in(d1->entries(), n, Format::EXT), f));
}

std::shared_ptr<const SpectralOperator> lookup(std::size_t n, Format f, OperatorKind kind,
                                               Implementation impl) {
  check_size(n);
  // D1 does not depend on the implementation; share one instance.
  if (kind == OperatorKind::D1) impl = Implementation::Impl2;
  const Key key{n, f, kind, impl};
  auto& c = cache();
  {
    std::lock_guard lock(c.mutex);
    if (auto it = c.entries.find(key); it != c.entries.end()) return it->second;
  }
  // Built outside the lock: construction may recurse into lookup for D1.
  auto op = build(n, f, kind, impl);
  std::lock_guard lock(c.mutex);
  auto [it, inserted] = c.entries.emplace(key, std::move(op));
  return it->second;
}

}  // namespace

Implementation parse_implementation(std::string_view text) {
  if (text == "1" || text == "impl1" || text == "IMPL1") return Implementation::Impl1;
  if (text == "2" || text == "impl2" || text == "IMPL2") return Implementation::Impl2;
  throw ConfigError("unknown implementation '" + std::string(text) + "' (expected 1 or 2)");
}

int implementation_number(Implementation impl) { return impl == Implementation::Impl1 ? 1 : 2; }

SpectralOperator::SpectralOperator(std::size_t n, Format format, OperatorKind kind,
                                   Implementation impl, std::vector<Real> entries)
    : n_(n), format_(format), kind_(kind), impl_(impl), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw ConfigError("operator entry count does not match n*n");
}

SimVector SpectralOperator::apply(const SimVector& v) const {
  if (v.size() != n_) {
    throw ConfigError("operator of size " + std::to_string(n_) + " applied to vector of length " +
                      std::to_string(v.size()));
  }
  const SimVector x = cast_vector(v, format_);
  SimVector out(n_, format_);
  dispatch(format_, [&](auto tag) {
    using A = Arith<decltype(tag)::value>;
    const auto in = x.values();
    for (std::size_t j = 0; j < n_; ++j) {
      const Real* row = entries_.data() + j * n_;
      Real acc(0.0);
      for (std::size_t k = 0; k < n_; ++k) acc = A::add(acc, A::mul(row[k], in[k]));
      out.raw(j) = acc;
    }
  });
  return out;
}

std::vector<Real> grid_points(std::size_t n) {
  std::vector<Real> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = Real(-1.0) + Real(static_cast<double>(2 * j)) / Real(static_cast<double>(n));
  }
  return x;
}

std::shared_ptr<const SpectralOperator> fourier_d1(std::size_t n, Format f, Implementation impl) {
  return lookup(n, f, OperatorKind::D1, impl);
}

std::shared_ptr<const SpectralOperator> fourier_d2(std::size_t n, Format f, Implementation impl) {
  return lookup(n, f, OperatorKind::D2, impl);
}

void clear_operator_cache() {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  c.entries.clear();
}

}  // namespace tdrk
