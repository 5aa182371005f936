#include "fbs/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fbs/errors.hpp"

namespace fbs {

namespace {

std::size_t checked_size(int n, int N) {
  std::size_t s = 1;
  for (int d = 0; d < n; ++d) {
    s *= static_cast<std::size_t>(N);
    if (s > (std::size_t{1} << 24))
      throw PreconditionError("grid too large: N^n exceeds 2^24 modes");
  }
  return s;
}

}  // namespace

SpectralGrid::SpectralGrid(int dim, int modes_per_dim, double box_length)
    : dim_(dim), modes_(modes_per_dim), length_(box_length),
      size_(checked_size(dim, modes_per_dim)) {
  ksq_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rem = idx;
    long long acc = 0;
    for (int d = dim_ - 1; d >= 0; --d) {
      int i = static_cast<int>(rem % static_cast<std::size_t>(modes_));
      rem /= static_cast<std::size_t>(modes_);
      int k = i < modes_ / 2 ? i : i - modes_;
      acc += static_cast<long long>(k) * k;
    }
    ksq_[idx] = static_cast<double>(acc);
  }
}

double SpectralGrid::xi_unit() const {
  return 2.0 * std::numbers::pi / length_;
}

double SpectralGrid::volume() const { return std::pow(length_, dim_); }

int SpectralGrid::wavenumber(std::size_t idx, int d) const {
  std::size_t stride = 1;
  for (int e = dim_ - 1; e > d; --e) stride *= static_cast<std::size_t>(modes_);
  int i = static_cast<int>((idx / stride) % static_cast<std::size_t>(modes_));
  return i < modes_ / 2 ? i : i - modes_;
}

std::array<int, kMaxDim> SpectralGrid::wavevector(std::size_t idx) const {
  std::array<int, kMaxDim> k{};
  std::size_t rem = idx;
  for (int d = dim_ - 1; d >= 0; --d) {
    int i = static_cast<int>(rem % static_cast<std::size_t>(modes_));
    rem /= static_cast<std::size_t>(modes_);
    k[static_cast<std::size_t>(d)] = i < modes_ / 2 ? i : i - modes_;
  }
  return k;
}

std::size_t SpectralGrid::index_of(const std::array<int, kMaxDim>& k) const {
  std::size_t idx = 0;
  for (int d = 0; d < dim_; ++d) {
    int i = k[static_cast<std::size_t>(d)] % modes_;
    if (i < 0) i += modes_;
    idx = idx * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(i);
  }
  return idx;
}

std::size_t SpectralGrid::mirror_index(std::size_t idx) const {
  std::size_t out = 0;
  std::size_t rem = idx;
  // reflect each component i -> (N - i) mod N
  std::array<int, kMaxDim> comps{};
  for (int d = dim_ - 1; d >= 0; --d) {
    comps[static_cast<std::size_t>(d)] =
        static_cast<int>(rem % static_cast<std::size_t>(modes_));
    rem /= static_cast<std::size_t>(modes_);
  }
  for (int d = 0; d < dim_; ++d) {
    int i = comps[static_cast<std::size_t>(d)];
    int m = i == 0 ? 0 : modes_ - i;
    out = out * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(m);
  }
  return out;
}

bool SpectralGrid::in_dealias_band(std::size_t idx) const {
  const int limit = dealias_limit();
  std::size_t rem = idx;
  for (int d = dim_ - 1; d >= 0; --d) {
    int i = static_cast<int>(rem % static_cast<std::size_t>(modes_));
    rem /= static_cast<std::size_t>(modes_);
    int k = i < modes_ / 2 ? i : i - modes_;
    if (k > limit || k < -limit) return false;
  }
  return true;
}

std::shared_ptr<const std::vector<double>> SpectralGrid::ksq_power(
    double e) const {
  auto it = pow_cache_.find(e);
  if (it != pow_cache_.end()) return it->second;
  auto w = std::make_shared<std::vector<double>>(size_);
  auto& v = *w;
  for (std::size_t idx = 0; idx < size_; ++idx)
    v[idx] = ksq_[idx] == 0.0 ? 0.0 : std::pow(ksq_[idx], e);
  pow_cache_.emplace(e, w);
  return w;
}

bool SpectralGrid::same_as(const SpectralGrid& other) const {
  return dim_ == other.dim_ && modes_ == other.modes_ &&
         length_ == other.length_;
}

GridPtr make_grid(int n, int N, double L) {
  if (n < 2)
    throw PreconditionError("make_grid: n must be >= 2 (got " +
                            std::to_string(n) + ")");
  if (N < 4 || N % 2 != 0)
    throw PreconditionError("make_grid: N must be even and >= 4 (got " +
                            std::to_string(N) + ")");
  if (!(L > 0.0)) throw PreconditionError("make_grid: L must be positive");
  if (n >= 4 && N > 12)
    throw PreconditionError("make_grid: n >= 4 is supported only at N <= 12");
  return std::make_shared<SpectralGrid>(n, N, L);
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b,
                       const char* where) {
  if (!a.same_as(b)) {
    std::ostringstream os;
    os << where << ": grid mismatch (" << a.dim() << "," << a.modes_per_dim()
       << "," << a.box_length() << ") vs (" << b.dim() << ","
       << b.modes_per_dim() << "," << b.box_length() << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace fbs
