#include "rlab/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlab/env.hpp"

namespace rlab::feat {

void BoundsSpec::validate() const {
  if (lo.empty() || lo.size() != hi.size()) {
    throw std::invalid_argument("BoundsSpec: lo/hi size mismatch or empty");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) {
      throw std::invalid_argument("BoundsSpec: requires lo < hi per dimension");
    }
  }
}

BoundsSpec BoundsSpec::mountain_car() {
  return {{env::MountainCar::kMinPosition, env::MountainCar::kMinVelocity},
          {env::MountainCar::kMaxPosition, env::MountainCar::kMaxVelocity}};
}

BoundsSpec BoundsSpec::acrobot() {
  constexpr double pi = 3.14159265358979323846;
  return {{-pi, -pi, -env::Acrobot::kMaxAngularVel1, -env::Acrobot::kMaxAngularVel2},
          {pi, pi, env::Acrobot::kMaxAngularVel1, env::Acrobot::kMaxAngularVel2}};
}

namespace {

void check_obs(const BoundsSpec& bounds, std::span<const double> obs) {
  if (static_cast<int>(obs.size()) != bounds.dims()) {
    throw std::invalid_argument("encode: observation dimension mismatch");
  }
}

double unit_position(const BoundsSpec& bounds, int dim, double value) {
  return (value - bounds.lo[dim]) / (bounds.hi[dim] - bounds.lo[dim]);
}

}  // namespace

RawNormalizer::RawNormalizer(BoundsSpec bounds) : bounds_(std::move(bounds)) {
  bounds_.validate();
}

FeatureVector RawNormalizer::encode(std::span<const double> obs) {
  check_obs(bounds_, obs);
  FeatureVector out;
  out.length = bounds_.dims();
  out.sparse = false;
  out.values.resize(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double u = unit_position(bounds_, static_cast<int>(i), obs[i]);
    out.values[i] = std::clamp(2.0 * u - 1.0, -1.0, 1.0);
  }
  return out;
}

Discretizer::Discretizer(BoundsSpec bounds, int bins_per_dim)
    : bounds_(std::move(bounds)), bins_per_dim_(bins_per_dim) {
  bounds_.validate();
  if (bins_per_dim_ < 1) {
    throw std::invalid_argument("Discretizer: bins_per_dim must be >= 1");
  }
}

int Discretizer::bin_index(int dim, double value) const {
  const double u = unit_position(bounds_, dim, value);
  const int bin = static_cast<int>(std::floor(u * bins_per_dim_));
  return std::clamp(bin, 0, bins_per_dim_ - 1);
}

FeatureVector Discretizer::encode(std::span<const double> obs) {
  check_obs(bounds_, obs);
  FeatureVector out;
  out.length = length();
  out.sparse = true;
  out.active.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const int dim = static_cast<int>(i);
    out.active.push_back(dim * bins_per_dim_ + bin_index(dim, obs[i]));
  }
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ull;
  for (std::size_t i = 0; i < bytes; ++i) {
    hash ^= static_cast<std::uint64_t>(p[i]);
    hash *= 1099511628211ull;
  }
  return hash;
}

IndexTable::IndexTable(int capacity) : capacity_(capacity) {
  if (capacity_ < 1) {
    throw std::invalid_argument("IndexTable: capacity must be >= 1");
  }
}

int IndexTable::lookup(std::span<const std::int64_t> coords) {
  std::string key;
  key.resize(coords.size() * 8);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto u = static_cast<std::uint64_t>(coords[i]);
    for (int b = 0; b < 8; ++b) {
      key[i * 8 + b] = static_cast<char>((u >> (8 * b)) & 0xff);
    }
  }
  const auto it = map_.find(key);
  if (it != map_.end()) return it->second;
  if (size() < capacity_) {
    const int index = size();
    map_.emplace(std::move(key), index);
    return index;
  }
  overflowed_ = true;
  return static_cast<int>(fnv1a64(key.data(), key.size()) %
                          static_cast<std::uint64_t>(capacity_));
}

void TileCoderConfig::validate(int dims) const {
  if (num_tilings < 1 || tiles_per_dim < 1) {
    throw std::invalid_argument("TileCoderConfig: tilings and tiles must be >= 1");
  }
  if (capacity < num_tilings) {
    throw std::invalid_argument("TileCoderConfig: capacity below num_tilings");
  }
  double cells = static_cast<double>(num_tilings);
  for (int i = 0; i < dims; ++i) cells *= static_cast<double>(tiles_per_dim);
  (void)cells;
}

TileCoder::TileCoder(BoundsSpec bounds, TileCoderConfig config)
    : bounds_(std::move(bounds)), config_(config), table_(config.capacity) {
  bounds_.validate();
  config_.validate(bounds_.dims());
}

FeatureVector TileCoder::encode(std::span<const double> obs) {
  check_obs(bounds_, obs);
  const int dims = bounds_.dims();
  FeatureVector out;
  out.length = config_.capacity;
  out.sparse = true;
  out.active.reserve(config_.num_tilings);
  std::vector<std::int64_t> coords(static_cast<std::size_t>(dims) + 1);
  for (int t = 0; t < config_.num_tilings; ++t) {
    coords[0] = t;
    const double offset = static_cast<double>(t) / config_.num_tilings;
    for (int d = 0; d < dims; ++d) {
      const double scaled = unit_position(bounds_, d, obs[d]) * config_.tiles_per_dim;
      const auto cell = static_cast<std::int64_t>(std::floor(scaled + offset));
      coords[d + 1] = std::clamp<std::int64_t>(cell, 0, config_.tiles_per_dim - 1);
    }
    const int index = table_.lookup(coords);
    if (std::find(out.active.begin(), out.active.end(), index) == out.active.end()) {
      out.active.push_back(index);
    }
  }
  return out;
}

}  // namespace rlab::feat
