#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rlab::feat {

// Per-dimension closed input ranges.
struct BoundsSpec {
  std::vector<double> lo;
  std::vector<double> hi;

  int dims() const { return static_cast<int>(lo.size()); }
  void validate() const;

  static BoundsSpec mountain_car();
  static BoundsSpec acrobot();
};

// Network input. Dense inputs carry `length` reals in `values`. Sparse inputs
// are binary vectors given by the sorted-by-insertion unique indices in
// `active`; every listed entry has value 1.
struct FeatureVector {
  int length = 0;
  bool sparse = false;
  std::vector<double> values;
  std::vector<int> active;
};

class Featurizer {
 public:
  virtual ~Featurizer() = default;
  virtual int length() const = 0;
  virtual FeatureVector encode(std::span<const double> obs) = 0;
};

// Affine map of each dimension onto [-1, 1], clamped at the edges.
class RawNormalizer final : public Featurizer {
 public:
  explicit RawNormalizer(BoundsSpec bounds);
  int length() const override { return bounds_.dims(); }
  FeatureVector encode(std::span<const double> obs) override;

 private:
  BoundsSpec bounds_;
};

// Equal-width binning per dimension; emits the concatenation of one one-hot
// group per dimension. Values at the top edge fall in the last bin.
class Discretizer final : public Featurizer {
 public:
  Discretizer(BoundsSpec bounds, int bins_per_dim);
  int length() const override { return bounds_.dims() * bins_per_dim_; }
  int bins_per_dim() const { return bins_per_dim_; }
  // Bin of a single scalar in dimension `dim`.
  int bin_index(int dim, double value) const;
  FeatureVector encode(std::span<const double> obs) override;

 private:
  BoundsSpec bounds_;
  int bins_per_dim_;
};

std::uint64_t fnv1a64(const void* data, std::size_t bytes);

// Maps coordinate tuples to feature indices. The first `capacity` distinct
// tuples get consecutive indices in order of first appearance. Once the table
// is full, unseen tuples hash instead: the tuple is serialized as int64
// little-endian words, FNV-1a-64 hashed, and reduced mod capacity. The exact
// byte layout is pinned so independent implementations can reproduce indices:
//   for each coordinate c (int64): bytes c & 0xff, (c >> 8) & 0xff, ... (c >> 56) & 0xff
//   hash = fnv1a64(bytes), offset basis 14695981039346656037, prime 1099511628211
//   index = hash % capacity
class IndexTable {
 public:
  explicit IndexTable(int capacity);
  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(map_.size()); }
  bool overflowed() const { return overflowed_; }
  int lookup(std::span<const std::int64_t> coords);

 private:
  int capacity_;
  bool overflowed_ = false;
  std::unordered_map<std::string, int> map_;
};

struct TileCoderConfig {
  int num_tilings = 8;
  int tiles_per_dim = 4;
  int capacity = 128;

  void validate(int dims) const;
};

// Grid tile coding with uniformly offset tilings. Each dimension is scaled so
// its range covers tiles_per_dim tiles; tiling t shifts every scaled
// coordinate by t/num_tilings before flooring; cell coordinates are clamped
// to [0, tiles_per_dim - 1]. The tuple (t, c_1, ..., c_d) goes through an
// IndexTable, so exactly num_tilings indices are produced per input (fewer
// only if hashing collides within one encoding).
class TileCoder final : public Featurizer {
 public:
  TileCoder(BoundsSpec bounds, TileCoderConfig config);
  int length() const override { return config_.capacity; }
  const TileCoderConfig& config() const { return config_; }
  const IndexTable& table() const { return table_; }
  FeatureVector encode(std::span<const double> obs) override;

 private:
  BoundsSpec bounds_;
  TileCoderConfig config_;
  IndexTable table_;
};

}  // namespace rlab::feat
