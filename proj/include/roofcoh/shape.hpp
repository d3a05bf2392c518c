#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace roofcoh {

/// Party dimensions of a multipartite system.
///
/// Flat basis indices are row-major with party 0 slowest:
///   flat = ((i_0 * d_1 + i_1) * d_2 + i_2) * ...
/// Every ensemble construction in the library depends on this convention,
/// so it is fixed here and nowhere else.
class SubsystemShape {
 public:
  explicit SubsystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
      throw std::invalid_argument("SubsystemShape: at least one party required");
    }
    total_dim_ = 1;
    for (int d : dims_) {
      if (d < 2) {
        throw std::invalid_argument("SubsystemShape: party dimensions must be >= 2");
      }
      total_dim_ *= d;
    }
  }

  int num_parties() const { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  int total_dim() const { return total_dim_; }
  const std::vector<int>& dims() const { return dims_; }

  int flat_index(const std::vector<int>& multi) const {
    if (multi.size() != dims_.size()) {
      throw std::invalid_argument("SubsystemShape: multi-index arity mismatch");
    }
    int flat = 0;
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      if (multi[j] < 0 || multi[j] >= dims_[j]) {
        throw std::invalid_argument("SubsystemShape: multi-index out of range");
      }
      flat = flat * dims_[j] + multi[j];
    }
    return flat;
  }

  std::vector<int> multi_index(int flat) const {
    if (flat < 0 || flat >= total_dim_) {
      throw std::invalid_argument("SubsystemShape: flat index out of range");
    }
    std::vector<int> multi(dims_.size());
    for (std::size_t j = dims_.size(); j-- > 0;) {
      multi[j] = flat % dims_[j];
      flat /= dims_[j];
    }
    return multi;
  }

  /// Shape of the listed parties, in their original order. `keep` must be
  /// strictly ascending.
  SubsystemShape restricted_to(const std::vector<int>& keep) const {
    std::vector<int> sub;
    sub.reserve(keep.size());
    int prev = -1;
    for (int party : keep) {
      if (party <= prev) {
        throw std::invalid_argument("SubsystemShape: keep list must be strictly ascending");
      }
      sub.push_back(dim(party));
      prev = party;
    }
    return SubsystemShape(std::move(sub));
  }

  SubsystemShape concatenated_with(const SubsystemShape& other) const {
    std::vector<int> joined = dims_;
    joined.insert(joined.end(), other.dims_.begin(), other.dims_.end());
    return SubsystemShape(std::move(joined));
  }

  bool operator==(const SubsystemShape& other) const { return dims_ == other.dims_; }
  bool operator!=(const SubsystemShape& other) const { return !(*this == other); }

  /// "2x3x2" — used in report rows.
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      if (j) out += 'x';
      out += std::to_string(dims_[j]);
    }
    return out;
  }

 private:
  std::vector<int> dims_;
  int total_dim_ = 0;
};

/// Splits flat indices into (party index, complementary multi-index) pairs
/// for one target party. Complementary indices run row-major over the
/// remaining parties in their original order.
class PartySplit {
 public:
  PartySplit(const SubsystemShape& shape, int party) {
    const int n = shape.num_parties();
    if (party < 0 || party >= n) {
      throw std::invalid_argument("PartySplit: party index out of range");
    }
    std::vector<int> strides(static_cast<std::size_t>(n), 1);
    for (int j = n - 2; j >= 0; --j) {
      strides[static_cast<std::size_t>(j)] =
          strides[static_cast<std::size_t>(j + 1)] * shape.dim(j + 1);
    }
    party_dim_ = shape.dim(party);
    party_stride_ = strides[static_cast<std::size_t>(party)];
    comp_dim_ = 1;
    for (int j = 0; j < n; ++j) {
      if (j == party) continue;
      comp_dims_.push_back(shape.dim(j));
      comp_strides_.push_back(strides[static_cast<std::size_t>(j)]);
      comp_dim_ *= shape.dim(j);
    }
  }

  int party_dim() const { return party_dim_; }
  int comp_dim() const { return comp_dim_; }

  /// Full flat index of |i_party; complementary m>.
  int flat(int party_index, int comp_index) const {
    int full = party_index * party_stride_;
    for (std::size_t j = comp_dims_.size(); j-- > 0;) {
      full += (comp_index % comp_dims_[j]) * comp_strides_[j];
      comp_index /= comp_dims_[j];
    }
    return full;
  }

  /// Multi-index of the complementary parties for a complementary flat index.
  std::vector<int> comp_multi(int comp_index) const {
    std::vector<int> multi(comp_dims_.size());
    for (std::size_t j = comp_dims_.size(); j-- > 0;) {
      multi[j] = comp_index % comp_dims_[j];
      comp_index /= comp_dims_[j];
    }
    return multi;
  }

 private:
  int party_dim_ = 0;
  int party_stride_ = 0;
  int comp_dim_ = 0;
  std::vector<int> comp_dims_;
  std::vector<int> comp_strides_;
};

}  // namespace roofcoh
