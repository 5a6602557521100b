#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seplim {

// One-line permutation of a contiguous integer block [a, b]. The block is
// inferred from the values; the constructor rejects anything that is not a
// rearrangement of a contiguous range.
class permutation {
 public:
  explicit permutation(std::vector<std::int64_t> values);

  static permutation identity(std::int64_t start, std::int64_t len);
  static permutation singleton(std::int64_t value) { return identity(value, 1); }

  // Text form: space-separated decimal values, or a single all-digit token in
  // compact per-character form ("4352167" == "4 3 5 2 1 6 7").
  static permutation parse(const std::string& text);
  std::string str() const;

  std::int64_t block_start() const { return start_; }
  std::int64_t block_end() const { return start_ + size() - 1; }
  std::int64_t size() const { return static_cast<std::int64_t>(vals_.size()); }
  std::int64_t at(std::int64_t pos) const;  // 0-based position
  std::span<const std::int64_t> values() const { return vals_; }

  bool operator==(const permutation&) const = default;

 private:
  std::int64_t start_ = 0;
  std::vector<std::int64_t> vals_;
};

permutation relabel(const permutation& p, std::int64_t new_start);

// sigma first in position and bottom in value; tau's block must start right
// after sigma's ends.
permutation direct_sum(const permutation& sigma, const permutation& tau);
// sigma first in position and top in value; sigma's block must start right
// after tau's ends.
permutation skew_sum(const permutation& sigma, const permutation& tau);

// Length of the shortest prefix whose values form the bottom (plus) or top
// (minus) segment of the block. Equals size() exactly when no proper prefix
// works, i.e. for the corresponding notion of indecomposability.
std::int64_t first_block_plus(const permutation& p);
std::int64_t first_block_minus(const permutation& p);
bool indecomposable(const permutation& p);
bool skew_indecomposable(const permutation& p);

// Separating tree: leaves in position order carry the values; internal nodes
// alternate between direct and skew sums and have at least two children.
struct sep_tree {
  enum class node_kind { leaf, direct, skew };
  node_kind kind = node_kind::leaf;
  std::int64_t value = 0;
  std::vector<sep_tree> children;
};

// Canonical maximal decomposition; nullopt when the permutation is not
// separable. Recursive, intended for display-sized inputs; is_separable below
// is the iterative check that also handles very long permutations.
std::optional<sep_tree> build_sep_tree(const permutation& p);
bool is_separable(const permutation& p);
permutation flatten_tree(const sep_tree& t);
std::string tree_str(const sep_tree& t);

// Pattern containment by brute-force subsequence search; fine for the short
// patterns used here, exponential in general.
std::int64_t occ_count(const permutation& pattern, const permutation& host);

// Standardized pattern of the subsequence at the given 0-based positions.
permutation pattern_of(const permutation& host, std::span<const std::int64_t> positions);

// First occurrence (0-based positions) of 2413 or 3142, if any. A permutation
// is separable exactly when this returns nullopt.
std::optional<std::array<std::int64_t, 4>> find_forbidden(const permutation& p);

permutation reverse(const permutation& p);
permutation complement(const permutation& p);
permutation reverse_complement(const permutation& p);

}  // namespace seplim
