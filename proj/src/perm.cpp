#include "seplim/perm.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace seplim {

permutation::permutation(std::vector<std::int64_t> values) : vals_(std::move(values)) {
  if (vals_.empty()) throw std::invalid_argument("permutation: empty value list");
  auto [lo_it, hi_it] = std::minmax_element(vals_.begin(), vals_.end());
  std::int64_t lo = *lo_it, hi = *hi_it;
  if (hi - lo + 1 != size()) {
    throw std::invalid_argument("permutation: values do not fill a contiguous block");
  }
  std::vector<char> seen(vals_.size(), 0);
  for (std::int64_t v : vals_) {
    char& slot = seen[static_cast<std::size_t>(v - lo)];
    if (slot) throw std::invalid_argument("permutation: duplicate value " + std::to_string(v));
    slot = 1;
  }
  start_ = lo;
}

permutation permutation::identity(std::int64_t start, std::int64_t len) {
  if (len < 1) throw std::invalid_argument("permutation: length must be >= 1");
  std::vector<std::int64_t> v(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < len; ++i) v[static_cast<std::size_t>(i)] = start + i;
  return permutation(std::move(v));
}

permutation permutation::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("permutation: empty input");

  std::vector<std::int64_t> vals;
  bool compact = tokens.size() == 1 && tokens[0].size() > 1 &&
                 std::all_of(tokens[0].begin(), tokens[0].end(),
                             [](unsigned char c) { return std::isdigit(c); });
  if (compact) {
    for (char c : tokens[0]) vals.push_back(c - '0');
  } else {
    for (const auto& t : tokens) {
      try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        vals.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("permutation: bad token '" + t + "'");
      }
    }
  }
  return permutation(std::move(vals));
}

std::string permutation::str() const {
  std::ostringstream out;
  for (std::int64_t i = 0; i < size(); ++i) {
    if (i) out << ' ';
    out << vals_[static_cast<std::size_t>(i)];
  }
  return out.str();
}

std::int64_t permutation::at(std::int64_t pos) const {
  if (pos < 0 || pos >= size()) throw std::out_of_range("permutation: position out of range");
  return vals_[static_cast<std::size_t>(pos)];
}

permutation relabel(const permutation& p, std::int64_t new_start) {
  std::int64_t shift = new_start - p.block_start();
  std::vector<std::int64_t> v(p.values().begin(), p.values().end());
  for (auto& x : v) x += shift;
  return permutation(std::move(v));
}

permutation direct_sum(const permutation& sigma, const permutation& tau) {
  if (tau.block_start() != sigma.block_end() + 1) {
    throw std::invalid_argument("direct_sum: blocks are not adjacent (low then high)");
  }
  std::vector<std::int64_t> v;
  v.reserve(static_cast<std::size_t>(sigma.size() + tau.size()));
  v.insert(v.end(), sigma.values().begin(), sigma.values().end());
  v.insert(v.end(), tau.values().begin(), tau.values().end());
  return permutation(std::move(v));
}

permutation skew_sum(const permutation& sigma, const permutation& tau) {
  if (sigma.block_start() != tau.block_end() + 1) {
    throw std::invalid_argument("skew_sum: blocks are not adjacent (high then low)");
  }
  std::vector<std::int64_t> v;
  v.reserve(static_cast<std::size_t>(sigma.size() + tau.size()));
  v.insert(v.end(), sigma.values().begin(), sigma.values().end());
  v.insert(v.end(), tau.values().begin(), tau.values().end());
  return permutation(std::move(v));
}

std::int64_t first_block_plus(const permutation& p) {
  std::int64_t a = p.block_start();
  std::int64_t running_max = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t k = 1; k <= p.size(); ++k) {
    running_max = std::max(running_max, p.values()[static_cast<std::size_t>(k - 1)]);
    if (running_max - a + 1 == k) return k;
  }
  return p.size();  // unreachable: k = size always satisfies the test
}

std::int64_t first_block_minus(const permutation& p) {
  std::int64_t b = p.block_end();
  std::int64_t running_min = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t k = 1; k <= p.size(); ++k) {
    running_min = std::min(running_min, p.values()[static_cast<std::size_t>(k - 1)]);
    if (b - running_min + 1 == k) return k;
  }
  return p.size();
}

bool indecomposable(const permutation& p) { return first_block_plus(p) == p.size(); }
bool skew_indecomposable(const permutation& p) { return first_block_minus(p) == p.size(); }

namespace {

// Appends the maximal same-kind split of vals[lo, hi) to cuts (positions after
// each block). Returns the number of blocks. plus = bottom-up blocks.
template <bool Plus>
int split_blocks(std::span<const std::int64_t> vals, std::int64_t lo, std::int64_t hi,
                 std::int64_t vlo, std::int64_t vhi, std::vector<std::int64_t>& cuts) {
  int blocks = 0;
  std::int64_t bound = Plus ? std::numeric_limits<std::int64_t>::min()
                            : std::numeric_limits<std::int64_t>::max();
  std::int64_t base = Plus ? vlo : vhi;
  for (std::int64_t i = lo; i < hi; ++i) {
    std::int64_t v = vals[static_cast<std::size_t>(i)];
    bound = Plus ? std::max(bound, v) : std::min(bound, v);
    std::int64_t extent = Plus ? bound - base + 1 : base - bound + 1;
    if (extent == i - lo + 1) {
      cuts.push_back(i + 1);
      ++blocks;
    }
  }
  return blocks;
}

}  // namespace

bool is_separable(const permutation& p) {
  auto vals = p.values();
  // Explicit worklist of position ranges; every pushed range is a contiguous
  // value block, so its value span is [min, min+len). Iterative on purpose:
  // sampled permutations can be long enough to overflow the call stack.
  std::vector<std::pair<std::int64_t, std::int64_t>> work{{0, p.size()}};
  std::vector<std::int64_t> cuts;
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    std::int64_t len = hi - lo;
    if (len <= 2) continue;  // singletons and pairs always separate
    std::int64_t vlo = std::numeric_limits<std::int64_t>::max();
    std::int64_t vhi = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t i = lo; i < hi; ++i) {
      vlo = std::min(vlo, vals[static_cast<std::size_t>(i)]);
      vhi = std::max(vhi, vals[static_cast<std::size_t>(i)]);
    }
    cuts.clear();
    int blocks = split_blocks<true>(vals, lo, hi, vlo, vhi, cuts);
    if (blocks < 2) {
      cuts.clear();
      blocks = split_blocks<false>(vals, lo, hi, vlo, vhi, cuts);
    }
    if (blocks < 2) return false;
    std::int64_t prev = lo;
    for (std::int64_t c : cuts) {
      work.emplace_back(prev, c);
      prev = c;
    }
  }
  return true;
}

namespace {

std::optional<sep_tree> build_tree_range(std::span<const std::int64_t> vals, std::int64_t lo,
                                         std::int64_t hi) {
  std::int64_t len = hi - lo;
  if (len == 1) {
    sep_tree leaf;
    leaf.value = vals[static_cast<std::size_t>(lo)];
    return leaf;
  }
  std::int64_t vlo = std::numeric_limits<std::int64_t>::max();
  std::int64_t vhi = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t i = lo; i < hi; ++i) {
    vlo = std::min(vlo, vals[static_cast<std::size_t>(i)]);
    vhi = std::max(vhi, vals[static_cast<std::size_t>(i)]);
  }
  std::vector<std::int64_t> cuts;
  sep_tree node;
  node.kind = sep_tree::node_kind::direct;
  int blocks = split_blocks<true>(vals, lo, hi, vlo, vhi, cuts);
  if (blocks < 2) {
    cuts.clear();
    node.kind = sep_tree::node_kind::skew;
    blocks = split_blocks<false>(vals, lo, hi, vlo, vhi, cuts);
  }
  if (blocks < 2) return std::nullopt;
  std::int64_t prev = lo;
  node.children.reserve(cuts.size());
  for (std::int64_t c : cuts) {
    auto child = build_tree_range(vals, prev, c);
    if (!child) return std::nullopt;
    node.children.push_back(std::move(*child));
    prev = c;
  }
  return node;
}

void collect_leaves(const sep_tree& t, std::vector<std::int64_t>& out) {
  if (t.kind == sep_tree::node_kind::leaf) {
    out.push_back(t.value);
    return;
  }
  for (const auto& c : t.children) collect_leaves(c, out);
}

}  // namespace

std::optional<sep_tree> build_sep_tree(const permutation& p) {
  return build_tree_range(p.values(), 0, p.size());
}

permutation flatten_tree(const sep_tree& t) {
  std::vector<std::int64_t> v;
  collect_leaves(t, v);
  return permutation(std::move(v));
}

std::string tree_str(const sep_tree& t) {
  if (t.kind == sep_tree::node_kind::leaf) return std::to_string(t.value);
  std::string out = t.kind == sep_tree::node_kind::direct ? "[+" : "[-";
  for (const auto& c : t.children) {
    out += ' ';
    out += tree_str(c);
  }
  out += ']';
  return out;
}

namespace {

// Depth-first subsequence search. chosen holds host values selected so far;
// the candidate at host position i must compare against each of them the same
// way the pattern entries compare.
template <typename Visit>
bool occ_search(std::span<const std::int64_t> pat, std::span<const std::int64_t> host,
                std::vector<std::int64_t>& chosen, std::vector<std::int64_t>& pos,
                std::int64_t from, Visit&& visit) {
  std::size_t r = chosen.size();
  if (r == pat.size()) return visit(pos);
  for (std::int64_t i = from;
       i <= static_cast<std::int64_t>(host.size() - (pat.size() - r)); ++i) {
    std::int64_t v = host[static_cast<std::size_t>(i)];
    bool ok = true;
    for (std::size_t t = 0; t < r; ++t) {
      if ((v < chosen[t]) != (pat[r] < pat[t])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(v);
    pos.push_back(i);
    if (occ_search(pat, host, chosen, pos, i + 1, visit)) return true;
    chosen.pop_back();
    pos.pop_back();
  }
  return false;
}

}  // namespace

std::int64_t occ_count(const permutation& pattern, const permutation& host) {
  if (pattern.size() > host.size()) return 0;
  std::int64_t count = 0;
  std::vector<std::int64_t> chosen, pos;
  occ_search(pattern.values(), host.values(), chosen, pos, 0,
             [&count](const std::vector<std::int64_t>&) {
               ++count;
               return false;  // keep searching
             });
  return count;
}

permutation pattern_of(const permutation& host, std::span<const std::int64_t> positions) {
  std::vector<std::int64_t> vals;
  vals.reserve(positions.size());
  for (std::int64_t p : positions) vals.push_back(host.at(p));
  std::vector<std::int64_t> sorted(vals);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> out;
  out.reserve(vals.size());
  for (std::int64_t v : vals) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    out.push_back(1 + (it - sorted.begin()));
  }
  return permutation(std::move(out));
}

std::optional<std::array<std::int64_t, 4>> find_forbidden(const permutation& p) {
  if (p.size() < 4) return std::nullopt;
  for (const auto& pat : {std::vector<std::int64_t>{2, 4, 1, 3}, {3, 1, 4, 2}}) {
    std::vector<std::int64_t> chosen, pos;
    bool found = occ_search(pat, p.values(), chosen, pos, 0,
                            [](const std::vector<std::int64_t>&) { return true; });
    if (found) {
      return std::array<std::int64_t, 4>{pos[0], pos[1], pos[2], pos[3]};
    }
  }
  return std::nullopt;
}

permutation reverse(const permutation& p) {
  std::vector<std::int64_t> v(p.values().rbegin(), p.values().rend());
  return permutation(std::move(v));
}

permutation complement(const permutation& p) {
  std::int64_t s = p.block_start() + p.block_end();
  std::vector<std::int64_t> v;
  v.reserve(static_cast<std::size_t>(p.size()));
  for (std::int64_t x : p.values()) v.push_back(s - x);
  return permutation(std::move(v));
}

permutation reverse_complement(const permutation& p) { return reverse(complement(p)); }

}  // namespace seplim
