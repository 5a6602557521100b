#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "seplim/perm.hpp"

using namespace seplim;

namespace {

// All of S_n in one-line form over [1, n].
std::vector<permutation> all_perms(int n) {
  std::vector<std::int64_t> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

bool avoids_forbidden(const permutation& p) {
  return occ_count(permutation::parse("2413"), p) == 0 &&
         occ_count(permutation::parse("3142"), p) == 0;
}

}  // namespace

TEST_CASE("parse accepts both text forms") {
  auto spaced = permutation::parse("4 3 5 2 1 6 7");
  auto compact = permutation::parse("4352167");
  CHECK(spaced == compact);
  CHECK(spaced.block_start() == 1);
  CHECK(spaced.block_end() == 7);
  CHECK(spaced.size() == 7);
  CHECK(spaced.str() == "4 3 5 2 1 6 7");
  CHECK(spaced.at(0) == 4);
  CHECK(spaced.at(6) == 7);

  auto shifted = permutation::parse("11 10 12");
  CHECK(shifted.block_start() == 10);
  CHECK(shifted.size() == 3);

  // single multi-digit token reads as compact characters
  CHECK(permutation::parse("12") == permutation::parse("1 2"));
  // single value stays a singleton at that value
  auto single = permutation::parse("7");
  CHECK(single.size() == 1);
  CHECK(single.block_start() == 7);

  auto negative = permutation::parse("-1 0 -2");
  CHECK(negative.block_start() == -2);
  CHECK(negative.str() == "-1 0 -2");
}

TEST_CASE("parse and constructor reject malformed input") {
  CHECK_THROWS_AS(permutation::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(permutation::parse("  "), std::invalid_argument);
  CHECK_THROWS_AS(permutation::parse("1 3"), std::invalid_argument);
  CHECK_THROWS_AS(permutation::parse("1 1"), std::invalid_argument);
  CHECK_THROWS_AS(permutation::parse("1 2x"), std::invalid_argument);
  CHECK_THROWS_AS(permutation(std::vector<std::int64_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(permutation({5, 5}), std::invalid_argument);
  CHECK_THROWS_AS(permutation({1, 4}), std::invalid_argument);
}

TEST_CASE("identity, singleton, relabel") {
  auto id = permutation::identity(3, 4);
  CHECK(id.str() == "3 4 5 6");
  CHECK(permutation::singleton(9).str() == "9");
  auto moved = relabel(permutation::parse("21"), 6);
  CHECK(moved.str() == "7 6");
  CHECK_THROWS_AS(permutation::identity(1, 0), std::invalid_argument);
}

TEST_CASE("direct and skew sums concatenate adjacent blocks") {
  auto lo = permutation::parse("21");
  auto hi = relabel(permutation::parse("12"), 3);
  CHECK(direct_sum(lo, hi).str() == "2 1 3 4");
  CHECK(skew_sum(hi, lo).str() == "3 4 2 1");
  // misaligned blocks refuse
  CHECK_THROWS_AS(direct_sum(lo, relabel(hi, 4)), std::invalid_argument);
  CHECK_THROWS_AS(skew_sum(relabel(hi, 4), lo), std::invalid_argument);
  CHECK_THROWS_AS(direct_sum(hi, lo), std::invalid_argument);
}

TEST_CASE("first block lengths") {
  CHECK(first_block_plus(permutation::parse("4352167")) == 5);
  CHECK(first_block_minus(permutation::parse("43521")) == 3);
  CHECK(first_block_minus(permutation::parse("21")) == 1);
  CHECK(first_block_plus(permutation::parse("21")) == 2);
  CHECK(first_block_plus(permutation::parse("12")) == 1);
  CHECK(first_block_minus(permutation::parse("12")) == 2);
  auto single = permutation::singleton(4);
  CHECK(first_block_plus(single) == 1);
  CHECK(first_block_minus(single) == 1);
  CHECK(indecomposable(single));
  CHECK(skew_indecomposable(single));
  CHECK(indecomposable(permutation::parse("21")));
  CHECK(!indecomposable(permutation::parse("12")));
  CHECK(skew_indecomposable(permutation::parse("12")));
}

TEST_CASE("first block is consistent with prefix structure") {
  for (const auto& p : all_perms(6)) {
    std::int64_t k = first_block_plus(p);
    // the prefix of length k occupies the bottom k values
    std::int64_t mx = 0;
    for (std::int64_t i = 0; i < k; ++i) mx = std::max(mx, p.at(i));
    CHECK(mx == k);
    // no shorter prefix does
    for (std::int64_t j = 1; j < k; ++j) {
      std::int64_t m2 = 0;
      for (std::int64_t i = 0; i < j; ++i) m2 = std::max(m2, p.at(i));
      CHECK(m2 != j);
    }
  }
}

TEST_CASE("separability matches forbidden-pattern avoidance exhaustively") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& p : all_perms(n)) {
      bool by_tree = is_separable(p);
      bool by_occ = avoids_forbidden(p);
      bool by_build = build_sep_tree(p).has_value();
      CHECK(by_tree == by_occ);
      CHECK(by_build == by_occ);
      CHECK(find_forbidden(p).has_value() == !by_occ);
    }
  }
}

TEST_CASE("known separable and non-separable cases") {
  CHECK(is_separable(permutation::parse("4352167")));
  CHECK(!is_separable(permutation::parse("2413")));
  CHECK(!is_separable(permutation::parse("3142")));
  CHECK(is_separable(permutation::parse("1")));
  CHECK(is_separable(permutation::parse("35142")) == false);
}

TEST_CASE("separating tree shape and round trip") {
  auto p = permutation::parse("4352167");
  auto t = build_sep_tree(p);
  REQUIRE(t.has_value());
  CHECK(t->kind == sep_tree::node_kind::direct);
  REQUIRE(t->children.size() == 3);
  CHECK(tree_str(*t) == "[+ [- [+ [- 4 3] 5] 2 1] 6 7]");
  CHECK(flatten_tree(*t) == p);

  auto t21 = build_sep_tree(permutation::parse("21"));
  REQUIRE(t21.has_value());
  CHECK(t21->kind == sep_tree::node_kind::skew);
  CHECK(tree_str(*t21) == "[- 2 1]");

  CHECK(!build_sep_tree(permutation::parse("2413")).has_value());
}

TEST_CASE("trees alternate and flatten back for every separable permutation") {
  for (const auto& p : all_perms(6)) {
    auto t = build_sep_tree(p);
    if (!t) continue;
    CHECK(flatten_tree(*t) == p);
    // children of a node never repeat its kind (canonical maximal split)
    std::vector<const sep_tree*> stack{&*t};
    while (!stack.empty()) {
      const sep_tree* node = stack.back();
      stack.pop_back();
      if (node->kind == sep_tree::node_kind::leaf) {
        CHECK(node->children.empty());
        continue;
      }
      CHECK(node->children.size() >= 2);
      for (const auto& c : node->children) {
        CHECK(c.kind != node->kind);
        stack.push_back(&c);
      }
    }
  }
}

TEST_CASE("occurrence counting") {
  CHECK(occ_count(permutation::parse("12"), permutation::parse("123")) == 3);
  CHECK(occ_count(permutation::parse("21"), permutation::parse("123")) == 0);
  CHECK(occ_count(permutation::parse("21"), permutation::parse("4321")) == 6);
  CHECK(occ_count(permutation::parse("123"), permutation::identity(1, 5)) == 10);
  CHECK(occ_count(permutation::parse("2413"), permutation::parse("2413")) == 1);
  CHECK(occ_count(permutation::parse("1"), permutation::parse("43521")) == 5);
  CHECK(occ_count(permutation::parse("12345"), permutation::parse("4321")) == 0);
}

TEST_CASE("pattern_of standardizes subsequences") {
  auto host = permutation::parse("43521");
  std::vector<std::int64_t> pos{0, 2, 4};
  CHECK(pattern_of(host, pos).str() == "2 3 1");
  std::vector<std::int64_t> all{0, 1, 2, 3, 4};
  CHECK(pattern_of(host, all) == relabel(host, 1));
}

TEST_CASE("forbidden witness really is forbidden") {
  auto p = permutation::parse("35142");
  auto w = find_forbidden(p);
  REQUIRE(w.has_value());
  std::vector<std::int64_t> pos(w->begin(), w->end());
  auto pat = pattern_of(p, pos);
  bool hit = pat == permutation::parse("2413") || pat == permutation::parse("3142");
  CHECK(hit);
}

TEST_CASE("symmetries") {
  auto p = permutation::parse("4352167");
  CHECK(reverse(p).str() == "7 6 1 2 5 3 4");
  CHECK(complement(p).str() == "4 5 3 6 7 2 1");
  CHECK(reverse_complement(p) == complement(reverse(p)));

  for (const auto& q : all_perms(5)) {
    CHECK(is_separable(q) == is_separable(reverse(q)));
    CHECK(is_separable(q) == is_separable(complement(q)));
    CHECK(indecomposable(q) == skew_indecomposable(complement(q)));
    // reversing swaps the two forbidden patterns
    CHECK(occ_count(permutation::parse("2413"), q) ==
          occ_count(permutation::parse("3142"), reverse(q)));
    CHECK(reverse(reverse(q)) == q);
    CHECK(complement(complement(q)) == q);
  }
}

TEST_CASE("sums of separables are separable") {
  auto a = permutation::parse("231");
  auto b = relabel(permutation::parse("21"), 4);
  auto c = direct_sum(a, b);
  CHECK(is_separable(c));
  auto d = skew_sum(relabel(a, c.block_end() + 1), c);
  CHECK(is_separable(d));
  CHECK(first_block_plus(c) == 3);
  // d = 7 8 6 2 3 1 5 4: the finest top block is "7 8", not the full "7 8 6"
  CHECK(first_block_minus(d) == 2);
}
