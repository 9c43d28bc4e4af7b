#include <vector>

#include "ardt/theory/automaton.hpp"
#include "ardt/theory/parity.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ardt;
using namespace ardt::theory;

TEST_CASE("direct parity tree is exact and full") {
  for (std::size_t n = 1; n <= 10; ++n) {
    DecisionTree tree = direct_parity_tree(n);
    CHECK(tree.size() == (std::size_t{1} << n));
    for (const auto& bits : oracle::all_words(2, n)) {
      int ones = 0;
      for (int b : bits) ones += b;
      CHECK(parity(bits) == ones % 2);
      CHECK(tree.evaluate(bit_window(bits)) == (ones % 2 ? kOdd : kEven));
    }
    CHECK_FALSE(parity_counterexample(tree, n).has_value());
  }
}

TEST_CASE("the autoregressive parity tree does not grow with n") {
  std::size_t leaves = compile_automaton(parity_automaton(), 4).ardt.tree.size();
  for (std::size_t n = 5; n <= 40; n += 7) {
    CHECK(compile_automaton(parity_automaton(), n).ardt.tree.size() == leaves);
  }
}

TEST_CASE("collapsed trees have counterexamples") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 6;
    DecisionTree tree = collapse_random_subtree(direct_parity_tree(n), seed);
    CHECK(tree.size() < (std::size_t{1} << n));
    auto pair = parity_counterexample(tree, n);
    REQUIRE(pair.has_value());
    CHECK(pair->first.size() == n);
    CHECK(tree.evaluate(bit_window(pair->first)) == tree.evaluate(bit_window(pair->second)));
    CHECK(parity(pair->first) != parity(pair->second));
  }
}

TEST_CASE("counterexamples on hand-built trees") {
  // Reads only bit 0.
  std::vector<TreeNode> nodes{TreeNode::split(0, 0, 0.5), TreeNode::leaf(kEven), TreeNode::leaf(kOdd)};
  nodes[0].left = 1;
  nodes[0].right = 2;
  DecisionTree tree(3, 1, nodes);
  auto pair = parity_counterexample(tree, 3);
  REQUIRE(pair.has_value());
  CHECK(pair->first[0] == pair->second[0]);
  CHECK(parity(pair->first) != parity(pair->second));

  // A threshold outside (0, 1] constrains nothing.
  nodes[0].threshold = 3.0;
  pair = parity_counterexample(DecisionTree(1, 1, nodes), 1);
  REQUIRE(pair.has_value());
  CHECK(pair->first != pair->second);

  CHECK_THROWS_AS(parity_counterexample(tree, 4), DimensionError);
}
