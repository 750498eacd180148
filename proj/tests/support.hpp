#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the plain data types.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "stageflow/graph.hpp"
#include "stageflow/oracles.hpp"
#include "stageflow/reductions.hpp"

namespace testing {

using stageflow::Cost;
using stageflow::NodeId;
using stageflow::TspInstance;

inline Cost brute_tour_cost(const TspInstance& t, const std::vector<int>& order) {
  Cost c = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    c += t.cost(NodeId{order[k]}, NodeId{order[(k + 1) % order.size()]});
  return c;
}

// Calls fn(order) for every tour from node 1, as a vector of ints.
template <class Fn>
void for_each_tour(int n, Fn fn) {
  std::vector<int> rest;
  for (int v = 2; v <= n; ++v) rest.push_back(v);
  do {
    std::vector<int> order{1};
    order.insert(order.end(), rest.begin(), rest.end());
    fn(order);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

struct BruteResult {
  Cost optimum = std::numeric_limits<Cost>::max();
  std::uint64_t count = 0;
  std::vector<std::vector<int>> optimal;
};

inline BruteResult brute_force(const TspInstance& t, bool keep_tours = false) {
  BruteResult r;
  for_each_tour(t.size(), [&](const std::vector<int>& order) {
    Cost c = brute_tour_cost(t, order);
    if (c < r.optimum) {
      r.optimum = c;
      r.count = 0;
      r.optimal.clear();
    }
    if (c == r.optimum) {
      ++r.count;
      if (keep_tours) r.optimal.push_back(order);
    }
  });
  return r;
}

inline std::vector<int> to_ints(const std::vector<NodeId>& order) {
  std::vector<int> out;
  for (NodeId v : order) out.push_back(v.value);
  return out;
}

inline std::vector<NodeId> to_nodes(const std::vector<int>& order) {
  std::vector<NodeId> out;
  for (int v : order) out.push_back(NodeId{v});
  return out;
}

inline TspInstance random_instance(std::mt19937_64& rng, int n, Cost max_cost) {
  TspInstance t(n, max_cost + 1);
  std::uniform_int_distribution<Cost> d(0, max_cost);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) t.set_cost(NodeId{i}, NodeId{j}, d(rng));
  return t;
}

// Reads every "cost{i}{j}=c" assignment of the printed cost table, in either
// of its two typesettings.
inline std::map<std::pair<int, int>, Cost> read_printed_cost_table(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  static const std::regex entry(R"(cost\\?\{(\d+)\\?\}\\?\{(\d+)\\?\}=(\d+))");
  std::map<std::pair<int, int>, Cost> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), entry); it != std::sregex_iterator(); ++it)
    out[{std::stoi((*it)[1]), std::stoi((*it)[2])}] = std::stoll((*it)[3]);
  return out;
}

}  // namespace testing
