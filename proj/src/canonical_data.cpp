#include <sstream>
#include <string>

#include "stageflow/graph.hpp"

namespace stageflow {

namespace {

// Group rows of the 51-node table: "<tail> <head>:<cost> ...". Cost 1 marks
// an external or pair link, cost 2 a link inside a replacement triple.
constexpr const char* kGroupArcs =
    "3 4:1 5:1\n"
    "4 3:1 10:1\n"
    "5 3:1 6:2 7:2\n"
    "6 5:2 7:2 8:1\n"
    "7 5:2 6:2 13:1\n"
    "8 6:1 9:1\n"
    "9 8:1 15:1\n"
    "10 4:1 11:2 12:2\n"
    "11 10:2 12:2 18:1\n"
    "12 10:2 11:2 25:1\n"
    "13 7:1 14:1\n"
    "14 13:1 20:1\n"
    "15 9:1 16:2 17:2\n"
    "16 15:2 17:2 23:1\n"
    "17 15:2 16:2 27:1\n"
    "18 11:1 19:1\n"
    "19 18:1 21:1\n"
    "20 14:1 21:2 22:2\n"
    "21 19:1 20:2 22:2\n"
    "22 20:2 21:2 24:1\n"
    "23 16:1 24:1\n"
    "24 22:1 23:1\n"
    "25 12:1 26:1\n"
    "26 25:1 38:1\n"
    "27 17:1 28:1\n"
    "28 27:1 43:1\n"
    "29 30:1 31:1\n"
    "30 29:1 36:1\n"
    "31 29:1 32:2 33:2\n"
    "32 31:2 33:2 34:1\n"
    "33 31:2 32:2 39:1\n"
    "34 32:1 35:1\n"
    "35 34:1 41:1\n"
    "36 30:1 37:2 38:2\n"
    "37 36:2 38:2 44:1\n"
    "38 26:1 36:2 37:2\n"
    "39 33:1 40:1\n"
    "40 39:1 46:1\n"
    "41 35:1 42:2 43:2\n"
    "42 41:2 43:2 49:1\n"
    "43 28:1 41:2 42:2\n"
    "44 37:1 45:1\n"
    "45 44:1 47:1\n"
    "46 40:1 47:2 48:2\n"
    "47 45:1 46:2 48:2\n"
    "48 46:2 47:2 50:1\n"
    "49 42:1 50:1\n"
    "50 48:1 49:1\n";

// Seed group adjacency in attachment order: the k-th listed neighbour of a
// node is served by its k-th replacement node after enlargement.
constexpr int kSeedGroupAdjacency[20][3] = {
    {4, 6, 0},    // 3
    {3, 5, 7},    // 4
    {4, 8, 0},    // 5
    {3, 9, 12},   // 6
    {4, 10, 0},   // 7
    {5, 11, 13},  // 8
    {6, 10, 0},   // 9
    {7, 9, 11},   // 10
    {8, 10, 0},   // 11
    {6, 17, 0},   // 12
    {8, 19, 0},   // 13
    {15, 17, 0},  // 14
    {14, 16, 18}, // 15
    {15, 19, 0},  // 16
    {14, 20, 12}, // 17
    {15, 21, 0},  // 18
    {16, 22, 13}, // 19
    {17, 21, 0},  // 20
    {18, 20, 22}, // 21
    {19, 21, 0},  // 22
};

}  // namespace

TspInstance canonical_counterexample(Cost large) {
  constexpr int n = 51;
  TspInstance t(n, large, NodeId{1});
  t.set_cost(NodeId{1}, NodeId{2}, 1);
  for (int g = 3; g <= 50; ++g) {
    t.set_cost(NodeId{2}, NodeId{g}, 1);
    t.set_cost(NodeId{g}, NodeId{n}, 3);
  }
  t.set_cost(NodeId{n}, NodeId{1}, 1);

  std::istringstream rows(kGroupArcs);
  std::string line;
  while (std::getline(rows, line)) {
    std::istringstream fields(line);
    int tail = 0;
    fields >> tail;
    std::string entry;
    while (fields >> entry) {
      auto colon = entry.find(':');
      int head = std::stoi(entry.substr(0, colon));
      Cost c = std::stoll(entry.substr(colon + 1));
      t.set_cost(NodeId{tail}, NodeId{head}, c);
    }
  }
  return t;
}

HcpInstance canonical_hcp_seed() {
  constexpr int n = 23;
  HcpInstance h(n);
  h.add_arc(NodeId{1}, NodeId{2});
  for (int g = 3; g <= 22; ++g) h.add_arc(NodeId{2}, NodeId{g});
  for (int g = 3; g <= 22; ++g)
    for (int head : kSeedGroupAdjacency[g - 3])
      if (head != 0) h.add_arc(NodeId{g}, NodeId{head});
  for (int g = 3; g <= 22; ++g) h.add_arc(NodeId{g}, NodeId{n});
  h.add_arc(NodeId{n}, NodeId{1});
  return h;
}

}  // namespace stageflow
