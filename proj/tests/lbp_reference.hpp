#pragma once

// Published values for the low back pain fixture (data/lbp.evidence).
// Labels print f3 f2 f1, so "101" is the node f1 AND f3.

#include <string>
#include <vector>

namespace lbp {

struct TripleRef {
  int fact;
  const char* disease;
  double tv1, tv2, tv3;
};

inline const std::vector<TripleRef> kTriples{
    {1, "SIJ", 0.43, 0.11, 0.46},  {1, "CFJ", 0.79, 0.03, 0.18},  {1, "DP", 0.39, 0.11, 0.50},
    {1, "MPS", 0.88, 0.02, 0.10},  {1, "PIVD", 0.00, 1.00, 0.00}, {2, "PIVD", 0.49, 0.16, 0.35},
    {2, "SIJ", 0.49, 0.16, 0.35},  {2, "CFJ", 0.09, 0.09, 0.81},  {3, "CFJ", 0.28, 0.24, 0.48},
    {3, "PIVD", 0.37, 0.23, 0.41}, {3, "SIJ", 0.35, 0.03, 0.63},  {3, "DP", 0.54, 0.29, 0.16},
};

struct EntryRef {
  const char* rule;
  const char* label;
  const char* disease;
  int vd;
  double cf;
};

inline const std::vector<EntryRef> kAtomic{
    {"R1a", "001", "SIJ", 2, 0.46}, {"R1b", "001", "CFJ", 1, 0.79}, {"R1c", "001", "DP", 2, 0.50},
    {"R1d", "001", "MPS", 1, 0.88}, {"R1e", "001", "PIVD", 0, 1.00}, {"R2a", "010", "PIVD", 1, 0.49},
    {"R2b", "010", "SIJ", 1, 0.49}, {"R2c", "010", "CFJ", 2, 0.81}, {"R3a", "100", "CFJ", 2, 0.48},
    {"R3b", "100", "PIVD", 2, 0.41}, {"R3c", "100", "SIJ", 2, 0.63}, {"R3d", "100", "DP", 1, 0.54},
};

inline const std::vector<EntryRef> kComposite{
    {"R12a", "011", "SIJ", 1, 0.02},   {"R12b", "011", "CFJ", 2, 0.26},  {"R12c", "011", "DP", 2, 0.33},
    {"R12d", "011", "MPS", 1, 0.59},   {"R12e", "011", "PIVD", 0, 0.26}, {"R13a", "101", "SIJ", 2, 0.55},
    {"R13b", "101", "CFJ", 1, 0.16},   {"R13c", "101", "DP", 1, 0.15},   {"R13d", "101", "PIVD", 2, 0.53},
    {"R13e", "101", "MPS", 1, 0.59},   {"R23a", "110", "SIJ", 2, 0.07},  {"R23b", "110", "CFJ", 2, 0.65},
    {"R23c", "110", "PIVD", 1, 0.04},  {"R23d", "110", "DP", 1, 0.27},   {"R123a", "111", "SIJ", 2, 0.21},
    {"R123b", "111", "CFJ", 2, 0.25},  {"R123c", "111", "PIVD", 2, 0.16}, {"R123d", "111", "DP", 2, 0.13},
    {"R123e", "111", "MPS", 1, 0.40},
};

struct SetsRef {
  const char* disease;
  std::vector<std::string> concept1, concept2;
  std::vector<std::string> lower1, upper1, boundary1;
  std::vector<std::string> lower2, upper2, boundary2;
};

inline const std::vector<SetsRef> kSets{
    {"SIJ",
     {"001", "010", "100", "011", "101", "110", "111"},
     {"001", "100", "101", "110", "111"},
     {"010", "011"},
     {"001", "010", "100", "011", "101", "110", "111"},
     {"001", "100", "101", "110", "111"},
     {},
     {"001", "100", "101", "110", "111"},
     {"001", "100", "101", "110", "111"}},
    {"CFJ",
     {"001", "010", "100", "011", "101", "110", "111"},
     {"010", "100", "011", "110", "111"},
     {"001", "101"},
     {"001", "010", "100", "011", "101", "110", "111"},
     {"010", "100", "011", "110", "111"},
     {},
     {"010", "100", "011", "110", "111"},
     {"010", "100", "011", "110", "111"}},
    {"PIVD",
     {"010", "100", "101", "110", "111"},
     {"001", "100", "011", "101", "111"},
     {"010", "110"},
     {"010", "100", "101", "110", "111"},
     {"100", "101", "111"},
     {"001", "011"},
     {"001", "100", "011", "101", "111"},
     {"100", "101", "111"}},
    {"DP",
     {"001", "100", "011", "101", "110", "111"},
     {"001", "011", "111"},
     {"100", "101", "110"},
     {"001", "100", "011", "101", "110", "111"},
     {"001", "011", "111"},
     {},
     {"001", "011", "111"},
     {"001", "011", "111"}},
    {"MPS",
     {"001", "011", "101", "111"},
     {},
     {"001", "011", "101", "111"},
     {"001", "011", "101", "111"},
     {},
     {},
     {},
     {}},
};

// Certain rules as (care, value) terms over bits f1 = 1, f2 = 2, f3 = 4.
struct TermRef {
  unsigned care, value;
};

struct RuleRef {
  const char* name;
  const char* disease;
  int vd;
  std::vector<TermRef> terms;
};

inline const std::vector<RuleRef> kRules{
    {"Rule 1", "SIJ", 1, {{0b110, 0b010}}},
    {"Rule 2", "CFJ", 1, {{0b011, 0b001}}},
    {"Rule 3", "PIVD", 1, {{0b011, 0b010}}},
    {"Rule 4", "PIVD", 0, {{0b101, 0b001}}},
    {"Rule 5+6", "DP", 1, {{0b101, 0b100}, {0b110, 0b100}}},
    {"Rule 7", "MPS", 1, {{0b001, 0b001}}},
};

}  // namespace lbp
