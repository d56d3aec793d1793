#pragma once

// Published reference counts used as golden fixtures for the metric engine:
// consistency-category counts per refinement stage for both methods, the
// printed improvement percentages, and per-stage confusion grids for the
// amazon base case. The engine must reproduce every printed percentage
// within rounding of the source tables.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fixtures {

struct StageRow {
  std::array<std::uint64_t, 4> direct;  // pos, neg, neu, inconsistent
  std::array<std::uint64_t, 4> ssas;
};

struct MetricFixture {
  std::string name;          // dataset + scenario label
  std::string dataset;
  std::array<StageRow, 3> stages;  // ALL, w/o irrelevant, w/o irr+outlier
  // Printed 2-decimal percentages: net, conditioning, total per stage.
  std::array<double, 3> printed_net;
  std::array<double, 3> printed_cond;
  std::array<double, 3> printed_total;
};

inline const std::vector<MetricFixture>& metric_fixtures() {
  static const std::vector<MetricFixture> fixtures = {
      {"amazon base", "amazon",
       {StageRow{{84938, 43279, 7634, 19894}, {86861, 44122, 7125, 17637}},
        StageRow{{81810, 41654, 6929, 19430}, {83565, 42489, 6475, 17294}},
        StageRow{{65416, 30903, 3762, 16021}, {66340, 31459, 3580, 14723}}},
       {3.55, 3.46, 2.55},
       {0.00, 3.80, 25.45},
       {3.55, 7.26, 28.00}},
      {"google base", "google",
       {StageRow{{74859, 27664, 6155, 13148}, {75731, 28330, 5779, 11986}},
        StageRow{{72725, 26441, 5636, 12726}, {73568, 27070, 5302, 11588}},
        StageRow{{63213, 20036, 3143, 10042}, {63483, 20308, 3079, 9564}}},
       {2.52, 2.50, 1.12},
       {0.00, 3.53, 20.84},
       {2.52, 6.03, 21.97}},
      {"goodreads base", "goodreads",
       {StageRow{{81918, 31001, 8491, 35997}, {82721, 31605, 7410, 35671}},
        StageRow{{75000, 27694, 6998, 33708}, {75453, 28088, 6162, 33697}},
        StageRow{{59509, 22806, 4308, 30510}, {58962, 23079, 4194, 30898}}},
       {1.79, 1.18, 1.13},
       {0.00, 8.90, 25.59},
       {1.79, 10.08, 26.71}},
      {"amazon scenario1 high/100", "amazon",
       {StageRow{{9353, 4780, 867, 2131}, {9605, 4882, 789, 1855}},
        StageRow{{8985, 4615, 775, 2067}, {9210, 4714, 708, 1810}},
        StageRow{{7225, 3369, 423, 1629}, {7351, 3433, 373, 1489}}},
       {4.13, 3.94, 3.00},
       {0.00, 4.02, 26.18},
       {4.13, 7.96, 29.19}},
      {"amazon scenario2 high/51-99", "amazon",
       {StageRow{{33977, 15452, 3010, 7419}, {34810, 15759, 2766, 6523}},
        StageRow{{32655, 14827, 2700, 7222}, {33423, 15137, 2481, 6363}},
        StageRow{{26167, 10955, 1403, 5916}, {26625, 11182, 1302, 5332}}},
       {3.81, 3.76, 3.08},
       {0.00, 4.10, 25.76},
       {3.81, 7.86, 28.84}},
      {"google scenario2 high/51-99", "google",
       {StageRow{{54788, 23143, 5199, 10510}, {55563, 23676, 4846, 9555}},
        StageRow{{53290, 22129, 4790, 10169}, {54055, 22630, 4477, 9216}},
        StageRow{{46100, 16789, 2696, 8027}, {46411, 16995, 2621, 7585}}},
       {2.79, 2.80, 1.40},
       {0.00, 3.48, 21.39},
       {2.79, 6.29, 22.79}},
      {"goodreads scenario2 high/51-99", "goodreads",
       {StageRow{{9605, 3535, 1019, 4561}, {9688, 3623, 951, 4458}},
        StageRow{{8921, 3203, 871, 4337}, {8973, 3257, 833, 4269}},
        StageRow{{7484, 2701, 565, 4011}, {7430, 2753, 587, 3991}}},
       {1.83, 1.22, 1.00},
       {0.00, 7.41, 21.15},
       {1.83, 8.64, 22.15}},
      {"amazon scenario3 high/0-50", "amazon",
       {StageRow{{22414, 12342, 1904, 5817}, {22881, 12568, 1874, 5154}},
        StageRow{{21779, 11953, 1755, 5716}, {22209, 12176, 1736, 5082}},
        StageRow{{17917, 9145, 1035, 4879}, {18133, 9285, 1065, 4493}}},
       {3.26, 3.17, 2.34},
       {0.00, 3.00, 22.37},
       {3.26, 6.17, 24.71}},
      {"google scenario3 high/0-50", "google",
       {StageRow{{4016, 780, 156, 566}, {4031, 826, 165, 496}},
        StageRow{{3911, 756, 146, 555}, {3924, 801, 152, 491}},
        StageRow{{3512, 588, 86, 433}, {3504, 612, 92, 411}}},
       {2.54, 2.38, 1.30},
       {0.00, 2.72, 16.29},
       {2.54, 5.10, 17.59}},
      {"amazon scenario5 low/51-99", "amazon",
       {StageRow{{27, 4, 5, 8}, {28, 4, 5, 7}},
        StageRow{{26, 4, 4, 7}, {26, 4, 4, 7}},
        StageRow{{19, 3, 2, 7}, {18, 3, 3, 7}}},
       {4.55, 0.00, 6.45},
       {0.00, 6.82, 29.55},
       {4.55, 6.82, 36.00}},
      {"google scenario5 low/51-99", "google",
       {StageRow{{6041, 1566, 324, 803}, {6070, 1604, 305, 755}},
        StageRow{{5860, 1509, 277, 767}, {5881, 1540, 261, 731}},
        StageRow{{5139, 1162, 148, 606}, {5120, 1187, 142, 606}}},
       {1.53, 1.24, 0.71},
       {0.00, 3.68, 19.22},
       {1.53, 4.91, 19.93}},
      {"amazon scenario6 low/0-50", "amazon",
       {StageRow{{18779, 10504, 1819, 4423}, {19144, 10706, 1660, 4015}},
        StageRow{{17988, 10064, 1669, 4324}, {18317, 10262, 1517, 3949}},
        StageRow{{13792, 7295, 885, 3511}, {13919, 7415, 823, 3326}}},
       {3.19, 3.10, 1.94},
       {0.00, 4.17, 28.27},
       {3.19, 7.26, 30.21}},
      {"google scenario6 low/0-50", "google",
       {StageRow{{10014, 2175, 476, 1269}, {10067, 2224, 463, 1180}},
        StageRow{{9664, 2047, 423, 1235}, {9708, 2099, 412, 1150}},
        StageRow{{8462, 1497, 213, 976}, {8448, 1514, 224, 962}}},
       {1.46, 1.44, 0.50},
       {0.00, 4.05, 19.99},
       {1.46, 5.49, 20.50}},
      {"goodreads scenario6 low/0-50", "goodreads",
       {StageRow{{22643, 9750, 2634, 10447}, {22810, 9953, 2314, 10397}},
        StageRow{{20588, 8778, 2153, 9787}, {20686, 8908, 1891, 9821}},
        StageRow{{15529, 7153, 1246, 8738}, {15334, 7230, 1237, 8865}}},
       {1.63, 1.27, 1.25},
       {0.00, 9.17, 28.17},
       {1.63, 10.43, 29.41}},
  };
  return fixtures;
}

// goodreads scenario3: the source metrics table is corrupt for the last
// stage ("#VALUE!"), but its confusion matrix carries usable counts. Only
// the first two stages have printed metric values.
struct PartialMetricFixture {
  std::array<StageRow, 3> stages;
  std::array<double, 2> printed_net;   // ALL, w/o irrelevant
  std::array<double, 2> printed_cond;
  std::array<double, 2> printed_total;
};

inline const PartialMetricFixture& goodreads_scenario3() {
  static const PartialMetricFixture fixture = {
      {StageRow{{49670, 17716, 4838, 20989}, {50223, 18029, 4145, 20816}},
       StageRow{{45491, 15713, 3974, 19584}, {45794, 15923, 3438, 19607}},
       // Last stage reconstructed from the confusion-matrix marginals.
       StageRow{{36496, 12952, 2497, 17761}, {36198, 13096, 2370, 18042}}},
      {1.86, 1.26},
      {0.00, 9.07},
      {1.86, 10.33}};
  return fixture;
}

// Confusion grids for the amazon base case, one per refinement stage.
// Rows: direct pos/neg/neu/inconsistent; columns: ssas in the same order.
using ConfusionGrid = std::array<std::array<std::uint64_t, 4>, 4>;

inline const std::array<ConfusionGrid, 3>& amazon_base_confusion() {
  static const std::array<ConfusionGrid, 3> grids = {{
      {{{82192, 88, 194, 2464},
        {117, 41705, 298, 1159},
        {605, 237, 5211, 1581},
        {3947, 2092, 1422, 12433}}},
      {{{79173, 78, 161, 2398},
        {101, 40177, 257, 1119},
        {525, 209, 4687, 1508},
        {3766, 2025, 1370, 12269}}},
      {{{63465, 2, 8, 1941},
        {0, 30084, 4, 815},
        {119, 4, 2635, 1004},
        {2756, 1369, 933, 10963}}},
  }};
  return grids;
}

// Scenario datapoint counts with printed 1-decimal conditioning values.
struct ConditioningFixture {
  std::string name;
  std::array<std::uint64_t, 3> datapoints;  // ALL, w/o irr, w/o irr+out
  std::array<double, 3> printed_cond;       // 1-decimal
};

inline const std::vector<ConditioningFixture>& conditioning_fixtures() {
  static const std::vector<ConditioningFixture> fixtures = {
      {"amazon base", {155745, 149823, 116102}, {0.0, 3.8, 25.5}},
      {"google base", {121826, 117528, 96434}, {0.0, 3.5, 20.8}},
      {"goodreads base", {157407, 143400, 117133}, {0.0, 8.9, 25.6}},
      {"amazon scenario1", {17131, 16442, 12646}, {0.0, 4.0, 26.2}},
      {"amazon scenario2", {59858, 57404, 44441}, {0.0, 4.1, 25.8}},
      {"google scenario2", {93640, 90378, 73612}, {0.0, 3.5, 21.4}},
      {"goodreads scenario2", {18720, 17332, 14761}, {0.0, 7.4, 21.1}},
      {"amazon scenario3", {42477, 41203, 32976}, {0.0, 3.0, 22.4}},
      {"google scenario3", {5518, 5368, 4619}, {0.0, 2.7, 16.3}},
      {"goodreads scenario3", {93213, 84762, 69706}, {0.0, 9.1, 25.2}},
      {"amazon scenario5", {44, 41, 31}, {0.0, 6.8, 29.5}},
      {"google scenario5", {8734, 8413, 7055}, {0.0, 3.7, 19.2}},
      {"amazon scenario6", {35525, 34045, 25483}, {0.0, 4.2, 28.3}},
      {"google scenario6", {13934, 13369, 11148}, {0.0, 4.1, 20.0}},
      {"goodreads scenario6", {45474, 41306, 32666}, {0.0, 9.2, 28.2}},
  };
  return fixtures;
}

// Hierarchy census for the amazon dataset: per theme, datapoints surviving
// each refinement stage. Drives the synthetic assignments fixture whose
// stage totals must come out to 155745 / 149823 / 116102.
struct ThemeCensusRow {
  int theme_id;
  std::uint64_t all_points;
  std::uint64_t without_irrelevant;
  std::uint64_t without_irrelevant_outlier;
};

inline const std::vector<ThemeCensusRow>& amazon_theme_census() {
  static const std::vector<ThemeCensusRow> rows = {
      {-1, 637, 0, 0},     {0, 46974, 44945, 35384}, {1, 41568, 39507, 32664},
      {2, 15464, 15095, 11456}, {3, 14701, 14511, 12067}, {4, 14298, 14033, 10445},
      {5, 10803, 10696, 8234},  {6, 4204, 4138, 2242},    {7, 2351, 2163, 1215},
      {8, 2251, 2249, 1200},    {9, 803, 795, 419},       {10, 515, 515, 195},
      {11, 486, 486, 148},      {12, 396, 396, 306},      {13, 294, 294, 127},
  };
  return rows;
}

}  // namespace fixtures
