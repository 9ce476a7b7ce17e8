#include "partmod/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "partmod/sequences.hpp"

namespace partmod {
namespace {

namespace fs = std::filesystem;

class SweepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng{std::random_device{}()};
    dir_ = fs::temp_directory_path() / ("partmod-sweep-test-" + std::to_string(rng()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string bytes_of(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }

  fs::path dir_;
};

TEST(SweepEquidistribution, ExactHitAtSquaresMod5) {
  const SweepResult r = sweep_q71(2, 5, 6);
  ASSERT_EQ(r.cells.size(), 6u);
  EXPECT_EQ(r.cells[5].status, "consistent");  // k=6: every class exactly 1/5
  EXPECT_EQ(r.cells[5].payload.at("max_delta"), "0");
  EXPECT_EQ(r.cells[3].status, "inconclusive");  // k=4 is off balance
  EXPECT_EQ(r.cells[3].payload.at("densities")[1], "73/360");
  EXPECT_EQ(r.verdict, "consistent");
  EXPECT_EQ(r.params.at("seq"), "power:2");
}

TEST(SweepEquidistribution, SmallGridStaysInconclusive) {
  const SweepResult r = sweep_q71(1, 2, 1);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].status, "inconclusive");
  EXPECT_EQ(r.cells[0].payload.at("max_delta"), "1/2");  // densities are 0 and 1
  EXPECT_EQ(r.verdict, "inconclusive");
}

TEST(SweepSymmetry, EvenLevelsJudgeOddLevelsAreControls) {
  const SweepResult r = sweep_q72(2, 5, 4);
  ASSERT_EQ(r.cells.size(), 4u);
  EXPECT_TRUE(r.cells[0].control);
  EXPECT_FALSE(r.cells[1].control);
  EXPECT_EQ(r.cells[1].status, "consistent");  // k=2 symmetric
  EXPECT_EQ(r.cells[3].status, "consistent");  // k=4: d1=d4, d2=d3
  EXPECT_EQ(r.cells[3].payload.at("max_diff"), "0");
  // Odd k genuinely breaks the symmetry, but controls never set the verdict.
  EXPECT_EQ(r.cells[2].status, "inconclusive");
  EXPECT_FALSE(r.cells[2].payload.at("symmetric").get<bool>());
  EXPECT_EQ(r.verdict, "consistent");
}

TEST(SweepSymmetry, RecordsTheBrokenPairAtOddLevels) {
  const SweepResult r = sweep_q72(2, 4, 3);
  ASSERT_EQ(r.cells.size(), 3u);
  const SweepCell& odd = r.cells[2];  // k=3: classes 1 and 3 disagree
  EXPECT_TRUE(odd.control);
  const json& pair = odd.payload.at("pairs")[0];
  EXPECT_EQ(pair.at("d_j"), "5/24");
  EXPECT_EQ(pair.at("d_mj"), "11/72");
  EXPECT_EQ(odd.payload.at("max_diff"), "1/18");
  EXPECT_EQ(r.verdict, "consistent");  // the even level k=2 is an exact hit
}

TEST(SweepOddDensity, GeometricPartsDriftAwayFromHalf) {
  const SweepResult r = sweep_q73({PartSequence::mary(2)}, 5, "finite");
  ASSERT_EQ(r.cells.size(), 5u);
  EXPECT_EQ(r.cells[4].payload.at("odd_density"), "1/16");
  EXPECT_EQ(r.cells[4].payload.at("delta_from_half"), "7/16");
  EXPECT_TRUE(r.cells[4].payload.at("prefix_gcd_is_1").get<bool>());
  EXPECT_EQ(r.cells[4].payload.at("prime_support"), "finite");
  // k=2 hits one half exactly (period 4, odd at n = 0, 1); the rest drift.
  EXPECT_EQ(r.cells[1].payload.at("odd_density"), "1/2");
  EXPECT_EQ(r.cells[1].status, "consistent");
  for (std::size_t idx : {0u, 2u, 3u, 4u}) EXPECT_EQ(r.cells[idx].status, "inconclusive");
  EXPECT_EQ(r.verdict, "consistent");
}

TEST(SweepOddDensity, FlagsNonCoprimePrefixes) {
  const SweepResult r = sweep_q73({PartSequence::explicit_list({2, 4})}, 2, "unknown");
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_FALSE(r.cells[0].payload.at("prefix_gcd_is_1").get<bool>());
  // Multiples of 2 alone split the line evenly: an exact half.
  EXPECT_EQ(r.cells[0].status, "consistent");
  EXPECT_EQ(r.cells[0].payload.at("odd_density"), "1/2");
}

TEST(SweepBoundAttainment, SinglePartsAttainTheBound) {
  const SweepResult r =
      search_q74({PartSequence::explicit_list({1}), PartSequence::explicit_list({5})}, 1, 1);
  ASSERT_EQ(r.cells.size(), 2u);
  for (const SweepCell& c : r.cells) {
    EXPECT_EQ(c.status, "consistent");
    EXPECT_TRUE(c.payload.at("hit").get<bool>());
    EXPECT_EQ(c.payload.at("gap"), "0");
  }
  EXPECT_EQ(r.verdict, "consistent");
}

TEST(SweepBoundAttainment, TruncatedGridForFiniteLists) {
  // Explicit lists contribute only the k values they have terms for; the
  // infinite family fills the whole range.
  const SweepResult r =
      search_q74({PartSequence::explicit_list({1}), PartSequence::power(2)}, 1, 3);
  ASSERT_EQ(r.cells.size(), 4u);  // list:1 at k=1; power:2 at k=1,2,3
  EXPECT_EQ(r.cells[0].seq, "list:1");
  EXPECT_EQ(r.cells[0].k, 1u);
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_EQ(r.cells[i].seq, "power:2");
    EXPECT_EQ(r.cells[i].k, static_cast<std::uint32_t>(i));
  }
  EXPECT_EQ(r.verdict, "consistent");  // the single-part cells attain the bound
  const SweepResult odd = sweep_q73({PartSequence::explicit_list({3, 9})}, 4);
  ASSERT_EQ(odd.cells.size(), 2u);  // k = 1, 2 only
}

TEST(SweepBoundAttainment, ReportsTheGapWhenMissed) {
  const SweepResult r = search_q74({PartSequence::power(2)}, 3, 3);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].status, "inconclusive");
  EXPECT_EQ(r.cells[0].payload.at("gap"), "73/252");
  EXPECT_EQ(r.cells[0].payload.at("bound"), "1/14");
  EXPECT_EQ(r.verdict, "inconclusive");
}

TEST(SweepCells, LineRoundTripStripsTheEnvelope) {
  SweepCell cell{"triangular", 3, 2, true, "inconclusive",
                 json{{"odd_density", "1/4"}, {"note", "x"}}};
  const json line = detail::cell_to_line("7.3", cell);
  EXPECT_EQ(line.at("question"), "7.3");
  EXPECT_EQ(line.at("seq"), "triangular");
  EXPECT_EQ(line.at("odd_density"), "1/4");
  const SweepCell back = detail::cell_from_line(line);
  EXPECT_EQ(back.seq, cell.seq);
  EXPECT_EQ(back.k, cell.k);
  EXPECT_EQ(back.m, cell.m);
  EXPECT_EQ(back.control, cell.control);
  EXPECT_EQ(back.status, cell.status);
  EXPECT_EQ(back.payload, cell.payload);
}

TEST_F(SweepTest, JsonlAndCsvOutputs) {
  const SweepResult r =
      search_q74({PartSequence::explicit_list({5}), PartSequence::power(2)}, 1, 1);
  write_sweep_jsonl(r, dir_ / "out.jsonl");
  write_sweep_csv(r, dir_ / "out.csv");

  std::ifstream is(dir_ / "out.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(is, line)) {
    const json doc = json::parse(line);
    EXPECT_EQ(doc.at("question"), "7.4");
    ++lines;
  }
  EXPECT_EQ(lines, r.cells.size());

  const std::string csv = bytes_of(dir_ / "out.csv");
  EXPECT_EQ(csv.rfind("question,seq,k,m,control,status,metric,value\n", 0), 0u);
  EXPECT_NE(csv.find("7.4,list:5,1,2,no,consistent,gap,0"), std::string::npos);
  EXPECT_NE(csv.find("7.4,,,,,,verdict," + r.verdict), std::string::npos);
  // No temp files linger after the atomic renames.
  for (const auto& entry : fs::directory_iterator(dir_))
    EXPECT_EQ(entry.path().extension().string().rfind(".tmp", 0), std::string::npos);
}

TEST_F(SweepTest, RerunsFromTheirOwnOutputAreByteIdentical) {
  const fs::path first = dir_ / "first.jsonl";
  const fs::path second = dir_ / "second.jsonl";
  write_sweep_jsonl(sweep_q73({PartSequence::mary(2)}, 3), first);
  SweepOptions resume;
  resume.resume_jsonl = first;
  write_sweep_jsonl(sweep_q73({PartSequence::mary(2)}, 3, "unknown", resume), second);
  EXPECT_EQ(bytes_of(first), bytes_of(second));
}

TEST_F(SweepTest, ResumeReusesStoredCellsVerbatim) {
  // A planted cell with an impossible payload must be served as-is: resumed
  // cells are trusted, not recomputed.
  const fs::path planted = dir_ / "planted.jsonl";
  {
    std::ofstream os(planted);
    os << R"({"question":"7.3","seq":"mary:2","k":2,"m":2,"control":false,)"
       << R"("status":"inconclusive","odd_density":"9/7","note":"planted"})" << "\n";
  }
  SweepOptions resume;
  resume.resume_jsonl = planted;
  const SweepResult r = sweep_q73({PartSequence::mary(2)}, 2, "unknown", resume);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.cells[1].payload.at("odd_density"), "9/7");
  EXPECT_EQ(r.cells[1].payload.at("note"), "planted");
  // The k=1 cell was not in the file and is computed for real.
  EXPECT_EQ(r.cells[0].payload.at("odd_density"), "1");
}

TEST_F(SweepTest, ResourceLimitedCellsAreRetried) {
  const fs::path planted = dir_ / "limited.jsonl";
  {
    std::ofstream os(planted);
    os << R"({"question":"7.3","seq":"mary:2","k":1,"m":2,"control":false,)"
       << R"("status":"resource-limited","error":"planted"})" << "\n";
  }
  SweepOptions resume;
  resume.resume_jsonl = planted;
  const SweepResult r = sweep_q73({PartSequence::mary(2)}, 1, "unknown", resume);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].status, "inconclusive");  // recomputed, not reused
  EXPECT_EQ(r.cells[0].payload.at("odd_density"), "1");
  EXPECT_FALSE(r.cells[0].payload.contains("error"));
}

TEST_F(SweepTest, ResourceLimitsAreRecordedNotThrown) {
  SweepOptions tight;
  tight.compute.memory_cap = 8;
  const SweepResult r = search_q74({PartSequence::power(2)}, 3, 3, 2, tight);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].status, "resource-limited");
  EXPECT_NE(r.cells[0].payload.at("error").get<std::string>().find("memory cap"),
            std::string::npos);
  EXPECT_EQ(r.verdict, "inconclusive");
}

TEST(SweepWorkers, ParallelRunsMatchSerialRuns) {
  SweepOptions serial;
  serial.workers = 1;
  SweepOptions parallel;
  parallel.workers = 4;
  const json a = to_json(sweep_q71(2, 5, 4, serial));
  const json b = to_json(sweep_q71(2, 5, 4, parallel));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(SweepJson, EmbedsCellsWithEnvelopes) {
  const json doc = to_json(search_q74({PartSequence::explicit_list({1})}, 1, 1));
  EXPECT_EQ(doc.at("question"), "7.4");
  EXPECT_EQ(doc.at("verdict"), "consistent");
  EXPECT_EQ(doc.at("cells")[0].at("seq"), "list:1");
  EXPECT_EQ(doc.at("params").at("k_min"), 1);
}

}  // namespace
}  // namespace partmod
