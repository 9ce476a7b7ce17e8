#include "partmod/tables.hpp"

#include <gtest/gtest.h>

#include "partmod/rational.hpp"

namespace partmod {
namespace {

// Reproduction walks every pinned cell; compute each table once and share.
const TableResult& reproduced(int id) {
  static const TableResult t1 = reproduce_table(1);
  static const TableResult t2 = reproduce_table(2);
  static const TableResult t3 = reproduce_table(3);
  switch (id) {
    case 1: return t1;
    case 2: return t2;
    default: return t3;
  }
}

TEST(TableFixture, ShapesArePinned) {
  const TableFixture& t1 = table_fixture(1);
  EXPECT_EQ(t1.k_max, 10u);
  ASSERT_EQ(t1.rows.size(), 1u);
  const TableFixture& t2 = table_fixture(2);
  EXPECT_EQ(t2.k_max, 8u);
  ASSERT_EQ(t2.rows.size(), 12u);
  const TableFixture& t3 = table_fixture(3);
  EXPECT_EQ(t3.k_max, 8u);
  ASSERT_EQ(t3.rows.size(), 4u);
  for (int id = 1; id <= 3; ++id)
    for (const TableRow& row : table_fixture(id).rows)
      EXPECT_EQ(row.values.size(), table_fixture(id).k_max) << "table " << id;
  EXPECT_THROW(table_fixture(0), std::invalid_argument);
  EXPECT_THROW(table_fixture(4), std::invalid_argument);
}

TEST(ReproduceTable, OddClassOfSquares) {
  const TableResult& r = reproduced(1);
  EXPECT_TRUE(r.all_match);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].cells[2].computed.str(), "13/36");
  EXPECT_EQ(r.rows[0].cells[9].computed.str(), "264659/529200");
}

TEST(ReproduceTable, AllClassesOfSquaresMod3To5) {
  const TableResult& r = reproduced(2);
  EXPECT_TRUE(r.all_match);
  ASSERT_EQ(r.rows.size(), 12u);
  EXPECT_EQ(r.rows[0].cells[4].computed.str(), "587/1800");    // mod 3, class 0, k=5
  EXPECT_EQ(r.rows[4].cells[5].computed.str(), "299/1200");    // mod 4, class 1, k=6
  EXPECT_EQ(r.rows[11].cells[7].computed.str(), "706799/3528000");  // mod 5, class 4, k=8
  // Mirror classes 1 and 4 agree at every even k but not at every odd k.
  for (std::uint32_t k = 2; k <= 8; k += 2)
    EXPECT_EQ(r.rows[8].cells[k - 1].computed.str(), r.rows[11].cells[k - 1].computed.str());
  EXPECT_EQ(r.rows[8].cells[6].computed.str(), "8843/44100");   // class 1, k=7
  EXPECT_EQ(r.rows[11].cells[6].computed.str(), "8839/44100");  // class 4, k=7
}

TEST(ReproduceTable, PolygonalStyleFamilies) {
  const TableResult& r = reproduced(3);
  EXPECT_TRUE(r.all_match);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].cells[7].computed.str(), "2453/5040");       // triangular, k=8
  EXPECT_EQ(r.rows[1].cells[7].computed.str(), "516287/1032240");  // pentagonal, k=8
  EXPECT_EQ(r.rows[2].cells[6].computed.str(), "22559/45045");     // hexagonal, k=7
  EXPECT_EQ(r.rows[3].cells[6].computed.str(), "81851/163540");    // squares-plus-one, k=7
}

TEST(RenderTable, CsvListsEveryCell) {
  const std::string csv = render_table_csv(reproduced(3));
  EXPECT_EQ(csv.rfind("table,seq,modulus,class,k,expected,computed,match\n", 0), 0u);
  EXPECT_NE(csv.find("3,triangular,2,1,8,2453/5040,2453/5040,yes"), std::string::npos);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 1 + 4 * 8u);  // header + rows * k_max
}

TEST(RenderTable, TextVerdictLine) {
  const std::string text = render_table_text(reproduced(1));
  EXPECT_NE(text.find("PASS: all cells match the pinned fractions"), std::string::npos);
  EXPECT_NE(text.find("k=10"), std::string::npos);
}

TEST(RenderTable, MismatchesAreCalledOut) {
  TableResult fake;
  fake.id = 3;
  fake.title = "tampered";
  fake.all_match = false;
  RowResult rr;
  rr.row = table_fixture(3).rows[0];
  rr.all_match = false;
  for (std::uint32_t k = 1; k <= 8; ++k) {
    CellResult cell;
    cell.k = k;
    cell.expected = Rational::parse(rr.row.values[k - 1]);
    cell.computed = Rational(7, 9);
    cell.match = false;
    rr.cells.push_back(cell);
  }
  fake.rows.push_back(rr);
  const std::string text = render_table_text(fake);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("[want 1]"), std::string::npos);
  const std::string csv = render_table_csv(fake);
  EXPECT_NE(csv.find(",no"), std::string::npos);
}

TEST(TableJson, CarriesVerdictsPerCell) {
  const json doc = to_json(reproduced(2));
  EXPECT_EQ(doc.at("table"), 2);
  EXPECT_TRUE(doc.at("all_match").get<bool>());
  ASSERT_EQ(doc.at("rows").size(), 12u);
  const json& cell = doc.at("rows")[0].at("cells")[4];
  EXPECT_EQ(cell.at("expected"), "587/1800");
  EXPECT_TRUE(cell.at("match").get<bool>());
}

}  // namespace
}  // namespace partmod
