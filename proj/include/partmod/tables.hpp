#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partmod/cache.hpp"
#include "partmod/density.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/rational.hpp"
#include "partmod/sequences.hpp"

// Golden density tables and their reproduction. Each fixture row pins the
// exact density of one residue class for k = 1..k_max; reproduction
// recomputes every cell from scratch and reports exact-match verdicts.
// Rows sharing a (sequence, modulus) pair reuse one report per k.

namespace partmod {

struct TableRow {
  std::string seq_spec;
  std::uint32_t m = 0;
  std::uint32_t i = 0;                // residue class the row tracks
  std::vector<std::string> values;    // exact fractions for k = 1..k_max
};

struct TableFixture {
  int id = 0;
  std::string title;
  std::uint32_t k_max = 0;
  std::vector<TableRow> rows;
};

inline const TableFixture& table_fixture(int id) {
  static const TableFixture t1{
      1,
      "square parts: odd-class density, k = 1..10",
      10,
      {{"power:2", 2, 1,
        {"1", "1/2", "13/36", "37/144", "1/2", "299/600", "253/504", "14113/28224",
         "317311/635040", "264659/529200"}}}};
  static const TableFixture t2{
      2,
      "square parts: all residue classes mod 3, 4, 5, k = 1..8",
      8,
      {{"power:2", 3, 0,
        {"0", "1/3", "5/12", "17/36", "587/1800", "361/1080", "58741/176400", "22061/66150"}},
       {"power:2", 3, 1,
        {"1", "1/3", "11/36", "19/72", "59/180", "719/2160", "58711/176400", "44089/132300"}},
       {"power:2", 3, 2,
        {"0", "1/3", "5/18", "19/72", "623/1800", "719/2160", "14737/44100", "44089/132300"}},
       {"power:2", 4, 0,
        {"0", "1/4", "13/36", "107/288", "179/720", "113/450", "17551/70560", "352999/1411200"}},
       {"power:2", 4, 1,
        {"1", "1/4", "5/24", "37/288", "21/80", "299/1200", "4433/17640", "14113/56448"}},
       {"power:2", 4, 2,
        {"0", "1/4", "5/18", "107/288", "181/720", "451/1800", "5863/23520", "117517/470400"}},
       {"power:2", 4, 3,
        {"0", "1/4", "11/72", "37/288", "19/80", "299/1200", "737/2940", "14113/56448"}},
       {"power:2", 5, 0,
        {"0", "1/5", "41/180", "17/60", "56/225", "1/5", "3917/19600", "352327/1764000"}},
       {"power:2", 5, 1,
        {"1", "1/5", "1/5", "73/360", "281/1800", "1/5", "8843/44100", "706799/3528000"}},
       {"power:2", 5, 2,
        {"0", "1/5", "13/60", "7/45", "199/900", "1/5", "11801/58800", "117479/588000"}},
       {"power:2", 5, 3,
        {"0", "1/5", "1/6", "7/45", "377/1800", "1/5", "1459/7350", "117479/588000"}},
       {"power:2", 5, 4,
        {"0", "1/5", "17/90", "73/360", "37/225", "1/5", "8839/44100", "706799/3528000"}}}};
  static const TableFixture t3{
      3,
      "polygonal-style parts: odd-class density, k = 1..8",
      8,
      {{"triangular", 2, 1,
        {"1", "1/2", "1/4", "2/5", "7/20", "129/280", "11/24", "2453/5040"}},
       {"pentagonal", 2, 1,
        {"1", "1/2", "2/5", "219/440", "1/2", "713/1496", "1867/3740", "516287/1032240"}},
       {"hexagonal", 2, 1,
        {"1", "1/2", "7/20", "83/168", "1/2", "2311/4620", "22559/45045", "39931/80080"}},
       {"squares-plus-one", 2, 1,
        {"1", "1/2", "7/20", "3/10", "149/340", "1/2", "81851/163540", "102196/204425"}}}};
  switch (id) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    default: throw std::invalid_argument("table_fixture: table id must be 1, 2, or 3");
  }
}

struct CellResult {
  std::uint32_t k = 0;
  Rational expected;
  Rational computed;
  bool match = false;
};

struct RowResult {
  TableRow row;
  std::vector<CellResult> cells;
  bool all_match = false;
};

struct TableResult {
  int id = 0;
  std::string title;
  std::vector<RowResult> rows;
  bool all_match = false;
};

inline TableResult reproduce_table(int id, const ComputeOptions& opts = {},
                                   const WindowCache* cache = nullptr) {
  const TableFixture& fixture = table_fixture(id);
  TableResult result;
  result.id = fixture.id;
  result.title = fixture.title;
  result.all_match = true;

  // One report per (sequence, modulus, k), shared by all classes.
  std::map<std::pair<std::string, std::uint32_t>, std::map<std::uint32_t, DensityReport>> reports;
  for (const TableRow& row : fixture.rows) {
    auto& per_k = reports[{row.seq_spec, row.m}];
    const PartSequence seq = PartSequence::parse(row.seq_spec);
    RowResult rr;
    rr.row = row;
    rr.all_match = true;
    for (std::uint32_t k = 1; k <= fixture.k_max; ++k) {
      auto it = per_k.find(k);
      if (it == per_k.end())
        it = per_k.emplace(k, cached_density_report(seq, k, row.m, opts, cache)).first;
      CellResult cell;
      cell.k = k;
      cell.expected = Rational::parse(row.values[k - 1]);
      cell.computed = it->second.densities[row.i];
      cell.match = cell.expected == cell.computed;
      rr.all_match = rr.all_match && cell.match;
      rr.cells.push_back(std::move(cell));
    }
    result.all_match = result.all_match && rr.all_match;
    result.rows.push_back(std::move(rr));
  }
  return result;
}

inline json to_json(const TableResult& t) {
  json rows = json::array();
  for (const RowResult& rr : t.rows) {
    json cells = json::array();
    for (const CellResult& c : rr.cells)
      cells.push_back({{"k", c.k},
                       {"expected", json_rational(c.expected)},
                       {"computed", json_rational(c.computed)},
                       {"match", c.match}});
    rows.push_back({{"seq", rr.row.seq_spec},
                    {"modulus", rr.row.m},
                    {"class", rr.row.i},
                    {"cells", std::move(cells)},
                    {"all_match", rr.all_match}});
  }
  return json{{"table", t.id},
              {"title", t.title},
              {"rows", std::move(rows)},
              {"all_match", t.all_match}};
}

inline std::string render_table_csv(const TableResult& t) {
  std::ostringstream os;
  os << "table,seq,modulus,class,k,expected,computed,match\n";
  for (const RowResult& rr : t.rows)
    for (const CellResult& c : rr.cells)
      os << t.id << ',' << rr.row.seq_spec << ',' << rr.row.m << ',' << rr.row.i << ',' << c.k
         << ',' << c.expected.str() << ',' << c.computed.str() << ','
         << (c.match ? "yes" : "no") << '\n';
  return os.str();
}

inline std::string render_table_text(const TableResult& t) {
  std::vector<std::vector<std::string>> grid;
  const std::uint32_t k_max = table_fixture(t.id).k_max;
  std::vector<std::string> head{"seq (mod m) class"};
  for (std::uint32_t k = 1; k <= k_max; ++k) head.push_back("k=" + std::to_string(k));
  grid.push_back(std::move(head));
  for (const RowResult& rr : t.rows) {
    std::vector<std::string> line{rr.row.seq_spec + " (mod " + std::to_string(rr.row.m) +
                                  ") i=" + std::to_string(rr.row.i)};
    for (const CellResult& c : rr.cells)
      line.push_back(c.computed.str() + (c.match ? "" : " [want " + c.expected.str() + "]"));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& line : grid)
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  std::ostringstream os;
  os << t.title << '\n';
  for (const auto& line : grid) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      os << line[j] << std::string(width[j] - line[j].size(), ' ');
      os << (j + 1 < line.size() ? "  " : "");
    }
    os << '\n';
  }
  os << (t.all_match ? "PASS" : "FAIL") << ": all cells "
     << (t.all_match ? "match" : "do NOT match") << " the pinned fractions\n";
  return os.str();
}

}  // namespace partmod
