#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "rabispec/io.hpp"
#include "xml_check.hpp"

namespace rs = rabispec;
namespace io = rabispec::io;

TEST(Csv, SplitAndTrim) {
  const auto f = io::split_csv_line(" a, b ,,c\r");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "b");
  EXPECT_EQ(f[2], "");
  EXPECT_EQ(f[3], "c");
}

TEST(Csv, ParseNumbers) {
  EXPECT_EQ(io::parse_double("6.345", 1), 6.345);
  EXPECT_EQ(io::parse_double("+1e-3", 1), 1e-3);
  EXPECT_EQ(io::parse_double("-0.518", 1), -0.518);
  EXPECT_THROW(io::parse_double("1,5", 1), rs::ParseError);
  EXPECT_THROW(io::parse_double("1 000", 1), rs::ParseError);
  EXPECT_THROW(io::parse_double("", 1), rs::ParseError);
  EXPECT_THROW(io::parse_double("nan", 1), rs::ParseError);
  EXPECT_THROW(io::parse_double("inf", 1), rs::ParseError);
  EXPECT_EQ(io::parse_int("3", 1), 3);
  EXPECT_THROW(io::parse_int("3.0", 1), rs::ParseError);
}

TEST(ReferenceSets, BundledFileHasNineSets) {
  const auto sets = io::load_reference_sets();
  ASSERT_EQ(sets.size(), 9u);
  std::string ids;
  for (const auto& s : sets) ids += s.id;
  EXPECT_EQ(ids, "ABCDEFGHI");
  const auto& a = io::find_set(sets, "A");
  EXPECT_EQ(a.params.delta, 1.246);
  EXPECT_EQ(a.params.epsilon, 0.0);
  EXPECT_FALSE(a.measured[2].has_value());
  EXPECT_FALSE(a.calculated[2].has_value());
  const auto& h = io::find_set(sets, "H");
  EXPECT_EQ(*h.measured[1], -0.518);
  EXPECT_EQ(*h.calculated[2], 0.523);
  EXPECT_THROW(io::find_set(sets, "J"), rs::InvalidArgument);
  EXPECT_THROW(io::load_reference_sets("/nonexistent/table1.csv"), rs::InvalidArgument);
}

TEST(ReferenceSets, RejectsMalformedInput) {
  std::istringstream wrong_header("set,delta\nA,1\n");
  EXPECT_THROW(io::read_reference_sets(wrong_header), rs::ParseError);
  std::istringstream short_row(std::string(io::kTableOneHeader) + "\nA,1,2,3\n");
  EXPECT_THROW(io::read_reference_sets(short_row), rs::ParseError);
  std::istringstream bad_value(std::string(io::kTableOneHeader) + "\nA,1,x,3,,,,,,\n");
  EXPECT_THROW(io::read_reference_sets(bad_value), rs::ParseError);
  std::istringstream bad_params(std::string(io::kTableOneHeader) + "\nA,1,0,3,,,,,,\n");
  EXPECT_THROW(io::read_reference_sets(bad_params), rs::InvalidArgument);
  std::istringstream empty("# only comments\n\n");
  EXPECT_THROW(io::read_reference_sets(empty), rs::ParseError);
}

TEST(SpectrumCsv, ReadsRowsSkippingComments) {
  std::istringstream in(
      "\xEF\xBB\xBF# measured trace\nepsilon_ghz,omega_p_ghz,s21_abs\r\n"
      "0,6.3,0.91\n\n# mid comment\n0.0, 6.31 ,0.5\n");
  const auto rows = io::read_spectrum_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].omega_p, 6.31);
  EXPECT_EQ(rows[1].s21_abs, 0.5);
  std::istringstream bad("epsilon_ghz,omega_p_ghz,s21_abs\n0,6.3\n");
  EXPECT_THROW(io::read_spectrum_csv(bad), rs::ParseError);
}

TEST(ObservationsCsv, Reads) {
  std::istringstream in("epsilon_ghz,from,to,freq_ghz\n0.5,0,1,1.3\n0.5,1,2,4.5\n");
  const auto obs = io::read_observations_csv(in);
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[1].transition, (rs::TransitionLabel{1, 2}));
  EXPECT_EQ(obs[1].frequency, 4.5);
}

namespace {

io::Table sample_table() {
  io::Table t;
  t.columns = {"x", "y", "kind"};
  t.add_row({0.0, 1.0, std::string("curve")});
  t.add_row({0.5, -0.00001, std::string("curve")});
  t.add_row({1.0, io::Cell{}, std::string("curve")});
  t.add_row({0.75, 0.25, std::string("point")});
  return t;
}

}  // namespace

TEST(Table, CsvFormatting) {
  std::ostringstream out;
  io::write_csv(out, sample_table());
  EXPECT_EQ(out.str(),
            "x,y,kind\n0.0000,1.0000,curve\n0.5000,0.0000,curve\n1.0000,,curve\n"
            "0.7500,0.2500,point\n");
  EXPECT_EQ(io::format_number(-0.00004, 4), "0.0000");
  EXPECT_EQ(io::format_number(-0.5141232, 4), "-0.5141");
  io::Table t = sample_table();
  EXPECT_THROW(t.add_row({1.0}), rs::Error);
  EXPECT_THROW(t.column("z"), rs::Error);
}

TEST(Table, JsonMatchesCsvPrecision) {
  const auto j = io::table_to_json(sample_table());
  EXPECT_EQ(j["columns"].size(), 3u);
  EXPECT_EQ(j["rows"][1]["y"].get<double>(), 0.0);
  EXPECT_TRUE(j["rows"][2]["y"].is_null());
  EXPECT_EQ(j["rows"][3]["kind"], "point");
  std::ostringstream a, b;
  io::write_json(a, j);
  io::write_json(b, io::table_to_json(sample_table()));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Svg, WellFormedAndCarriesCsvNumbers) {
  io::PlotSpec spec{"x < y & \"z\"", "x", {"y"}, "kind", "point"};
  std::ostringstream out;
  io::write_svg(out, sample_table(), spec);
  const std::string svg = out.str();
  std::string why;
  EXPECT_TRUE(rs::testing::well_formed_xml(svg, &why)) << why;
  EXPECT_NE(svg.find("points=\"0.0000,1.0000 0.5000,0.0000\""), std::string::npos);
  EXPECT_NE(svg.find("cx=\"0.7500\" cy=\"0.2500\""), std::string::npos);
  EXPECT_NE(svg.find("x &lt; y &amp; &quot;z&quot;"), std::string::npos);
}

TEST(XmlCheck, RejectsBrokenDocuments) {
  EXPECT_FALSE(rs::testing::well_formed_xml("<a><b></a>"));
  EXPECT_FALSE(rs::testing::well_formed_xml("<a x=1/>"));
  EXPECT_FALSE(rs::testing::well_formed_xml("<a>&bad;</a>"));
  EXPECT_FALSE(rs::testing::well_formed_xml("<a/><b/>"));
  EXPECT_TRUE(rs::testing::well_formed_xml("<?xml version=\"1.0\"?>\n<a x=\"1\"><b/>t</a>\n"));
}
