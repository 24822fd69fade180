#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "xtpath/io.hpp"

namespace fs = std::filesystem;
using xtpath::read_file;
using xtpath::write_file_atomic;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(XTPATH_CLI) + " " + args + " 2>/dev/null";
  Run r{0, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("xtpath_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string p(const std::string& rel) const { return (dir_ / rel).string(); }

  // One domain, one page: the unshifted product page with three labels.
  void toy_corpus() {
    write_file_atomic(dir_ / "corpus" / "shop" / "s1" / "pages" / "a.html", std::string(fixtures::kUnshifted));
    write_file_atomic(dir_ / "corpus" / "shop" / "s1" / "groundtruth.csv",
                      "page_id,attribute,expected_value\na,name,Name\na,desc,Desc\na,info,Info\n");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, LearnThenExtractUnshiftedUsesXPath) {
  toy_corpus();
  ASSERT_EQ(run("learn --corpus " + p("corpus") + " --model " + p("m.json")).status, 0);
  write_file_atomic(p("page.html"), std::string(fixtures::kUnshifted));
  auto r = run("extract --model " + p("m.json") + " --page " + p("page.html"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "desc\txpath\tDesc\ninfo\txpath\tInfo\nname\txpath\tName\n");
}

TEST_F(CliTest, ShiftedPageFallsBackToTreePath) {
  toy_corpus();
  ASSERT_EQ(run("learn --corpus " + p("corpus") + " --model " + p("m.json")).status, 0);
  write_file_atomic(p("page.html"), std::string(fixtures::kSaleSibling));
  auto xt = run("extract --model " + p("m.json") + " --page " + p("page.html"));
  ASSERT_EQ(xt.status, 0);
  EXPECT_NE(xt.out.find("name\ttreepath\tName\n"), std::string::npos) << xt.out;
  auto xp = run("extract --method xpath --model " + p("m.json") + " --page " + p("page.html"));
  ASSERT_EQ(xp.status, 0);
  EXPECT_NE(xp.out.find("name\tnot-found\t\n"), std::string::npos) << xp.out;
}

TEST_F(CliTest, ExtractTrace) {
  toy_corpus();
  ASSERT_EQ(run("learn --corpus " + p("corpus") + " --model " + p("m.json")).status, 0);
  write_file_atomic(p("page.html"), std::string(fixtures::kSaleSibling));
  auto r = run("extract --method treepath --trace --model " + p("m.json") + " --page " + p("page.html"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("# trace name\nstep0 "), std::string::npos) << r.out;
}

TEST_F(CliTest, ModelFileIsJson) {
  toy_corpus();
  ASSERT_EQ(run("learn --corpus " + p("corpus") + " --model " + p("m.json")).status, 0);
  std::string m = read_file(p("m.json"));
  EXPECT_EQ(m.front(), '{');
  EXPECT_NE(m.find("/html/div/div/div[1]/span"), std::string::npos);
}

TEST_F(CliTest, EvaluateShiftFreeCorpusIsPerfect) {
  ASSERT_EQ(run("generate --out " + p("c") + " --verticals books,jobs --domains-per-vertical 1 --pages-per-domain 12")
                .status,
            0);
  auto r = run("evaluate --corpus " + p("c") + " --out " + p("out") + " --fractions 0.5 --iterations 20 --sample-size 4");
  ASSERT_EQ(r.status, 0);
  std::string curves = read_file(p("out/curves.csv"));
  EXPECT_EQ(curves,
            "method,fraction,precision,recall,f1,stderr\n"
            "xpath,0.50,1.000,1.000,1.000,0.000\n"
            "treepath,0.50,1.000,1.000,1.000,0.000\n"
            "xtpath,0.50,1.000,1.000,1.000,0.000\n");
  EXPECT_EQ(r.out, curves);
  EXPECT_TRUE(fs::exists(p("out/per_vertical.csv")));
  EXPECT_TRUE(fs::exists(p("out/per_domain_f1.csv")));
}

TEST_F(CliTest, EvaluateIsDeterministic) {
  ASSERT_EQ(run("generate --out " + p("c") + " --verticals autos --domains-per-vertical 2 --pages-per-domain 15 "
                "--shift-rate 0.5 --seed 4")
                .status,
            0);
  const std::string args = "evaluate --corpus " + p("c") + " --fractions 0.3,0.7 --iterations 30 --sample-size 5 "
                           "--inject-shift-rate 0.5 --seed 8 --out ";
  ASSERT_EQ(run(args + p("o1")).status, 0);
  ASSERT_EQ(run(args + p("o2")).status, 0);
  for (const char* f : {"curves.csv", "per_vertical.csv", "per_domain_f1.csv"})
    EXPECT_EQ(read_file(dir_ / "o1" / f), read_file(dir_ / "o2" / f)) << f;
}

TEST_F(CliTest, EntropyFromCounts) {
  std::string counts = "domain,attribute,xpath,count\n";
  const int title[] = {79, 44, 20, 9, 577, 1237};
  for (int i = 0; i < 6; ++i)
    counts += "deepdiscount,title,/html/div[" + std::to_string(i + 1) + "]," + std::to_string(title[i]) + "\n";
  counts += "deepdiscount,author,/html/p[1],738\ndeepdiscount,author,/html/p[2],1257\n";
  write_file_atomic(p("counts.csv"), counts);
  auto r = run("entropy --counts " + p("counts.csv") + " --out " + p("e"));
  ASSERT_EQ(r.status, 0);
  std::string attrs = read_file(p("e/entropy_by_attribute.csv"));
  EXPECT_NE(attrs.find("deepdiscount,title,6,1966,0.937\n"), std::string::npos) << attrs;
  EXPECT_NE(attrs.find("deepdiscount,author,2,1995,0.659\n"), std::string::npos) << attrs;
  EXPECT_EQ(read_file(p("e/entropy_by_domain.csv")), "domain,entropy\ndeepdiscount,0.798\n");
  EXPECT_FALSE(fs::exists(p("e/entropy_vs_f1.csv")));
}

TEST_F(CliTest, EntropyFromCorpusWritesAllReports) {
  ASSERT_EQ(run("generate --out " + p("c") + " --verticals books --domains-per-vertical 2 --pages-per-domain 10 "
                "--templates 2")
                .status,
            0);
  ASSERT_EQ(run("entropy --corpus " + p("c") + " --out " + p("e") + " --iterations 20").status, 0);
  for (const char* f : {"compatibility.csv", "entropy_by_attribute.csv", "entropy_by_domain.csv", "entropy_vs_f1.csv",
                        "entropy_trendlines.csv"})
    EXPECT_TRUE(fs::exists(dir_ / "e" / f)) << f;
}

TEST_F(CliTest, ShiftScriptVertical) {
  write_file_atomic(p("page.html"), std::string(fixtures::kUnshifted));
  write_file_atomic(p("s.txt"), "vertical /html/div/div/div[1]/span div\n");
  auto r = run("shift --page " + p("page.html") + " --script " + p("s.txt") + " --out " + p("o.html"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "vertical /html/div/div/div[1]/span div\n");
  auto shifted = xtpath::parse_document(read_file(p("o.html")));
  EXPECT_EQ(xtpath::serialize(shifted), std::string(fixtures::kVertical));
  EXPECT_EQ(xtpath::node_text(fixtures::at(shifted, "/html/div/div/div[1]/div/span")), "Name");
}

TEST_F(CliTest, RandomShiftIsSeeded) {
  write_file_atomic(p("page.html"), std::string(fixtures::kUnshifted));
  auto a = run("shift --page " + p("page.html") + " --count 3 --seed 5 --out " + p("a.html"));
  auto b = run("shift --page " + p("page.html") + " --count 3 --seed 5 --out " + p("b.html"));
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read_file(p("a.html")), read_file(p("b.html")));
}

TEST_F(CliTest, Errors) {
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run("learn --corpus " + p("empty") + " --model " + p("m.json")).status, 1);
  EXPECT_EQ(run("evaluate --corpus " + p("empty") + " --out " + p("o")).status, 1);
  toy_corpus();
  ASSERT_EQ(run("learn --corpus " + p("corpus") + " --model " + p("m.json")).status, 0);
  write_file_atomic(p("bad.html"), "<html><div></html>");
  EXPECT_EQ(run("extract --model " + p("m.json") + " --page " + p("bad.html")).status, 2);
  write_file_atomic(p("page.html"), std::string(fixtures::kUnshifted));
  EXPECT_EQ(run("extract --method bogus --model " + p("m.json") + " --page " + p("page.html")).status, 1);
  EXPECT_EQ(run("entropy --out " + p("e")).status, 1);
  EXPECT_NE(run("frobnicate").status, 0);
}
