#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sheafstrata/cli.hpp"

using namespace sheafstrata;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, AuditPrintsNinePassingRows) {
  auto r = run({"audit"});
  ASSERT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 9u);
  const std::vector<std::string> codims = {"0", "1", "4", "4", "4", "5", "6", "8", "10"};
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_TRUE(ls[k].ends_with("pass")) << ls[k];
    EXPECT_NE(ls[k].find("codim=" + codims[k] + " "), std::string::npos) << ls[k];
  }
}

TEST(Cli, SampleThenClassify) {
  auto s = run({"sample", "X5", "--seed", "7"});
  ASSERT_EQ(s.code, 0);
  auto c = run({"classify"}, s.out);
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(first_line(c.out), "stratum=X5 triple=1,1,4");
  for (auto st : kAllStrata) {
    auto p = run({"sample", name(st), "--seed", "3"});
    ASSERT_EQ(p.code, 0) << name(st);
    auto q = run({"classify", "-"}, p.out);
    EXPECT_EQ(first_line(q.out), "stratum=" + name(st) + " triple=" + to_string(info(st).triple));
    EXPECT_NE(q.out.find("status=ok"), std::string::npos);
  }
}

TEST(Cli, OutputIsDeterministic) {
  for (auto st : {"X0", "X3D", "X6"}) {
    auto a = run({"sample", st, "--seed", "11"});
    auto b = run({"sample", st, "--seed", "11"});
    EXPECT_EQ(a.out, b.out);
    auto ca = run({"classify", "--json"}, a.out);
    auto cb = run({"classify", "--json"}, b.out);
    EXPECT_EQ(ca.out, cb.out);
  }
  EXPECT_NE(run({"sample", "X0", "--seed", "1"}).out, run({"sample", "X0", "--seed", "2"}).out);
}

TEST(Cli, JsonRoundTrip) {
  Rng rng(101);
  for (auto st : kAllStrata) {
    Presentation p = sample(st, rng);
    EXPECT_EQ(parse_presentation(to_json(p).dump()), p);
    auto d = run({"dualize", "--twist", "0"}, to_json(p).dump());
    ASSERT_EQ(d.code, 0);
    EXPECT_EQ(parse_presentation(d.out), dualize(p, 0));
  }
}

TEST(Cli, DomainErrorsExitOne) {
  auto r = run({"classify"}, R"({"source":[-4],"target":[2],"entries":[["0"]]})");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(first_line(r.out), "error=not-injective");
  auto bad = run({"classify"}, "{not json");
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(first_line(bad.out), "error=parse-error");
  auto deg = run({"classify"}, R"({"source":[-4],"target":[2],"entries":[["X^5"]]})");
  EXPECT_EQ(deg.code, 1);
  EXPECT_EQ(first_line(deg.out), "error=degree-mismatch");
  auto missing = run({"classify", "/nonexistent/file.json"});
  EXPECT_EQ(missing.code, 1);
  auto hp = run({"classify"}, R"({"source":[-1],"target":[0],"entries":[["X"]]})");
  EXPECT_EQ(hp.code, 1);
  EXPECT_EQ(first_line(hp.out), "error=no-stratum-match");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"classify", "--bogus"}).code, 2);
  EXPECT_EQ(run({"sample", "X9"}).code, 2);
  EXPECT_EQ(run({"sample", "X1", "--height", "0"}).code, 2);
  EXPECT_EQ(run({"blowdown", "--variant", "8"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, PrimeOverride) {
  auto s = run({"sample", "X3", "--seed", "5"});
  ::setenv(cli::kPrimeEnv, "13", 1);
  auto k = run({"kron", "check", "--block", "0,4,1,4", "--trials", "200"}, s.out);
  EXPECT_EQ(k.code, 0);
  EXPECT_NE(k.out.find("verdict=semistable-probabilistic"), std::string::npos);
  ::setenv(cli::kPrimeEnv, "12", 1);
  EXPECT_EQ(run({"kron", "check", "--block", "0,4,1,4"}, s.out).code, 2);
  ::unsetenv(cli::kPrimeEnv);
  EXPECT_EQ(run({"kron", "check", "--block", "0,4,1,4", "--prime", "15"}, s.out).code, 2);
  EXPECT_EQ(run({"kron", "check", "--block", "0,4,1,4", "--prime", "101", "--trials", "300"}, s.out).code, 0);
}

TEST(Cli, KronFindsPlantedWitness) {
  const std::string bad =
      R"({"source":[-1,-1,-1],"target":[0,0],"entries":[["X","Y","0"],["0","0","X"]]})";
  auto r = run({"kron", "check"}, bad);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict=unstable-certified"), std::string::npos);
  EXPECT_NE(r.out.find("witness_u="), std::string::npos);
}

TEST(Cli, VerifyReportsFailures) {
  Rng rng(103);
  Presentation p = sample(StratumId::X4, rng);
  p(0, 0) = p(0, 1) * parse_form("X");
  auto r = run({"verify", "--stratum", "x4"}, to_json(p).dump());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("all_pass=false"), std::string::npos);
  auto mismatch = run({"verify", "--stratum", "X0"}, to_json(p).dump());
  EXPECT_EQ(mismatch.code, 1);
  EXPECT_EQ(first_line(mismatch.out), "error=twist-mismatch");
}

TEST(Cli, Builders) {
  auto sx = run({"build", "sextic", "--f", "X^6 + Y^6 + Z^6"});
  ASSERT_EQ(sx.code, 0);
  EXPECT_EQ(first_line(run({"classify"}, sx.out).out), "stratum=X7 triple=3,3,8");
  EXPECT_EQ(run({"build", "sextic", "--f", "X^5"}).code, 1);

  const auto dir = std::filesystem::temp_directory_path() / "sheafstrata_cli_test";
  std::filesystem::create_directories(dir);
  const auto pts = (dir / "points.txt").string();
  std::ofstream(pts) << "# six points off a conic\n1 0 0\n0 1 0\n0 0 1\n1:1:1\n1,2,3\n3 1 2\n";
  auto jz = run({"build", "jz3", "--points", pts, "--seed", "2"});
  ASSERT_EQ(jz.code, 0) << jz.out << jz.err;
  EXPECT_EQ(first_line(run({"classify"}, jz.out).out), "stratum=X3 triple=0,1,3");
  auto jzd = run({"dualize"}, jz.out);
  EXPECT_EQ(first_line(run({"classify"}, jzd.out).out), "stratum=X3D triple=1,0,3");

  auto x5 = run({"build", "x5", "--q1", "Y*Z", "--l1", "X", "--q2", "X*Y", "--l2", "Z"});
  ASSERT_EQ(x5.code, 0);
  EXPECT_EQ(first_line(run({"classify"}, x5.out).out), "stratum=X5 triple=1,1,4");
  auto bad5 = run({"build", "x5", "--q1", "X*Y", "--l1", "X", "--q2", "X*Y", "--l2", "Z"});
  EXPECT_EQ(bad5.code, 1);

  const auto out6 = (dir / "x6.json").string();
  auto x6 = run({"build", "x6", "--p1", "1:0:0", "--p2", "0:0:1", "-o", out6});
  ASSERT_EQ(x6.code, 0);
  EXPECT_EQ(first_line(run({"classify", out6}).out), "stratum=X6 triple=2,2,6");
  std::filesystem::remove_all(dir);
}

TEST(Cli, CohomologyAndBlowdown) {
  auto sx = run({"build", "sextic", "--f", "X^6 + Y^6 + Z^6"});
  auto c = run({"cohomology", "--twist", "0"}, sx.out);
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(first_line(c.out), "twist=0 h0=6 h1=3 chi=3");
  EXPECT_NE(c.out.find("triple=3,3,8"), std::string::npos);

  Rng rng(107);
  for (auto v : {BlowdownVariant::seven, BlowdownVariant::ten}) {
    Presentation p = random_blowdown_input(v, rng, 4);
    auto r = run({"blowdown", "--variant", std::to_string(static_cast<int>(v))}, to_json(p).dump());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("match=true"), std::string::npos);
    auto img = lines(r.out)[1].substr(6);
    EXPECT_EQ(parse_presentation(img), blowdown(p, v));
  }
}
