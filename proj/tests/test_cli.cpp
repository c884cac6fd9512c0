#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "covertq/cli.hpp"
#include "covertq/parallel.hpp"

using namespace covertq;

namespace {

namespace fs = std::filesystem;

const std::string kData = COVERTQ_DATA_DIR;
const std::string kGolden = COVERTQ_GOLDEN_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "covertq");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "covertq_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, sep);) out.push_back(cell);
  return out;
}

// One diagnostic line of the form "error: kind=... code=N reason=..."
void check_error_line(const Run& r, int code) {
  CHECK(r.code == code);
  CHECK(r.err.rfind("error: kind=", 0) == 0);
  CHECK(r.err.find("code=" + std::to_string(code) + " ") != std::string::npos);
  CHECK(r.err.find("reason=") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

}  // namespace

TEST_CASE("n lists") {
  CHECK(cli::parse_n_list("1000,1e4") == std::vector<std::size_t>{1000, 10000});
  CHECK(cli::parse_n_list(" 5 , 6 ") == std::vector<std::size_t>{5, 6});
  CHECK(cli::parse_n_list("1000:100000:3") == std::vector<std::size_t>{1000, 10000, 100000});
  CHECK(cli::parse_n_list("7:7:1,9") == std::vector<std::size_t>{7, 9});
  CHECK_THROWS_AS(cli::parse_n_list(""), Error);
  CHECK_THROWS_AS(cli::parse_n_list("0"), Error);
  CHECK_THROWS_AS(cli::parse_n_list("2.5"), Error);
  CHECK_THROWS_AS(cli::parse_n_list("10:1:3"), Error);
  CHECK_THROWS_AS(cli::parse_n_list("1:10"), Error);
  CHECK_THROWS_AS(cli::parse_n_list("abc"), Error);
}

TEST_CASE("double formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(cli::format_double(x)) == x);
  CHECK(cli::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(cli::format_double(std::nan("")) == "nan");
}

TEST_CASE("report on the shipped amplitude damping example matches the golden file") {
  const Run r = run({"report", "--channel", kData + "/amplitude_damping.json", "--innocent", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == slurp(kGolden + "/amplitude_damping_report.txt"));

  const fs::path json = scratch("ad_report.json");
  const Run j = run({"report", "--channel", kData + "/amplitude_damping.json", "--innocent", "1", "--out",
                     json.string()});
  REQUIRE(j.code == 0);
  CHECK(slurp(json) == slurp(kGolden + "/amplitude_damping_report.json"));
}

TEST_CASE("report fields agree with recomputation") {
  cli::ReportInputs in;
  in.channel_file = kData + "/leak_direct.json";
  const cli::ChannelReport r = cli::build_report(in);
  CHECK(r.willie_mode == channels::WillieMode::Direct);
  CHECK(r.willie_dim == 2);
  CHECK(r.p_f == doctest::Approx(0.25).epsilon(1e-14));
  // Willie sees depolarizing 0.8 of |0>: diag(0.6, 0.4) against I/2
  CHECK(r.chi2 == doctest::Approx(0.25 / 0.6 + 0.25 / 0.4 - 1.0).epsilon(1e-13));
  CHECK(r.c_q == doctest::Approx(1.0 / std::sqrt(r.chi2)).epsilon(1e-14));
  CHECK(r.rate == doctest::Approx(rates::hashing_rate(r.p_vec)).epsilon(1e-15));
  CHECK(r.distill_rate == doctest::Approx(0.75).epsilon(1e-14));
  REQUIRE(r.thm1.size() == in.n_list.size());
  for (std::size_t i = 0; i < r.thm1.size(); ++i) {
    const double sqrt_n = std::sqrt(static_cast<double>(in.n_list[i]));
    CHECK(r.thm1[i].m_lower == doctest::Approx(0.9 * sqrt_n * r.c_q * r.rate * std::sqrt(0.05)).epsilon(1e-13));
    CHECK(r.thm2[i].m_lower == doctest::Approx(0.9 * sqrt_n * r.c_q * 0.75 * std::sqrt(0.05)).epsilon(1e-13));
  }
}

TEST_CASE("trivially covert and support failure paths") {
  const Run triv = run({"report", "--channel", kData + "/depolarizing_willie.json"});
  CHECK(triv.code == 0);
  CHECK(triv.out.find("trivially covert") != std::string::npos);
  const Run fail = run({"report", "--channel", kData + "/identity_willie.json"});
  check_error_line(fail, cli::kSupportFailure);
  CHECK(fail.err.find("kind=support_violation") != std::string::npos);
  CHECK(fail.out.empty());
}

TEST_CASE("srl curve") {
  const Run one = run({"srl-curve", "--channel", kData + "/amplitude_damping.json", "--innocent", "1", "--n", "1000"});
  REQUIRE(one.code == 0);
  const auto lines = split(one.out, '\n');
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "n,m_lower_thm1,m_lower_thm2,classical_bits_upper");
  cli::ReportInputs in;
  in.channel_file = kData + "/amplitude_damping.json";
  in.innocent = "1";
  in.n_list = {1000};
  const auto rep = cli::build_report(in);
  const auto cells = split(lines[1], ',');
  REQUIRE(cells.size() == 4);
  CHECK(std::stod(cells[1]) == rep.thm1[0].m_lower);
  CHECK(std::stod(cells[2]) == rep.thm2[0].m_lower);

  const Run grid = run({"srl-curve", "--channel", kData + "/amplitude_damping.json", "--innocent", "1"});
  REQUIRE(grid.code == 0);
  CHECK(grid.out == slurp(kGolden + "/amplitude_damping_srl.csv"));
  const auto rows = split(grid.out, '\n');
  REQUIRE(rows.size() == 10);
  double ref = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = split(rows[i], ',');
    const double ratio = std::stod(c[1]) / std::sqrt(std::stod(c[0]));
    if (i == 1) ref = ratio;
    CHECK(std::abs(ratio - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("detect-sim output") {
  const Run r = run({"detect-sim", "--channel", kData + "/leak_direct.json", "--n", "3,4", "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto rows = split(r.out, '\n');
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "n,q,vartheta,d_exact,d_product,d_chi2_bound,epsilon,chernoff,fannes,holder");
  CHECK(split(rows[1], ',').size() == 10);
  CHECK(r.err.find("covert=") != std::string::npos);
  CHECK(r.err.find("classical_bits=") != std::string::npos);

  const fs::path csv = scratch("detect.csv");
  const Run f = run({"detect-sim", "--channel", kData + "/leak_direct.json", "--n", "3,4", "--seed", "5", "--out",
                     csv.string()});
  REQUIRE(f.code == 0);
  CHECK(slurp(csv) == r.out);
  CHECK(f.out == r.err);  // summary moves to stdout when the CSV goes to a file
}

TEST_CASE("twirl-check output") {
  const fs::path csv = scratch("twirl.csv");
  const Run r = run({"twirl-check", "--channel", kData + "/leak_direct.json", "--samples", "20000", "--seed", "3",
                     "--out", csv.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("consistent") != std::string::npos);
  const auto rows = split(slurp(csv), '\n');
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "quantity,component,analytic,estimate,abs_gap");
  CHECK(rows[1].rfind("q_tw,I,", 0) == 0);
  CHECK(rows[8].rfind("p,Z,", 0) == 0);
}

TEST_CASE("every error path has its own exit code") {
  const std::string ad = kData + "/amplitude_damping.json";
  check_error_line(run({"report"}), cli::kUsage);
  check_error_line(run({"report", "--channel", ad, "--bogus", "1"}), cli::kUsage);
  check_error_line(run({}), cli::kUsage);

  const auto bad_json = write_scratch("bad.json", "{\"d_in\": 2,");
  check_error_line(run({"report", "--channel", bad_json.string()}), cli::kParseError);
  check_error_line(run({"report", "--channel", ad, "--innocent", "5"}), cli::kParseError);

  const auto not_tp = write_scratch("not_tp.json", R"({"d_in": 2, "d_out": 2, "kraus": [[[1, 0], [0, 0.9]]]})");
  check_error_line(run({"report", "--channel", not_tp.string()}), cli::kTracePreservation);

  check_error_line(run({"report", "--channel", kData + "/identity_willie.json"}), cli::kSupportFailure);

  const Run cap = run({"detect-sim", "--channel", ad, "--innocent", "1", "--n", "11"});
  check_error_line(cap, cli::kDimensionCap);
  CHECK(cap.err.find("n <= 10") != std::string::npos);

  const auto leaks = write_scratch(
      "leaks.json", R"({"d_in": 2, "d_out": 3, "kraus": [[[0, 0], [0, 0], [1, 0]], [[0, 0], [0, 0], [0, 1]]]})");
  check_error_line(run({"twirl-check", "--channel", leaks.string()}), cli::kDegenerate);
  check_error_line(run({"detect-sim", "--channel", kData + "/depolarizing_willie.json"}), cli::kDegenerate);
  // q = c_q sqrt(delta / n) above 1 for tiny n
  check_error_line(run({"detect-sim", "--channel", ad, "--innocent", "1", "--n", "1", "--delta", "0.5"}),
                   cli::kDegenerate);

  check_error_line(run({"report", "--channel", kData + "/missing.json"}), cli::kIo);
  check_error_line(run({"report", "--channel", ad, "--innocent", "1", "--out", "/nonexistent/dir/x.json"}),
                   cli::kIo);

  check_error_line(run({"report", "--channel", ad, "--innocent", "1", "--n", "0"}), cli::kInvalidInput);
  check_error_line(run({"report", "--channel", ad, "--innocent", "1", "--vartheta", "1.5"}), cli::kInvalidInput);

  const std::set<int> codes{cli::kUsage,          cli::kParseError, cli::kTracePreservation,
                            cli::kSupportFailure, cli::kDimensionCap, cli::kDegenerate,
                            cli::kIo,             cli::kInvalidInput};
  CHECK(codes.size() == 8);
}

TEST_CASE("csv output is byte identical across runs and thread counts") {
  const std::string ad = kData + "/amplitude_damping.json";
  const std::string leak = kData + "/leak_direct.json";
  const std::vector<std::vector<std::string>> cmds{
      {"srl-curve", "--channel", ad, "--innocent", "1"},
      {"detect-sim", "--channel", leak, "--n", "4,5", "--seed", "11"},
      {"twirl-check", "--channel", leak, "--samples", "50000", "--seed", "11"},
      {"report", "--channel", leak}};
  for (const auto& base : cmds) {
    std::string first;
    for (int threads : {0, 1, 3}) {
      parallel::set_max_threads(threads);
      auto args = base;
      const fs::path out = scratch("det_" + std::to_string(threads) + ".out");
      args.insert(args.end(), {"--out", out.string()});
      const Run r = run(args);
      REQUIRE(r.code == 0);
      const std::string bytes = slurp(out) + r.out;
      if (threads == 0) first = bytes;
      else CHECK(bytes == first);
    }
  }
  parallel::set_max_threads(0);
}
