#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covertq/channels.hpp"
#include "covertq/rates.hpp"

namespace covertq::cli {

/// Process exit codes. Every error path maps to exactly one of these and
/// writes a single `error: kind=<kind> code=<code> reason=<text>` line.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kParseError = 3,
  kTracePreservation = 4,
  kSupportFailure = 5,
  kDimensionCap = 6,
  kDegenerate = 7,
  kIo = 8,
  kInvalidInput = 9,
};

int exit_code_for(ErrorKind kind);

struct ReportInputs {
  std::string channel_file;
  std::string innocent = "0";
  double delta_qre = 0.05;
  double vartheta = 0.1;
  std::vector<std::size_t> n_list{1000, 10000, 100000, 1000000};
};

struct ChannelReport {
  std::string id;
  channels::WillieMode willie_mode = channels::WillieMode::Complementary;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::size_t willie_dim = 0;
  double tp_residual = 0.0;
  bool support_ok = false;
  double p_f = 0.0;
  PauliDistribution q_tw;
  PauliDistribution p_vec;
  PauliDistribution p_vec_printed;
  double chi2 = 0.0;
  double c_q = 0.0;
  bool trivially_covert = false;
  double rate = 0.0;          // R, hashing rate of p_vec
  double distill_rate = 0.0;  // R_d
  double delta_qre = 0.0;
  double vartheta = 0.0;
  std::vector<rates::ThroughputBound> thm1;
  std::vector<rates::ThroughputBound> thm2;
};

/// Loads the channel and evaluates every report quantity. Throws
/// SupportViolation when the warden's outputs violate the support condition.
ChannelReport build_report(const ReportInputs& in);

std::string format_report_text(const ChannelReport& r);
std::string format_report_json(const ChannelReport& r);
/// Header `n,m_lower_thm1,m_lower_thm2,classical_bits_upper`, one row per n.
std::string srl_curve_csv(const ChannelReport& r);

/// Comma-separated counts ("1000,1e4") and/or log ranges "lo:hi:points".
std::vector<std::size_t> parse_n_list(std::string_view text);

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double x);

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covertq::cli
