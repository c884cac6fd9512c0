#include "covertq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "covertq/covert.hpp"
#include "covertq/detect.hpp"
#include "covertq/sparse.hpp"
#include "covertq/twirl.hpp"

namespace covertq::cli {

namespace {

const char* kPauliNames[4] = {"I", "X", "Y", "Z"};

std::string fixed(double x, int digits = 10) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string pauli_text(const PauliDistribution& p) {
  std::string s = "(";
  for (std::size_t j = 0; j < 4; ++j) s += (j ? ", " : "") + fixed(p[j]);
  return s + ")";
}

struct LoadedModel {
  channels::ChannelSpec spec;
  channels::WillieMode mode;
  channels::WillieModel model;
};

LoadedModel load_model(const std::string& file, const std::string& innocent) {
  channels::ChannelSpec spec = channels::load_channel_spec(file);
  const channels::WillieMode mode =
      spec.willie ? channels::WillieMode::Direct : channels::WillieMode::Complementary;
  const channels::QuantumChannel willie = spec.willie ? *spec.willie : channels::complementary(spec.bob);
  const DensityOperator input = channels::parse_state_spec(innocent, spec.bob.d_in());
  channels::WillieModel model = channels::willie_model(willie, input);
  return {std::move(spec), mode, std::move(model)};
}

void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write '" + path + "'");
  f << text;
  if (!f) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

std::size_t parse_count(std::string_view token) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !(v >= 1.0) || v > 1e15 || v != std::floor(v)) {
    fail(ErrorKind::InvalidArgument, "bad n value '" + std::string(token) + "' (expected a positive integer)");
  }
  return static_cast<std::size_t>(v);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParseError;
    case ErrorKind::TracePreservation: return kTracePreservation;
    case ErrorKind::SupportViolation: return kSupportFailure;
    case ErrorKind::DimensionCap: return kDimensionCap;
    case ErrorKind::DegenerateChannel:
    case ErrorKind::EstimationFailure:
    case ErrorKind::RejectionCap: return kDegenerate;
    case ErrorKind::Io: return kIo;
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotDensityOperator: return kInvalidInput;
  }
  return kInvalidInput;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::size_t> parse_n_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string token = trim(text.substr(start, comma - start));
    start = comma + 1;
    if (token.empty()) {
      if (comma == text.size()) break;
      continue;
    }
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_count(token));
      continue;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) fail(ErrorKind::InvalidArgument, "range must be lo:hi:points, got '" + token + "'");
    const auto lo = static_cast<double>(parse_count(std::string_view(token).substr(0, c1)));
    const auto hi = static_cast<double>(parse_count(std::string_view(token).substr(c1 + 1, c2 - c1 - 1)));
    const std::size_t points = parse_count(std::string_view(token).substr(c2 + 1));
    if (hi < lo) fail(ErrorKind::InvalidArgument, "range upper end below lower end in '" + token + "'");
    for (std::size_t i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      out.push_back(static_cast<std::size_t>(std::llround(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))))));
    }
  }
  if (out.empty()) fail(ErrorKind::InvalidArgument, "empty n list");
  return out;
}

ChannelReport build_report(const ReportInputs& in) {
  const LoadedModel lm = load_model(in.channel_file, in.innocent);
  ChannelReport r;
  r.id = lm.spec.id;
  r.willie_mode = lm.mode;
  r.d_in = lm.spec.bob.d_in();
  r.d_out = lm.spec.bob.d_out();
  r.willie_dim = lm.model.rho0.dim();
  r.tp_residual = lm.spec.bob.tp_residual();
  if (lm.spec.willie) r.tp_residual = std::max(r.tp_residual, lm.spec.willie->tp_residual());
  r.delta_qre = in.delta_qre;
  r.vartheta = in.vartheta;

  r.support_ok = covert::support_contained(lm.model.rho_pi, lm.model.rho0);
  const covert::CovertConstant cq = covert::covert_constant(lm.model);  // throws on support failure
  r.chi2 = cq.chi2;
  r.c_q = cq.value;
  r.trivially_covert = cq.trivially_covert;

  const twirl::ProjectionStats stats = twirl::projection_stats(lm.spec.bob);
  r.p_f = stats.p_f;
  r.q_tw = twirl::twirl_parameters(stats);
  r.p_vec = twirl::compose_with_failure(r.q_tw, r.p_f);
  r.p_vec_printed = twirl::compose_with_failure_printed(r.q_tw, r.p_f);
  r.rate = rates::hashing_rate(r.p_vec);
  r.distill_rate = rates::distillation_rate(r.q_tw, r.p_f);
  for (std::size_t n : in.n_list) {
    r.thm1.push_back(rates::theorem1_bound(n, in.vartheta, r.c_q, in.delta_qre, r.p_vec));
    r.thm2.push_back(rates::theorem2_bound(n, in.vartheta, r.c_q, in.delta_qre, r.q_tw, r.p_f));
  }
  return r;
}

std::string format_report_text(const ChannelReport& r) {
  std::ostringstream s;
  s << "channel            " << r.id << " (d_in=" << r.d_in << ", d_out=" << r.d_out
    << ", tp_residual=" << fixed(r.tp_residual, 3) << ")\n";
  s << "willie mode        " << channels::to_string(r.willie_mode) << " (output dim " << r.willie_dim << ")\n";
  s << "support condition  " << (r.support_ok ? "satisfied" : "VIOLATED") << "\n";
  s << "p_f                " << fixed(r.p_f) << "\n";
  s << "q_tw (I,X,Y,Z)     " << pauli_text(r.q_tw) << "\n";
  s << "p    (I,X,Y,Z)     " << pauli_text(r.p_vec) << "\n";
  s << "p printed formula  " << pauli_text(r.p_vec_printed) << "\n";
  s << "chi2(rho_pi||rho0) " << fixed(r.chi2) << "\n";
  if (r.trivially_covert) {
    s << "c_q                unbounded (trivially covert: rho_pi == rho0)\n";
  } else {
    s << "c_q                " << fixed(r.c_q) << "\n";
  }
  s << "R   (hashing)      " << fixed(r.rate) << "\n";
  s << "R_d (distillation) " << fixed(r.distill_rate) << "\n";
  s << "delta_qre          " << fixed(r.delta_qre) << "\n";
  s << "vartheta           " << fixed(r.vartheta) << "\n";
  s << "asymptotic lower bounds on covert qubits M(n):\n";
  s << "  n  m_lower_thm1  m_lower_thm2  classical_bits_upper\n";
  for (std::size_t i = 0; i < r.thm1.size(); ++i) {
    s << "  " << r.thm1[i].n << "  " << fixed(r.thm1[i].m_lower) << "  " << fixed(r.thm2[i].m_lower) << "  "
      << fixed(r.thm2[i].classical_bits_upper.value_or(0.0)) << "\n";
  }
  return s.str();
}

std::string format_report_json(const ChannelReport& r) {
  using nlohmann::json;
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  auto pj = [](const PauliDistribution& p) { return json::array({p[0], p[1], p[2], p[3]}); };
  json rows = json::array();
  for (std::size_t i = 0; i < r.thm1.size(); ++i) {
    rows.push_back({{"n", r.thm1[i].n},
                    {"m_lower_thm1", num(r.thm1[i].m_lower)},
                    {"m_lower_thm2", num(r.thm2[i].m_lower)},
                    {"classical_bits_upper", num(r.thm2[i].classical_bits_upper.value_or(0.0))}});
  }
  json j = {{"id", r.id},
            {"willie_mode", std::string(channels::to_string(r.willie_mode))},
            {"d_in", r.d_in},
            {"d_out", r.d_out},
            {"willie_dim", r.willie_dim},
            {"tp_residual", r.tp_residual},
            {"support_ok", r.support_ok},
            {"p_f", r.p_f},
            {"q_tw", pj(r.q_tw)},
            {"p_vec", pj(r.p_vec)},
            {"p_vec_printed", pj(r.p_vec_printed)},
            {"chi2", r.chi2},
            {"c_q", num(r.c_q)},
            {"trivially_covert", r.trivially_covert},
            {"R", r.rate},
            {"R_d", r.distill_rate},
            {"delta_qre", r.delta_qre},
            {"vartheta", r.vartheta},
            {"bounds", rows}};
  return j.dump(2) + "\n";
}

std::string srl_curve_csv(const ChannelReport& r) {
  std::string s = "n,m_lower_thm1,m_lower_thm2,classical_bits_upper\n";
  for (std::size_t i = 0; i < r.thm1.size(); ++i) {
    s += std::to_string(r.thm1[i].n) + "," + format_double(r.thm1[i].m_lower) + "," +
         format_double(r.thm2[i].m_lower) + "," + format_double(r.thm2[i].classical_bits_upper.value_or(0.0)) +
         "\n";
  }
  return s;
}

namespace {

struct CommonOptions {
  ReportInputs report;
  std::string n_text;
  std::string out_path;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

void add_model_options(CLI::App* sub, CommonOptions& o, const std::string& default_n) {
  sub->add_option("--channel", o.report.channel_file, "Channel spec file (JSON)")->required();
  sub->add_option("--innocent", o.report.innocent, "Innocent input: basis index or JSON matrix")
      ->capture_default_str();
  sub->add_option("--delta", o.report.delta_qre, "QRE covertness budget delta_QRE")->capture_default_str();
  sub->add_option("--vartheta", o.report.vartheta, "Weight-set half-width vartheta")->capture_default_str();
  o.n_text = default_n;
  sub->add_option("--n", o.n_text, "n values: comma list and/or lo:hi:points log ranges")->capture_default_str();
  sub->add_option("--out", o.out_path, "Write the machine-readable output here instead of stdout");
}

int cmd_report(const CommonOptions& o, std::ostream& out) {
  ReportInputs in = o.report;
  in.n_list = parse_n_list(o.n_text);
  const ChannelReport r = build_report(in);
  out << format_report_text(r);
  if (!o.out_path.empty()) write_output(o.out_path, format_report_json(r), out);
  return kOk;
}

int cmd_srl_curve(const CommonOptions& o, std::ostream& out) {
  ReportInputs in = o.report;
  in.n_list = parse_n_list(o.n_text);
  const ChannelReport r = build_report(in);
  write_output(o.out_path, srl_curve_csv(r), out);
  return kOk;
}

int cmd_detect_sim(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedModel lm = load_model(o.report.channel_file, o.report.innocent);
  const covert::CovertConstant cq = covert::covert_constant(lm.model);
  if (cq.trivially_covert) {
    fail(ErrorKind::DegenerateChannel, "trivially covert channel (rho_pi == rho0): nothing to detect");
  }
  const auto stats = twirl::projection_stats(lm.spec.bob);
  const double rd = rates::distillation_rate(twirl::twirl_parameters(stats), stats.p_f);

  std::string csv = "n,q,vartheta,d_exact,d_product,d_chi2_bound,epsilon,chernoff,fannes,holder\n";
  std::ostringstream summary;
  for (std::size_t n : parse_n_list(o.n_text)) {
    const covert::CovertnessBudget budget = covert::covertness_budget(cq.value, o.report.delta_qre, n);
    if (budget.clamped || budget.q >= 1.0) {
      fail(ErrorKind::DegenerateChannel, "q = c_q*sqrt(delta/n) clamps to 1 at n=" + std::to_string(n) +
                                             "; sparse signaling degenerates (increase n or reduce --delta)");
    }
    const sparse::SparseSignalConfig cfg(n, budget.q, o.report.vartheta);
    const DensityOperator rho_n = sparse::willie_state_exact(lm.model, cfg);
    const sparse::BoundChain chain = sparse::bound_chain(lm.model, cfg, rho_n);
    const sparse::AppendixReport app = sparse::appendix_report(lm.model, cfg, rho_n);
    const detect::DetectionResult det = detect::detection_at_n(lm.model, cfg, o.report.delta_qre, rho_n);
    const sparse::Pattern x = sparse::sample_pattern(cfg, o.seed);

    csv += std::to_string(n) + "," + format_double(cfg.q()) + "," + format_double(cfg.vartheta()) + "," +
           format_double(chain.d_exact) + "," + format_double(chain.d_product) + "," +
           format_double(chain.d_chi2_bound) + "," + format_double(app.epsilon) + "," +
           format_double(app.chernoff_bound) + "," + format_double(app.fannes_bound) + "," +
           format_double(app.holder_bound.value_or(std::numeric_limits<double>::quiet_NaN())) + "\n";

    summary << "n=" << n << " q=" << fixed(cfg.q()) << " p(A)=" << fixed(sparse::weight_set_prob(cfg))
            << " trace_distance=" << fixed(det.trace_distance) << " P_e=" << fixed(det.p_e_willie)
            << " qre=" << fixed(det.qre_exact) << " budget=" << fixed(det.qre_budget)
            << " covert=" << (det.covert_ok ? "yes" : "no")
            << " pattern_weight=" << x.weight
            << " classical_bits=" << fixed(rates::classical_bits_for_realization(x.weight, rd))
            << (app.holder_bound ? "" : " holder=unavailable(lambda_min(rho0)~0)") << "\n";
  }
  write_output(o.out_path, csv, out);
  (o.out_path.empty() ? err : out) << summary.str();
  return kOk;
}

int cmd_twirl_check(const CommonOptions& o, std::ostream& out) {
  const channels::QuantumChannel ch = channels::load_channel_spec(o.report.channel_file).bob;
  const twirl::ProjectionStats stats = twirl::projection_stats(ch);
  const PauliDistribution q_an = twirl::twirl_parameters(stats);
  const PauliDistribution q_mc = twirl::monte_carlo_twirl(ch, o.samples, o.seed);
  const PauliDistribution p_an = twirl::compose_with_failure(q_an, stats.p_f);
  const PauliDistribution p_mc = detect::pipeline_tomography(ch, o.samples, o.seed);

  std::string csv = "quantity,component,analytic,estimate,abs_gap\n";
  auto rows = [&](const char* name, const PauliDistribution& a, const PauliDistribution& e) {
    for (std::size_t j = 0; j < 4; ++j) {
      csv += std::string(name) + "," + kPauliNames[j] + "," + format_double(a[j]) + "," + format_double(e[j]) +
             "," + format_double(std::abs(a[j] - e[j])) + "\n";
    }
  };
  rows("q_tw", q_an, q_mc);
  rows("p", p_an, p_mc);

  const double tolerance = 3.0 / std::sqrt(static_cast<double>(o.samples));
  std::ostringstream s;
  s << "samples            " << o.samples << " (seed " << o.seed << ")\n";
  s << "p_f                " << fixed(stats.p_f) << "\n";
  s << "q_tw analytic      " << pauli_text(q_an) << "\n";
  s << "q_tw monte carlo   " << pauli_text(q_mc) << "  max gap " << fixed(q_an.max_abs_diff(q_mc), 4) << "\n";
  s << "p analytic         " << pauli_text(p_an) << "\n";
  s << "p pipeline         " << pauli_text(p_mc) << "  max gap " << fixed(p_an.max_abs_diff(p_mc), 4) << "\n";
  s << "tolerance 3/sqrt(samples) = " << fixed(tolerance, 4) << ": "
    << (std::max(q_an.max_abs_diff(q_mc), p_an.max_abs_diff(p_mc)) <= tolerance ? "consistent" : "INCONSISTENT")
    << "\n";
  out << s.str();
  if (!o.out_path.empty()) write_output(o.out_path, csv, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert quantum communication analysis toolkit", "covertq"};
  app.require_subcommand(1);
  CommonOptions o;
  auto* report = app.add_subcommand("report", "Covertness and throughput report for a channel");
  add_model_options(report, o, "1000,10000,100000,1000000");
  CommonOptions s = o;
  auto* srl = app.add_subcommand("srl-curve", "CSV of square-root-law lower bounds over an n grid");
  add_model_options(srl, s, "1000:10000000:9");
  CommonOptions d = o;
  auto* det = app.add_subcommand("detect-sim", "Exact small-n detection and bound-chain CSV");
  add_model_options(det, d, "4");
  det->add_option("--seed", d.seed, "Seed for the sampled secret pattern")->capture_default_str();
  CommonOptions t = o;
  auto* tw = app.add_subcommand("twirl-check", "Analytic vs Monte Carlo Pauli twirl parameters");
  tw->add_option("--channel", t.report.channel_file, "Channel spec file (JSON)")->required();
  tw->add_option("--samples", t.samples, "Monte Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  tw->add_option("--seed", t.seed, "Random seed")->capture_default_str();
  tw->add_option("--out", t.out_path, "Write the comparison CSV here");

  // CLI11 consumes a reversed vector without the program name
  std::vector<std::string> rev;
  if (!args.empty()) rev.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: kind=usage code=" << kUsage << " reason=" << msg << "\n";
    return kUsage;
  }

  try {
    if (report->parsed()) return cmd_report(o, out);
    if (srl->parsed()) return cmd_srl_curve(s, out);
    if (det->parsed()) return cmd_detect_sim(d, out, err);
    if (tw->parsed()) return cmd_twirl_check(t, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: kind=" << to_string(e.kind()) << " code=" << exit_code_for(e.kind()) << " reason=" << msg << "\n";
    return exit_code_for(e.kind());
  }
  return kUsage;
}

}  // namespace covertq::cli
