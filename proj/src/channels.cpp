#include "covertq/channels.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace covertq::channels {

using nlohmann::json;

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus, double tp_tolerance) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) fail(ErrorKind::InvalidArgument, "channel needs at least one Kraus operator");
  d_out_ = static_cast<std::size_t>(kraus_.front().rows());
  d_in_ = static_cast<std::size_t>(kraus_.front().cols());
  if (d_in_ == 0 || d_out_ == 0) fail(ErrorKind::InvalidArgument, "Kraus operators must be non-empty");
  ComplexMatrix sum = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& k : kraus_) {
    linops::check_matrix(k, "Kraus operator");
    if (static_cast<std::size_t>(k.rows()) != d_out_ || static_cast<std::size_t>(k.cols()) != d_in_) {
      fail(ErrorKind::DimensionMismatch, "Kraus operators have inconsistent shapes");
    }
    sum += k.adjoint() * k;
  }
  tp_residual_ = (sum - linops::identity(d_in_)).cwiseAbs().maxCoeff();
  if (!(tp_residual_ <= tp_tolerance)) {
    fail(ErrorKind::TracePreservation,
         "channel is not trace preserving: |sum K^dag K - I|_max = " + std::to_string(tp_residual_));
  }
}

std::string_view to_string(WillieMode mode) {
  return mode == WillieMode::Complementary ? "complementary" : "direct";
}

ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != ch.d_in() || static_cast<std::size_t>(x.cols()) != ch.d_in()) {
    fail(ErrorKind::DimensionMismatch, "apply: operator dimension " + std::to_string(x.rows()) +
                                           " != channel input dimension " + std::to_string(ch.d_in()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.d_out(), ch.d_out());
  for (const auto& k : ch.kraus()) out += k * x * k.adjoint();
  return out;
}

DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho) {
  ComplexMatrix out = apply_linear(ch, rho.matrix());
  // A channel accepted at tol::tp may leave a trace defect above tol::trace.
  const double tr = out.trace().real();
  if (std::abs(tr - 1.0) <= tol::tp * static_cast<double>(ch.d_in())) out /= tr;
  return DensityOperator(out);
}

ComplexMatrix choi(const QuantumChannel& ch) {
  const std::size_t din = ch.d_in(), dout = ch.d_out();
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (std::size_t a = 0; a < din; ++a) {
    for (std::size_t b = 0; b < din; ++b) {
      ComplexMatrix eab = ComplexMatrix::Zero(din, din);
      eab(a, b) = 1.0;
      j.block(a * dout, b * dout, dout, dout) = apply_linear(ch, eab);
    }
  }
  return j / static_cast<double>(din);
}

QuantumChannel complementary(const QuantumChannel& ch) {
  const std::size_t k = ch.kraus().size();
  std::vector<ComplexMatrix> out;
  out.reserve(ch.d_out());
  // (K^c_b)_{i,m} = (K_i)_{b,m}
  for (std::size_t b = 0; b < ch.d_out(); ++b) {
    ComplexMatrix kc(k, ch.d_in());
    for (std::size_t i = 0; i < k; ++i) kc.row(i) = ch.kraus()[i].row(b);
    out.push_back(std::move(kc));
  }
  return QuantumChannel(std::move(out));
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.d_in() != first.d_out()) fail(ErrorKind::DimensionMismatch, "compose: dimension mismatch");
  std::vector<ComplexMatrix> out;
  for (const auto& a : second.kraus())
    for (const auto& b : first.kraus()) out.push_back(a * b);
  return QuantumChannel(std::move(out));
}

QuantumChannel identity(std::size_t d) {
  if (d == 0 || d > kMaxDim) fail(ErrorKind::InvalidArgument, "identity channel dimension out of range");
  return QuantumChannel({linops::identity(d)});
}

QuantumChannel pauli(const PauliDistribution& p) {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t j = 0; j < 4; ++j) {
    if (p[j] > 0.0) kraus.push_back(std::sqrt(p[j]) * pauli_matrix(j));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel depolarizing(double lambda) { return pauli(PauliDistribution::depolarizing(lambda)); }

QuantumChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorKind::InvalidArgument, "amplitude damping gamma must be in [0,1]");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({k0, k1});
}

QuantumChannel qubit_into_qudit_leak(double p_leak) {
  if (!(p_leak >= 0.0 && p_leak <= 1.0)) fail(ErrorKind::InvalidArgument, "leak probability must be in [0,1]");
  ComplexMatrix embed = ComplexMatrix::Zero(3, 2);
  embed(0, 0) = embed(1, 1) = std::sqrt(1.0 - p_leak);
  ComplexMatrix l0 = ComplexMatrix::Zero(3, 2), l1 = ComplexMatrix::Zero(3, 2);
  l0(2, 0) = std::sqrt(p_leak);
  l1(2, 1) = std::sqrt(p_leak);
  return QuantumChannel({embed, l0, l1});
}

QuantumChannel build(std::string_view kind, std::span<const double> params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      fail(ErrorKind::InvalidArgument,
           std::string(kind) + " expects " + std::to_string(n) + " parameter(s), got " + std::to_string(params.size()));
    }
  };
  if (kind == "identity") {
    need(1);
    if (!(params[0] >= 1.0) || params[0] != std::floor(params[0])) {
      fail(ErrorKind::InvalidArgument, "identity dimension must be a positive integer");
    }
    return identity(static_cast<std::size_t>(params[0]));
  }
  if (kind == "depolarizing") {
    need(1);
    return depolarizing(params[0]);
  }
  if (kind == "pauli") {
    need(4);
    return pauli(PauliDistribution({params[0], params[1], params[2], params[3]}));
  }
  if (kind == "amplitude_damping") {
    need(1);
    return amplitude_damping(params[0]);
  }
  if (kind == "qubit_into_qudit_leak") {
    need(1);
    return qubit_into_qudit_leak(params[0]);
  }
  fail(ErrorKind::InvalidArgument, "unknown channel kind '" + std::string(kind) + "'");
}

namespace {

cplx parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  fail(ErrorKind::Parse, "matrix entry must be a number or a [re, im] pair");
}

ComplexMatrix parse_matrix(const json& m, std::string_view what) {
  if (!m.is_array() || m.empty() || !m[0].is_array()) {
    fail(ErrorKind::Parse, std::string(what) + ": expected a non-empty list of rows");
  }
  const std::size_t rows = m.size(), cols = m[0].size();
  if (rows > kMaxDim || cols > kMaxDim) fail(ErrorKind::DimensionCap, std::string(what) + ": exceeds dimension cap");
  ComplexMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!m[r].is_array() || m[r].size() != cols) fail(ErrorKind::Parse, std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = parse_entry(m[r][c]);
  }
  linops::check_matrix(out, what);
  return out;
}

QuantumChannel channel_from_json(const json& j, double tp_tolerance) {
  if (!j.is_object()) fail(ErrorKind::Parse, "channel spec must be a JSON object");
  for (const char* key : {"d_in", "d_out", "kraus"}) {
    if (!j.contains(key)) fail(ErrorKind::Parse, std::string("channel spec missing field '") + key + "'");
  }
  if (!j["d_in"].is_number_unsigned() || !j["d_out"].is_number_unsigned()) {
    fail(ErrorKind::Parse, "d_in and d_out must be positive integers");
  }
  const auto d_in = j["d_in"].get<std::size_t>(), d_out = j["d_out"].get<std::size_t>();
  const json& kraus = j["kraus"];
  if (!kraus.is_array() || kraus.empty()) fail(ErrorKind::Parse, "kraus must be a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (const auto& k : kraus) {
    ComplexMatrix m = parse_matrix(k, "kraus operator");
    if (static_cast<std::size_t>(m.rows()) != d_out || static_cast<std::size_t>(m.cols()) != d_in) {
      fail(ErrorKind::Parse, "kraus operator shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                 " does not match d_out x d_in = " + std::to_string(d_out) + "x" +
                                 std::to_string(d_in));
    }
    ops.push_back(std::move(m));
  }
  return QuantumChannel(std::move(ops), tp_tolerance);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

QuantumChannel parse_channel(std::string_view json_text, double tp_tolerance) {
  return channel_from_json(parse_json(json_text), tp_tolerance);
}

ChannelSpec parse_channel_spec(std::string_view json_text, double tp_tolerance) {
  const json j = parse_json(json_text);
  ChannelSpec spec{channel_from_json(j, tp_tolerance), std::nullopt, fnv1a_hex(json_text)};
  if (j.contains("willie")) {
    spec.willie = channel_from_json(j["willie"], tp_tolerance);
    if (spec.willie->d_in() != spec.bob.d_in()) {
      fail(ErrorKind::Parse, "willie channel input dimension differs from the main channel");
    }
  }
  return spec;
}

ChannelSpec load_channel_spec(const std::string& path, double tp_tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open channel file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_channel_spec(ss.str(), tp_tolerance);
}

QuantumChannel from_spec(const std::string& path) { return load_channel_spec(path).bob; }

std::string to_spec(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  json j = {{"d_in", ch.d_in()}, {"d_out", ch.d_out()}, {"kraus", std::move(kraus)}};
  return j.dump(2) + "\n";
}

DensityOperator parse_state_spec(std::string_view text, std::size_t dim) {
  std::size_t index = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec == std::errc() && ptr == last) {
    if (index >= dim) {
      fail(ErrorKind::Parse, "innocent basis index " + std::to_string(index) + " out of range for dimension " +
                                 std::to_string(dim));
    }
    return DensityOperator::basis_state(dim, index);
  }
  const ComplexMatrix m = parse_matrix(parse_json(text), "innocent state");
  if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
    fail(ErrorKind::Parse, "innocent state must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  try {
    return DensityOperator(m);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, std::string("innocent state is not a density operator: ") + e.what());
  }
}

WillieModel willie_model(const QuantumChannel& willie_channel, const DensityOperator& innocent_input) {
  if (innocent_input.dim() != willie_channel.d_in()) {
    fail(ErrorKind::DimensionMismatch, "innocent input dimension " + std::to_string(innocent_input.dim()) +
                                           " != channel input dimension " + std::to_string(willie_channel.d_in()));
  }
  return {apply(willie_channel, innocent_input),
          apply(willie_channel, DensityOperator::maximally_mixed(willie_channel.d_in()))};
}

}  // namespace covertq::channels
