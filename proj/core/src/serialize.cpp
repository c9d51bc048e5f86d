#include "gsg/serialize.hpp"

#include <chrono>
#include <cstring>
#include <ctime>
#include <istream>
#include <ostream>

#include "gsg/errors.hpp"

#ifndef GSG_GIT_DESCRIBE
#define GSG_GIT_DESCRIBE "unknown"
#endif

namespace gsg {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  put_u64(os, bits);
}

double get_f64(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double x;
  std::memcpy(&x, &bits, 8);
  return x;
}

}  // namespace

void write_disorder_binary(std::ostream& os, const DisorderSample& s) {
  put_u64(os, s.n);
  put_u64(os, s.seed);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) put_f64(os, s.couplings(i, j));
  if (!os) throw NumericError("write_disorder_binary: stream failure");
}

DisorderSample read_disorder_binary(std::istream& is) {
  DisorderSample s;
  s.n = get_u64(is);
  s.seed = get_u64(is);
  if (!is || s.n > (1u << 20))
    throw ArgumentError("read_disorder_binary: corrupt header");
  s.couplings = Matrix(s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) s.couplings(i, j) = get_f64(is);
  if (!is) throw ArgumentError("read_disorder_binary: truncated payload");
  return s;
}

nlohmann::json disorder_to_json(const DisorderSample& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < s.n; ++j) row.push_back(s.couplings(i, j));
    rows.push_back(std::move(row));
  }
  return {{"n", s.n}, {"seed", s.seed}, {"couplings", std::move(rows)}};
}

DisorderSample disorder_from_json(const nlohmann::json& j) {
  DisorderSample s;
  s.n = j.at("n").get<std::size_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  const auto& rows = j.at("couplings");
  if (rows.size() != s.n)
    throw ArgumentError("disorder_from_json: row count mismatch");
  s.couplings = Matrix(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    if (rows[i].size() != s.n)
      throw ArgumentError("disorder_from_json: column count mismatch");
    for (std::size_t k = 0; k < s.n; ++k)
      s.couplings(i, k) = rows[i][k].get<double>();
  }
  return s;
}

nlohmann::json order_parameter_to_json(const PiecewiseOrderParameter& x) {
  return {{"q", x.q()}, {"m", x.m()}};
}

PiecewiseOrderParameter order_parameter_from_json(const nlohmann::json& j) {
  return PiecewiseOrderParameter(j.at("q").get<std::vector<double>>(),
                                 j.at("m").get<std::vector<double>>());
}

nlohmann::json params_to_json(const ModelParams& p) {
  return {{"beta", p.beta},
          {"lambda", p.lambda},
          {"h", p.h},
          {"n_sites", p.n_sites},
          {"diagonal_removed", p.diagonal_removed}};
}

nlohmann::json config_to_json(const McConfig& cfg) {
  return {{"n_disorder", cfg.n_disorder},
          {"n_directions", cfg.n_directions},
          {"radial_points", cfg.radial_points},
          {"seed", cfg.seed},
          {"scheme", cfg.scheme == McScheme::quadrature_if_small
                         ? "quadrature_if_small"
                         : "radial_mc"},
          {"quadrature_max_n", cfg.quadrature_max_n}};
}

nlohmann::json estimate_to_json(const McEstimate& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"n_samples", e.n_samples}};
}

const char* git_describe() { return GSG_GIT_DESCRIBE; }

nlohmann::json make_run_record(const ModelParams& p, const McConfig& cfg,
                               const nlohmann::json& estimates) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"params", params_to_json(p)},
          {"cfg", config_to_json(cfg)},
          {"estimates", estimates},
          {"git_describe", git_describe()},
          {"timestamp", stamp}};
}

}  // namespace gsg
