#pragma once

// CSV and JSON exchange formats (see docs/formats.md). Numbers are written in
// shortest round-trip form so that output is deterministic and lossless.

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "causal/continuity.hpp"
#include "causal/error.hpp"
#include "causal/packets.hpp"
#include "causal/spacetime.hpp"
#include "causal/transport.hpp"

namespace causal::io {

inline std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

/// Reads a CSV with the given header; returns numeric rows.
inline std::vector<std::vector<double>> read_table(const std::filesystem::path& path,
                                                   const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  const auto cols = split(line);
  bool match = cols.size() == header.size();
  for (std::size_t i = 0; match && i < cols.size(); ++i) match = trim(cols[i]) == header[i];
  if (!match) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw ConfigError(path.string() + ": expected header '" + want + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row;
    row.reserve(f.size());
    for (auto v : f) row.push_back(parse_double(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  return trim(line);
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Sidecar path of a measure CSV: foo.csv -> foo.json.
inline std::filesystem::path sidecar_path(std::filesystem::path csv) {
  return csv.replace_extension(".json");
}

// ----------------------------------------------------------- GridMeasure

inline void write_grid_measure(const std::filesystem::path& csv, const GridMeasure& mu) {
  auto out = detail::open_out(csv);
  out << "x_left,weight\n";
  for (std::size_t i = 0; i < mu.size(); ++i) out << fmt(mu.cell_left(i)) << ',' << fmt(mu.weight(i)) << '\n';
  nlohmann::ordered_json side;
  side["t"] = mu.t();
  side["x0"] = mu.x0();
  side["dx"] = mu.dx();
  side["n"] = mu.size();
  detail::open_out(sidecar_path(csv)) << side.dump(2) << '\n';
}

inline GridMeasure read_grid_measure(const std::filesystem::path& csv) {
  const auto rows = detail::read_table(csv, {"x_left", "weight"});
  std::ifstream in(sidecar_path(csv));
  if (!in) throw ConfigError("missing sidecar " + sidecar_path(csv).string());
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(sidecar_path(csv).string() + ": " + e.what());
  }
  const auto n = side.at("n").get<std::size_t>();
  if (n != rows.size()) throw ConfigError(csv.string() + ": row count differs from sidecar n");
  std::vector<double> w;
  w.reserve(n);
  for (const auto& r : rows) w.push_back(r[1]);
  return GridMeasure(side.at("t").get<double>(), side.at("x0").get<double>(), side.at("dx").get<double>(),
                     std::move(w));
}

// ------------------------------------------------------------------ atoms

inline void write_atoms(const std::filesystem::path& csv, const transport::DiscreteMeasure& mu) {
  auto out = detail::open_out(csv);
  out << "x,mass\n";
  for (const auto& a : mu.atoms()) out << fmt(a.x) << ',' << fmt(a.mass) << '\n';
}

/// Atoms from an `x,mass` CSV, or the cell-center atoms of a GridMeasure CSV
/// (`x_left,weight` with sidecar; its time label is then ignored).
inline transport::DiscreteMeasure read_measure(const std::filesystem::path& csv, double t) {
  const auto header = detail::first_line(csv);
  if (header == "x_left,weight") {
    const auto g = read_grid_measure(csv);
    return transport::DiscreteMeasure::from_grid(GridMeasure(t, g.x0(), g.dx(), {g.weights().begin(), g.weights().end()}));
  }
  const auto rows = detail::read_table(csv, {"x", "mass"});
  std::vector<transport::Atom> atoms;
  atoms.reserve(rows.size());
  for (const auto& r : rows) atoms.push_back({r[0], r[1]});
  return transport::DiscreteMeasure(t, std::move(atoms));
}

// ------------------------------------------------------------------- flows

inline continuity::SampledFlow read_flow(const std::filesystem::path& csv) {
  const auto rows = detail::read_table(csv, {"t", "x", "rho", "j"});
  std::vector<continuity::FlowSample> s;
  s.reserve(rows.size());
  for (const auto& r : rows) s.push_back({r[0], r[1], r[2], r[3]});
  return continuity::SampledFlow::from_samples(s);
}

inline void write_flow(const std::filesystem::path& csv, const continuity::SampledFlow& f) {
  auto out = detail::open_out(csv);
  out << "t,x,rho,j\n";
  for (std::size_t i = 0; i < f.nt(); ++i)
    for (std::size_t k = 0; k < f.nx(); ++k)
      out << fmt(f.t()[i]) << ',' << fmt(f.x()[k]) << ',' << fmt(f.rho(i, k)) << ',' << fmt(f.j(i, k)) << '\n';
}

// ----------------------------------------------------------------- packets

/// x,re,im,abs2 for every `stride`-th grid point.
inline void write_packet(const std::filesystem::path& csv, const WavePacket& w, std::size_t stride = 1) {
  auto out = detail::open_out(csv);
  out << "x,re,im,abs2\n";
  for (std::size_t j = 0; j < w.size(); j += std::max<std::size_t>(stride, 1))
    out << fmt(w.x(j)) << ',' << fmt(w.psi[j].real()) << ',' << fmt(w.psi[j].imag()) << ','
        << fmt(std::norm(w.psi[j])) << '\n';
}

}  // namespace causal::io
