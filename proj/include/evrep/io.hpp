#pragma once

// File formats.
//
//   quorum      JSON  {version "evrep-quorum/1", two_s, cone_thetas[], cone_phi_offsets[],
//                      directions[{theta, phi}], condition_number}
//   state       JSON  {version "evrep-state/1", two_s, matrix [[re, im], ...] row-major}
//   operator    JSON  same layout, version "evrep-operator/1"
//   symbols     CSV   n,theta,phi,value
//   probability CSV   n,theta,phi,value[,count,shots]
//   trajectory  CSV   t,P_0,...,P_{N-1}
//   check       JSON  {version "evrep-check/1", two_s, checks[{name, residual, threshold, pass}], pass}
//
// CSV files start with a "# <format>/<version>" comment line; readers skip
// comment lines. Floats are written with 17 significant digits.

#include "evrep/quorum.hpp"
#include "evrep/spin.hpp"
#include "evrep/swcheck.hpp"
#include "evrep/symbol_vector.hpp"
#include "evrep/tomography.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evrep::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* quorum_version = "evrep-quorum/1";
inline constexpr const char* state_version = "evrep-state/1";
inline constexpr const char* operator_version = "evrep-operator/1";
inline constexpr const char* check_version = "evrep-check/1";
inline constexpr const char* symbols_version = "evrep-symbols/1";
inline constexpr const char* probabilities_version = "evrep-probabilities/1";
inline constexpr const char* trajectory_version = "evrep-trajectory/1";

/// Maximum deviation tolerated between stored and rebuilt directions.
inline constexpr Real direction_match_tolerance = 1e-12L;

inline std::string format_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", double(x));
  return buf;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline void require_version(const nlohmann::json& j, std::initializer_list<const char*> accepted) {
  if (!j.is_object() || !j.contains("version") || !j["version"].is_string())
    throw FormatError("missing version field");
  const auto v = j["version"].get<std::string>();
  for (const char* a : accepted)
    if (v == a) return;
  throw FormatError("unsupported version '" + v + "'");
}

template <class T>
T get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

inline std::vector<Real> to_reals(const std::vector<double>& v) { return {v.begin(), v.end()}; }

inline std::vector<double> to_doubles(const std::vector<Real>& v) { return {v.begin(), v.end()}; }

}  // namespace detail

// ---- quorum ---------------------------------------------------------------

inline nlohmann::json quorum_to_json(const DirectionScheme& scheme, Real condition_number) {
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& d : scheme.directions()) dirs.push_back({{"theta", double(d.theta())}, {"phi", double(d.phi())}});
  return {{"version", quorum_version},
          {"two_s", scheme.two_s().value()},
          {"cone_thetas", detail::to_doubles(scheme.cone_thetas())},
          {"cone_phi_offsets", detail::to_doubles(scheme.cone_phi_offsets())},
          {"directions", dirs},
          {"condition_number", double(condition_number)}};
}

struct QuorumFile {
  DirectionScheme scheme;
  Real condition_number;
};

/// Rebuilds the scheme from the cone parameters when present and insists the
/// stored directions agree with it.
inline QuorumFile quorum_from_json(const nlohmann::json& j) {
  detail::require_version(j, {quorum_version});
  try {
    const TwoS two_s(detail::get<int>(j, "two_s"));
    const auto thetas = detail::to_reals(detail::get<std::vector<double>>(j, "cone_thetas"));
    const auto offsets = detail::to_reals(detail::get<std::vector<double>>(j, "cone_phi_offsets"));
    const auto& raw = j.at("directions");
    if (!raw.is_array()) throw FormatError("directions must be an array");
    std::vector<Direction> stored;
    for (const auto& d : raw) stored.emplace_back(detail::get<double>(d, "theta"), detail::get<double>(d, "phi"));
    const Real cond = detail::get<double>(j, "condition_number");

    if (thetas.empty() && offsets.empty()) return {DirectionScheme::from_directions(two_s, stored), cond};

    auto scheme = DirectionScheme::from_cones(two_s, thetas, offsets);
    if (stored.size() != scheme.size()) throw FormatError("direction count does not match cone layout");
    for (std::size_t n = 0; n < stored.size(); ++n)
      if ((stored[n].unit_vector() - scheme[n].unit_vector()).norm() > direction_match_tolerance)
        throw FormatError("direction " + std::to_string(n) + " is inconsistent with the cone parameters");
    return {std::move(scheme), cond};
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid quorum file: ") + e.what());
  }
}

inline void write_quorum_file(const std::string& path, const DirectionScheme& scheme, Real condition_number) {
  write_text(path, quorum_to_json(scheme, condition_number).dump(2) + "\n");
}

inline QuorumFile read_quorum_file(const std::string& path) { return quorum_from_json(parse_json(read_text(path))); }

// ---- states and operators -------------------------------------------------

inline nlohmann::json operator_to_json(const HermitianOperator& op, const char* version) {
  nlohmann::json m = nlohmann::json::array();
  const CMatrix& a = op.matrix();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) m.push_back({double(a(r, c).real()), double(a(r, c).imag())});
  return {{"version", version}, {"two_s", int(op.dim()) - 1}, {"matrix", m}};
}

inline HermitianOperator operator_from_json(const nlohmann::json& j) {
  detail::require_version(j, {state_version, operator_version});
  try {
    const TwoS two_s(detail::get<int>(j, "two_s"));
    const auto entries = detail::get<std::vector<std::vector<double>>>(j, "matrix");
    const auto d = Eigen::Index(two_s.dim());
    if (entries.size() != std::size_t(d * d)) throw FormatError("matrix must have (two_s+1)^2 entries");
    CMatrix a(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) {
        const auto& e = entries[std::size_t(r * d + c)];
        if (e.size() != 2) throw FormatError("matrix entries must be [re, im] pairs");
        a(r, c) = Complex(e[0], e[1]);
      }
    return HermitianOperator(a);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid operator file: ") + e.what());
  }
}

inline void write_state_file(const std::string& path, const HermitianOperator& rho) {
  write_text(path, operator_to_json(rho, state_version).dump(2) + "\n");
}

inline void write_operator_file(const std::string& path, const HermitianOperator& op) {
  write_text(path, operator_to_json(op, operator_version).dump(2) + "\n");
}

inline HermitianOperator read_operator_file(const std::string& path) {
  return operator_from_json(parse_json(read_text(path)));
}

// ---- CSV ------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

inline double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + std::string(s) + "'");
  return v;
}

inline long long parse_int(std::string_view s, std::size_t line_no) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw FormatError("line " + std::to_string(line_no) + ": not an integer: '" + std::string(s) + "'");
  return v;
}

/// Data lines (comments and blank lines dropped), each tagged with its line number.
inline std::vector<std::pair<std::size_t, std::string>> data_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

}  // namespace detail

/// A parsed symbol or probability table.
struct DirectionTable {
  std::vector<Direction> directions;
  RVector values;
  std::vector<std::int64_t> counts;  ///< empty unless count/shots columns were present
  std::int64_t shots = 0;
};

inline void write_direction_table(std::ostream& out, const char* version, const DirectionScheme& scheme,
                                  const RVector& values, const std::vector<std::int64_t>* counts,
                                  std::int64_t shots) {
  if (std::size_t(values.size()) != scheme.size()) throw std::invalid_argument("one value per direction required");
  out << "# " << version << "\n";
  out << "n,theta,phi,value" << (counts ? ",count,shots" : "") << "\n";
  for (std::size_t n = 0; n < scheme.size(); ++n) {
    out << n << ',' << format_real(scheme[n].theta()) << ',' << format_real(scheme[n].phi()) << ','
        << format_real(values(Eigen::Index(n)));
    if (counts) out << ',' << (*counts)[n] << ',' << shots;
    out << "\n";
  }
}

inline DirectionTable read_direction_table(std::istream& in) {
  const auto lines = detail::data_lines(in);
  if (lines.empty()) throw FormatError("empty table");
  const auto header = detail::split(lines.front().second);
  const bool with_counts = header.size() == 6;
  const std::vector<std::string_view> base{"n", "theta", "phi", "value"};
  if (!(header.size() == 4 || with_counts) || !std::equal(base.begin(), base.end(), header.begin()) ||
      (with_counts && (header[4] != "count" || header[5] != "shots")))
    throw FormatError("unexpected header '" + lines.front().second + "'");

  DirectionTable t;
  t.values.resize(Eigen::Index(lines.size() - 1));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [no, text] = lines[r];
    const auto f = detail::split(text);
    if (f.size() != header.size()) throw FormatError("line " + std::to_string(no) + ": wrong number of fields");
    if (detail::parse_int(f[0], no) != static_cast<long long>(r - 1))
      throw FormatError("line " + std::to_string(no) + ": index out of order");
    try {
      t.directions.emplace_back(detail::parse_double(f[1], no), detail::parse_double(f[2], no));
    } catch (const std::invalid_argument& e) {
      throw FormatError("line " + std::to_string(no) + ": " + e.what());
    }
    t.values(Eigen::Index(r - 1)) = detail::parse_double(f[3], no);
    if (with_counts) {
      t.counts.push_back(detail::parse_int(f[4], no));
      const auto shots = detail::parse_int(f[5], no);
      if (shots <= 0 || (t.shots != 0 && shots != t.shots))
        throw FormatError("line " + std::to_string(no) + ": inconsistent shot count");
      t.shots = shots;
    }
  }
  return t;
}

/// Confirms a table was written for this scheme, direction by direction.
inline void require_matching_directions(const DirectionTable& t, const DirectionScheme& scheme) {
  if (t.directions.size() != scheme.size())
    throw FormatError("table has " + std::to_string(t.directions.size()) + " rows, quorum has " +
                      std::to_string(scheme.size()) + " directions");
  for (std::size_t n = 0; n < scheme.size(); ++n)
    if ((t.directions[n].unit_vector() - scheme[n].unit_vector()).norm() > direction_match_tolerance)
      throw FormatError("row " + std::to_string(n) + " direction does not match the quorum");
}

inline void write_symbols(std::ostream& out, const DirectionScheme& scheme, const SymbolVector& sym) {
  write_direction_table(out, symbols_version, scheme, sym.values(), nullptr, 0);
}

inline void write_probabilities(std::ostream& out, const DirectionScheme& scheme, const ProbabilityVector& p) {
  if (p.exact())
    write_direction_table(out, probabilities_version, scheme, p.values(), nullptr, 0);
  else
    write_direction_table(out, probabilities_version, scheme, p.values(), &p.counts(), *p.shots());
}

inline ProbabilityVector read_probabilities(std::istream& in, const DirectionScheme& scheme) {
  auto t = read_direction_table(in);
  require_matching_directions(t, scheme);
  for (std::size_t n = 0; n < t.counts.size(); ++n) {
    const auto c = t.counts[n];
    if (c < 0 || c > t.shots || std::abs(Real(c) - t.values(Eigen::Index(n)) * Real(t.shots)) > Real{0.5})
      throw FormatError("row " + std::to_string(n) + ": count is inconsistent with value and shots");
  }
  try {
    if (t.counts.empty()) return ProbabilityVector(std::move(t.values));
    return ProbabilityVector(std::move(t.values), t.shots, std::move(t.counts));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline SymbolVector read_symbols(std::istream& in, const DirectionScheme& scheme, Variance variance) {
  auto t = read_direction_table(in);
  require_matching_directions(t, scheme);
  return {std::move(t.values), variance};
}

inline void write_trajectory_header(std::ostream& out, std::size_t n) {
  out << "# " << trajectory_version << "\n";
  out << "t";
  for (std::size_t k = 0; k < n; ++k) out << ",P_" << k;
  out << "\n";
}

inline void write_trajectory_row(std::ostream& out, Real t, const RVector& p) {
  out << format_real(t);
  for (Eigen::Index k = 0; k < p.size(); ++k) out << ',' << format_real(p(k));
  out << "\n";
}

// ---- reports --------------------------------------------------------------

inline nlohmann::json check_report_to_json(TwoS two_s, const SwReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back(
        {{"name", c.name}, {"residual", double(c.residual)}, {"threshold", double(c.threshold)}, {"pass", c.pass}});
  return {{"version", check_version}, {"two_s", two_s.value()}, {"checks", checks}, {"pass", report.pass()}};
}

inline nlohmann::json condition_to_json(const ConditionReport& r) {
  return {{"lambda_min", double(r.lambda_min)},
          {"lambda_max", double(r.lambda_max)},
          {"condition_number", double(r.condition_number)},
          {"determinant_sign", r.determinant_sign},
          {"singular", r.singular},
          {"certified_positive_definite", r.certified_positive_definite}};
}

inline nlohmann::json validation_to_json(const ProbabilityValidation& v) {
  return {{"in_unit_interval", v.in_unit_interval},
          {"sum", double(v.sum)},
          {"sum_in_bounds", v.sum_in_bounds},
          {"normalization_residual", double(v.normalization_residual)},
          {"normalization_tolerance", double(v.normalization_tolerance)},
          {"normalized", v.normalized},
          {"ok", v.ok()}};
}

}  // namespace evrep::io
