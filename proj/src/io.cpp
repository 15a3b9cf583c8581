#include "declab/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "declab/errors.hpp"

namespace declab {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json provenance(const json& config) {
  return json{{"version", kVersion}, {"config_hash", hex64(fnv1a64(config.dump()))}, {"config", config}};
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidArgument("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void to_json(json& j, const EnvelopeRef& e) { j = json{{"name", e.name}, {"value", e.value}, {"exceeded", e.exceeded}}; }

void from_json(const json& j, EnvelopeRef& e) {
  e.name = j.at("name").get<std::string>();
  e.value = j.at("value").get<double>();
  e.exceeded = j.at("exceeded").get<bool>();
}

void to_json(json& j, const GridDiagnostics& g) {
  j = json{{"spacing", g.spacing},   {"nodes_per_side", g.nodes_per_side}, {"xi_nodes", g.xi_nodes},
           {"extent", g.extent},     {"tail_bound", g.tail_bound},         {"quadrature_error", g.quadrature_error}};
}

void from_json(const json& j, GridDiagnostics& g) {
  g.spacing = j.at("spacing").get<double>();
  g.nodes_per_side = j.at("nodes_per_side").get<std::int64_t>();
  g.xi_nodes = j.at("xi_nodes").get<std::int64_t>();
  g.extent = j.at("extent").get<double>();
  g.tail_bound = j.at("tail_bound").get<double>();
  g.quadrature_error = j.at("quadrature_error").get<double>();
}

void to_json(json& j, const RatioReport& r) {
  j = json{{"kind", r.kind}, {"label", r.label}, {"p", r.p},         {"delta", r.delta},
           {"lhs", r.lhs},   {"rhs", r.rhs},     {"ratio", r.ratio}, {"grid", r.grid},
           {"envelopes", r.envelopes}};
}

void from_json(const json& j, RatioReport& r) {
  r.kind = j.at("kind").get<std::string>();
  r.label = j.at("label").get<std::string>();
  r.p = j.at("p").get<double>();
  r.delta = j.at("delta").get<std::string>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.grid = j.at("grid").get<GridDiagnostics>();
  r.envelopes = j.at("envelopes").get<std::vector<EnvelopeRef>>();
}

void to_json(json& j, const ReductionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"label", row.label},
                    {"lhs", row.lhs},
                    {"near_term", row.near_term},
                    {"bilinear_term", row.bilinear_term},
                    {"constant", row.constant}});
  j = json{{"rows", rows}, {"max_constant", r.max_constant}};
}

void to_json(json& j, const LadderParams& l) {
  j = json{{"K", l.K},
           {"C0", "1/" + std::to_string(l.K)},
           {"K_requested", l.K_requested},
           {"c0_adjusted", l.c0_adjusted},
           {"N", l.N},
           {"log_inv_delta", l.delta.log_inv},
           {"log_inv_tau", l.tau_log_inv},
           {"half_exponents", l.half_exponents}};
}

void to_json(json& j, const LatticeCircle& lc) {
  json pts = json::array();
  for (const auto& p : lc.points) pts.push_back({p.x, p.y});
  j = json{{"R", lc.R}, {"points", pts}};
}

void from_json(const json& j, LatticeCircle& lc) {
  lc.R = j.at("R").get<std::int64_t>();
  lc.points.clear();
  for (const auto& p : j.at("points")) lc.points.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()});
}

void to_json(json& j, const CorrelationResult& c) {
  j = json{{"R", c.R},
           {"N", c.N},
           {"S6", to_string(c.S6)},
           {"S4", to_string(c.S4)},
           {"ratio_S6_N3", c.ratio_S6_N3},
           {"e", excess_exponent(c.S6, c.N)},
           {"method", to_string(c.method)},
           {"M", c.M}};
}

void to_json(json& j, const GridSpec& g) { j = json{{"spacing", g.spacing}, {"extent", g.extent}}; }

void from_json(const json& j, GridSpec& g) {
  g.spacing = j.at("spacing").get<double>();
  g.extent = j.at("extent").get<double>();
}

namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw InvalidArgument("truncated field file");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string field_to_binary(const SampledField& f) {
  std::string out;
  out.reserve(48 + 16 * static_cast<std::size_t>(f.values.size()));
  put(out, f.grid.origin.x());
  put(out, f.grid.origin.y());
  put(out, f.grid.spacing);
  put(out, f.grid.spacing_y);
  put(out, static_cast<std::int64_t>(f.grid.nx));
  put(out, static_cast<std::int64_t>(f.grid.ny));
  for (Eigen::Index j = 0; j < f.values.rows(); ++j)
    for (Eigen::Index i = 0; i < f.values.cols(); ++i) {
      put(out, f.values(j, i).real());
      put(out, f.values(j, i).imag());
    }
  return out;
}

SampledField field_from_binary(const std::string& bytes) {
  std::size_t pos = 0;
  SampledField f;
  const double ox = take<double>(bytes, pos), oy = take<double>(bytes, pos);
  f.grid.origin = Point(ox, oy);
  f.grid.spacing = take<double>(bytes, pos);
  f.grid.spacing_y = take<double>(bytes, pos);
  f.grid.nx = take<std::int64_t>(bytes, pos);
  f.grid.ny = take<std::int64_t>(bytes, pos);
  if (f.grid.nx < 1 || f.grid.ny < 1 || bytes.size() != pos + 16 * static_cast<std::size_t>(f.grid.nx * f.grid.ny))
    throw InvalidArgument("field file size does not match its header");
  f.values.resize(f.grid.ny, f.grid.nx);
  for (Eigen::Index j = 0; j < f.grid.ny; ++j)
    for (Eigen::Index i = 0; i < f.grid.nx; ++i) {
      const double re = take<double>(bytes, pos), im = take<double>(bytes, pos);
      f.values(j, i) = {re, im};
    }
  const Point hi = f.grid.node(f.grid.nx - 1, f.grid.ny - 1);
  f.square = SquareRegion(0.5 * (f.grid.origin + hi), std::max(hi.x() - ox, hi.y() - oy));
  return f;
}

json field_to_json(const SampledField& f) {
  if (f.values.size() > 65536) throw ResourceGuard("field too large for JSON; use the binary layout");
  json re = json::array(), im = json::array();
  for (Eigen::Index j = 0; j < f.values.rows(); ++j)
    for (Eigen::Index i = 0; i < f.values.cols(); ++i) {
      re.push_back(f.values(j, i).real());
      im.push_back(f.values(j, i).imag());
    }
  return json{{"origin", {f.grid.origin.x(), f.grid.origin.y()}},
              {"spacing", {f.grid.spacing, f.grid.spacing_y}},
              {"nx", f.grid.nx},
              {"ny", f.grid.ny},
              {"square", {{"center", {f.square.center.x(), f.square.center.y()}}, {"side", f.square.side}}},
              {"re", re},
              {"im", im}};
}

}  // namespace declab
