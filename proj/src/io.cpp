#include "crossdiff/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "crossdiff/errors.hpp"
#include "crossdiff/format.hpp"

namespace crossdiff {

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed: " + path.string());
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::string field_csv(const FieldGrid& g, Field f) {
  const auto& data = g.field(f);
  std::string out = "x,y,value\n";
  out.reserve(out.size() + data.size() * 40);
  for (std::size_t j = 0; j < g.ny; ++j) {
    const std::string y = fmt(g.y(j));
    for (std::size_t i = 0; i < g.nx; ++i) {
      out += fmt(g.x(i));
      out += ',';
      out += y;
      out += ',';
      out += fmt(data[g.index(i, j)]);
      out += '\n';
    }
  }
  return out;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,u,v,w\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out += fmt(tr.t[i]) + ',' + fmt(tr.x[i].u) + ',' + fmt(tr.x[i].v) + ',' + fmt(tr.x[i].w) + '\n';
  }
  return out;
}

std::string dispersion_csv(const DispersionResult& d) {
  std::string out = "k,growth,frequency\n";
  for (const auto& p : d.points) out += fmt(p.k) + ',' + fmt(p.growth) + ',' + fmt(p.frequency) + '\n';
  return out;
}

std::string region_csv(const RegionGrid& r) {
  std::string out = "p2,c,exists\n";
  for (std::size_t i = 0; i < r.p2.size(); ++i)
    for (std::size_t j = 0; j < r.c.size(); ++j)
      out += fmt(r.p2[i]) + ',' + fmt(r.c[j]) + ',' + (r.at(i, j) ? "1" : "0") + '\n';
  return out;
}

std::string equilibria_csv(std::span<const Equilibrium> eqs) {
  std::string out = "kind,u,v,w,eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,stability\n";
  for (const auto& e : eqs) {
    out += std::string(to_string(e.kind)) + ',' + fmt(e.state.u) + ',' + fmt(e.state.v) + ',' + fmt(e.state.w);
    for (const auto& z : e.eigenvalues) out += ',' + fmt(z.real()) + ',' + fmt(z.imag());
    out += ',' + std::string(to_string(e.stability)) + '\n';
  }
  return out;
}

std::string probe_csv(const ProbeSeries& p) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < p.t.size(); ++i) out += fmt(p.t[i]) + ',' + fmt(p.value[i]) + '\n';
  return out;
}

namespace {

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::array<std::uint8_t, sizeof(T)> b;
  std::memcpy(b.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.insert(out.end(), b.begin(), b.end());
}

template <class T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ArgumentError("snapshot buffer is truncated");
  std::array<std::uint8_t, sizeof(T)> b;
  std::memcpy(b.data(), bytes.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  pos += sizeof(T);
  T value;
  std::memcpy(&value, b.data(), sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FieldGrid& g) {
  std::vector<std::uint8_t> out;
  out.reserve(40 + 24 * g.size());
  put_le(out, static_cast<std::int64_t>(g.nx));
  put_le(out, static_cast<std::int64_t>(g.ny));
  put_le(out, g.dx);
  put_le(out, g.dy);
  put_le(out, g.t);
  for (Field f : {Field::U, Field::V, Field::W})
    for (double x : g.field(f)) put_le(out, x);
  return out;
}

FieldGrid decode_snapshot(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const auto nx = get_le<std::int64_t>(bytes, pos);
  const auto ny = get_le<std::int64_t>(bytes, pos);
  if (nx < 1 || ny < 1 || nx > (1 << 24) || ny > (1 << 24)) throw ArgumentError("snapshot header has invalid sizes");
  FieldGrid g;
  g.nx = static_cast<std::size_t>(nx);
  g.ny = static_cast<std::size_t>(ny);
  g.dx = get_le<double>(bytes, pos);
  g.dy = get_le<double>(bytes, pos);
  g.t = get_le<double>(bytes, pos);
  if (bytes.size() != pos + 24 * g.size()) throw ArgumentError("snapshot payload size does not match the header");
  for (Field f : {Field::U, Field::V, Field::W}) {
    auto& data = g.field(f);
    data.resize(g.size());
    for (double& x : data) x = get_le<double>(bytes, pos);
  }
  return g;
}

void write_snapshot_binary(const std::filesystem::path& path, const FieldGrid& g) {
  write_bytes(path, encode_snapshot(g));
}

FieldGrid read_snapshot_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

std::string to_text(const RunManifest& m) {
  std::ostringstream o;
  o << "subcommand=" << m.subcommand << '\n' << "args=";
  for (std::size_t i = 0; i < m.args.size(); ++i) o << (i ? " " : "") << m.args[i];
  o << '\n'
    << "config=" << m.config_path << '\n'
    << "output_dir=" << m.output_dir << '\n'
    << "determinism=seedless\n"
    << "version=" << m.version << '\n';
  for (const auto& [name, member] : kParamFields) o << "param." << name << '=' << fmt(m.params.*member) << '\n';
  for (const auto& [k, v] : m.extra) o << k << '=' << v << '\n';
  return o.str();
}

}  // namespace crossdiff
