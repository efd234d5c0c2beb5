#include "tdirac/io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tdirac::io {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'D', 'S', 'F'};

static_assert(std::endian::native == std::endian::little,
              "field files are written in native little-endian order");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("field file: truncated");
  return v;
}

std::string frame_name(std::size_t k) {
  std::ostringstream s;
  s << "frame_" << std::setw(6) << std::setfill('0') << k << ".tdsf";
  return s.str();
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream f(path, mode);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  return f;
}

}  // namespace

void write_field(std::ostream& out, const SpinorField& f, const nlohmann::json& extra) {
  nlohmann::json header = extra;
  header["d"] = f.lattice().dim();
  header["lattice_radius"] = f.lattice().radius();
  header["d0"] = f.d0();
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Complex& z : f.coeffs()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
}

SpinorField read_field(std::istream& in, nlohmann::json* header_out) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("field file: bad magic");
  const auto len = get<std::uint32_t>(in);
  std::string text(len, '\0');
  in.read(text.data(), len);
  if (!in) throw FormatError("field file: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field file: header: ") + e.what());
  }
  SpinorField f(FrequencyLattice(header.at("d").get<int>(), header.at("lattice_radius").get<int>()),
                header.at("d0").get<int>());
  for (Complex& z : f.coeffs()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    z = {re, im};
  }
  if (header_out) *header_out = std::move(header);
  return f;
}

void save_field(const std::filesystem::path& path, const SpinorField& f,
                const nlohmann::json& extra) {
  auto out = open_out(path, std::ios::binary);
  write_field(out, f, extra);
}

SpinorField load_field(const std::filesystem::path& path, nlohmann::json* header) {
  auto in = open_in(path, std::ios::binary);
  return read_field(in, header);
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& tr,
                     const nlohmann::json& meta) {
  tr.validate();
  std::filesystem::create_directories(dir / "frames");
  nlohmann::json manifest = meta;
  nlohmann::json files = nlohmann::json::array();
  nlohmann::json times = nlohmann::json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const std::string name = frame_name(k);
    save_field(dir / "frames" / name, tr.frames[k], {{"t", tr.time(k)}});
    files.push_back("frames/" + name);
    times.push_back(tr.time(k));
  }
  manifest["t0"] = tr.t0;
  manifest["dt"] = tr.dt;
  manifest["times"] = std::move(times);
  manifest["frames"] = std::move(files);
  save_json(dir / "manifest.json", manifest);
}

Trajectory load_trajectory(const std::filesystem::path& dir, nlohmann::json* manifest_out) {
  const nlohmann::json manifest = load_json(dir / "manifest.json");
  Trajectory tr;
  tr.t0 = manifest.at("t0").get<double>();
  tr.dt = manifest.at("dt").get<double>();
  for (const auto& name : manifest.at("frames")) {
    tr.frames.push_back(load_field(dir / name.get<std::string>()));
  }
  tr.validate();
  if (manifest_out) *manifest_out = manifest;
  return tr;
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_series_csv(std::ostream& out, const std::vector<CsvSeries>& series) {
  out << "series,window,index,time,value\n";
  out << std::setprecision(17);
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.value.size(); ++i) {
      out << s.name << ',' << s.window << ',' << i << ',';
      if (i < s.time.size()) out << s.time[i];
      out << ',' << s.value[i] << '\n';
    }
  }
}

void save_series_csv(const std::filesystem::path& path, const std::vector<CsvSeries>& series) {
  auto out = open_out(path);
  write_series_csv(out, series);
}

}  // namespace tdirac::io
