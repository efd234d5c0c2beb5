#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdirac/io.hpp"
#include "tdirac/sampling.hpp"
#include "test_util.hpp"

using namespace tdirac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tdirac_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("field files round trip bit for bit") {
  Rng rng(1);
  const SpinorField f = random_field(FrequencyLattice(2, 3), 4, rng);
  std::stringstream buf;
  io::write_field(buf, f, {{"t", 0.25}});
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "TDSF");
  nlohmann::json header;
  const SpinorField g = io::read_field(buf, &header);
  CHECK(header["t"] == 0.25);
  CHECK(header["d0"] == 4);
  CHECK(g.lattice() == f.lattice());
  CHECK(testutil::bit_equal(f, g));
  // magic + length + header + 16 bytes per coefficient
  CHECK(bytes.size() == 8 + header.dump().size() + 16 * f.coeffs().size());
}

TEST_CASE("corrupt field files are rejected") {
  Rng rng(2);
  const SpinorField f = random_field(FrequencyLattice(1, 2), 2, rng);
  std::stringstream buf;
  io::write_field(buf, f);
  std::string bytes = buf.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(io::read_field(truncated), io::FormatError);
  bytes[0] = 'X';
  std::stringstream bad(bytes);
  CHECK_THROWS_AS(io::read_field(bad), io::FormatError);
}

TEST_CASE("trajectory directories round trip") {
  Rng rng(3);
  Trajectory tr;
  tr.dt = 0.125;
  tr.t0 = 1.0;
  const FrequencyLattice lat(1, 4);
  for (int k = 0; k < 5; ++k) tr.frames.push_back(random_field(lat, 2, rng));
  const fs::path dir = scratch("traj");
  io::save_trajectory(dir, tr, {{"note", "x"}});
  CHECK(fs::exists(dir / "frames" / "frame_000004.tdsf"));
  nlohmann::json manifest;
  const Trajectory back = io::load_trajectory(dir, &manifest);
  CHECK(manifest["note"] == "x");
  CHECK(manifest["times"].size() == 5);
  CHECK(manifest["times"][2] == 1.25);
  CHECK(back.dt == tr.dt);
  CHECK(back.t0 == tr.t0);
  REQUIRE(back.size() == tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) CHECK(testutil::bit_equal(back.frames[k], tr.frames[k]));
  CHECK_THROWS(io::load_trajectory(scratch("missing")));
}

TEST_CASE("json files are stable and parse errors are typed") {
  const fs::path dir = scratch("json");
  const nlohmann::json j = {{"b", 1}, {"a", {1.5, 2.0}}};
  io::save_json(dir / "a.json", j);
  io::save_json(dir / "b.json", io::load_json(dir / "a.json"));
  std::ifstream a(dir / "a.json"), b(dir / "b.json");
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  CHECK(sa.find("\"a\"") < sa.find("\"b\""));
  std::ofstream(dir / "bad.json") << "{ nope";
  CHECK_THROWS_AS(io::load_json(dir / "bad.json"), io::FormatError);
}

TEST_CASE("series CSV is long format") {
  std::ostringstream os;
  io::write_series_csv(os, {{"distance", 1, {}, {0.5, 0.25}}, {"hs", 0, {0.0, 0.1}, {1.0, 2.0}}});
  CHECK(os.str() ==
        "series,window,index,time,value\n"
        "distance,1,0,,0.5\n"
        "distance,1,1,,0.25\n"
        "hs,0,0,0,1\n"
        "hs,0,1,0.10000000000000001,2\n");
}
