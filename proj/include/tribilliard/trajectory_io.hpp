// Trajectory CSV: one row per bounce with boundary and planar coordinates.
// Floats are printed with 17 significant digits so a written orbit parses
// back to the identical doubles.
#pragma once

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/geometry.hpp"

namespace tribilliard {

inline constexpr const char* trajectory_csv_header = "t,side,phi,x,px,py,dir,singular";

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trajectory_csv(const TriangleParams& tri, const PlanarEmbedding& emb,
                                  const Orbit& orbit) {
  std::ostringstream os;
  os << trajectory_csv_header << '\n';
  for (std::size_t t = 0; t < orbit.states.size(); ++t) {
    const PhaseState& st = orbit.states[t];
    const Vec2 p = boundary_to_plane(tri, emb, {st.side, st.x});
    const bool last = t + 1 == orbit.states.size();
    const char* dir = last ? "" : (orbit.dirs[t] == MoveDir::ccw ? "ccw" : "cw");
    const bool singular = last && orbit.terminated_singular;
    os << t << ',' << st.side << ',' << format_full(st.phi) << ',' << format_full(st.x) << ','
       << format_full(p.x) << ',' << format_full(p.y) << ',' << dir << ',' << (singular ? 1 : 0)
       << '\n';
  }
  return os.str();
}

inline Orbit parse_trajectory_csv(std::string_view text) {
  Orbit orbit;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line) || line != trajectory_csv_header) {
    throw std::invalid_argument("trajectory CSV: missing header '" +
                                std::string(trajectory_csv_header) + "'");
  }
  auto fail = [&](const std::string& what) -> void {
    throw std::invalid_argument("trajectory CSV line " + std::to_string(line_no) + ": " + what);
  };
  while (next_line(line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (true) {
      std::size_t c = line.find(',', f);
      if (c == std::string_view::npos) {
        fields.push_back(line.substr(f));
        break;
      }
      fields.push_back(line.substr(f, c - f));
      f = c + 1;
    }
    if (fields.size() != 8) fail("expected 8 fields, got " + std::to_string(fields.size()));
    auto parse_double = [&](std::string_view sv) {
      double v = 0.0;
      const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
      if (res.ec != std::errc() || res.ptr != sv.data() + sv.size()) {
        fail("malformed float '" + std::string(sv) + "'");
      }
      return v;
    };
    auto parse_int = [&](std::string_view sv) {
      int v = 0;
      const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
      if (res.ec != std::errc() || res.ptr != sv.data() + sv.size()) {
        fail("malformed integer '" + std::string(sv) + "'");
      }
      return v;
    };

    PhaseState st;
    st.side = parse_int(fields[1]);
    st.phi = parse_double(fields[2]);
    st.x = parse_double(fields[3]);
    orbit.states.push_back(st);
    if (fields[6] == "ccw") {
      orbit.dirs.push_back(MoveDir::ccw);
    } else if (fields[6] == "cw") {
      orbit.dirs.push_back(MoveDir::cw);
    } else if (!fields[6].empty()) {
      fail("malformed direction '" + std::string(fields[6]) + "'");
    }
    if (fields[7] == "1") {
      orbit.terminated_singular = true;
    } else if (fields[7] != "0") {
      fail("malformed singular flag '" + std::string(fields[7]) + "'");
    }
  }
  if (orbit.states.empty()) throw std::invalid_argument("trajectory CSV: no data rows");
  if (orbit.dirs.size() + 1 != orbit.states.size()) {
    throw std::invalid_argument("trajectory CSV: direction column must be empty exactly on the last row");
  }
  return orbit;
}

/// Write via a temporary in the same directory and rename into place, so a
/// crash never leaves a partial file under the target name.
inline void write_file_atomic(const std::filesystem::path& target, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("rename to '" + target.string() + "' failed: " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace tribilliard
