#ifndef ORIENTEER_IO_HPP
#define ORIENTEER_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "oracle.hpp"
#include "race_map.hpp"
#include "run_config.hpp"
#include "scheme.hpp"
#include "states.hpp"
#include "text.hpp"
#include "time_dependent.hpp"
#include "trajectory.hpp"

namespace orienteer {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 8);
}

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw IoError("truncated grid dump");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

inline std::string read_text(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(std::filesystem::path const& path, std::string const& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

/// Binary dump: rows and cols as little-endian u64, then the values as
/// little-endian IEEE doubles in row-major order.
inline void write_grid(std::ostream& out, ScalarGrid const& grid) {
  detail::put_u64(out, grid.rows());
  detail::put_u64(out, grid.cols());
  for (double v : grid.values()) detail::put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline ScalarGrid read_grid(std::istream& in) {
  auto const rows = detail::get_u64(in);
  auto const cols = detail::get_u64(in);
  if (rows == 0 || cols == 0 || rows > (std::uint64_t{1} << 32) / cols) throw IoError("bad grid dump header");
  ScalarGrid grid(rows, cols);
  for (auto& v : grid.values()) v = std::bit_cast<double>(detail::get_u64(in));
  return grid;
}

inline void write_grid(std::filesystem::path const& path, ScalarGrid const& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_grid(out, grid);
  if (!out) throw IoError("failed writing " + path.string());
}

inline ScalarGrid read_grid(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_grid(in);
}

inline std::string value_file(std::size_t state_index) { return "value_q" + std::to_string(state_index) + ".bin"; }

inline std::string value_file(std::size_t slice, std::size_t state_index) {
  return "value_t" + std::to_string(slice) + "_q" + std::to_string(state_index) + ".bin";
}

/// Solver output directory: manifest.txt, map.txt, config.txt and the grids.
/// The manifest holds only deterministic content.
struct Manifest {
  std::map<std::string, std::string> fields;
  std::vector<std::pair<std::string, std::string>> states;  ///< bit string (empty when m = 0), file

  std::string const& get(std::string const& key) const {
    auto const it = fields.find(key);
    if (it == fields.end()) throw IoError("manifest lacks '" + key + "'");
    return it->second;
  }
  double number(std::string const& key) const {
    auto const v = parse_number<double>(get(key));
    if (!v) throw IoError("manifest field '" + key + "' is not a number");
    return *v;
  }
};

inline std::string format_manifest(std::vector<std::pair<std::string, std::string>> const& fields,
                                   std::vector<std::pair<std::string, std::string>> const& states) {
  std::string out;
  for (auto const& [k, v] : fields) out += k + " = " + v + "\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    out += "state " + std::to_string(i) + " = " + states[i].second;
    if (!states[i].first.empty()) out += " " + states[i].first;
    out += "\n";
  }
  return out;
}

inline Manifest parse_manifest(std::string const& text) {
  std::istringstream in(text);
  Manifest m;
  for (auto const& kv : parse_key_values(in)) {
    if (kv.key.rfind("state ", 0) == 0) {
      auto const parts = split_whitespace(kv.value);
      if (parts.empty() || parts.size() > 2) throw IoError("malformed state line in manifest");
      m.states.emplace_back(parts.size() == 2 ? std::string(parts[1]) : std::string(), std::string(parts[0]));
    } else {
      m.fields[kv.key] = kv.value;
    }
  }
  return m;
}

inline void write_stationary_dump(std::filesystem::path const& dir, RaceMap const& map, StateSpace const& space,
                                  RunConfig const& rc, ValueField const& field) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> states;
  for (std::size_t i = 0; i < space.size(); ++i) {
    states.emplace_back(space.format(space.state(i)), value_file(i));
    write_grid(dir / value_file(i), field[i]);
  }
  std::vector<std::pair<std::string, std::string>> fields{
      {"kind", "stationary"},
      {"mode", std::string(to_string(space.mode()))},
      {"checkpoints", std::to_string(space.checkpoint_count())},
      {"rows", std::to_string(map.rows())},
      {"cols", std::to_string(map.cols())},
      {"states", std::to_string(space.size())},
      {"iterations", std::to_string(field.iterations)},
      {"residual", format_number(field.residual)},
      {"converged", field.converged ? "true" : "false"},
      {"upper_bound", format_number(field.upper_bound)},
  };
  detail::write_text(dir / "manifest.txt", format_manifest(fields, states));
  detail::write_text(dir / "map.txt", serialize_map(map));
  detail::write_text(dir / "config.txt", serialize_run_config(rc));
}

inline void write_time_dump(std::filesystem::path const& dir, RaceMap const& map, StateSpace const& space,
                            RunConfig const& rc, TimeValueField const& field) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> states;
  for (std::size_t i = 0; i < space.size(); ++i) states.emplace_back(space.format(space.state(i)), value_file(0, i));
  for (std::size_t k = 0; k < field.slice_count(); ++k) {
    for (std::size_t i = 0; i < space.size(); ++i) write_grid(dir / value_file(k, i), field.slices[k][i]);
  }
  write_grid(dir / "arrival_time.bin", field.arrival_time);
  std::vector<std::pair<std::string, std::string>> fields{
      {"kind", "score"},
      {"mode", "free"},
      {"checkpoints", std::to_string(space.checkpoint_count())},
      {"rows", std::to_string(map.rows())},
      {"cols", std::to_string(map.cols())},
      {"states", std::to_string(space.size())},
      {"horizon", format_number(field.horizon)},
      {"dt", format_number(field.dt)},
      {"slices", std::to_string(field.slice_count())},
      {"reward", format_number(field.reward)},
      {"late_cost", format_number(field.late_cost)},
      {"partial_finish", field.partial_finish ? "true" : "false"},
      {"arrival_converged", field.arrival_converged ? "true" : "false"},
  };
  detail::write_text(dir / "manifest.txt", format_manifest(fields, states));
  detail::write_text(dir / "map.txt", serialize_map(map));
  detail::write_text(dir / "config.txt", serialize_run_config(rc));
}

/// A solver output directory read back into memory.
struct LoadedDump {
  Manifest manifest;
  RaceMap map;
  RunConfig config;
  StateSpace space{0, RaceMode::FreeOrder};
  ValueField stationary;
  TimeValueField timed;
  bool is_score = false;
};

inline LoadedDump load_dump(std::filesystem::path const& dir) {
  if (!std::filesystem::exists(dir / "manifest.txt")) {
    throw IoError("no solver output in " + dir.string() + " (manifest.txt missing)");
  }
  LoadedDump d;
  d.manifest = parse_manifest(detail::read_text(dir / "manifest.txt"));
  d.map = parse_map(detail::read_text(dir / "map.txt"));
  d.config = parse_run_config(detail::read_text(dir / "config.txt"));
  auto const& m = d.manifest;
  RaceMode const mode = m.get("mode") == "cross" ? RaceMode::CrossCountry : RaceMode::FreeOrder;
  d.space = StateSpace(d.map.checkpoint_count(), mode);
  if (static_cast<std::size_t>(m.number("states")) != d.space.size() || m.states.size() != d.space.size()) {
    throw IoError("manifest state count does not match the map");
  }
  auto check_shape = [&](ScalarGrid const& g) {
    if (g.rows() != d.map.rows() || g.cols() != d.map.cols()) throw IoError("grid dump shape does not match the map");
  };
  if (m.get("kind") == "score") {
    d.is_score = true;
    auto& t = d.timed;
    t.horizon = m.number("horizon");
    t.dt = m.number("dt");
    t.reward = m.number("reward");
    t.late_cost = m.number("late_cost");
    t.partial_finish = m.get("partial_finish") == "true";
    t.arrival_converged = m.get("arrival_converged") == "true";
    t.arrival_time = read_grid(dir / "arrival_time.bin");
    check_shape(t.arrival_time);
    auto const slices = static_cast<std::size_t>(m.number("slices"));
    for (std::size_t k = 0; k < slices; ++k) {
      std::vector<ScalarGrid> slice;
      for (std::size_t i = 0; i < d.space.size(); ++i) {
        slice.push_back(read_grid(dir / value_file(k, i)));
        check_shape(slice.back());
      }
      t.slices.push_back(std::move(slice));
    }
  } else {
    auto& f = d.stationary;
    f.iterations = static_cast<int>(m.number("iterations"));
    f.residual = m.number("residual");
    f.converged = m.get("converged") == "true";
    f.upper_bound = m.number("upper_bound");
    for (std::size_t i = 0; i < d.space.size(); ++i) {
      f.values.push_back(read_grid(dir / m.states[i].second));
      check_shape(f.values.back());
    }
  }
  return d;
}

/// Plot-ready trajectory: one row per sample; rows produced by a switch carry
/// "switch:j" (several checkpoints joined by '+').
inline std::string trajectory_csv(Trajectory const& traj, StateSpace const& space) {
  std::string out = "t,x,y,state,event\n";
  std::size_t event = 0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    auto const& s = traj.samples[i];
    std::string tag;
    if (i == 0) tag = "start";
    while (event < traj.switch_events.size() && traj.switch_events[event].sample == i) {
      auto const& e = traj.switch_events[event++];
      tag = "switch:";
      bool first = true;
      for (std::size_t j : newly_visited(e.before, e.after)) {
        tag += (first ? "" : "+") + std::to_string(j + 1);
        first = false;
      }
    }
    if (i + 1 == traj.samples.size() && traj.finished && tag.empty()) tag = "finish";
    out += format_number(s.t) + "," + format_number(s.x.x) + "," + format_number(s.x.y) + "," +
           space.format(s.q) + "," + tag + "\n";
  }
  return out;
}

inline std::string tour_csv(std::vector<std::pair<RaceMode, TourResult>> const& tours) {
  std::string out = "mode,order,total_time,leg_times\n";
  for (auto const& [mode, tour] : tours) {
    std::string order, legs;
    for (std::size_t j : tour.order) order += (order.empty() ? "" : " ") + std::to_string(j);
    for (double t : tour.leg_times) legs += (legs.empty() ? "" : " ") + format_number(t);
    out += std::string(to_string(mode)) + "," + order + "," + format_number(tour.total_time) + "," + legs + "\n";
  }
  return out;
}

}  // namespace orienteer

#endif  // ORIENTEER_IO_HPP
