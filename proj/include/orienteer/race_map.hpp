#ifndef ORIENTEER_RACE_MAP_HPP
#define ORIENTEER_RACE_MAP_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "text.hpp"

namespace orienteer {

/// Race environment: node lattice, obstacle mask, checkpoints and arrival cells.
///
/// Checkpoints are stored snapped to node positions, so a trajectory standing on
/// the checkpoint node is exactly at the checkpoint.
struct RaceMap {
  GridGeometry geometry;
  Grid<std::uint8_t> obstacle;
  std::vector<Point> checkpoints;
  std::vector<Node> checkpoint_nodes;
  std::vector<Node> arrival_cells;
  Grid<std::uint8_t> arrival_mask;

  std::size_t rows() const { return geometry.rows; }
  std::size_t cols() const { return geometry.cols; }
  double dx() const { return geometry.dx; }
  std::size_t checkpoint_count() const { return checkpoints.size(); }

  /// Out-of-grid nodes count as obstacles.
  bool is_obstacle(Node n) const {
    if (!geometry.contains(n)) return true;
    return obstacle[geometry.linear(n)] != 0;
  }

  bool is_arrival(Node n) const {
    return geometry.contains(n) && arrival_mask[geometry.linear(n)] != 0;
  }

  /// True when the point lies in the cell of an arrival node.
  bool in_arrival_cell(Point p) const {
    if (!geometry.inside(p)) return false;
    return is_arrival(geometry.nearest(p));
  }
};

/// Builds a map from its parts, snapping checkpoints to the nearest node and
/// checking every layout invariant.
inline RaceMap make_race_map(GridGeometry geometry, Grid<std::uint8_t> obstacle,
                             std::vector<Point> const& checkpoints,
                             std::vector<Node> const& arrival_cells) {
  if (geometry.rows == 0 || geometry.cols == 0) throw std::invalid_argument("map has no nodes");
  if (!(geometry.dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (obstacle.rows() != geometry.rows || obstacle.cols() != geometry.cols) {
    throw std::invalid_argument("obstacle mask shape does not match the grid");
  }
  if (arrival_cells.empty()) throw std::invalid_argument("map needs at least one arrival cell");

  RaceMap map;
  map.geometry = geometry;
  map.obstacle = std::move(obstacle);
  map.arrival_mask = Grid<std::uint8_t>(geometry.rows, geometry.cols, 0);
  for (Node a : arrival_cells) {
    if (!geometry.contains(a)) throw std::invalid_argument("arrival cell outside the grid");
    if (map.obstacle[geometry.linear(a)]) {
      throw std::invalid_argument("arrival cell lies on an obstacle");
    }
    if (!map.arrival_mask[geometry.linear(a)]) {
      map.arrival_mask[geometry.linear(a)] = 1;
      map.arrival_cells.push_back(a);
    }
  }
  for (Point p : checkpoints) {
    if (!geometry.inside(p)) throw std::invalid_argument("checkpoint outside the domain");
    Node const n = geometry.nearest(p);
    if (map.obstacle[geometry.linear(n)]) {
      throw std::invalid_argument("checkpoint lies on an obstacle");
    }
    if (std::find(map.checkpoint_nodes.begin(), map.checkpoint_nodes.end(), n) !=
        map.checkpoint_nodes.end()) {
      throw std::invalid_argument("checkpoints must be pairwise distinct");
    }
    map.checkpoint_nodes.push_back(n);
    map.checkpoints.push_back(geometry.position(n));
  }
  return map;
}

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    Header,
    RowCount,
    Ragged,
    BadCharacter,
    DuplicateCheckpoint,
    NonContiguousCheckpoints,
    NoArrival,
  };

  ParseError(Kind kind, int line, std::string const& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

/// Reads the text map format.
///
/// Line 1 is `rows cols dx` (optionally followed by `origin_x origin_y`). Then
/// `rows` lines of `cols` characters: '.' free, '#' obstacle, '1'..'9'
/// checkpoints, 'A' arrival. Body line k (0-based) is node row k.
inline RaceMap parse_map(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(ParseError::Kind::Header, 1, "missing header");

  auto const fields = split_whitespace(lines[0]);
  if (fields.size() != 3 && fields.size() != 5) {
    throw ParseError(ParseError::Kind::Header, 1,
                     "malformed header, expected 'rows cols dx [origin_x origin_y]'");
  }
  auto const rows = parse_number<std::size_t>(fields[0]);
  auto const cols = parse_number<std::size_t>(fields[1]);
  auto const dx = parse_number<double>(fields[2]);
  if (!rows || !cols || !dx || *rows == 0 || *cols == 0 || !(*dx > 0.0)) {
    throw ParseError(ParseError::Kind::Header, 1,
                     "malformed header, rows/cols must be positive integers and dx positive");
  }
  Point origin{};
  if (fields.size() == 5) {
    auto const ox = parse_number<double>(fields[3]);
    auto const oy = parse_number<double>(fields[4]);
    if (!ox || !oy) throw ParseError(ParseError::Kind::Header, 1, "malformed header origin");
    origin = {*ox, *oy};
  }

  if (lines.size() - 1 != *rows) {
    int const line = static_cast<int>(std::min(lines.size(), *rows + 1)) + 1;
    throw ParseError(ParseError::Kind::RowCount, line,
                     "expected " + std::to_string(*rows) + " map rows, found " +
                         std::to_string(lines.size() - 1));
  }

  GridGeometry const geometry{*rows, *cols, *dx, origin};
  Grid<std::uint8_t> obstacle(*rows, *cols, 0);
  std::array<Node, 9> digit_node{};
  std::array<int, 9> digit_line{};
  std::vector<Node> arrival;

  for (std::size_t r = 0; r < *rows; ++r) {
    std::string const& body = lines[r + 1];
    int const line_no = static_cast<int>(r) + 2;
    if (body.size() != *cols) {
      throw ParseError(ParseError::Kind::Ragged, line_no,
                       "expected " + std::to_string(*cols) + " columns, found " +
                           std::to_string(body.size()));
    }
    for (std::size_t c = 0; c < *cols; ++c) {
      char const ch = body[c];
      Node const n{static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)};
      if (ch == '.') continue;
      if (ch == '#') {
        obstacle(r, c) = 1;
      } else if (ch == 'A') {
        arrival.push_back(n);
      } else if (ch >= '1' && ch <= '9') {
        auto const d = static_cast<std::size_t>(ch - '1');
        if (digit_line[d] != 0) {
          throw ParseError(ParseError::Kind::DuplicateCheckpoint, line_no,
                           std::string("duplicate checkpoint digit '") + ch + "' (first on line " +
                               std::to_string(digit_line[d]) + ")");
        }
        digit_line[d] = line_no;
        digit_node[d] = n;
      } else {
        throw ParseError(ParseError::Kind::BadCharacter, line_no,
                         std::string("unexpected character '") + ch + "'");
      }
    }
  }

  std::size_t m = 0;
  while (m < 9 && digit_line[m] != 0) ++m;
  for (std::size_t d = m; d < 9; ++d) {
    if (digit_line[d] != 0) {
      throw ParseError(ParseError::Kind::NonContiguousCheckpoints, digit_line[d],
                       "checkpoint digits not contiguous: '" + std::to_string(d + 1) +
                           "' present but '" + std::to_string(m + 1) + "' missing");
    }
  }
  if (arrival.empty()) {
    throw ParseError(ParseError::Kind::NoArrival, static_cast<int>(lines.size()),
                     "no arrival cell ('A') in map");
  }

  std::vector<Point> checkpoints;
  for (std::size_t d = 0; d < m; ++d) checkpoints.push_back(geometry.position(digit_node[d]));
  return make_race_map(geometry, std::move(obstacle), checkpoints, arrival);
}

inline RaceMap parse_map(std::string const& text) {
  std::istringstream in(text);
  return parse_map(in);
}

/// Inverse of parse_map for maps with at most 9 checkpoints.
inline std::string serialize_map(RaceMap const& map) {
  if (map.checkpoint_count() > 9) {
    throw std::invalid_argument("text map format holds at most 9 checkpoints");
  }
  auto const& g = map.geometry;
  std::string out = std::to_string(g.rows) + " " + std::to_string(g.cols) + " " +
                    format_number(g.dx);
  if (g.origin.x != 0.0 || g.origin.y != 0.0) {
    out += " " + format_number(g.origin.x) + " " + format_number(g.origin.y);
  }
  out += "\n";
  std::vector<std::string> body(g.rows, std::string(g.cols, '.'));
  for (std::size_t i = 0; i < g.size(); ++i) {
    Node const n = g.node_at(i);
    if (map.obstacle[i]) body[n.row][n.col] = '#';
    if (map.arrival_mask[i]) body[n.row][n.col] = 'A';
  }
  for (std::size_t j = 0; j < map.checkpoint_count(); ++j) {
    Node const n = map.checkpoint_nodes[j];
    body[n.row][n.col] = static_cast<char>('1' + j);
  }
  for (auto const& row : body) out += row + "\n";
  return out;
}

}  // namespace orienteer

#endif  // ORIENTEER_RACE_MAP_HPP
