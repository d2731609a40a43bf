#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edgecolor/graph.hpp"

namespace edgecolor {

// Line-oriented text format:
//
//   EDGECOLOR-INSTANCE v1 kind=<bipartite|general> offline=<n> delta=<int|unknown>
//   <one line per arrival: space separated `id` or `id:mult` tokens>
//
// Lines starting with '#' are comments and blank lines are skipped. An arrival
// without neighbors is written as a single '-'.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline void write_instance(std::ostream& os, const OnlineInstance& inst) {
  os << "EDGECOLOR-INSTANCE v1 kind=" << to_string(inst.kind) << " offline=" << inst.offline_count
     << " delta=";
  if (inst.declared_max_degree)
    os << *inst.declared_max_degree;
  else
    os << "unknown";
  os << '\n';
  for (const auto& a : inst.arrivals) {
    if (a.neighbors.empty()) {
      os << "-\n";
      continue;
    }
    bool first = true;
    for (const auto& nb : a.neighbors) {
      if (!first) os << ' ';
      first = false;
      os << nb.vertex;
      if (nb.multiplicity != 1) os << ':' << nb.multiplicity;
    }
    os << '\n';
  }
}

inline std::string to_text(const OnlineInstance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Int>
Int parse_int(std::string_view s, std::size_t line, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return value;
}

}  // namespace detail

inline OnlineInstance read_instance(std::istream& is) {
  OnlineInstance inst;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      std::istringstream hs{std::string(line)};
      std::string magic, version;
      hs >> magic >> version;
      if (magic != "EDGECOLOR-INSTANCE") throw ParseError(line_no, "missing EDGECOLOR-INSTANCE header");
      if (version != "v1") throw ParseError(line_no, "unsupported version '" + version + "'");
      bool have_kind = false, have_offline = false, have_delta = false;
      std::string field;
      while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "malformed header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "kind") {
          if (value == "bipartite")
            inst.kind = InstanceKind::bipartite_one_sided;
          else if (value == "general")
            inst.kind = InstanceKind::general;
          else
            throw ParseError(line_no, "unknown kind '" + value + "'");
          have_kind = true;
        } else if (key == "offline") {
          inst.offline_count = detail::parse_int<std::uint32_t>(value, line_no, "offline count");
          have_offline = true;
        } else if (key == "delta") {
          if (value != "unknown")
            inst.declared_max_degree = detail::parse_int<std::uint32_t>(value, line_no, "delta");
          have_delta = true;
        } else {
          throw ParseError(line_no, "unknown header field '" + key + "'");
        }
      }
      if (!have_kind || !have_offline || !have_delta)
        throw ParseError(line_no, "header must define kind, offline and delta");
      have_header = true;
      continue;
    }

    ArrivalEvent arrival;
    if (line != "-") {
      std::size_t pos = 0;
      while (pos < line.size()) {
        const auto end = std::min(line.find_first_of(" \t", pos), line.size());
        const auto token = line.substr(pos, end - pos);
        pos = line.find_first_not_of(" \t", end);
        if (pos == std::string_view::npos) pos = line.size();
        if (token.empty()) continue;
        Neighbor nb;
        const auto colon = token.find(':');
        if (colon == std::string_view::npos) {
          nb.vertex = detail::parse_int<VertexId>(token, line_no, "vertex id");
        } else {
          nb.vertex = detail::parse_int<VertexId>(token.substr(0, colon), line_no, "vertex id");
          nb.multiplicity = detail::parse_int<std::uint32_t>(token.substr(colon + 1), line_no, "multiplicity");
        }
        arrival.neighbors.push_back(nb);
      }
    }
    inst.arrivals.push_back(std::move(arrival));
  }
  if (!have_header) throw ParseError(line_no, "empty input");
  return inst;
}

inline OnlineInstance from_text(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

}  // namespace edgecolor
