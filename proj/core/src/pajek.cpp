#include "coword/pajek.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <set>

#include "coword/error.hpp"
#include "coword/text.hpp"

namespace coword {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Whitespace-separated tokens; a double-quoted token may contain spaces.
std::optional<std::vector<std::string>> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    if (line[i] == '"') {
      auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) return std::nullopt;
      tokens.emplace_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
      if (i < line.size() && line[i] != ' ' && line[i] != '\t') return std::nullopt;
      continue;
    }
    auto end = line.find_first_of(" \t", i);
    if (end == std::string_view::npos) end = line.size();
    tokens.emplace_back(line.substr(i, end - i));
    i = end;
  }
  return tokens;
}

}  // namespace

std::string format_pajek_net(const CoNetwork& net, const LayoutMap* layout) {
  if (layout && layout->coordinates.size() != net.size()) {
    throw std::invalid_argument("layout does not cover every vertex");
  }
  std::string out = "*Vertices " + std::to_string(net.size()) + "\n";
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& label = net.vertices()[i].label;
    if (label.find_first_of("\"\r\n") != std::string::npos) {
      throw Error("vertex label cannot be written to Pajek: '" + label + "'");
    }
    out += std::to_string(i + 1) + " \"" + label + "\"";
    if (layout) {
      const auto& p = layout->coordinates[i];
      out += " " + format_fixed(p.x, 6) + " " + format_fixed(p.y, 6);
    }
    out += "\n";
  }
  out += "*Edges\n";
  for (const auto& e : net.edges()) {
    out += std::to_string(e.source + 1) + " " + std::to_string(e.target + 1) + " " +
           std::to_string(e.weight) + "\n";
  }
  return out;
}

void write_pajek_net(const CoNetwork& net, const LayoutMap* layout, const std::string& path) {
  write_file(path, format_pajek_net(net, layout));
}

PajekNetwork parse_pajek_net(std::string_view text, const std::string& source_name) {
  enum class Section { none, vertices, edges } section = Section::none;
  std::size_t declared = 0;
  bool seen_vertices = false;
  std::vector<Vertex> vertices;
  std::vector<Point> coords;
  std::size_t with_coords = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;

  auto lines = split(text, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '%') continue;
    auto fail = [&](const std::string& why) { return InputError(why, source_name, line_no); };

    auto tokens = tokenize(line);
    if (!tokens) throw fail("unterminated quoted label");
    const auto& tok = *tokens;

    if (!tok[0].empty() && tok[0].front() == '*') {
      if (iequals(tok[0], "*Vertices")) {
        if (seen_vertices) throw fail("second *Vertices section");
        if (tok.size() != 2) throw fail("expected '*Vertices <n>'");
        auto count = parse_number<std::size_t>(tok[1]);
        if (!count) throw fail("invalid vertex count '" + tok[1] + "'");
        declared = *count;
        seen_vertices = true;
        section = Section::vertices;
      } else if (iequals(tok[0], "*Edges")) {
        if (!seen_vertices) throw fail("*Edges before *Vertices");
        if (vertices.size() != declared) {
          throw fail("expected " + std::to_string(declared) + " vertices, found " +
                     std::to_string(vertices.size()));
        }
        section = Section::edges;
      } else {
        throw fail("unsupported section '" + tok[0] + "'");
      }
      continue;
    }

    if (section == Section::vertices) {
      if (tok.size() != 2 && tok.size() != 4) throw fail("expected 'id \"label\" [x y]'");
      auto id = parse_number<std::size_t>(tok[0]);
      if (!id || *id != vertices.size() + 1) {
        throw fail("vertex ids must run 1.." + std::to_string(declared) + " in order");
      }
      if (*id > declared) throw fail("more vertices than declared");
      vertices.push_back({tok[1], 0});
      if (tok.size() == 4) {
        auto x = parse_number<double>(tok[2]);
        auto y = parse_number<double>(tok[3]);
        if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
          throw fail("invalid coordinates");
        }
        coords.push_back({*x, *y});
        ++with_coords;
      } else {
        coords.push_back({});
      }
    } else if (section == Section::edges) {
      if (tok.size() != 2 && tok.size() != 3) throw fail("expected 'i j [weight]'");
      auto a = parse_number<std::size_t>(tok[0]);
      auto b = parse_number<std::size_t>(tok[1]);
      if (!a || !b) throw fail("invalid vertex id");
      if (*a < 1 || *a > declared || *b < 1 || *b > declared) {
        throw fail("edge references vertex " + std::to_string(*a < 1 || *a > declared ? *a : *b) +
                   " of " + std::to_string(declared));
      }
      if (*a == *b) throw fail("self-edge on vertex " + std::to_string(*a));
      std::size_t weight = 1;
      if (tok.size() == 3) {
        auto w = parse_number<std::size_t>(tok[2]);
        if (!w || *w == 0) throw fail("edge weight must be a positive integer");
        weight = *w;
      }
      edges.push_back({*a - 1, *b - 1, weight});
      edge_lines.push_back(line_no);
    } else {
      throw fail("data before *Vertices");
    }
  }
  if (!seen_vertices) throw InputError("missing *Vertices section", source_name);
  if (vertices.size() != declared) {
    throw InputError("expected " + std::to_string(declared) + " vertices, found " +
                         std::to_string(vertices.size()),
                     source_name);
  }
  if (with_coords != 0 && with_coords != vertices.size()) {
    throw InputError("coordinates given for some vertices but not all", source_name);
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto key = std::minmax(edges[k].source, edges[k].target);
    if (!seen.insert(key).second) throw InputError("duplicate edge", source_name, edge_lines[k]);
  }

  PajekNetwork out{CoNetwork(std::move(vertices), std::move(edges), true), std::nullopt};
  if (with_coords) out.coordinates = std::move(coords);
  return out;
}

PajekNetwork read_pajek_net(const std::string& path) {
  return parse_pajek_net(read_file(path), path);
}

std::string format_pajek_clu(const ClusterPartition& partition) {
  std::string out = "*Vertices " + std::to_string(partition.assignment.size()) + "\n";
  for (auto c : partition.assignment) out += std::to_string(c) + "\n";
  return out;
}

void write_pajek_clu(const ClusterPartition& partition, const std::string& path) {
  write_file(path, format_pajek_clu(partition));
}

std::vector<std::size_t> parse_pajek_clu(std::string_view text, const std::string& source_name) {
  std::vector<std::size_t> ids;
  std::optional<std::size_t> declared;
  auto lines = split(text, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = trim(lines[n]);
    if (line.empty()) continue;
    if (!declared) {
      auto tokens = tokenize(line);
      if (!tokens || tokens->size() != 2 || !iequals((*tokens)[0], "*Vertices")) {
        throw InputError("expected '*Vertices <n>'", source_name, n + 1);
      }
      declared = parse_number<std::size_t>((*tokens)[1]);
      if (!declared) throw InputError("invalid vertex count", source_name, n + 1);
      continue;
    }
    auto id = parse_number<std::size_t>(line);
    if (!id || *id == 0) throw InputError("invalid cluster id", source_name, n + 1);
    ids.push_back(*id);
  }
  if (!declared) throw InputError("missing *Vertices line", source_name);
  if (ids.size() != *declared) {
    throw InputError("expected " + std::to_string(*declared) + " cluster ids, found " +
                         std::to_string(ids.size()),
                     source_name);
  }
  return ids;
}

std::vector<std::size_t> read_pajek_clu(const std::string& path) {
  return parse_pajek_clu(read_file(path), path);
}

}  // namespace coword
