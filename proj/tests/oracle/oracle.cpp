#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

namespace oracle {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("oracle: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<Row> read_records(const std::string& path) {
  std::string text = slurp(path);
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !cur.empty()) {
        fields.push_back(cur);
        table.push_back(fields);
      }
      fields.clear();
      cur.clear();
      any = false;
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (any || !cur.empty()) {
    fields.push_back(cur);
    table.push_back(fields);
  }

  std::vector<Row> rows;
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& f = table[r];
    if (f.size() != 7) throw std::runtime_error("oracle: bad row");
    Row row;
    row.id = f[0];
    row.source = f[1];
    row.year = std::stoi(f[2]);
    row.class_a = strip(f[4]);
    row.class_b = strip(f[5]);
    std::string kw;
    for (char c : f[6] + ";") {
      if (c == ';') {
        auto t = strip(kw);
        if (!t.empty()) row.keywords.push_back(t);
        kw.clear();
      } else {
        kw += c;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string fold(const std::string& raw) {
  UErrorCode st = U_ZERO_ERROR;
  std::vector<UChar> u16(raw.size() * 2 + 4);
  int32_t len = 0;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &len, raw.data(),
                static_cast<int32_t>(raw.size()), &st);
  if (U_FAILURE(st)) throw std::runtime_error("oracle: bad utf-8");
  const UNormalizer2* nfc = unorm2_getNFCInstance(&st);
  std::vector<UChar> a(len * 4 + 8), b(len * 4 + 8);
  int32_t la = unorm2_normalize(nfc, u16.data(), len, a.data(), static_cast<int32_t>(a.size()), &st);
  int32_t lb = u_strFoldCase(b.data(), static_cast<int32_t>(b.size()), a.data(), la,
                             U_FOLD_CASE_DEFAULT, &st);
  la = unorm2_normalize(nfc, b.data(), lb, a.data(), static_cast<int32_t>(a.size()), &st);
  std::string out(static_cast<std::size_t>(la) * 4 + 4, '\0');
  int32_t lo = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &lo, a.data(), la, &st);
  if (U_FAILURE(st)) throw std::runtime_error("oracle: icu failure");
  out.resize(static_cast<std::size_t>(lo));

  std::string collapsed;
  bool gap = false;
  for (char c : out) {
    if (space(c)) {
      gap = true;
      continue;
    }
    if (gap && !collapsed.empty()) collapsed += ' ';
    gap = false;
    collapsed += c;
  }
  return collapsed;
}

std::map<std::string, std::string> read_mapping(const std::string& path) {
  std::map<std::string, std::string> m;
  std::istringstream in(slurp(path));
  std::string line;
  std::vector<std::string> canon;
  while (std::getline(in, line)) {
    auto t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    auto arrow = t.find("->");
    m[fold(t.substr(0, arrow))] = strip(t.substr(arrow + 2));
    canon.push_back(strip(t.substr(arrow + 2)));
  }
  for (const auto& c : canon) m.emplace(fold(c), c);
  return m;
}

Tally tally(const std::vector<Row>& rows, const std::map<std::string, std::string>& mapping,
            bool passthrough) {
  Tally t;
  for (const auto& row : rows) {
    std::set<std::string> s;
    for (const auto& kw : row.keywords) {
      auto key = fold(kw);
      auto it = mapping.find(key);
      if (it != mapping.end()) {
        s.insert(it->second);
        ++t.tokens;
      } else if (passthrough) {
        s.insert(key);
        ++t.tokens;
      }
    }
    for (const auto& d : s) ++t.freq[d];
    std::vector<std::string> v(s.begin(), s.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] < v[j]) ++t.pairs[{v[i], v[j]}];
      }
    }
    t.sets.push_back(s);
  }
  return t;
}

std::map<std::string, std::size_t> count_labels(const std::vector<Row>& rows, bool scheme_a) {
  std::map<std::string, std::size_t> m;
  for (const auto& r : rows) {
    const auto& label = scheme_a ? r.class_a : r.class_b;
    ++m[label.empty() ? "(unclassified)" : label];
  }
  return m;
}

std::map<std::pair<std::string, std::string>, std::size_t> pivot(const std::vector<Row>& rows) {
  std::map<std::pair<std::string, std::string>, std::size_t> m;
  for (const auto& r : rows) {
    ++m[{r.class_a.empty() ? "(unclassified)" : r.class_a,
         r.class_b.empty() ? "(unclassified)" : r.class_b}];
  }
  return m;
}

int spreadsheet_percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return static_cast<int>(std::floor(100.0 * static_cast<double>(part) /
                                         static_cast<double>(whole) +
                                     0.5));
}

HopMetrics hop_metrics(std::size_t n, const std::vector<WEdge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : edges) {
    d[e.a][e.b] = d[e.b][e.a] = 1.0;
    deg[e.a] += 1.0;
    deg[e.b] += 1.0;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

  HopMetrics h;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    h.degree_centrality.push_back(n > 1 ? deg[i] / static_cast<double>(n - 1) : 0.0);
    double sum = 0.0;
    double reach = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d[i][j] < inf) {
        sum += d[i][j];
        reach += 1.0;
      }
    }
    h.closeness.push_back(sum > 0.0 ? reach / sum : 0.0);
    if (!seen[i]) {
      ++h.components;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][j] < inf) seen[j] = true;
      }
    }
  }
  h.density = n > 1 ? 2.0 * static_cast<double>(edges.size()) /
                          (static_cast<double>(n) * static_cast<double>(n - 1))
                    : 0.0;
  return h;
}

std::vector<std::vector<double>> weighted_distances(std::size_t n,
                                                    const std::vector<WEdge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : edges) d[e.a][e.b] = d[e.b][e.a] = std::min(d[e.a][e.b], 1.0 / e.w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

double modularity(std::size_t n, const std::vector<WEdge>& edges,
                  const std::vector<std::size_t>& assignment, double gamma) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.a][e.b] += e.w;
    a[e.b][e.a] += e.w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (assignment[i] == assignment[j]) q += a[i][j] - gamma * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

Best best_partition(std::size_t n, const std::vector<WEdge>& edges, double gamma) {
  Best best;
  best.q = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      ++best.partitions;
      double q = modularity(n, edges, rgs, gamma);
      if (q > best.q) {
        best.q = q;
        best.assignment = rgs;
      }
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return best;
  rgs[0] = 0;
  rec(1, 1);
  return best;
}

double stress(const std::vector<P>& pos, const std::vector<std::vector<double>>& d, double l0) {
  double e = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      double len = std::sqrt((pos[i].x - pos[j].x) * (pos[i].x - pos[j].x) +
                             (pos[i].y - pos[j].y) * (pos[i].y - pos[j].y));
      double r = len - l0 * d[i][j];
      e += r * r / (d[i][j] * d[i][j]);
    }
  }
  return e;
}

std::vector<P> descent_layout(const std::vector<std::vector<double>>& d, double l0,
                              std::size_t max_steps) {
  const std::size_t n = d.size();
  double max_d = 0.0;
  for (const auto& row : d)
    for (double v : row) max_d = std::max(max_d, v);
  std::vector<P> pos(n);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < n; ++k) {
    double a = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
    pos[k] = {l0 * max_d / 2.0 * std::cos(a), l0 * max_d / 2.0 * std::sin(a)};
  }
  double step = 0.1;
  double e = stress(pos, d, l0);
  for (std::size_t it = 0; it < max_steps; ++it) {
    std::vector<P> g(n);
    double gnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        double len = std::sqrt(dx * dx + dy * dy);
        if (len == 0.0) continue;
        double f = 2.0 * (len - l0 * d[i][j]) / (d[i][j] * d[i][j] * len);
        g[i].x += f * dx;
        g[i].y += f * dy;
      }
      gnorm += g[i].x * g[i].x + g[i].y * g[i].y;
    }
    if (std::sqrt(gnorm) < 1e-10) break;
    for (;;) {
      std::vector<P> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = {pos[i].x - step * g[i].x, pos[i].y - step * g[i].y};
      double te = stress(trial, d, l0);
      if (te < e) {
        pos = trial;
        e = te;
        step *= 1.5;
        break;
      }
      step *= 0.5;
      if (step < 1e-18) return pos;
    }
  }
  return pos;
}

}  // namespace oracle
