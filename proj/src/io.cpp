#include "minsum/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace minsum {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used])))
      ++used;
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  return out;
}

}  // namespace

Dataset read_points_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<double> coords;
  std::size_t n = 0, d = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    double v0;
    if (lineno == 1 && !parse_double(fields[0], v0)) continue;  // header
    if (d == 0) d = fields.size();
    if (fields.size() != d)
      fail(path, lineno, "expected " + std::to_string(d) + " fields, got " +
                             std::to_string(fields.size()));
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, v)) fail(path, lineno, "bad number '" + f + "'");
      coords.push_back(v);
    }
    ++n;
  }
  if (n == 0) throw ParseError(path + ": no data rows");
  return Dataset(n, d, std::move(coords));
}

void write_points_csv(const std::string& path, const Dataset& ds, bool header) {
  std::ofstream out = open_out(path);
  if (header) {
    for (std::size_t j = 0; j < ds.dim(); ++j)
      out << (j ? ",x" : "x") << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double* r = ds.row(i);
    for (std::size_t j = 0; j < ds.dim(); ++j) {
      if (j) out << ',';
      out << fmt_double(r[j]);
    }
    out << '\n';
  }
}

Labeling read_labels(const std::string& path, std::int32_t k) {
  std::ifstream in = open_in(path);
  std::vector<std::int32_t> labels;
  std::string line;
  std::size_t lineno = 0;
  std::int32_t maxv = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      long v = std::stol(line, &used);
      while (used < line.size() &&
             std::isspace(static_cast<unsigned char>(line[used])))
        ++used;
      if (used != line.size() || v < 0)
        fail(path, lineno, "bad label '" + line + "'");
      labels.push_back(static_cast<std::int32_t>(v));
      maxv = std::max(maxv, labels.back());
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail(path, lineno, "bad label '" + line + "'");
    }
  }
  if (labels.empty()) throw ParseError(path + ": no labels");
  std::int32_t kk = k > 0 ? k : maxv + 1;
  Labeling lab{std::move(labels), kk};
  validate_labeling(lab, lab.labels.size());
  return lab;
}

void write_labels(const std::string& path, const Labeling& lab) {
  std::ofstream out = open_out(path);
  for (std::int32_t v : lab.labels) out << v << '\n';
}

SetSystem read_set_system(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  SetSystem sys;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (lineno == 1 || sys.universe == 0) {
      long u, z, m;
      if (!(ss >> u >> z >> m) || u < 1 || z < 1 || m < 1)
        fail(path, lineno, "expected header 'universe set_size count'");
      std::string rest;
      if (ss >> rest) fail(path, lineno, "trailing data after header");
      sys.universe = static_cast<std::size_t>(u);
      sys.set_size = static_cast<std::size_t>(z);
      count = static_cast<std::size_t>(m);
      continue;
    }
    std::vector<std::uint32_t> s;
    long v;
    while (ss >> v) {
      if (v < 1 || v > static_cast<long>(sys.universe))
        fail(path, lineno, "element out of range");
      s.push_back(static_cast<std::uint32_t>(v));
    }
    if (s.size() != sys.set_size)
      fail(path, lineno, "expected " + std::to_string(sys.set_size) + " elements");
    std::sort(s.begin(), s.end());
    sys.sets.push_back(std::move(s));
  }
  if (sys.universe == 0) throw ParseError(path + ": missing header");
  if (sys.sets.size() != count)
    throw ParseError(path + ": header promised " + std::to_string(count) +
                     " sets, found " + std::to_string(sys.sets.size()));
  validate_set_system(sys);
  return sys;
}

void write_set_system(const std::string& path, const SetSystem& sys) {
  validate_set_system(sys);
  std::ofstream out = open_out(path);
  out << sys.universe << ' ' << sys.set_size << ' ' << sys.sets.size() << '\n';
  for (const auto& s : sys.sets) {
    for (std::size_t j = 0; j < s.size(); ++j) out << (j ? " " : "") << s[j];
    out << '\n';
  }
}

std::string run_report_jsonl(const RunReport& r) {
  nlohmann::ordered_json j;
  j["algo"] = r.algo;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["d"] = r.d;
  j["k"] = r.k;
  if (r.epsilon)
    j["epsilon"] = *r.epsilon;
  else
    j["epsilon"] = nullptr;
  if (r.alpha)
    j["alpha"] = *r.alpha;
  else
    j["alpha"] = nullptr;
  j["cost"] = r.cost;
  if (r.ratio)
    j["ratio"] = *r.ratio;
  else
    j["ratio"] = nullptr;
  j["wall_ms"] = r.wall_ms;
  j["flags"] = r.flags;
  return j.dump();
}

RunReport parse_run_report(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad report line: ") + e.what());
  }
  RunReport r;
  try {
    r.algo = j.at("algo").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<std::size_t>();
    r.d = j.at("d").get<std::size_t>();
    r.k = j.at("k").get<std::int32_t>();
    if (!j.at("epsilon").is_null()) r.epsilon = j.at("epsilon").get<double>();
    if (!j.at("alpha").is_null()) r.alpha = j.at("alpha").get<double>();
    r.cost = j.at("cost").get<double>();
    if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad report line: ") + e.what());
  }
  return r;
}

}  // namespace minsum
