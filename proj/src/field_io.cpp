#include "piv/field_io.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace piv {

namespace {

void append_number(std::string &out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  out.append(buf, static_cast<std::size_t>(n));
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

double parse_double(const std::string &s, std::size_t line) {
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw IoError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

struct Row {
  double x, y;
  std::vector<std::string> rest;
};

std::vector<Row> parse_rows(const std::string &text, std::size_t columns, std::string &header) {
  std::istringstream in(text);
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      header = line;
      continue;
    }
    if (line.empty()) continue;
    auto cols = split(line);
    if (cols.size() != columns)
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                    " columns");
    rows.push_back({parse_double(cols[0], lineno), parse_double(cols[1], lineno),
                    {cols.begin() + 2, cols.end()}});
  }
  if (rows.empty()) throw IoError("CSV holds no nodes");
  return rows;
}

std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

GridSpec recover_grid(const std::vector<Row> &rows) {
  std::vector<double> xs, ys;
  for (const Row &r : rows) {
    xs.push_back(r.x);
    ys.push_back(r.y);
  }
  xs = distinct(xs);
  ys = distinct(ys);
  if (xs.size() * ys.size() != rows.size()) throw IoError("CSV nodes do not form a full grid");

  const double window = 2.0 * xs.front();
  if (window != std::round(window) || 2.0 * ys.front() != window)
    throw IoError("CSV node centers do not start at window/2 on both axes");
  double step = window;
  if (xs.size() > 1) step = xs[1] - xs[0];
  else if (ys.size() > 1) step = ys[1] - ys[0];
  if (step != std::round(step) || step < 1) throw IoError("CSV node spacing is not a whole pixel");

  GridSpec g;
  g.window = static_cast<int>(window);
  g.step = static_cast<int>(step);
  g.nx = static_cast<int>(xs.size());
  g.ny = static_cast<int>(ys.size());
  g.image_width = (g.nx - 1) * g.step + g.window;
  g.image_height = (g.ny - 1) * g.step + g.window;

  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const Row &r = rows[g.node_index(ix, iy)];
      if (r.x != g.center_x(ix) || r.y != g.center_y(iy))
        throw IoError("CSV rows are not a uniform grid in row-major order");
    }
  return g;
}

} // namespace

std::string format_vectors_csv(const VectorField &field) {
  field.check();
  if (!field.complete()) throw ParameterError("cannot export a field that still has outliers");
  const auto &g = field.grid;
  std::string out = "x,y,u,v,status\n";
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t k = g.node_index(ix, iy);
      append_number(out, g.center_x(ix));
      out += ',';
      append_number(out, g.center_y(iy));
      out += ',';
      append_number(out, field.u[k]);
      out += ',';
      append_number(out, field.v[k]);
      out += ',';
      out += to_string(field.status[k]);
      out += '\n';
    }
  return out;
}

void export_vectors(const VectorField &field, const std::filesystem::path &out) {
  write_text(out, format_vectors_csv(field));
}

VectorField parse_vectors_csv(const std::string &text) {
  std::string header;
  const auto rows = parse_rows(text, 5, header);
  if (header != "x,y,u,v,status") throw IoError("unexpected vector CSV header '" + header + "'");
  VectorField f(recover_grid(rows));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    f.u[k] = parse_double(rows[k].rest[0], k + 2);
    f.v[k] = parse_double(rows[k].rest[1], k + 2);
    f.status[k] = parse_node_status(rows[k].rest[2]);
  }
  return f;
}

VectorField import_vectors(const std::filesystem::path &in) {
  return parse_vectors_csv(read_text(in));
}

std::string format_scalars_csv(const ScalarField &s) {
  s.check();
  const auto &g = s.grid;
  std::string out = "x,y,";
  out += to_string(s.quantity);
  out += '\n';
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      append_number(out, g.center_x(ix));
      out += ',';
      append_number(out, g.center_y(iy));
      out += ',';
      append_number(out, s.at(ix, iy));
      out += '\n';
    }
  return out;
}

void export_scalars(const ScalarField &s, const std::filesystem::path &out) {
  write_text(out, format_scalars_csv(s));
}

ScalarField import_scalars(const std::filesystem::path &in) {
  std::string header;
  const auto rows = parse_rows(read_text(in), 3, header);
  if (header.rfind("x,y,", 0) != 0) throw IoError("unexpected scalar CSV header '" + header + "'");
  ScalarField s;
  s.quantity = parse_quantity(header.substr(4));
  s.grid = recover_grid(rows);
  s.values.resize(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) s.values[k] = parse_double(rows[k].rest[0], k + 2);
  return s;
}

} // namespace piv
