#include "aplab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace aplab {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_grid_function_csv(const GridFunction& f,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  out << "x,value\n";
  for (int i = 0; i < f.size(); ++i)
    out << format_double(f.grid.center(i)) << ',' << format_double(f[i])
        << '\n';
  if (!out) throw ValidationError("write failed: " + path.string());
}

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw ValidationError(ctx + ": malformed number '" + s + "'");
  return v;
}

}  // namespace

GridFunction read_grid_function_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,value")
    throw ValidationError(path.string() + ": expected header 'x,value'");
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError(path.string() + ": missing comma in row");
    xs.push_back(parse_double(line.substr(0, comma), path.string()));
    vs.push_back(parse_double(line.substr(comma + 1), path.string()));
  }
  if (xs.empty()) throw ValidationError(path.string() + ": no data rows");

  Grid1D g;
  g.n = static_cast<int>(xs.size());
  if (g.n == 1) {
    g.h = 1.0;
  } else {
    g.h = xs[1] - xs[0];
    if (!(g.h > 0.0))
      throw ValidationError(path.string() + ": centers must increase");
    for (size_t i = 1; i < xs.size(); ++i) {
      const double step = xs[i] - xs[i - 1];
      if (std::abs(step - g.h) > 1e-9 * std::max(1.0, std::abs(g.h)))
        throw ValidationError(path.string() + ": non-uniform cell centers");
    }
  }
  g.origin = xs[0] - 0.5 * g.h;
  GridFunction f(g, std::move(vs));
  validate_values(f, /*require_nonnegative=*/false, path.string());
  return f;
}

}  // namespace aplab
