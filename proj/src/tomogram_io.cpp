#include "tomo/tomogram_io.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

double parse_field(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InputError("tomogram CSV line " + std::to_string(line) + ": bad number \"" +
                     std::string(s) + "\"");
  }
  return v;
}

}  // namespace

void write_tomogram_csv(std::ostream& out, const TomogramGrid& w) {
  std::string buf = "theta,x,w\n";
  const XGrid& g = w.x_grid();
  for (std::size_t k = 0; k < w.phases().size(); ++k) {
    const auto row = w.row(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      append_double(buf, w.phases()[k]);
      buf += ',';
      append_double(buf, g.at(i));
      buf += ',';
      append_double(buf, row[i]);
      buf += '\n';
    }
  }
  out << buf;
}

TomogramGrid read_tomogram_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "theta,x,w") {
    throw InputError("tomogram CSV must start with header \"theta,x,w\"");
  }
  std::vector<double> thetas, xs, values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw InputError("tomogram CSV line " + std::to_string(lineno) + ": expected 3 columns");
    }
    const std::string_view sv(line);
    thetas.push_back(parse_field(sv.substr(0, c1), lineno));
    xs.push_back(parse_field(sv.substr(c1 + 1, c2 - c1 - 1), lineno));
    values.push_back(parse_field(sv.substr(c2 + 1), lineno));
  }
  if (thetas.empty()) throw InputError("tomogram CSV has no data");

  std::size_t n_x = 0;
  while (n_x < thetas.size() && thetas[n_x] == thetas[0]) ++n_x;
  if (thetas.size() % n_x != 0) throw InputError("tomogram CSV rows have unequal lengths");
  std::vector<double> phases;
  for (std::size_t k = 0; k * n_x < thetas.size(); ++k) {
    const double th = thetas[k * n_x];
    for (std::size_t i = 0; i < n_x; ++i) {
      if (thetas[k * n_x + i] != th || xs[k * n_x + i] != xs[i]) {
        throw InputError("tomogram CSV is not a row-major phase x quadrature grid");
      }
    }
    phases.push_back(th);
  }
  const std::vector<double> first_xs(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n_x));
  if (first_xs.size() < 2) throw InputError("tomogram CSV needs at least two x points per row");

  const XGrid grid(first_xs.front(), first_xs.back(), first_xs.size());
  const double scale = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
  for (std::size_t i = 0; i < first_xs.size(); ++i) {
    if (std::abs(first_xs[i] - grid.at(i)) > 1e-9 * scale) {
      throw InputError("tomogram CSV x values are not uniformly spaced");
    }
  }
  return TomogramGrid(std::move(phases), grid, std::move(values));
}

void save_tomogram(const std::filesystem::path& path, const TomogramGrid& w) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_tomogram_csv(out, w);
}

TomogramGrid load_tomogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tomogram " + path.string());
  return read_tomogram_csv(in);
}

}  // namespace tomo
