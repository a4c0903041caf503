#include "conleygp/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conleygp/error.hpp"
#include "conleygp/rng.hpp"

namespace conleygp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string("non-finite parameter: ") + what);
}

}  // namespace

Domain Domain::make(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ConfigError("domain requires finite lower < upper");
  }
  return Domain{lower, upper};
}

TrainingData::TrainingData(std::vector<Point> points, Domain domain)
    : points_(std::move(points)), domain_(Domain::make(domain.lower, domain.upper)) {
  if (points_.size() < 2) throw DataError("training data needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("non-finite value in training point " + std::to_string(i));
    }
    if (!domain_.contains(p.x)) {
      throw DataError("training input x=" + std::to_string(p.x) + " lies outside the domain");
    }
  }
  std::vector<double> sorted = xs();
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DataError("duplicate training input x");
  }
}

std::vector<double> TrainingData::xs() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.x);
  return out;
}

std::vector<double> TrainingData::ys() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.y);
  return out;
}

double evaluate(const SyntheticFunction& function, double x) {
  return std::visit(
      Overloaded{
          [x](const Logistic& f) { return f.r * x * (1.0 - x); },
          [x](const ArctanSigmoid& f) { return f.scale * std::atan(f.slope * x - f.shift) + f.offset; },
          [x](const GaussBump& f) {
            const double d = x - f.center;
            return f.height * std::exp(-f.width * d * d);
          },
          [x](const TableFunction& f) {
            const auto& k = f.knots;
            if (x <= k.front().x) return k.front().y;
            if (x >= k.back().x) return k.back().y;
            auto it = std::upper_bound(k.begin(), k.end(), x,
                                       [](double v, const Point& p) { return v < p.x; });
            const Point& right = *it;
            const Point& left = *(it - 1);
            const double t = (x - left.x) / (right.x - left.x);
            return left.y + t * (right.y - left.y);
          },
      },
      function);
}

std::string describe(const SyntheticFunction& function) {
  char buf[160];
  std::visit(Overloaded{
                 [&](const Logistic& f) { std::snprintf(buf, sizeof buf, "%g*x*(1-x)", f.r); },
                 [&](const ArctanSigmoid& f) {
                   std::snprintf(buf, sizeof buf, "%g*atan(%g*x-%g)+%g", f.scale, f.slope, f.shift, f.offset);
                 },
                 [&](const GaussBump& f) {
                   std::snprintf(buf, sizeof buf, "%g*exp(-%g*(x-%g)^2)", f.height, f.width, f.center);
                 },
                 [&](const TableFunction& f) {
                   std::snprintf(buf, sizeof buf, "table(%zu knots)", f.knots.size());
                 },
             },
             function);
  return buf;
}

void validate(const SyntheticSpec& spec) {
  if (spec.samples < 2) throw ConfigError("synthetic spec needs at least two samples");
  std::visit(Overloaded{
                 [](const Logistic& f) { require_finite(f.r, "r"); },
                 [](const ArctanSigmoid& f) {
                   require_finite(f.scale, "scale");
                   require_finite(f.slope, "slope");
                   require_finite(f.shift, "shift");
                   require_finite(f.offset, "offset");
                 },
                 [](const GaussBump& f) {
                   require_finite(f.height, "height");
                   require_finite(f.width, "width");
                   require_finite(f.center, "center");
                 },
                 [](const TableFunction& f) {
                   if (f.knots.size() < 2) throw ConfigError("table needs at least two knots");
                   for (std::size_t i = 0; i < f.knots.size(); ++i) {
                     require_finite(f.knots[i].x, "table x");
                     require_finite(f.knots[i].y, "table y");
                     if (i > 0 && !(f.knots[i - 1].x < f.knots[i].x)) {
                       throw ConfigError("table knots must have strictly ascending x");
                     }
                   }
                 },
             },
             spec.function);
}

TrainingData parse_csv(const std::string& text, const Domain& domain) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Point> points;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : row) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "x,y") {
        throw DataError("line " + std::to_string(line_no) + ": expected header 'x,y'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      throw DataError("line " + std::to_string(line_no) + ": expected two comma-separated values");
    }
    Point p;
    if (!parse_double(trim(std::string_view(row).substr(0, comma)), p.x) ||
        !parse_double(trim(std::string_view(row).substr(comma + 1)), p.y)) {
      throw DataError("line " + std::to_string(line_no) + ": malformed number");
    }
    if (!domain.contains(p.x)) {
      throw DataError("line " + std::to_string(line_no) + ": x outside domain");
    }
    for (const auto& q : points) {
      if (q.x == p.x) throw DataError("line " + std::to_string(line_no) + ": duplicate x");
    }
    points.push_back(p);
  }
  if (!header_seen) throw DataError("empty CSV input");
  return TrainingData(std::move(points), domain);
}

TrainingData load_csv(const std::filesystem::path& path, const Domain& domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), domain);
}

std::string format_csv(const TrainingData& data) {
  std::string out = "x,y\n";
  char buf[64];
  for (const auto& p : data.points()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out += buf;
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const TrainingData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_csv(data);
}

TrainingData generate(const SyntheticSpec& spec, const Domain& domain) {
  validate(spec);
  Rng rng(spec.seed);
  std::vector<Point> points;
  points.reserve(spec.samples);
  while (points.size() < spec.samples) {
    const double x = rng.uniform(domain.lower, domain.upper);
    const bool duplicate = std::any_of(points.begin(), points.end(),
                                       [x](const Point& p) { return p.x == x; });
    if (duplicate) continue;
    points.push_back({x, evaluate(spec.function, x)});
  }
  return TrainingData(std::move(points), domain);
}

double covering_radius(std::span<const double> xs, const Domain& domain) {
  if (xs.empty()) throw DataError("covering radius of an empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  double radius = std::max(sorted.front() - domain.lower, domain.upper - sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    radius = std::max(radius, 0.5 * (sorted[i] - sorted[i - 1]));
  }
  return radius;
}

double covering_radius(const TrainingData& data) {
  const auto xs = data.xs();
  return covering_radius(xs, data.domain());
}

}  // namespace conleygp
