#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace conleygp {

/// The compact interval X = [lower, upper].
struct Domain {
  double lower = 0.0;
  double upper = 1.0;

  /// Validating constructor; throws ConfigError unless lower < upper, both finite.
  static Domain make(double lower, double upper);

  double length() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Noise-free samples y_n = f(x_n) on a domain. Immutable once built:
/// at least two points, pairwise distinct x, every x inside the domain.
class TrainingData {
 public:
  TrainingData(std::vector<Point> points, Domain domain);

  const std::vector<Point>& points() const { return points_; }
  const Domain& domain() const { return domain_; }
  std::size_t size() const { return points_.size(); }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

 private:
  std::vector<Point> points_;
  Domain domain_;
};

/// r x (1 - x)
struct Logistic {
  double r = 0.0;
};

/// scale * atan(slope * x - shift) + offset
struct ArctanSigmoid {
  double scale = 0.0;
  double slope = 0.0;
  double shift = 0.0;
  double offset = 0.0;
};

/// height * exp(-width * (x - center)^2)
struct GaussBump {
  double height = 0.0;
  double width = 0.0;
  double center = 0.0;
};

/// Piecewise-linear interpolation through knots given with ascending x;
/// constant extrapolation outside the first and last knot.
struct TableFunction {
  std::vector<Point> knots;
};

using SyntheticFunction = std::variant<Logistic, ArctanSigmoid, GaussBump, TableFunction>;

double evaluate(const SyntheticFunction& function, double x);
std::string describe(const SyntheticFunction& function);

struct SyntheticSpec {
  SyntheticFunction function;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError on non-finite parameters, fewer than two samples, or
/// an unsorted/undersized table.
void validate(const SyntheticSpec& spec);

/// Reads a `x,y` CSV file. Malformed rows are reported with their line number.
TrainingData load_csv(const std::filesystem::path& path, const Domain& domain);
TrainingData parse_csv(const std::string& text, const Domain& domain);
void write_csv(const std::filesystem::path& path, const TrainingData& data);
std::string format_csv(const TrainingData& data);

/// N inputs drawn i.i.d. uniform on the domain from Rng(spec.seed); y = f(x).
TrainingData generate(const SyntheticSpec& spec, const Domain& domain);

/// max over z in the domain of the distance to the nearest sample input.
double covering_radius(std::span<const double> xs, const Domain& domain);
double covering_radius(const TrainingData& data);

}  // namespace conleygp
