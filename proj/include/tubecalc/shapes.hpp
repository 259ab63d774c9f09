#pragma once

#include "tubecalc/geometry.hpp"

#include <functional>
#include <map>
#include <string>

namespace tubecalc {

// Closed forms for a catalog shape, kept apart from the generic numerical path
// so the two can be checked against each other.
struct ShapeOracle {
  std::string shape_id;
  std::function<Vec(const Vec& x)> projection;
  std::function<Mat(const Vec& xi)> frame;
  std::function<Mat(const Vec& x)> jacobian_pi;
  std::function<Mat(int q, const Vec& xi, const Vec& omega)> b;
  std::function<Mat(const Vec& xi)> mu;           // hypersurfaces only
  std::function<double(const Vec& xi)> mean_curvature;  // hypersurfaces only
  std::map<std::string, double> table;
};

struct Shape {
  Submanifold manifold;
  ShapeOracle oracle;
};

Shape make_sphere(int n, double r);
Shape make_circle3d(double R);

double sphere_delta_derivative_oracle(int n, double r, int i, int k, int j);

}  // namespace tubecalc
