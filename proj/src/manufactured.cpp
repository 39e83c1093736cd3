#include <ddrc/verification.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddrc
{

  Jet operator+(const Jet &a, const Jet &b)
  {
    return {a.v + b.v, a.g + b.g, a.H + b.H};
  }

  Jet operator-(const Jet &a, const Jet &b)
  {
    return {a.v - b.v, a.g - b.g, a.H - b.H};
  }

  Jet operator*(double s, const Jet &a)
  {
    return {s * a.v, s * a.g, s * a.H};
  }

  Jet separable(const Jet1 &fx, const Jet1 &fy, const Jet1 &fz)
  {
    Jet j;
    j.v = fx.v * fy.v * fz.v;
    j.g << fx.d * fy.v * fz.v, fx.v * fy.d * fz.v, fx.v * fy.v * fz.d;
    j.H(0, 0) = fx.dd * fy.v * fz.v;
    j.H(1, 1) = fx.v * fy.dd * fz.v;
    j.H(2, 2) = fx.v * fy.v * fz.dd;
    j.H(0, 1) = j.H(1, 0) = fx.d * fy.d * fz.v;
    j.H(0, 2) = j.H(2, 0) = fx.d * fy.v * fz.d;
    j.H(1, 2) = j.H(2, 1) = fx.v * fy.d * fz.d;
    return j;
  }

  namespace
  {
    constexpr double pi = std::numbers::pi;

    Jet1 one()
    {
      return {1., 0., 0.};
    }

    /// c t^k
    Jet1 mono(double c, int k, double t)
    {
      const double v = c * std::pow(t, k);
      const double d = k >= 1 ? c * k * std::pow(t, k - 1) : 0.;
      const double dd = k >= 2 ? c * k * (k - 1) * std::pow(t, k - 2) : 0.;
      return {v, d, dd};
    }

    /// c sin(a t)
    Jet1 sine(double c, double a, double t)
    {
      return {c * std::sin(a * t), c * a * std::cos(a * t), -c * a * a * std::sin(a * t)};
    }

    /// c cos(a t)
    Jet1 cosine(double c, double a, double t)
    {
      return {c * std::cos(a * t), -c * a * std::sin(a * t), -c * a * a * std::cos(a * t)};
    }

    // Tresca-type branches with threshold g: stick for z >= 0, slip for z < 0
    VectorJet tresca_jets(const Point3 &p, bool plus, double g)
    {
      const double x = p.x(), y = p.y(), z = p.z();
      // P = z^2 above, Q = z^2/4 below
      const Jet1 Z = z >= 0. ? mono(1., 2, z) : mono(0.25, 2, z);
      const double c2 = (z < 0. && plus) ? 2. : 1.;
      VectorJet u;
      u[0] = separable(sine(-1., 1., x), cosine(1., 1., y), Z) - separable(one(), mono(g, 1, y), one());
      u[1] = c2 * separable(one(), one(), Z);
      u[2] = separable(mono(1., 2, x), one(), Z);
      return u;
    }

    MaterialParams unit_lame()
    {
      return MaterialParams::from_lame(1., 1.);
    }
  } // namespace

  ManufacturedCase case_frictionless()
  {
    ManufacturedCase c;
    c.name = "frictionless";
    c.material = unit_lame();
    c.threshold = 0.;
    c.plane = FracturePlane{0, 0., std::nullopt, 0.};
    c.jets = [](const Point3 &p, bool plus) {
      const double x = p.x(), y = p.y(), z = p.z();
      VectorJet u;
      if (z >= 0.) {
        u[0] = separable(sine(-1., pi / 2, x), cosine(1., pi / 2, y), mono(1., 2, z));
        u[1] = separable(one(), one(), mono(1., 2, z));
        u[2] = separable(mono(1., 2, x), one(), mono(1., 2, z));
      } else {
        const double s = plus ? 1. : 2.;
        u[0] = separable(cosine(1., pi / 2, x), one(), mono(s, 4, z));
        u[1] = separable(cosine(1., pi / 2, x), one(), mono(4. * s, 3, z));
        u[2] = separable(sine(-2. / pi, pi / 2, x), one(), mono(4. * s, 3, z));
      }
      return u;
    };
    return c;
  }

  ManufacturedCase case_tresca()
  {
    ManufacturedCase c;
    c.name = "tresca";
    c.material = unit_lame();
    c.threshold = 1.;
    c.plane = FracturePlane{0, 0., std::nullopt, 1.};
    c.jets = [](const Point3 &p, bool plus) { return tresca_jets(p, plus, 1.); };
    return c;
  }

  ManufacturedCase case_incompressible(double L)
  {
    if (!(L > 0.))
      throw std::invalid_argument("incompressible case needs L > 0");
    ManufacturedCase c;
    c.name = "incompressible";
    c.material = MaterialParams::from_lame(1., L);
    c.threshold = 1. / L;
    c.plane = FracturePlane{0, 0., std::nullopt, 1. / L};
    c.jets = [L](const Point3 &p, bool plus) {
      const double x = p.x(), y = p.y(), z = p.z();
      const VectorJet w = tresca_jets(p, plus, 1.);
      VectorJet u;
      u[0] = separable(mono(1., 3, x), cosine(1., 1., y), one()) + separable(mono(1., 3, x), one(), sine(1., 1., z));
      u[1] = separable(mono(-3., 2, x), sine(1., 1., y), one());
      u[2] = separable(mono(3., 2, x), one(), cosine(1., 1., z));
      for (int i = 0; i < 3; ++i)
        u[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + (1. / L) * w[static_cast<std::size_t>(i)];
      return u;
    };
    return c;
  }

  ManufacturedCase case_quadratic_patch(const MaterialParams &material)
  {
    ManufacturedCase c;
    c.name = "quadratic";
    c.material = material;
    c.fractured = false;
    c.jets = [](const Point3 &p, bool) {
      const double x = p.x(), y = p.y(), z = p.z();
      VectorJet u;
      u[0] = separable(mono(1., 2, x), one(), one()) + separable(mono(-0.5, 1, x), mono(1., 1, y), one())
             + separable(one(), one(), mono(0.2, 2, z)) + separable(mono(0.3, 0, x), one(), one());
      u[1] = separable(one(), mono(0.4, 1, y), mono(1., 1, z)) + separable(mono(-0.7, 2, x), one(), one())
             + separable(one(), mono(0.1, 1, y), one());
      u[2] = separable(mono(0.6, 1, x), one(), mono(1., 1, z)) + separable(one(), mono(-0.25, 2, y), one())
             + separable(mono(0.05, 1, x), one(), one());
      return u;
    };
    return c;
  }

  ManufacturedCase case_by_name(const std::string &name, double L)
  {
    if (name == "frictionless")
      return case_frictionless();
    if (name == "tresca")
      return case_tresca();
    if (name == "incompressible")
      return case_incompressible(L);
    if (name == "quadratic")
      return case_quadratic_patch(MaterialParams::from_lame(1., L));
    throw std::invalid_argument("unknown case '" + name + "' (expected frictionless, tresca, incompressible or quadratic)");
  }

  //------------------------------------------------------------------------------

  bool ManufacturedCase::plus_side(const Point3 &side_point) const
  {
    return side_point(plane.axis) < plane.value;
  }

  Eigen::Vector3d ManufacturedCase::displacement(const Point3 &x, const Point3 &side_point) const
  {
    const VectorJet u = jets(x, plus_side(side_point));
    return {u[0].v, u[1].v, u[2].v};
  }

  Eigen::Matrix3d ManufacturedCase::gradient(const Point3 &x, const Point3 &side_point) const
  {
    const VectorJet u = jets(x, plus_side(side_point));
    Eigen::Matrix3d G;
    for (int i = 0; i < 3; ++i)
      G.row(i) = u[static_cast<std::size_t>(i)].g.transpose();
    return G;
  }

  Eigen::Matrix3d ManufacturedCase::stress(const Point3 &x, const Point3 &side_point) const
  {
    const Eigen::Matrix3d G = gradient(x, side_point);
    const Eigen::Matrix3d eps = 0.5 * (G + G.transpose());
    return 2. * material.G * eps + material.L * eps.trace() * Eigen::Matrix3d::Identity();
  }

  Eigen::Vector3d ManufacturedCase::body_force(const Point3 &x, const Point3 &side_point) const
  {
    const VectorJet u = jets(x, plus_side(side_point));
    // grad div u
    Eigen::Vector3d graddiv = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k)
      graddiv += u[static_cast<std::size_t>(k)].H.col(k);
    Eigen::Vector3d f;
    for (int i = 0; i < 3; ++i)
      f(i) = -(material.G * u[static_cast<std::size_t>(i)].H.trace() + (material.G + material.L) * graddiv(i));
    return f;
  }

  Eigen::Vector3d ManufacturedCase::normal_plus() const
  {
    return Eigen::Vector3d::Unit(plane.axis);
  }

  namespace
  {
    Point3 side_point_of(const ManufacturedCase &c, const Point3 &x, bool plus)
    {
      Point3 p = x;
      p(c.plane.axis) = c.plane.value + (plus ? -1. : 1.);
      return p;
    }
  } // namespace

  Eigen::Vector3d ManufacturedCase::traction(const Point3 &x) const
  {
    return -stress(x, side_point_of(*this, x, true)) * normal_plus();
  }

  Eigen::Vector3d ManufacturedCase::jump(const Point3 &x) const
  {
    return displacement(x, side_point_of(*this, x, true)) - displacement(x, side_point_of(*this, x, false));
  }

  SidedField ManufacturedCase::displacement_field() const
  {
    return [c = *this](const Point3 &x, const Point3 &s) { return c.displacement(x, s); };
  }

  SidedField ManufacturedCase::body_force_field() const
  {
    return [c = *this](const Point3 &x, const Point3 &s) { return c.body_force(x, s); };
  }

} // namespace ddrc
