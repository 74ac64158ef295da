#pragma once

#include <stdexcept>
#include <string>

namespace spanlab {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AsymmetricMatrix : Error {
  int i, j;
  AsymmetricMatrix(int i_, int j_, double a, double b)
      : Error("asymmetric matrix at (" + std::to_string(i_) + "," + std::to_string(j_) +
              "): " + std::to_string(a) + " vs " + std::to_string(b)),
        i(i_), j(j_) {}
};

struct NonpositiveDistance : Error {
  int i, j;
  NonpositiveDistance(int i_, int j_, double v)
      : Error("nonpositive or nonfinite distance at (" + std::to_string(i_) + "," +
              std::to_string(j_) + "): " + std::to_string(v)),
        i(i_), j(j_) {}
};

struct TriangleViolation : Error {
  int i, j, k;  // witness: d(i,k) > d(i,j) + d(j,k)
  TriangleViolation(int i_, int j_, int k_, double dik, double dij, double djk)
      : Error("triangle inequality violated at (" + std::to_string(i_) + "," +
              std::to_string(k_) + ") via " + std::to_string(j_) + ": " + std::to_string(dik) +
              " > " + std::to_string(dij) + " + " + std::to_string(djk)),
        i(i_), j(j_), k(k_) {}
};

struct SinglePoint : Error {
  SinglePoint() : Error("metric graph requires at least 2 points") {}
};

struct SingleVertex : Error {
  SingleVertex() : Error("operation requires at least 2 vertices") {}
};

struct InvalidVertex : Error {
  int v;
  explicit InvalidVertex(int v_) : Error("invalid vertex id " + std::to_string(v_)), v(v_) {}
};

struct DisconnectedGraph : Error {
  DisconnectedGraph() : Error("graph is disconnected") {}
};

struct InvalidEps : Error {
  double eps;
  explicit InvalidEps(double e)
      : Error("eps must lie in (0,1), got " + std::to_string(e)), eps(e) {}
};

struct EpsOutOfRange : Error {
  using Error::Error;
};

struct NotInBall : Error {
  int point;
  NotInBall(int p, double d, double R)
      : Error("point " + std::to_string(p) + " at distance " + std::to_string(d) +
              " lies outside the radius-" + std::to_string(R) + " ball"),
        point(p) {}
};

struct PairTooClose : Error {
  int a, b;
  PairTooClose(int a_, int b_, double d, double r)
      : Error("points " + std::to_string(a_) + "," + std::to_string(b_) + " at distance " +
              std::to_string(d) + " violate separation > " + std::to_string(r)),
        a(a_), b(b_) {}
};

struct CreditOverflowAssertion : Error {
  using Error::Error;
};

struct UncoveredEndpoint : Error {
  int vertex;
  explicit UncoveredEndpoint(int v)
      : Error("edge endpoint " + std::to_string(v) + " lies in no cluster"), vertex(v) {}
};

struct OrphanComponent : Error {
  using Error::Error;
};

struct BadSpec : Error {
  using Error::Error;
};

}  // namespace spanlab
