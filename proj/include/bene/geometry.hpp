#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bene {

// A point of R^d, d >= 1, with the split x = (xvec, x_d).
struct Point {
    std::vector<double> c;

    Point() = default;
    explicit Point(std::vector<double> coords) : c(std::move(coords)) {}
    Point(std::initializer_list<double> coords) : c(coords) {}

    int dim() const { return static_cast<int>(c.size()); }
    double xd() const { return c.back(); }
    double& xd() { return c.back(); }
    // Hyperplane part xvec, length d-1.
    std::span<const double> xvec() const { return {c.data(), c.size() - 1}; }

    bool finite() const;
    double dist(const Point& o) const;
};

// Closed axis-aligned box in R^{d-1}.
struct Box {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains_closed(std::span<const double> xi) const;
    bool contains_open(std::span<const double> xi) const;
    // Euclidean distance from xi to the (closed) box; 0 inside.
    double distance(std::span<const double> xi) const;
};

enum class HoleVariant {
    FiniteHoles,    // D^c is the union of the boxes (closed)
    FiniteWindows,  // D is the union of the boxes (open); D^c is the complement
};

struct HoleSpec {
    HoleVariant variant = HoleVariant::FiniteHoles;
    std::vector<Box> boxes;
};

enum class SiteClass { InD, InHoles };

struct ValidationReport {
    struct Check {
        std::string name;
        bool pass;
        std::string message;
    };
    std::vector<Check> checks;
    bool valid = true;
    std::vector<Box> canonical_boxes;
    void add(const std::string& name, bool pass, const std::string& msg = "");
};

// Canonical merge: drop boxes contained in others, fuse overlapping/touching
// boxes whose union is again a box. Iterates to a fixpoint; result sorted.
std::vector<Box> merge_boxes(std::vector<Box> boxes);

ValidationReport validate_holes(int d, const HoleSpec& holes);

// R^d minus a closed hole set in the hyperplane x_d = 0.
class BenedicksDomain {
  public:
    BenedicksDomain(int d, HoleSpec holes, std::string label = "");

    int dim() const { return d_; }
    const std::string& label() const { return label_; }
    const HoleSpec& holes() const { return holes_; }

    // Classification of a hyperplane point xi in R^{d-1}. Boundary points of D
    // count as holes (D^c is closed).
    SiteClass classify(std::span<const double> xi) const;
    bool in_holes(std::span<const double> xi) const { return classify(xi) == SiteClass::InHoles; }

    // Lower bound on the distance (within the hyperplane) from xi to the hole
    // set. Exact for FiniteHoles; for FiniteWindows it is the distance to the
    // boundary of the best containing window, a valid lower bound.
    double hole_distance(std::span<const double> xi) const;

    // True if x lies in the open domain Omega (off the hyperplane, or on it
    // strictly inside D).
    bool contains(const Point& x) const;

  private:
    int d_;
    HoleSpec holes_;
    std::string label_;
};

ValidationReport validate_domain(const BenedicksDomain& dom);

// (xvec, -x_d); the point y* of the reflection identity.
Point mirror_across_hyperplane(const Point& p);

// Oblique reflection frame: base point y with y_d != 0 and a unit direction n
// in the hyperplane.
struct ReflectionFrame {
    Point y;
    std::vector<double> n;  // length d-1, |n| = 1

    ReflectionFrame(Point y_, std::vector<double> n_);
    int dim() const { return y.dim(); }
};

// The pair (S+(x), S-(x)); both are involutive isometries.
std::pair<Point, Point> oblique_reflections(const ReflectionFrame& frame, const Point& x);

// Membership in Omega^+ = { |x_d| <= (xvec - yvec).n }.
bool in_omega_plus(const ReflectionFrame& frame, const Point& x);

}  // namespace bene
