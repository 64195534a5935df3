#include "bene/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bene {

bool Point::finite() const {
    for (double v : c)
        if (!std::isfinite(v)) return false;
    return true;
}

double Point::dist(const Point& o) const {
    double s = 0;
    for (size_t i = 0; i < c.size(); ++i) {
        double dcoord = c[i] - o.c[i];
        s += dcoord * dcoord;
    }
    return std::sqrt(s);
}

bool Box::contains_closed(std::span<const double> xi) const {
    for (int k = 0; k < dim(); ++k)
        if (xi[k] < lo[k] || xi[k] > hi[k]) return false;
    return true;
}

bool Box::contains_open(std::span<const double> xi) const {
    for (int k = 0; k < dim(); ++k)
        if (xi[k] <= lo[k] || xi[k] >= hi[k]) return false;
    return true;
}

double Box::distance(std::span<const double> xi) const {
    double s = 0;
    for (int k = 0; k < dim(); ++k) {
        double g = std::max({lo[k] - xi[k], xi[k] - hi[k], 0.0});
        s += g * g;
    }
    return std::sqrt(s);
}

void ValidationReport::add(const std::string& name, bool pass, const std::string& msg) {
    checks.push_back({name, pass, msg});
    if (!pass) valid = false;
}

namespace {

bool box_less(const Box& a, const Box& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
}

bool box_subset(const Box& a, const Box& b) {
    for (int k = 0; k < a.dim(); ++k)
        if (a.lo[k] < b.lo[k] || a.hi[k] > b.hi[k]) return false;
    return true;
}

// Union of a and b is a box iff they agree on all axes but one and overlap or
// touch on that axis. Writes the fused box into out.
bool try_fuse(const Box& a, const Box& b, Box& out) {
    int differing = -1;
    for (int k = 0; k < a.dim(); ++k) {
        if (a.lo[k] != b.lo[k] || a.hi[k] != b.hi[k]) {
            if (differing >= 0) return false;
            differing = k;
        }
    }
    if (differing < 0) {  // identical
        out = a;
        return true;
    }
    int k = differing;
    if (a.hi[k] < b.lo[k] || b.hi[k] < a.lo[k]) return false;
    out = a;
    out.lo[k] = std::min(a.lo[k], b.lo[k]);
    out.hi[k] = std::max(a.hi[k], b.hi[k]);
    return true;
}

}  // namespace

std::vector<Box> merge_boxes(std::vector<Box> boxes) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < boxes.size() && !changed; ++i) {
            for (size_t j = i + 1; j < boxes.size() && !changed; ++j) {
                if (box_subset(boxes[j], boxes[i])) {
                    boxes.erase(boxes.begin() + j);
                    changed = true;
                } else if (box_subset(boxes[i], boxes[j])) {
                    boxes.erase(boxes.begin() + i);
                    changed = true;
                } else {
                    Box fused;
                    if (try_fuse(boxes[i], boxes[j], fused)) {
                        boxes[i] = fused;
                        boxes.erase(boxes.begin() + j);
                        changed = true;
                    }
                }
            }
        }
    }
    std::sort(boxes.begin(), boxes.end(), box_less);
    return boxes;
}

ValidationReport validate_holes(int d, const HoleSpec& holes) {
    ValidationReport rep;
    rep.add("dimension", d >= 2, d >= 2 ? "" : "domain dimension must be >= 2");
    rep.add("box list nonempty", !holes.boxes.empty(),
            holes.boxes.empty() ? "hole/window box list is empty" : "");
    bool shapes_ok = true, nondegenerate = true;
    for (const Box& b : holes.boxes) {
        if (b.dim() != d - 1 || b.hi.size() != b.lo.size()) shapes_ok = false;
        for (int k = 0; k < b.dim(); ++k)
            if (!(b.hi[k] > b.lo[k])) nondegenerate = false;
    }
    rep.add("box shapes", shapes_ok, shapes_ok ? "" : "box does not have d-1 axes");
    rep.add("boxes non-degenerate", nondegenerate,
            nondegenerate ? "" : "a box has a side of non-positive length");
    if (holes.variant == HoleVariant::FiniteWindows) {
        // D is the window union; D^c is its complement, never empty for
        // bounded windows, and D nonempty iff the list is nonempty.
        rep.add("D nonempty", !holes.boxes.empty(), holes.boxes.empty() ? "D empty" : "");
    }
    if (rep.valid) rep.canonical_boxes = merge_boxes(holes.boxes);
    return rep;
}

BenedicksDomain::BenedicksDomain(int d, HoleSpec holes, std::string label)
    : d_(d), holes_(std::move(holes)), label_(std::move(label)) {
    ValidationReport rep = validate_holes(d_, holes_);
    if (!rep.valid) {
        std::string why;
        for (const auto& chk : rep.checks)
            if (!chk.pass) why += chk.name + ": " + chk.message + "; ";
        throw std::invalid_argument("invalid Benedicks domain: " + why);
    }
    holes_.boxes = std::move(rep.canonical_boxes);
}

SiteClass BenedicksDomain::classify(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != d_ - 1)
        throw std::invalid_argument("hyperplane point has wrong dimension");
    for (double v : xi)
        if (!std::isfinite(v)) throw std::invalid_argument("hyperplane point not finite");
    if (holes_.variant == HoleVariant::FiniteHoles) {
        for (const Box& b : holes_.boxes)
            if (b.contains_closed(xi)) return SiteClass::InHoles;
        return SiteClass::InD;
    }
    // FiniteWindows: in D iff strictly inside a window; edges are holes.
    for (const Box& b : holes_.boxes)
        if (b.contains_open(xi)) return SiteClass::InD;
    return SiteClass::InHoles;
}

double BenedicksDomain::hole_distance(std::span<const double> xi) const {
    if (holes_.variant == HoleVariant::FiniteHoles) {
        double best = std::numeric_limits<double>::infinity();
        for (const Box& b : holes_.boxes) best = std::min(best, b.distance(xi));
        return best;
    }
    // Distance to the complement of the window union: for each containing
    // window, the distance to its boundary bounds it from below; take the best.
    double best = 0;
    for (const Box& b : holes_.boxes) {
        if (!b.contains_open(xi)) continue;
        double face = std::numeric_limits<double>::infinity();
        for (int k = 0; k < b.dim(); ++k)
            face = std::min({face, xi[k] - b.lo[k], b.hi[k] - xi[k]});
        best = std::max(best, face);
    }
    return best;
}

bool BenedicksDomain::contains(const Point& x) const {
    if (x.dim() != d_) return false;
    if (!x.finite()) return false;
    if (x.xd() != 0.0) return true;
    return classify(x.xvec()) == SiteClass::InD;
}

ValidationReport validate_domain(const BenedicksDomain& dom) {
    return validate_holes(dom.dim(), dom.holes());
}

Point mirror_across_hyperplane(const Point& p) {
    Point q = p;
    q.xd() = -q.xd();
    return q;
}

ReflectionFrame::ReflectionFrame(Point y_, std::vector<double> n_)
    : y(std::move(y_)), n(std::move(n_)) {
    if (static_cast<int>(n.size()) != y.dim() - 1)
        throw std::invalid_argument("frame direction must live in the hyperplane");
    double nn = 0;
    for (double v : n) nn += v * v;
    if (std::abs(std::sqrt(nn) - 1.0) > 1e-12)
        throw std::invalid_argument("frame direction must be a unit vector");
    if (y.xd() == 0.0) throw std::invalid_argument("frame base point must have y_d != 0");
}

std::pair<Point, Point> oblique_reflections(const ReflectionFrame& frame, const Point& x) {
    const int dm1 = frame.dim() - 1;
    double proj = 0;  // (xvec - yvec).n
    for (int k = 0; k < dm1; ++k) proj += (x.c[k] - frame.y.c[k]) * frame.n[k];
    Point sp = x, sm = x;
    for (int k = 0; k < dm1; ++k) {
        sp.c[k] = x.c[k] + (x.xd() - proj) * frame.n[k];
        sm.c[k] = x.c[k] - (x.xd() + proj) * frame.n[k];
    }
    sp.xd() = proj;
    sm.xd() = -proj;
    return {sp, sm};
}

bool in_omega_plus(const ReflectionFrame& frame, const Point& x) {
    const int dm1 = frame.dim() - 1;
    double proj = 0;
    for (int k = 0; k < dm1; ++k) proj += (x.c[k] - frame.y.c[k]) * frame.n[k];
    return std::abs(x.xd()) <= proj;
}

}  // namespace bene
