#pragma once

// Sketch-and-extrude CAD domain types: 2D profiles (lines, arcs, circles)
// grouped into loops, faces and sketches, plus the extrusion parameters that
// lift them into solids. Includes 8-bit parameter quantization, structural
// validation and unit-box normalization.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace promptcad::cad {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline bool approx_equal(const Point2D& a, const Point2D& b, double tol = 1e-9) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

struct Line {
    Point2D start;
    Point2D end;
};

// Three-point arc: start, a point on the arc between the endpoints, end.
struct Arc {
    Point2D start;
    Point2D mid;
    Point2D end;
};

// Circle given by its center and top-most point (top.x == center.x).
struct Circle {
    Point2D center;
    Point2D top;

    double radius() const {
        return std::hypot(top.x - center.x, top.y - center.y);
    }
};

using Curve = std::variant<Line, Arc, Circle>;

struct Loop {
    std::vector<Curve> curves;
};

struct Face {
    Loop outer;
    std::vector<Loop> holes;
};

struct Sketch {
    std::vector<Face> faces;
};

enum class BooleanOp : uint8_t { New = 0, Cut = 1, Join = 2, Intersect = 3 };

inline const char* to_string(BooleanOp op) {
    switch (op) {
    case BooleanOp::New: return "new";
    case BooleanOp::Cut: return "cut";
    case BooleanOp::Join: return "join";
    case BooleanOp::Intersect: return "intersect";
    }
    return "?";
}

inline BooleanOp boolean_op_from_string(const std::string& s) {
    if (s == "new") return BooleanOp::New;
    if (s == "cut") return BooleanOp::Cut;
    if (s == "join") return BooleanOp::Join;
    if (s == "intersect") return BooleanOp::Intersect;
    throw std::invalid_argument("unknown boolean operation: " + s);
}

// Sketch plane placement and sweep. Orientation is z-y-z Euler:
// R = Rz(theta) * Ry(phi) * Rz(gamma); the plane normal is R's third column.
// A sketch point (u, v) maps to world space as tau + R * (sigma*u, sigma*v, h)
// with h in [-d_neg, d_pos].
struct Extrusion {
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    std::array<double, 3> tau{0.0, 0.0, 0.0};
    double sigma = 1.0;
    double d_pos = 0.0;
    double d_neg = 0.0;
    BooleanOp op = BooleanOp::New;
};

struct Part {
    Sketch sketch;
    Extrusion extrusion;
};

struct CadModel {
    std::vector<Part> parts;
};

// ---------------------------------------------------------------------------
// Quantization. Continuous values in [0,1] map onto 256 bins occupying token
// values 11..266; the lower token values are reserved for structural tokens.
// ---------------------------------------------------------------------------

inline constexpr int kCoordMin = 11;
inline constexpr int kCoordMax = 266;
inline constexpr int kQuantLevels = 255;  // kCoordMax - kCoordMin

inline int quantize(double v) {
    constexpr double tol = 1e-9;
    if (v < -tol || v > 1.0 + tol) {
        throw std::out_of_range("quantize: value " + std::to_string(v) + " outside [0,1]");
    }
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return static_cast<int>(std::floor(v * kQuantLevels + 0.5)) + kCoordMin;
}

inline double dequantize(int q) {
    if (q < kCoordMin || q > kCoordMax) {
        throw std::out_of_range("dequantize: token " + std::to_string(q) + " outside [11,266]");
    }
    return static_cast<double>(q - kCoordMin) / kQuantLevels;
}

// Parameter ranges folded into [0,1] before quantization:
//   angles  [-pi,pi], translation [-1,1], scale [0,2] (clamped), distance [0,1].
inline int quantize_angle(double a) { return quantize((a + kPi) / (2.0 * kPi)); }
inline double dequantize_angle(int q) { return dequantize(q) * 2.0 * kPi - kPi; }

inline int quantize_translation(double t) { return quantize((t + 1.0) / 2.0); }
inline double dequantize_translation(int q) { return dequantize(q) * 2.0 - 1.0; }

inline int quantize_scale(double s) {
    if (s < 0.0) s = 0.0;
    if (s > 2.0) s = 2.0;
    return quantize(s / 2.0);
}
inline double dequantize_scale(int q) { return dequantize(q) * 2.0; }

inline int quantize_distance(double d) { return quantize(d); }
inline double dequantize_distance(int q) { return dequantize(q); }

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ValidityIssue : uint8_t {
    DegenerateLine,
    DegenerateArc,
    DegenerateCircle,
    OpenLoop,
    ZeroExtrusion,
    ZeroScale,
    EmptySketch,
    MalformedStructure,
};

inline const char* to_string(ValidityIssue issue) {
    switch (issue) {
    case ValidityIssue::DegenerateLine: return "DegenerateLine";
    case ValidityIssue::DegenerateArc: return "DegenerateArc";
    case ValidityIssue::DegenerateCircle: return "DegenerateCircle";
    case ValidityIssue::OpenLoop: return "OpenLoop";
    case ValidityIssue::ZeroExtrusion: return "ZeroExtrusion";
    case ValidityIssue::ZeroScale: return "ZeroScale";
    case ValidityIssue::EmptySketch: return "EmptySketch";
    case ValidityIssue::MalformedStructure: return "MalformedStructure";
    }
    return "?";
}

struct ValidityReport {
    bool valid = true;
    std::vector<ValidityIssue> reasons;

    void add(ValidityIssue issue) {
        valid = false;
        reasons.push_back(issue);
    }
};

namespace detail {

inline double cross2(const Point2D& a, const Point2D& b) { return a.x * b.y - a.y * b.x; }

inline Point2D sub(const Point2D& a, const Point2D& b) { return {a.x - b.x, a.y - b.y}; }

inline const Point2D& curve_start(const Curve& c) {
    if (const auto* l = std::get_if<Line>(&c)) return l->start;
    if (const auto* a = std::get_if<Arc>(&c)) return a->start;
    return std::get<Circle>(c).top;
}

inline const Point2D& curve_end(const Curve& c) {
    if (const auto* l = std::get_if<Line>(&c)) return l->end;
    if (const auto* a = std::get_if<Arc>(&c)) return a->end;
    return std::get<Circle>(c).top;
}

// Coarse polyline used for hole containment checks only.
inline void coarse_polyline(const Loop& loop, std::vector<Point2D>& out);

inline bool point_in_polygon(const Point2D& p, const std::vector<Point2D>& poly) {
    bool inside = false;
    size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2D& a = poly[i];
        const Point2D& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xs = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < xs) inside = !inside;
        }
    }
    return inside;
}

// Center and signed sweep of the arc through start/mid/end. Returns false for
// collinear input.
inline bool arc_center(const Arc& arc, Point2D& center, double& radius) {
    double ax = arc.start.x, ay = arc.start.y;
    double bx = arc.mid.x, by = arc.mid.y;
    double cx = arc.end.x, cy = arc.end.y;
    double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::abs(d) < 1e-15) return false;
    double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    center.x = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    center.y = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    radius = std::hypot(ax - center.x, ay - center.y);
    return true;
}

// Angles swept from start to end passing through mid.
inline void arc_angles(const Arc& arc, const Point2D& center, double& a0, double& sweep) {
    a0 = std::atan2(arc.start.y - center.y, arc.start.x - center.x);
    double am = std::atan2(arc.mid.y - center.y, arc.mid.x - center.x);
    double a1 = std::atan2(arc.end.y - center.y, arc.end.x - center.x);
    auto ccw_delta = [](double from, double to) {
        double d = to - from;
        while (d < 0.0) d += 2.0 * kPi;
        while (d >= 2.0 * kPi) d -= 2.0 * kPi;
        return d;
    };
    double dm = ccw_delta(a0, am);
    double de = ccw_delta(a0, a1);
    if (dm <= de) {
        sweep = de;  // counterclockwise
    } else {
        sweep = de - 2.0 * kPi;  // clockwise
    }
    if (sweep == 0.0) sweep = 2.0 * kPi;
}

inline void coarse_polyline(const Loop& loop, std::vector<Point2D>& out) {
    out.clear();
    for (const Curve& c : loop.curves) {
        if (const auto* l = std::get_if<Line>(&c)) {
            out.push_back(l->start);
        } else if (const auto* a = std::get_if<Arc>(&c)) {
            Point2D ctr;
            double r = 0.0;
            if (!arc_center(*a, ctr, r)) {
                out.push_back(a->start);
                continue;
            }
            double a0 = 0.0, sweep = 0.0;
            arc_angles(*a, ctr, a0, sweep);
            const int segs = 8;
            for (int i = 0; i < segs; ++i) {
                double ang = a0 + sweep * i / segs;
                out.push_back({ctr.x + r * std::cos(ang), ctr.y + r * std::sin(ang)});
            }
        } else {
            const auto& circ = std::get<Circle>(c);
            double r = circ.radius();
            const int segs = 16;
            for (int i = 0; i < segs; ++i) {
                double ang = 2.0 * kPi * i / segs;
                out.push_back({circ.center.x + r * std::cos(ang), circ.center.y + r * std::sin(ang)});
            }
        }
    }
}

}  // namespace detail

inline void validate_curve(const Curve& curve, ValidityReport& report) {
    if (const auto* line = std::get_if<Line>(&curve)) {
        if (approx_equal(line->start, line->end)) report.add(ValidityIssue::DegenerateLine);
    } else if (const auto* arc = std::get_if<Arc>(&curve)) {
        if (approx_equal(arc->start, arc->mid) || approx_equal(arc->mid, arc->end) ||
            approx_equal(arc->start, arc->end)) {
            report.add(ValidityIssue::DegenerateArc);
            return;
        }
        Point2D u = detail::sub(arc->mid, arc->start);
        Point2D v = detail::sub(arc->end, arc->start);
        double len2 = v.x * v.x + v.y * v.y;
        if (std::abs(detail::cross2(u, v)) <= 1e-9 * len2) {
            report.add(ValidityIssue::DegenerateArc);
        }
    } else {
        const auto& circ = std::get<Circle>(curve);
        if (circ.radius() <= 1e-9 || std::abs(circ.top.x - circ.center.x) > 1e-9 ||
            circ.top.y <= circ.center.y) {
            report.add(ValidityIssue::DegenerateCircle);
        }
    }
}

inline void validate_loop(const Loop& loop, ValidityReport& report) {
    if (loop.curves.empty()) {
        report.add(ValidityIssue::MalformedStructure);
        return;
    }
    size_t circles = 0;
    for (const Curve& c : loop.curves) {
        if (std::holds_alternative<Circle>(c)) ++circles;
        validate_curve(c, report);
    }
    if (circles > 0) {
        // A circle is a closed loop on its own; it cannot be chained.
        if (circles != 1 || loop.curves.size() != 1) report.add(ValidityIssue::MalformedStructure);
        return;
    }
    for (size_t i = 0; i < loop.curves.size(); ++i) {
        const Point2D& e = detail::curve_end(loop.curves[i]);
        const Point2D& s = detail::curve_start(loop.curves[(i + 1) % loop.curves.size()]);
        if (!approx_equal(e, s)) {
            report.add(ValidityIssue::OpenLoop);
            return;
        }
    }
}

inline void validate_face(const Face& face, ValidityReport& report) {
    validate_loop(face.outer, report);
    for (const Loop& hole : face.holes) validate_loop(hole, report);
    if (!report.valid) return;

    std::vector<Point2D> outer_poly;
    detail::coarse_polyline(face.outer, outer_poly);
    std::vector<std::vector<Point2D>> hole_polys(face.holes.size());
    for (size_t h = 0; h < face.holes.size(); ++h) {
        detail::coarse_polyline(face.holes[h], hole_polys[h]);
        for (const Point2D& p : hole_polys[h]) {
            if (!detail::point_in_polygon(p, outer_poly)) {
                report.add(ValidityIssue::MalformedStructure);
                return;
            }
        }
    }
    for (size_t a = 0; a < hole_polys.size(); ++a) {
        for (size_t b = 0; b < hole_polys.size(); ++b) {
            if (a == b) continue;
            for (const Point2D& p : hole_polys[a]) {
                if (detail::point_in_polygon(p, hole_polys[b])) {
                    report.add(ValidityIssue::MalformedStructure);
                    return;
                }
            }
        }
    }
}

inline void validate_extrusion(const Extrusion& ex, ValidityReport& report) {
    if (ex.d_pos < 0.0 || ex.d_neg < 0.0) report.add(ValidityIssue::MalformedStructure);
    if (ex.d_pos + ex.d_neg <= 1e-12) report.add(ValidityIssue::ZeroExtrusion);
    if (ex.sigma <= 1e-12) report.add(ValidityIssue::ZeroScale);
}

inline ValidityReport validate_model(const CadModel& model) {
    ValidityReport report;
    if (model.parts.empty()) {
        report.add(ValidityIssue::MalformedStructure);
        return report;
    }
    if (model.parts.front().extrusion.op != BooleanOp::New) {
        report.add(ValidityIssue::MalformedStructure);
    }
    for (const Part& part : model.parts) {
        if (part.sketch.faces.empty()) {
            report.add(ValidityIssue::EmptySketch);
        }
        for (const Face& face : part.sketch.faces) validate_face(face, report);
        validate_extrusion(part.extrusion, report);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Fn>
void for_each_point(Sketch& sketch, Fn&& fn) {
    auto visit_loop = [&](Loop& loop) {
        for (Curve& c : loop.curves) {
            if (auto* l = std::get_if<Line>(&c)) {
                fn(l->start);
                fn(l->end);
            } else if (auto* a = std::get_if<Arc>(&c)) {
                fn(a->start);
                fn(a->mid);
                fn(a->end);
            } else {
                auto& circ = std::get<Circle>(c);
                fn(circ.center);
                fn(circ.top);
            }
        }
    };
    for (Face& face : sketch.faces) {
        visit_loop(face.outer);
        for (Loop& hole : face.holes) visit_loop(hole);
    }
}

struct Bounds2 {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void expand(const Point2D& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
};

inline std::array<std::array<double, 3>, 3> rotation_zyz(double theta, double phi, double gamma) {
    double c1 = std::cos(theta), s1 = std::sin(theta);
    double c2 = std::cos(phi), s2 = std::sin(phi);
    double c3 = std::cos(gamma), s3 = std::sin(gamma);
    return {{{c1 * c2 * c3 - s1 * s3, -c1 * c2 * s3 - s1 * c3, c1 * s2},
             {s1 * c2 * c3 + c1 * s3, -s1 * c2 * s3 + c1 * c3, s1 * s2},
             {-s2 * c3, s2 * s3, c2}}};
}

}  // namespace detail

// Rescales every sketch so its coordinate bounding box sits at the origin with
// the larger side spanning [0,1] (the removed scale and shift fold into sigma
// and tau), then uniformly rescales the whole model so the solid's bounding
// box fits the unit cube.
inline CadModel normalize_model(CadModel model) {
    if (model.parts.empty()) throw DegenerateInput("normalize_model: model has no parts");

    for (Part& part : model.parts) {
        detail::Bounds2 bb;
        detail::for_each_point(part.sketch, [&](Point2D& p) { bb.expand(p); });
        if (!std::isfinite(bb.min_x)) throw DegenerateInput("normalize_model: sketch has no points");
        double extent = std::max(bb.max_x - bb.min_x, bb.max_y - bb.min_y);
        if (extent <= 1e-12) throw DegenerateInput("normalize_model: sketch has zero extent");

        detail::for_each_point(part.sketch, [&](Point2D& p) {
            p.x = (p.x - bb.min_x) / extent;
            p.y = (p.y - bb.min_y) / extent;
        });

        Extrusion& ex = part.extrusion;
        auto rot = detail::rotation_zyz(ex.theta, ex.phi, ex.gamma);
        // World position of the old sketch origin shift.
        double sx = ex.sigma * bb.min_x;
        double sy = ex.sigma * bb.min_y;
        for (int i = 0; i < 3; ++i) ex.tau[i] += rot[i][0] * sx + rot[i][1] * sy;
        ex.sigma *= extent;
    }

    // Solid bounding box from the slab corners of material-adding parts.
    double mn[3], mx[3];
    for (int i = 0; i < 3; ++i) {
        mn[i] = std::numeric_limits<double>::infinity();
        mx[i] = -mn[i];
    }
    bool any = false;
    for (const Part& part : model.parts) {
        const Extrusion& ex = part.extrusion;
        if (ex.op == BooleanOp::Cut || ex.op == BooleanOp::Intersect) continue;
        any = true;
        detail::Bounds2 bb;
        Sketch tmp = part.sketch;
        detail::for_each_point(tmp, [&](Point2D& p) { bb.expand(p); });
        auto rot = detail::rotation_zyz(ex.theta, ex.phi, ex.gamma);
        for (double u : {bb.min_x, bb.max_x}) {
            for (double v : {bb.min_y, bb.max_y}) {
                for (double h : {-ex.d_neg, ex.d_pos}) {
                    for (int i = 0; i < 3; ++i) {
                        double w = ex.tau[i] + rot[i][0] * ex.sigma * u + rot[i][1] * ex.sigma * v +
                                   rot[i][2] * h;
                        mn[i] = std::min(mn[i], w);
                        mx[i] = std::max(mx[i], w);
                    }
                }
            }
        }
    }
    if (!any) return model;

    double extent = std::max({mx[0] - mn[0], mx[1] - mn[1], mx[2] - mn[2]});
    if (extent <= 1e-12) return model;
    double k = 1.0 / extent;
    for (Part& part : model.parts) {
        Extrusion& ex = part.extrusion;
        for (int i = 0; i < 3; ++i) ex.tau[i] = (ex.tau[i] - mn[i]) * k;
        ex.sigma *= k;
        ex.d_pos *= k;
        ex.d_neg *= k;
    }
    return model;
}

// ---------------------------------------------------------------------------
// Quantized equality: two models are equal if every parameter lands on the
// same 8-bit bin. This is the equality used for codec round trips.
// ---------------------------------------------------------------------------

namespace detail {

inline bool qeq(double a, double b) { return quantize(a) == quantize(b); }
inline bool qeq_point(const Point2D& a, const Point2D& b) { return qeq(a.x, b.x) && qeq(a.y, b.y); }

inline bool qeq_curve(const Curve& a, const Curve& b) {
    if (a.index() != b.index()) return false;
    if (const auto* la = std::get_if<Line>(&a)) {
        const auto& lb = std::get<Line>(b);
        return qeq_point(la->start, lb.start) && qeq_point(la->end, lb.end);
    }
    if (const auto* aa = std::get_if<Arc>(&a)) {
        const auto& ab = std::get<Arc>(b);
        return qeq_point(aa->start, ab.start) && qeq_point(aa->mid, ab.mid) &&
               qeq_point(aa->end, ab.end);
    }
    const auto& ca = std::get<Circle>(a);
    const auto& cb = std::get<Circle>(b);
    return qeq_point(ca.center, cb.center) && qeq_point(ca.top, cb.top);
}

inline bool qeq_loop(const Loop& a, const Loop& b) {
    if (a.curves.size() != b.curves.size()) return false;
    for (size_t i = 0; i < a.curves.size(); ++i) {
        if (!qeq_curve(a.curves[i], b.curves[i])) return false;
    }
    return true;
}

}  // namespace detail

inline bool quantized_equal(const CadModel& a, const CadModel& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (size_t p = 0; p < a.parts.size(); ++p) {
        const Sketch& sa = a.parts[p].sketch;
        const Sketch& sb = b.parts[p].sketch;
        if (sa.faces.size() != sb.faces.size()) return false;
        for (size_t f = 0; f < sa.faces.size(); ++f) {
            if (!detail::qeq_loop(sa.faces[f].outer, sb.faces[f].outer)) return false;
            if (sa.faces[f].holes.size() != sb.faces[f].holes.size()) return false;
            for (size_t h = 0; h < sa.faces[f].holes.size(); ++h) {
                if (!detail::qeq_loop(sa.faces[f].holes[h], sb.faces[f].holes[h])) return false;
            }
        }
        const Extrusion& ea = a.parts[p].extrusion;
        const Extrusion& eb = b.parts[p].extrusion;
        if (ea.op != eb.op) return false;
        if (quantize_angle(ea.theta) != quantize_angle(eb.theta)) return false;
        if (quantize_angle(ea.phi) != quantize_angle(eb.phi)) return false;
        if (quantize_angle(ea.gamma) != quantize_angle(eb.gamma)) return false;
        for (int i = 0; i < 3; ++i) {
            if (quantize_translation(ea.tau[i]) != quantize_translation(eb.tau[i])) return false;
        }
        if (quantize_scale(ea.sigma) != quantize_scale(eb.sigma)) return false;
        if (quantize_distance(ea.d_pos) != quantize_distance(eb.d_pos)) return false;
        if (quantize_distance(ea.d_neg) != quantize_distance(eb.d_neg)) return false;
    }
    return true;
}

}  // namespace promptcad::cad
