#pragma once

// Bidirectional translation between CadModel and the 2D token sequence.
//
// Token vocabulary (267 classes):
//   0 pad, 1 start/end, 2 end-sketch, 3 end-face, 4 end-loop, 5 end-curve,
//   6 end-extrude, 7..10 boolean op (new, cut, join, intersect),
//   11..266 quantized values.
//
// A sequence is [start], then per part the sketch tokens (coordinate pairs
// per curve followed by end-curve; end-loop / end-face / end-sketch close the
// groups) and the extrusion tokens in the order
//   d+ d- tau_x tau_y tau_z theta phi gamma sigma beta e_e,
// then [end] and padding up to 272 pairs. Coordinate tokens use both
// components; every other token has y = 0.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "promptcad/cad_types.hpp"

namespace promptcad::codec {

inline constexpr int kPad = 0;
inline constexpr int kStartEnd = 1;
inline constexpr int kEndSketch = 2;
inline constexpr int kEndFace = 3;
inline constexpr int kEndLoop = 4;
inline constexpr int kEndCurve = 5;
inline constexpr int kEndExtrude = 6;
inline constexpr int kBoolBase = 7;  // + BooleanOp value
inline constexpr int kVocabSize = 267;
inline constexpr int kMaxTokens = 272;

struct TokenPair {
    int x = 0;
    int y = 0;

    bool operator==(const TokenPair&) const = default;
};

using CadSequence = std::vector<TokenPair>;

inline bool is_coordinate_value(int v) { return v >= cad::kCoordMin && v <= cad::kCoordMax; }

struct EncodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void emit_point(CadSequence& out, const cad::Point2D& p) {
    out.push_back({cad::quantize(p.x), cad::quantize(p.y)});
}

inline void emit_curve(CadSequence& out, const cad::Curve& curve) {
    if (const auto* line = std::get_if<cad::Line>(&curve)) {
        emit_point(out, line->start);
        emit_point(out, line->end);
    } else if (const auto* arc = std::get_if<cad::Arc>(&curve)) {
        emit_point(out, arc->start);
        emit_point(out, arc->mid);
        emit_point(out, arc->end);
    } else {
        const auto& circ = std::get<cad::Circle>(curve);
        emit_point(out, circ.center);
        emit_point(out, circ.top);
    }
    out.push_back({kEndCurve, 0});
}

inline void emit_loop(CadSequence& out, const cad::Loop& loop) {
    for (const cad::Curve& c : loop.curves) emit_curve(out, c);
    out.push_back({kEndLoop, 0});
}

}  // namespace detail

inline CadSequence encode(const cad::CadModel& model) {
    cad::ValidityReport report = validate_model(model);
    if (!report.valid) {
        std::string msg = "encode: invalid model:";
        for (auto r : report.reasons) msg += std::string(" ") + cad::to_string(r);
        throw EncodeError(msg);
    }

    CadSequence out;
    out.push_back({kStartEnd, 0});
    for (const cad::Part& part : model.parts) {
        for (const cad::Face& face : part.sketch.faces) {
            detail::emit_loop(out, face.outer);
            for (const cad::Loop& hole : face.holes) detail::emit_loop(out, hole);
            out.push_back({kEndFace, 0});
        }
        out.push_back({kEndSketch, 0});

        const cad::Extrusion& ex = part.extrusion;
        out.push_back({cad::quantize_distance(ex.d_pos), 0});
        out.push_back({cad::quantize_distance(ex.d_neg), 0});
        for (int i = 0; i < 3; ++i) out.push_back({cad::quantize_translation(ex.tau[i]), 0});
        out.push_back({cad::quantize_angle(ex.theta), 0});
        out.push_back({cad::quantize_angle(ex.phi), 0});
        out.push_back({cad::quantize_angle(ex.gamma), 0});
        out.push_back({cad::quantize_scale(ex.sigma), 0});
        out.push_back({kBoolBase + static_cast<int>(ex.op), 0});
        out.push_back({kEndExtrude, 0});
    }
    out.push_back({kStartEnd, 0});

    if (out.size() > kMaxTokens) {
        throw EncodeError("encode: sequence length " + std::to_string(out.size()) +
                          " exceeds " + std::to_string(kMaxTokens));
    }
    out.resize(kMaxTokens, TokenPair{kPad, 0});
    return out;
}

// ---------------------------------------------------------------------------
// Decoding. Total over arbitrary token streams: returns either a validated
// model or a report whose reasons explain the rejection.
// ---------------------------------------------------------------------------

struct DecodeResult {
    std::optional<cad::CadModel> model;
    cad::ValidityReport report;

    bool ok() const { return report.valid; }
};

namespace detail {

struct Cursor {
    std::span<const TokenPair> tokens;
    size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const TokenPair& peek() const { return tokens[pos]; }
    TokenPair take() { return tokens[pos++]; }
};

inline bool is_coord_pair(const TokenPair& t) {
    return is_coordinate_value(t.x) && is_coordinate_value(t.y);
}

inline bool is_marker(const TokenPair& t, int value) { return t.x == value && t.y == 0; }

// Raw curve: 2 or 3 coordinate pairs, interpreted after the loop is complete.
struct RawCurve {
    std::vector<cad::Point2D> points;
};

inline bool parse_curve(Cursor& cur, RawCurve& out) {
    while (!cur.done()) {
        const TokenPair& t = cur.peek();
        if (is_coord_pair(t)) {
            if (out.points.size() >= 3) return false;
            out.points.push_back({cad::dequantize(t.x), cad::dequantize(t.y)});
            cur.take();
        } else if (is_marker(t, kEndCurve)) {
            cur.take();
            return out.points.size() >= 2;
        } else {
            return false;
        }
    }
    return false;
}

inline bool parse_loop(Cursor& cur, cad::Loop& out) {
    std::vector<RawCurve> raw;
    while (!cur.done()) {
        if (is_marker(cur.peek(), kEndLoop)) {
            cur.take();
            if (raw.empty()) return false;
            // A lone two-point curve whose x coordinates agree is a circle
            // (center + top); everything else is a line or an arc.
            if (raw.size() == 1 && raw[0].points.size() == 2 &&
                cad::quantize(raw[0].points[0].x) == cad::quantize(raw[0].points[1].x)) {
                out.curves.push_back(cad::Circle{raw[0].points[0], raw[0].points[1]});
                return true;
            }
            for (const RawCurve& rc : raw) {
                if (rc.points.size() == 2) {
                    out.curves.push_back(cad::Line{rc.points[0], rc.points[1]});
                } else {
                    out.curves.push_back(cad::Arc{rc.points[0], rc.points[1], rc.points[2]});
                }
            }
            return true;
        }
        RawCurve rc;
        if (!parse_curve(cur, rc)) return false;
        raw.push_back(std::move(rc));
    }
    return false;
}

inline bool parse_face(Cursor& cur, cad::Face& out) {
    std::vector<cad::Loop> loops;
    while (!cur.done()) {
        if (is_marker(cur.peek(), kEndFace)) {
            cur.take();
            if (loops.empty()) return false;
            out.outer = std::move(loops.front());
            out.holes.assign(std::make_move_iterator(loops.begin() + 1),
                             std::make_move_iterator(loops.end()));
            return true;
        }
        cad::Loop loop;
        if (!parse_loop(cur, loop)) return false;
        loops.push_back(std::move(loop));
    }
    return false;
}

inline bool parse_sketch(Cursor& cur, cad::Sketch& out) {
    while (!cur.done()) {
        if (is_marker(cur.peek(), kEndSketch)) {
            cur.take();
            return true;  // zero faces is reported by validation, not here
        }
        cad::Face face;
        if (!parse_face(cur, face)) return false;
        out.faces.push_back(std::move(face));
    }
    return false;
}

inline bool parse_extrusion(Cursor& cur, cad::Extrusion& out) {
    double vals[9];
    for (double& v : vals) {
        if (cur.done()) return false;
        TokenPair t = cur.take();
        if (!is_coordinate_value(t.x) || t.y != 0) return false;
        v = cad::dequantize(t.x);
    }
    out.d_pos = vals[0];
    out.d_neg = vals[1];
    for (int i = 0; i < 3; ++i) out.tau[i] = vals[2 + i] * 2.0 - 1.0;
    out.theta = vals[5] * 2.0 * cad::kPi - cad::kPi;
    out.phi = vals[6] * 2.0 * cad::kPi - cad::kPi;
    out.gamma = vals[7] * 2.0 * cad::kPi - cad::kPi;
    out.sigma = vals[8] * 2.0;
    if (cur.done()) return false;
    TokenPair beta = cur.take();
    if (beta.y != 0 || beta.x < kBoolBase || beta.x > kBoolBase + 3) return false;
    out.op = static_cast<cad::BooleanOp>(beta.x - kBoolBase);
    if (cur.done() || !is_marker(cur.take(), kEndExtrude)) return false;
    return true;
}

}  // namespace detail

inline DecodeResult decode(std::span<const TokenPair> tokens) {
    DecodeResult result;
    auto malformed = [&]() {
        result.model.reset();
        result.report = {};
        result.report.add(cad::ValidityIssue::MalformedStructure);
        return result;
    };

    detail::Cursor cur{tokens};
    if (cur.done() || !detail::is_marker(cur.take(), kStartEnd)) return malformed();

    cad::CadModel model;
    bool terminated = false;
    while (!cur.done()) {
        if (detail::is_marker(cur.peek(), kStartEnd)) {
            cur.take();
            terminated = true;
            break;
        }
        cad::Part part;
        if (!detail::parse_sketch(cur, part.sketch)) return malformed();
        if (!detail::parse_extrusion(cur, part.extrusion)) return malformed();
        model.parts.push_back(std::move(part));
    }
    if (!terminated) return malformed();
    while (!cur.done()) {
        TokenPair t = cur.take();
        if (t.x != kPad || t.y != 0) return malformed();
    }

    result.report = validate_model(model);
    if (result.report.valid) result.model = std::move(model);
    return result;
}

inline DecodeResult decode(const CadSequence& seq) {
    return decode(std::span<const TokenPair>(seq.data(), seq.size()));
}

// ---------------------------------------------------------------------------
// Corpus-level statistics
// ---------------------------------------------------------------------------

struct SequenceStats {
    size_t count = 0;
    size_t invalid_count = 0;
    std::map<cad::ValidityIssue, size_t> reason_histogram;
};

inline SequenceStats sequence_stats(const std::vector<CadSequence>& seqs) {
    SequenceStats stats;
    stats.count = seqs.size();
    for (const CadSequence& seq : seqs) {
        DecodeResult r = decode(seq);
        if (!r.ok()) {
            stats.invalid_count++;
            std::vector<cad::ValidityIssue> seen;
            for (cad::ValidityIssue issue : r.report.reasons) {
                if (std::find(seen.begin(), seen.end(), issue) == seen.end()) {
                    seen.push_back(issue);
                    stats.reason_histogram[issue]++;
                }
            }
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------
// .cadseq files: one "x y" pair per line.
// ---------------------------------------------------------------------------

inline void write_cadseq(const std::string& path, const CadSequence& seq) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const TokenPair& t : seq) {
        out << t.x << ' ' << t.y << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline CadSequence read_cadseq(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    CadSequence seq;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        TokenPair t;
        if (!(ss >> t.x >> t.y)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'x y'");
        }
        seq.push_back(t);
    }
    return seq;
}

inline std::string to_string(const CadSequence& seq) {
    std::string s;
    for (const TokenPair& t : seq) {
        s += std::to_string(t.x) + " " + std::to_string(t.y) + "\n";
    }
    return s;
}

}  // namespace promptcad::codec
