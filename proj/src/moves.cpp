#include "qknots/moves.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

enum Dir { E = 0, N = 1, W = 2, S = 3 };

/// Crossing from a direction -> arc map, with the under- and over-strand entry directions.
Crossing make_crossing(const std::array<int, 4>& at, int under_in, int over_in) {
    Crossing c;
    for (int k = 0; k < 4; ++k) c.arcs[k] = at[(under_in + k) % 4];
    c.sign = over_in == (under_in + 3) % 4 ? CrossingSign::positive : CrossingSign::negative;
    return c;
}

Dart next_dart(const LinkDiagram& d, Dart dart) {
    const int arc = d.crossings()[dart.crossing].arcs[dart.slot];
    const Endpoint e = d.other_end(arc, {dart.crossing, dart.slot});
    return {e.crossing, (e.slot + 1) % 4};
}

struct FaceIndex {
    std::vector<std::vector<Dart>> faces;
    std::vector<int> face_of_dart;  // crossing * 4 + slot

    int of(Dart dart) const { return face_of_dart[dart.crossing * 4 + dart.slot]; }
};

FaceIndex index_faces(const LinkDiagram& d) {
    FaceIndex fi;
    fi.face_of_dart.assign(d.crossing_count() * 4, -1);
    for (int x = 0; x < d.crossing_count(); ++x)
        for (int s = 0; s < 4; ++s) {
            if (fi.face_of_dart[x * 4 + s] >= 0) continue;
            const int id = static_cast<int>(fi.faces.size());
            std::vector<Dart> face;
            Dart dart{x, s};
            do {
                fi.face_of_dart[dart.crossing * 4 + dart.slot] = id;
                face.push_back(dart);
                dart = next_dart(d, dart);
            } while (!(dart == Dart{x, s}));
            fi.faces.push_back(std::move(face));
        }
    return fi;
}

std::vector<int> piece_of_crossing(const LinkDiagram& d) {
    std::vector<int> piece(d.crossing_count(), -1);
    const auto pieces = connected_pieces(d);
    for (int p = 0; p < static_cast<int>(pieces.size()); ++p)
        for (int x : pieces[p]) piece[x] = p;
    return piece;
}

/// Face on the given side of an arc: the right side is the face of the dart
/// leaving the arc's tail, the left side that of the dart leaving its head.
int face_of_side(const LinkDiagram& d, const FaceIndex& fi, int arc, Side side) {
    const Endpoint e = side == Side::right ? d.tail(arc) : d.head(arc);
    return fi.of({e.crossing, e.slot});
}

void check_strand(const LinkDiagram& d, const StrandRef& s) {
    if (s.is_circle()) {
        if (s.free_loop >= d.free_loops())
            throw PreconditionError("no crossing-free circle with index " + std::to_string(s.free_loop));
    } else if (!d.has_arc(s.arc)) {
        throw PreconditionError("unknown arc " + std::to_string(s.arc));
    }
}

// Splits a strand into a first part, new middle parts and a last part.
struct Split {
    int first = 0;
    int last = 0;
};

Split split_strand(const LinkDiagram& d, const StrandRef& s, std::vector<Crossing>& crossings, int& next_label,
                   int& free_loops) {
    Split sp;
    if (s.is_circle()) {
        sp.first = sp.last = next_label++;
        --free_loops;
    } else {
        sp.first = s.arc;
        sp.last = next_label++;
        const Endpoint h = d.head(s.arc);
        crossings[h.crossing].arcs[h.slot] = sp.last;
    }
    return sp;
}

std::optional<int> kink_slot(const Crossing& c) {
    for (int s = 0; s < 4; ++s)
        if (c.arcs[s] == c.arcs[(s + 1) % 4]) return s;
    return std::nullopt;
}

void check_crossing(const LinkDiagram& d, int x) {
    if (x < 0 || x >= d.crossing_count()) throw PreconditionError("unknown crossing id " + std::to_string(x));
}

/// The face whose darts visit exactly the given crossings, one dart each.
std::optional<std::vector<Dart>> face_through(const FaceIndex& fi, std::vector<int> crossings) {
    std::sort(crossings.begin(), crossings.end());
    for (const auto& face : fi.faces) {
        if (face.size() != crossings.size()) continue;
        std::vector<int> xs;
        for (const auto& dart : face) xs.push_back(dart.crossing);
        std::sort(xs.begin(), xs.end());
        if (xs == crossings) return face;
    }
    return std::nullopt;
}

LinkDiagram r1_add(const LinkDiagram& d, const R1Add& m) {
    check_strand(d, m.strand);
    std::vector<Crossing> crossings = d.crossings();
    int next_label = d.max_arc_label() + 1;
    int free_loops = d.free_loops();
    const Split sp = split_strand(d, m.strand, crossings, next_label, free_loops);
    const int loop = next_label++;
    const int e1 = sp.first, e2 = sp.last;
    // The strand comes in from the south, runs north onto the loop, returns and
    // leaves along the far side.
    Crossing c;
    if (m.side == Side::left) {
        const std::array<int, 4> at{e2, loop, loop, e1};
        c = m.sign == CrossingSign::positive ? make_crossing(at, S, W) : make_crossing(at, W, S);
    } else {
        const std::array<int, 4> at{loop, loop, e2, e1};
        c = m.sign == CrossingSign::positive ? make_crossing(at, E, S) : make_crossing(at, S, E);
    }
    crossings.push_back(c);
    return LinkDiagram::from_crossings(std::move(crossings), free_loops);
}

LinkDiagram r1_remove(const LinkDiagram& d, const R1Remove& m) {
    check_crossing(d, m.crossing);
    if (!kink_slot(d.crossings()[m.crossing]))
        throw PreconditionError("crossing " + std::to_string(m.crossing) + " does not bound a monogon");
    return remove_crossings(d, {m.crossing});
}

void check_r2_add(const LinkDiagram& d, const R2Add& m) {
    check_strand(d, m.over);
    check_strand(d, m.under);
    if (m.over == m.under) throw PreconditionError("R2 needs two different strands");
    if (m.over.is_circle() || m.under.is_circle()) return;
    const auto piece = piece_of_crossing(d);
    if (piece[d.head(m.over.arc).crossing] != piece[d.head(m.under.arc).crossing]) return;
    const FaceIndex fi = index_faces(d);
    if (face_of_side(d, fi, m.over.arc, m.over_side) != face_of_side(d, fi, m.under.arc, m.under_side))
        throw PreconditionError("the chosen sides of arcs " + std::to_string(m.over.arc) + " and " +
                                std::to_string(m.under.arc) + " do not face the same region");
}

LinkDiagram r2_add(const LinkDiagram& d, const R2Add& m) {
    check_r2_add(d, m);
    std::vector<Crossing> crossings = d.crossings();
    int next_label = d.max_arc_label() + 1;
    int free_loops = d.free_loops();
    const Split u = split_strand(d, m.under, crossings, next_label, free_loops);
    const Split o = split_strand(d, m.over, crossings, next_label, free_loops);
    const int u_mid = next_label++;
    const int o_mid = next_label++;
    // Local picture: the shared region is a horizontal strip with the under-strand
    // along its bottom and the over-strand along its top. The over-strand dips
    // across the under-strand at P1 (left) and P2 (right).
    const bool u_east = m.under_side == Side::left;
    const bool o_east = m.over_side == Side::right;
    const int u_left = u_east ? u.first : u.last;
    const int u_right = u_east ? u.last : u.first;
    const int o_left = o_east ? o.first : o.last;
    const int o_right = o_east ? o.last : o.first;
    const int under_in = u_east ? W : E;
    const Crossing p1 = make_crossing({u_mid, o_left, u_left, o_mid}, under_in, o_east ? N : S);
    const Crossing p2 = make_crossing({u_right, o_right, u_mid, o_mid}, under_in, o_east ? S : N);
    crossings.push_back(p1);
    crossings.push_back(p2);
    return LinkDiagram::from_crossings(std::move(crossings), free_loops);
}

std::vector<Dart> bigon_for(const LinkDiagram& d, const R2Remove& m) {
    check_crossing(d, m.first);
    check_crossing(d, m.second);
    if (m.first == m.second) throw PreconditionError("R2- needs two distinct crossings");
    const FaceIndex fi = index_faces(d);
    const auto face = face_through(fi, {m.first, m.second});
    if (!face) throw PreconditionError("crossings do not bound a bigon");
    const Dart& dart = (*face)[0];
    const int arc = d.crossings()[dart.crossing].arcs[dart.slot];
    const Endpoint far = d.other_end(arc, {dart.crossing, dart.slot});
    if (dart.slot % 2 != far.slot % 2)
        throw PreconditionError("bigon strands alternate over and under; not an R2 site");
    return *face;
}

LinkDiagram r2_remove(const LinkDiagram& d, const R2Remove& m) {
    bigon_for(d, m);
    return remove_crossings(d, {m.first, m.second});
}

std::vector<Dart> triangle_for(const LinkDiagram& d, const R3& m) {
    for (int x : {m.a, m.b, m.c}) check_crossing(d, x);
    if (m.a == m.b || m.b == m.c || m.a == m.c) throw PreconditionError("R3 needs three distinct crossings");
    const FaceIndex fi = index_faces(d);
    const auto face = face_through(fi, {m.a, m.b, m.c});
    if (!face) throw PreconditionError("crossings do not bound a triangle");
    bool top = false;
    for (const Dart& dart : *face) {
        const int arc = d.crossings()[dart.crossing].arcs[dart.slot];
        const Endpoint far = d.other_end(arc, {dart.crossing, dart.slot});
        top |= dart.slot % 2 == 1 && far.slot % 2 == 1;
    }
    if (!top) throw PreconditionError("triangle is alternating; no strand passes over both others");
    return *face;
}

LinkDiagram r3(const LinkDiagram& d, const R3& m) {
    const auto face = triangle_for(d, m);
    const std::vector<Crossing>& old = d.crossings();
    std::vector<Crossing> out = old;
    for (const Dart& dart : face) {
        const int edge = old[dart.crossing].arcs[dart.slot];
        const Endpoint far = d.other_end(edge, {dart.crossing, dart.slot});
        const int ext_near = old[dart.crossing].arcs[(dart.slot + 2) % 4];
        const int ext_far = old[far.crossing].arcs[(far.slot + 2) % 4];
        out[dart.crossing].arcs[dart.slot] = ext_far;
        out[dart.crossing].arcs[(dart.slot + 2) % 4] = edge;
        out[far.crossing].arcs[far.slot] = ext_near;
        out[far.crossing].arcs[(far.slot + 2) % 4] = edge;
    }
    return LinkDiagram::from_crossings(std::move(out), d.free_loops());
}

std::string side_name(Side s) { return s == Side::left ? "left" : "right"; }

std::string strand_name(const StrandRef& s) {
    return s.is_circle() ? "circle " + std::to_string(s.free_loop) : "arc " + std::to_string(s.arc);
}

}  // namespace

std::vector<std::vector<Dart>> faces(const LinkDiagram& d) { return index_faces(d).faces; }

bool satisfies_euler(const LinkDiagram& d) {
    const FaceIndex fi = index_faces(d);
    const auto piece = piece_of_crossing(d);
    std::map<int, int> crossings_in, faces_in;
    for (int p : piece) ++crossings_in[p];
    for (const auto& face : fi.faces) ++faces_in[piece[face.front().crossing]];
    for (const auto& [p, n] : crossings_in)
        if (faces_in[p] != n + 2) return false;
    return true;
}

LinkDiagram apply_reidemeister(const LinkDiagram& d, const MoveSite& site) {
    return std::visit(
        [&](const auto& m) -> LinkDiagram {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, R1Add>) return r1_add(d, m);
            else if constexpr (std::is_same_v<T, R1Remove>) return r1_remove(d, m);
            else if constexpr (std::is_same_v<T, R2Add>) return r2_add(d, m);
            else if constexpr (std::is_same_v<T, R2Remove>) return r2_remove(d, m);
            else return r3(d, m);
        },
        site);
}

int writhe_change(const LinkDiagram& d, const MoveSite& site) {
    if (const auto* m = std::get_if<R1Add>(&site)) return to_int(m->sign);
    if (const auto* m = std::get_if<R1Remove>(&site)) return -to_int(d.crossing(m->crossing).sign);
    return 0;
}

std::vector<MoveSite> enumerate_sites(const LinkDiagram& d, const SiteFilter& filter) {
    std::vector<MoveSite> out;
    std::vector<StrandRef> strands;
    for (int a : d.arc_labels()) strands.push_back(StrandRef::on_arc(a));
    for (int k = 0; k < d.free_loops(); ++k) strands.push_back(StrandRef::on_circle(k));

    if (filter.r1_add)
        for (const auto& s : strands)
            for (Side side : {Side::left, Side::right})
                for (CrossingSign sign : {CrossingSign::positive, CrossingSign::negative})
                    out.emplace_back(R1Add{s, side, sign});
    if (filter.r1_remove)
        for (int x = 0; x < d.crossing_count(); ++x)
            if (kink_slot(d.crossings()[x])) out.emplace_back(R1Remove{x});

    const FaceIndex fi = index_faces(d);
    if (filter.r2_add) {
        const auto piece = piece_of_crossing(d);
        struct SideRef {
            StrandRef strand;
            Side side;
            int face;
            int piece;
        };
        std::vector<SideRef> sides;
        for (const auto& s : strands)
            for (Side side : {Side::left, Side::right}) {
                if (s.is_circle())
                    sides.push_back({s, side, -1, -1});
                else
                    sides.push_back({s, side, face_of_side(d, fi, s.arc, side), piece[d.head(s.arc).crossing]});
            }
        for (const auto& o : sides)
            for (const auto& u : sides) {
                if (o.strand == u.strand) continue;
                const bool free = o.piece < 0 || u.piece < 0 || o.piece != u.piece;
                if (free || o.face == u.face) out.emplace_back(R2Add{o.strand, o.side, u.strand, u.side});
            }
    }
    if (filter.r2_remove || filter.r3) {
        for (const auto& face : fi.faces) {
            std::vector<int> xs;
            for (const auto& dart : face) xs.push_back(dart.crossing);
            std::sort(xs.begin(), xs.end());
            if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) continue;
            try {
                if (filter.r2_remove && xs.size() == 2) {
                    const R2Remove m{xs[0], xs[1]};
                    bigon_for(d, m);
                    out.emplace_back(m);
                } else if (filter.r3 && xs.size() == 3) {
                    const R3 m{xs[0], xs[1], xs[2]};
                    triangle_for(d, m);
                    out.emplace_back(m);
                }
            } catch (const PreconditionError&) {
                // not a site of this kind
            }
        }
    }
    return out;
}

std::string describe(const MoveSite& site) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, R1Add>)
                return std::string("R1+ ") + (m.sign == CrossingSign::positive ? "positive" : "negative") +
                       " kink on " + strand_name(m.strand) + " (" + side_name(m.side) + ")";
            else if constexpr (std::is_same_v<T, R1Remove>)
                return "R1- crossing " + std::to_string(m.crossing);
            else if constexpr (std::is_same_v<T, R2Add>)
                return "R2+ over=" + strand_name(m.over) + " (" + side_name(m.over_side) +
                       ") under=" + strand_name(m.under) + " (" + side_name(m.under_side) + ")";
            else if constexpr (std::is_same_v<T, R2Remove>)
                return "R2- crossings " + std::to_string(m.first) + "," + std::to_string(m.second);
            else
                return "R3 crossings " + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c);
        },
        site);
}

}  // namespace qknots
