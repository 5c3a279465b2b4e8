#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qknots/diagram.hpp"

namespace qknots {

/// A face-boundary step: leave `crossing` along the arc at `slot`. The face lies
/// to the right of the direction of travel.
struct Dart {
    int crossing = -1;
    int slot = -1;
    friend auto operator<=>(const Dart&, const Dart&) = default;
};

/// Faces of the planar embedding given by the counterclockwise slot order. Each
/// dart belongs to exactly one face; faces are listed in order of their smallest dart.
std::vector<std::vector<Dart>> faces(const LinkDiagram& d);

/// Euler check per connected piece: a planar piece with N > 0 crossings has N + 2 faces.
bool satisfies_euler(const LinkDiagram& d);

enum class Side { left, right };

/// A place on the diagram: an arc, or a crossing-free circle (by index among them).
struct StrandRef {
    int arc = 0;
    int free_loop = -1;

    static StrandRef on_arc(int a) { return {a, -1}; }
    static StrandRef on_circle(int k) { return {0, k}; }
    bool is_circle() const noexcept { return free_loop >= 0; }
    friend bool operator==(const StrandRef&, const StrandRef&) = default;
};

/// Adds a kink on the given side of the strand (side relative to its orientation).
struct R1Add {
    StrandRef strand;
    Side side = Side::left;
    CrossingSign sign = CrossingSign::positive;
};
/// Removes a kink crossing (an arc joining two adjacent slots of the crossing).
struct R1Remove {
    int crossing = -1;
};
/// Pushes a finger of `over` across `under`. The given sides must face the same
/// region, unless the strands lie in different pieces of the diagram.
struct R2Add {
    StrandRef over;
    Side over_side = Side::left;
    StrandRef under;
    Side under_side = Side::left;
};
/// Removes two crossings bounding a bigon whose one strand is over at both.
struct R2Remove {
    int first = -1;
    int second = -1;
};
/// Slides the top strand of a triangle across the opposite crossing.
struct R3 {
    int a = -1;
    int b = -1;
    int c = -1;
};

using MoveSite = std::variant<R1Add, R1Remove, R2Add, R2Remove, R3>;

/// Applies the move; throws PreconditionError naming the reason when the site
/// does not match the move's local pattern.
LinkDiagram apply_reidemeister(const LinkDiagram& d, const MoveSite& site);

/// Writhe change a site produces (+1/-1 for R1, 0 otherwise).
int writhe_change(const LinkDiagram& d, const MoveSite& site);

struct SiteFilter {
    bool r1_add = true;
    bool r1_remove = true;
    bool r2_add = true;
    bool r2_remove = true;
    bool r3 = true;
};

/// Every valid site, in a deterministic order.
std::vector<MoveSite> enumerate_sites(const LinkDiagram& d, const SiteFilter& filter = {});

/// "R2+ over=arc 3 (left) under=circle 0 (right)" and so on.
std::string describe(const MoveSite& site);

}  // namespace qknots
