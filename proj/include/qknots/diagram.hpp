#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qknots {

/// Sign of an oriented crossing. A crossing is positive when the under-strand
/// passes right-to-left beneath the over-strand, seen along the over-strand's direction.
enum class CrossingSign : std::int8_t { negative = -1, positive = 1 };

constexpr CrossingSign operator-(CrossingSign s) noexcept {
    return s == CrossingSign::positive ? CrossingSign::negative : CrossingSign::positive;
}
constexpr int to_int(CrossingSign s) noexcept { return static_cast<int>(s); }

/// One crossing in planar-diagram (PD) form.
///
/// `arcs` lists the four incident arc labels counterclockwise, starting at the
/// incoming under-strand. Slots 0 and 2 carry the under-strand (0 -> 2), slots 1
/// and 3 the over-strand. The over-strand enters at slot 3 on a positive crossing
/// and at slot 1 on a negative one.
struct Crossing {
    std::array<int, 4> arcs{};
    CrossingSign sign = CrossingSign::positive;

    int over_entry_slot() const noexcept { return sign == CrossingSign::positive ? 3 : 1; }
    bool is_entry_slot(int slot) const noexcept { return slot == 0 || slot == over_entry_slot(); }
    static bool is_under_slot(int slot) noexcept { return slot % 2 == 0; }

    friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Position of an arc end: a slot of a crossing.
struct Endpoint {
    int crossing = -1;
    int slot = -1;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

/// A closed component traced along its orientation.
///
/// `arcs[i]` enters crossing `entries[i].crossing` at slot `entries[i].slot`;
/// the strand leaves through the opposite slot onto `arcs[i + 1]` (cyclically).
/// Tracing starts at the component's smallest arc label. Crossing-free circles
/// have no arcs.
struct Component {
    std::vector<int> arcs;
    std::vector<Endpoint> entries;

    bool is_free_loop() const noexcept { return arcs.empty(); }
    int min_arc() const { return arcs.empty() ? 0 : arcs.front(); }
};

/// Combinatorial oriented link diagram: PD crossings plus crossing-free circles.
///
/// Every diagram is oriented. Invariants checked on construction: every arc label
/// occurs at exactly two slots, a label never occupies two opposite slots of one
/// crossing, and each arc has exactly one entry (head) and one exit (tail) slot.
/// Planarity of the PD data is trusted, not verified.
///
/// Components are numbered by increasing smallest arc label; crossing-free
/// circles come last.
class LinkDiagram {
public:
    /// The 0-crossing unknot.
    LinkDiagram();

    static LinkDiagram unknot() { return LinkDiagram(); }
    static LinkDiagram unlink(int circles);

    /// Builds from crossings already in oriented PD form. Throws InputError when
    /// the invariants above fail.
    static LinkDiagram from_crossings(std::vector<Crossing> crossings, int free_loops);

    /// Builds from raw PD tuples (slot 0/2 = under-strand, direction not yet fixed).
    ///
    /// Component directions follow the tuples' under-strand convention when it is
    /// consistent along the component. Otherwise the component is traced from its
    /// smallest arc toward the smaller-labelled neighbouring arc. Components
    /// containing an arc in `reverse_arcs` are then reversed. Crossings are rotated
    /// by two slots where needed so the result is in oriented PD form.
    static LinkDiagram from_pd_tuples(const std::vector<std::array<int, 4>>& tuples, int free_loops,
                                      const std::set<int>& reverse_arcs = {});

    const std::vector<Crossing>& crossings() const noexcept { return crossings_; }
    const Crossing& crossing(int id) const;
    int crossing_count() const noexcept { return static_cast<int>(crossings_.size()); }
    int free_loops() const noexcept { return free_loops_; }

    const std::vector<Component>& components() const noexcept { return components_; }
    int component_count() const noexcept { return static_cast<int>(components_.size()); }
    /// Component id of an arc label; throws PreconditionError for unknown labels.
    int component_of_arc(int arc) const;
    /// Component ids of the under- and over-strand at a crossing.
    std::pair<int, int> strand_components(int crossing_id) const;

    std::vector<int> arc_labels() const;
    int max_arc_label() const;
    bool has_arc(int arc) const { return endpoints_.count(arc) != 0; }
    const std::array<Endpoint, 2>& endpoints(int arc) const;
    /// Endpoint where the arc enters a crossing.
    Endpoint head(int arc) const;
    /// Endpoint where the arc leaves a crossing.
    Endpoint tail(int arc) const;
    /// The endpoint of `arc` other than `e`.
    Endpoint other_end(int arc, Endpoint e) const;

    /// Relabels arcs 1..2N along the components in component order.
    LinkDiagram canonical() const;

    friend bool operator==(const LinkDiagram& a, const LinkDiagram& b) {
        return a.crossings_ == b.crossings_ && a.free_loops_ == b.free_loops_;
    }

private:
    void index();

    std::vector<Crossing> crossings_;
    int free_loops_ = 1;
    std::vector<Component> components_;
    std::map<int, std::array<Endpoint, 2>> endpoints_;
    std::map<int, int> arc_component_;
};

/// True when the diagrams have identical crossing sequences (same order, signs and
/// slot pattern) and free-loop counts, up to a bijective renaming of arc labels.
bool same_up_to_relabeling(const LinkDiagram& a, const LinkDiagram& b);

/// Sum of crossing signs.
int writhe(const LinkDiagram& d);

int count_components(const LinkDiagram& d);

/// Half the signed count of crossings between components i and j (i != j).
int linking_number(const LinkDiagram& d, int i, int j);

/// Full symmetric linking matrix (diagonal zero).
std::vector<std::vector<int>> linking_matrix(const LinkDiagram& d);

/// Exchanges over and under at one crossing; an involution.
LinkDiagram switch_crossing(const LinkDiagram& d, int crossing_id);

/// Removes component c. Crossings it takes part in disappear and the other strand
/// through each of them is fused into one arc.
LinkDiagram delete_component(const LinkDiagram& d, int component);

/// Removes the given crossings, fusing the through-strands of each. Arcs whose
/// strands are left without crossings become crossing-free circles, except those
/// belonging to components listed in `drop_components`, which vanish.
LinkDiagram remove_crossings(const LinkDiagram& d, const std::set<int>& crossing_ids,
                             const std::set<int>& drop_components = {});

/// Disjoint union; arc labels of `b` are shifted past those of `a`.
LinkDiagram disjoint_union(const LinkDiagram& a, const LinkDiagram& b);

/// Crossing-level connected pieces of the diagram (crossing ids per piece).
std::vector<std::vector<int>> connected_pieces(const LinkDiagram& d);

// ---------------------------------------------------------------------------
// Flat diagrams

/// A 4-valent node without over/under data.
///
/// `arcs` is counterclockwise starting at the entry of the strand whose entry arc
/// has the smaller label ("first strand", slots 0 -> 2). The second strand
/// enters at `second_entry_slot` (1 or 3).
struct FlatNode {
    std::array<int, 4> arcs{};
    int second_entry_slot = 1;
    friend bool operator==(const FlatNode&, const FlatNode&) = default;
};

struct FlatDiagram {
    std::vector<FlatNode> nodes;
    int free_loops = 1;

    int node_count() const noexcept { return static_cast<int>(nodes.size()); }
    friend bool operator==(const FlatDiagram&, const FlatDiagram&) = default;
};

/// Forgets over/under at each crossing; node i corresponds to crossing i.
FlatDiagram flatten(const LinkDiagram& d);

/// Chooses over/under at each node: bit 0 puts the node's first strand under,
/// bit 1 puts its second strand under.
LinkDiagram resolve(const FlatDiagram& f, const std::vector<std::uint8_t>& choice);

/// Resolution indexed by an integer; node i takes bit (N-1-i), so index order is
/// lexicographic in the choice vector.
LinkDiagram resolve_index(const FlatDiagram& f, std::uint64_t index);

}  // namespace qknots
