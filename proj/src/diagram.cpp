#include "qknots/diagram.hpp"

#include <algorithm>
#include <numeric>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

/// Union-find keyed by arbitrary ints; the representative of a class is its smallest member.
class LabelUnion {
public:
    int find(int x) {
        auto it = parent_.find(x);
        if (it == parent_.end()) {
            parent_.emplace(x, x);
            return x;
        }
        if (it->second == x) return x;
        int root = find(it->second);
        parent_[x] = root;
        return root;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::map<int, int> parent_;
};

using RawEndpoints = std::map<int, std::vector<Endpoint>>;

RawEndpoints collect_endpoints(const std::vector<std::array<int, 4>>& tuples) {
    RawEndpoints eps;
    for (int x = 0; x < static_cast<int>(tuples.size()); ++x) {
        for (int s = 0; s < 4; ++s) {
            if (tuples[x][s] <= 0)
                throw InputError("crossing " + std::to_string(x) + ": arc labels must be positive integers");
            eps[tuples[x][s]].push_back({x, s});
        }
        for (int s = 0; s < 2; ++s)
            if (tuples[x][s] == tuples[x][s + 2])
                throw InputError("crossing " + std::to_string(x) + ": arc " + std::to_string(tuples[x][s]) +
                                 " occupies two opposite slots");
    }
    for (const auto& [arc, list] : eps)
        if (list.size() != 2)
            throw InputError("arc " + std::to_string(arc) + " appears " + std::to_string(list.size()) +
                             " times; every arc must appear exactly twice");
    return eps;
}

Endpoint other_of(const RawEndpoints& eps, int arc, Endpoint e) {
    const auto& list = eps.at(arc);
    return list[0] == e ? list[1] : list[0];
}

}  // namespace

LinkDiagram::LinkDiagram() { index(); }

LinkDiagram LinkDiagram::unlink(int circles) {
    if (circles < 1) throw PreconditionError("an unlink needs at least one circle");
    return from_crossings({}, circles);
}

LinkDiagram LinkDiagram::from_crossings(std::vector<Crossing> crossings, int free_loops) {
    if (free_loops < 0) throw InputError("negative crossing-free circle count");
    if (crossings.empty() && free_loops == 0) throw InputError("a diagram needs at least one component");
    LinkDiagram d;
    d.crossings_ = std::move(crossings);
    d.free_loops_ = free_loops;
    d.index();
    return d;
}

LinkDiagram LinkDiagram::from_pd_tuples(const std::vector<std::array<int, 4>>& tuples, int free_loops,
                                        const std::set<int>& reverse_arcs) {
    const RawEndpoints eps = collect_endpoints(tuples);
    for (int arc : reverse_arcs)
        if (!eps.count(arc)) throw InputError("orientation refers to unknown arc " + std::to_string(arc));

    auto trace = [&](Endpoint entry) {
        std::vector<std::pair<int, Endpoint>> passes;  // (arc, entry endpoint)
        int arc = tuples[entry.crossing][entry.slot];
        const Endpoint start = entry;
        do {
            passes.emplace_back(arc, entry);
            const Endpoint exit{entry.crossing, (entry.slot + 2) % 4};
            arc = tuples[exit.crossing][exit.slot];
            entry = other_of(eps, arc, exit);
        } while (!(entry == start));
        return passes;
    };

    std::vector<std::array<bool, 4>> is_entry(tuples.size(), {false, false, false, false});
    std::set<int> visited;
    for (const auto& [m, ends] : eps) {
        if (visited.count(m)) continue;
        auto forward = trace(ends[0]);
        bool any_under = false, all_zero = true, all_two = true;
        for (const auto& [arc, e] : forward) {
            if (e.slot % 2 == 0) {
                any_under = true;
                all_zero &= e.slot == 0;
                all_two &= e.slot == 2;
            }
        }
        std::vector<std::pair<int, Endpoint>> chosen;
        if (any_under && all_zero) {
            chosen = forward;
        } else if (any_under && all_two) {
            chosen = trace(ends[1]);
        } else {
            // Toward the smaller-labelled neighbour; ties broken by endpoint position.
            auto next_label = [&](Endpoint p) { return tuples[p.crossing][(p.slot + 2) % 4]; };
            const int n0 = next_label(ends[0]);
            const int n1 = next_label(ends[1]);
            bool pick_first = n0 != n1 ? n0 < n1 : ends[0] < ends[1];
            chosen = pick_first ? forward : trace(ends[1]);
        }
        bool reverse = false;
        for (const auto& [arc, e] : chosen) {
            visited.insert(arc);
            reverse |= reverse_arcs.count(arc) != 0;
        }
        for (const auto& [arc, e] : chosen) {
            Endpoint entry = e;
            if (reverse) entry = Endpoint{e.crossing, (e.slot + 2) % 4};
            is_entry[entry.crossing][entry.slot] = true;
        }
    }

    std::vector<Crossing> crossings;
    crossings.reserve(tuples.size());
    for (std::size_t x = 0; x < tuples.size(); ++x) {
        const int u = is_entry[x][0] ? 0 : 2;
        const int o = is_entry[x][1] ? 1 : 3;
        Crossing c;
        for (int k = 0; k < 4; ++k) c.arcs[k] = tuples[x][(k + u) % 4];
        c.sign = ((o - u + 4) % 4) == 3 ? CrossingSign::positive : CrossingSign::negative;
        crossings.push_back(c);
    }
    return from_crossings(std::move(crossings), free_loops);
}

void LinkDiagram::index() {
    endpoints_.clear();
    arc_component_.clear();
    components_.clear();

    std::vector<std::array<int, 4>> tuples;
    tuples.reserve(crossings_.size());
    for (const auto& c : crossings_) tuples.push_back(c.arcs);
    const RawEndpoints eps = collect_endpoints(tuples);
    for (const auto& [arc, list] : eps) {
        endpoints_[arc] = {list[0], list[1]};
        const int heads = int(crossings_[list[0].crossing].is_entry_slot(list[0].slot)) +
                          int(crossings_[list[1].crossing].is_entry_slot(list[1].slot));
        if (heads != 1)
            throw InputError("arc " + std::to_string(arc) +
                             " is not consistently oriented (needs one entry and one exit slot)");
    }

    for (const auto& [m, ends] : endpoints_) {
        if (arc_component_.count(m)) continue;
        const int id = static_cast<int>(components_.size());
        Component comp;
        int arc = m;
        do {
            const Endpoint h = head(arc);
            comp.arcs.push_back(arc);
            comp.entries.push_back(h);
            arc_component_[arc] = id;
            arc = crossings_[h.crossing].arcs[(h.slot + 2) % 4];
        } while (arc != m);
        components_.push_back(std::move(comp));
    }
    for (int i = 0; i < free_loops_; ++i) components_.emplace_back();
}

const Crossing& LinkDiagram::crossing(int id) const {
    if (id < 0 || id >= crossing_count()) throw PreconditionError("unknown crossing id " + std::to_string(id));
    return crossings_[id];
}

int LinkDiagram::component_of_arc(int arc) const {
    auto it = arc_component_.find(arc);
    if (it == arc_component_.end()) throw PreconditionError("unknown arc label " + std::to_string(arc));
    return it->second;
}

std::pair<int, int> LinkDiagram::strand_components(int crossing_id) const {
    const Crossing& c = crossing(crossing_id);
    return {component_of_arc(c.arcs[0]), component_of_arc(c.arcs[1])};
}

std::vector<int> LinkDiagram::arc_labels() const {
    std::vector<int> out;
    out.reserve(endpoints_.size());
    for (const auto& [arc, e] : endpoints_) out.push_back(arc);
    return out;
}

int LinkDiagram::max_arc_label() const { return endpoints_.empty() ? 0 : endpoints_.rbegin()->first; }

const std::array<Endpoint, 2>& LinkDiagram::endpoints(int arc) const {
    auto it = endpoints_.find(arc);
    if (it == endpoints_.end()) throw PreconditionError("unknown arc label " + std::to_string(arc));
    return it->second;
}

Endpoint LinkDiagram::head(int arc) const {
    const auto& e = endpoints(arc);
    return crossings_[e[0].crossing].is_entry_slot(e[0].slot) ? e[0] : e[1];
}

Endpoint LinkDiagram::tail(int arc) const {
    const auto& e = endpoints(arc);
    return crossings_[e[0].crossing].is_entry_slot(e[0].slot) ? e[1] : e[0];
}

Endpoint LinkDiagram::other_end(int arc, Endpoint e) const {
    const auto& list = endpoints(arc);
    return list[0] == e ? list[1] : list[0];
}

LinkDiagram LinkDiagram::canonical() const {
    std::map<int, int> relabel;
    int next = 1;
    for (const auto& comp : components_)
        for (int arc : comp.arcs) relabel[arc] = next++;
    std::vector<Crossing> out = crossings_;
    for (auto& c : out)
        for (int& a : c.arcs) a = relabel.at(a);
    return from_crossings(std::move(out), free_loops_);
}

bool same_up_to_relabeling(const LinkDiagram& a, const LinkDiagram& b) {
    if (a.crossing_count() != b.crossing_count() || a.free_loops() != b.free_loops()) return false;
    std::map<int, int> fwd, back;
    for (int x = 0; x < a.crossing_count(); ++x) {
        const Crossing& ca = a.crossings()[x];
        const Crossing& cb = b.crossings()[x];
        if (ca.sign != cb.sign) return false;
        for (int s = 0; s < 4; ++s) {
            auto [it1, ins1] = fwd.try_emplace(ca.arcs[s], cb.arcs[s]);
            auto [it2, ins2] = back.try_emplace(cb.arcs[s], ca.arcs[s]);
            if (it1->second != cb.arcs[s] || it2->second != ca.arcs[s]) return false;
        }
    }
    return true;
}

int writhe(const LinkDiagram& d) {
    int w = 0;
    for (const auto& c : d.crossings()) w += to_int(c.sign);
    return w;
}

int count_components(const LinkDiagram& d) { return d.component_count(); }

namespace {

int inter_component_sign_sum(const LinkDiagram& d, int i, int j) {
    int sum = 0;
    for (int x = 0; x < d.crossing_count(); ++x) {
        auto [u, o] = d.strand_components(x);
        if ((u == i && o == j) || (u == j && o == i)) sum += to_int(d.crossings()[x].sign);
    }
    return sum;
}

}  // namespace

int linking_number(const LinkDiagram& d, int i, int j) {
    const int n = d.component_count();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw PreconditionError("unknown component id (diagram has " + std::to_string(n) + " components)");
    if (i == j) throw PreconditionError("linking number needs two distinct components");
    const int sum = inter_component_sign_sum(d, i, j);
    if (sum % 2 != 0)
        throw InputError("odd signed crossing count between components " + std::to_string(i) + " and " +
                         std::to_string(j) + "; the PD data is not planar");
    return sum / 2;
}

std::vector<std::vector<int>> linking_matrix(const LinkDiagram& d) {
    const int n = d.component_count();
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m[i][j] = m[j][i] = linking_number(d, i, j);
    return m;
}

LinkDiagram switch_crossing(const LinkDiagram& d, int crossing_id) {
    const Crossing& c = d.crossing(crossing_id);
    std::vector<Crossing> out = d.crossings();
    Crossing& s = out[crossing_id];
    // The old over-strand becomes the under-strand; rotate so its entry is slot 0.
    const int rot = c.over_entry_slot();
    for (int k = 0; k < 4; ++k) s.arcs[k] = c.arcs[(k + rot) % 4];
    s.sign = -c.sign;
    return LinkDiagram::from_crossings(std::move(out), d.free_loops());
}

LinkDiagram remove_crossings(const LinkDiagram& d, const std::set<int>& crossing_ids,
                             const std::set<int>& drop_components) {
    LabelUnion uf;
    for (int x : crossing_ids) {
        const Crossing& c = d.crossing(x);
        uf.unite(c.arcs[0], c.arcs[2]);
        uf.unite(c.arcs[1], c.arcs[3]);
    }
    std::vector<Crossing> kept;
    std::set<int> surviving_classes;
    for (int x = 0; x < d.crossing_count(); ++x) {
        if (crossing_ids.count(x)) continue;
        Crossing c = d.crossings()[x];
        for (int& a : c.arcs) {
            if (drop_components.count(d.component_of_arc(a)))
                throw PreconditionError("crossing " + std::to_string(x) + " involves a dropped component");
            a = uf.find(a);
            surviving_classes.insert(a);
        }
        kept.push_back(c);
    }
    int loops = d.free_loops();
    const int crossing_components = d.component_count() - d.free_loops();
    for (int comp : drop_components) {
        if (comp >= crossing_components) --loops;
    }
    std::set<int> orphan_classes;
    for (int arc : d.arc_labels()) {
        if (drop_components.count(d.component_of_arc(arc))) continue;
        const int cls = uf.find(arc);
        if (!surviving_classes.count(cls)) orphan_classes.insert(cls);
    }
    loops += static_cast<int>(orphan_classes.size());
    return LinkDiagram::from_crossings(std::move(kept), loops);
}

LinkDiagram delete_component(const LinkDiagram& d, int component) {
    const int n = d.component_count();
    if (component < 0 || component >= n) throw PreconditionError("unknown component id " + std::to_string(component));
    if (n < 2) throw PreconditionError("cannot delete the last component of a diagram");
    std::set<int> ids;
    for (int x = 0; x < d.crossing_count(); ++x) {
        auto [u, o] = d.strand_components(x);
        if (u == component || o == component) ids.insert(x);
    }
    return remove_crossings(d, ids, {component});
}

LinkDiagram disjoint_union(const LinkDiagram& a, const LinkDiagram& b) {
    const int shift = a.max_arc_label();
    std::vector<Crossing> out = a.crossings();
    for (Crossing c : b.crossings()) {
        for (int& arc : c.arcs) arc += shift;
        out.push_back(c);
    }
    return LinkDiagram::from_crossings(std::move(out), a.free_loops() + b.free_loops());
}

std::vector<std::vector<int>> connected_pieces(const LinkDiagram& d) {
    const int n = d.crossing_count();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int arc : d.arc_labels()) {
        const auto& e = d.endpoints(arc);
        int a = find(e[0].crossing), b = find(e[1].crossing);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<int, std::vector<int>> groups;
    for (int x = 0; x < n; ++x) groups[find(x)].push_back(x);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

FlatDiagram flatten(const LinkDiagram& d) {
    FlatDiagram f;
    f.free_loops = d.free_loops();
    for (const Crossing& c : d.crossings()) {
        FlatNode node;
        const int over_entry = c.over_entry_slot();
        if (c.arcs[0] < c.arcs[over_entry]) {
            node.arcs = c.arcs;
            node.second_entry_slot = over_entry;
        } else {
            for (int k = 0; k < 4; ++k) node.arcs[k] = c.arcs[(k + over_entry) % 4];
            node.second_entry_slot = (4 - over_entry) % 4;
        }
        f.nodes.push_back(node);
    }
    return f;
}

LinkDiagram resolve(const FlatDiagram& f, const std::vector<std::uint8_t>& choice) {
    if (choice.size() != f.nodes.size())
        throw PreconditionError("resolve: expected " + std::to_string(f.nodes.size()) + " choice bits, got " +
                                std::to_string(choice.size()));
    std::vector<Crossing> out;
    out.reserve(f.nodes.size());
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const FlatNode& node = f.nodes[i];
        Crossing c;
        if (choice[i] == 0) {
            c.arcs = node.arcs;
            c.sign = node.second_entry_slot == 3 ? CrossingSign::positive : CrossingSign::negative;
        } else {
            const int rot = node.second_entry_slot;
            for (int k = 0; k < 4; ++k) c.arcs[k] = node.arcs[(k + rot) % 4];
            c.sign = rot == 1 ? CrossingSign::positive : CrossingSign::negative;
        }
        out.push_back(c);
    }
    return LinkDiagram::from_crossings(std::move(out), f.free_loops);
}

LinkDiagram resolve_index(const FlatDiagram& f, std::uint64_t index) {
    const int n = f.node_count();
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1u);
    return resolve(f, bits);
}

}  // namespace qknots
