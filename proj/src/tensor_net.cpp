#include "qknots/tensor_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qknots/errors.hpp"
#include "qknots/kernels.hpp"

namespace qknots {

std::size_t Tensor::size() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

Complex Tensor::at(const std::vector<int>& index) const {
    if (index.size() != dims.size()) throw PreconditionError("index rank does not match tensor rank");
    std::size_t off = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (index[k] < 0 || index[k] >= dims[k]) throw PreconditionError("tensor index out of range");
        off = off * dims[k] + index[k];
    }
    return data[off];
}

namespace {

std::size_t product(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

Edge make_edge(PortRef x, PortRef y) { return x < y ? Edge{x, y} : Edge{y, x}; }

int port_dim(const NetworkGraph& g, PortRef p) {
    if (p.node < 0 || p.node >= static_cast<int>(g.nodes.size())) throw PreconditionError("unknown node");
    const auto& n = g.nodes[p.node];
    if (p.port < 0 || p.port >= n.port_count()) throw PreconditionError("unknown port");
    return n.dims[p.port];
}

// Leg labels: internal edge e >= 0; free end k is -(k + 1).
struct Block {
    int id = 0;
    std::vector<int> legs;
    Tensor t;
};

Tensor permute(const Tensor& t, const std::vector<int>& perm) {
    const std::size_t r = t.dims.size();
    Tensor out;
    out.dims.resize(r);
    for (std::size_t i = 0; i < r; ++i) out.dims[i] = t.dims[perm[i]];
    out.data.resize(t.data.size());
    std::vector<std::size_t> stride(r, 1);
    for (std::size_t k = r; k-- > 1;) stride[k - 1] = stride[k] * t.dims[k];
    std::vector<int> idx(r, 0);
    for (std::size_t lin = 0; lin < out.data.size(); ++lin) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < r; ++i) src += idx[i] * stride[perm[i]];
        out.data[lin] = t.data[src];
        for (std::size_t i = r; i-- > 0;) {
            if (++idx[i] < out.dims[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

// Sums out legs that appear twice in one block.
void self_trace(Block& b) {
    std::map<int, std::vector<int>> where;
    for (int i = 0; i < static_cast<int>(b.legs.size()); ++i) where[b.legs[i]].push_back(i);
    std::vector<int> keep, traced;
    for (int i = 0; i < static_cast<int>(b.legs.size()); ++i)
        (where[b.legs[i]].size() == 2 ? traced : keep).push_back(i);
    if (traced.empty()) return;
    std::vector<int> perm = keep;
    std::vector<int> pairs;
    for (const auto& [label, pos] : where)
        if (pos.size() == 2) pairs.insert(pairs.end(), pos.begin(), pos.end());
    perm.insert(perm.end(), pairs.begin(), pairs.end());
    const Tensor p = permute(b.t, perm);
    Tensor out;
    std::vector<int> legs;
    for (int i : keep) {
        out.dims.push_back(b.t.dims[i]);
        legs.push_back(b.legs[i]);
    }
    const std::size_t outer = product(out.dims);
    std::vector<int> pair_dims;
    for (std::size_t k = 0; k < pairs.size(); k += 2) pair_dims.push_back(b.t.dims[pairs[k]]);
    const std::size_t inner = p.data.size() / outer;
    out.data.assign(outer, Complex{});
    // Diagonal offsets inside the trailing block.
    std::vector<std::size_t> diag;
    {
        std::vector<int> idx(pair_dims.size(), 0);
        const std::size_t count = product(pair_dims);
        for (std::size_t c = 0; c < count; ++c) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < pair_dims.size(); ++k) off = (off * pair_dims[k] + idx[k]) * pair_dims[k] + idx[k];
            diag.push_back(off);
            for (std::size_t k = pair_dims.size(); k-- > 0;) {
                if (++idx[k] < pair_dims[k]) break;
                idx[k] = 0;
            }
        }
    }
    for (std::size_t o = 0; o < outer; ++o) {
        Complex s{};
        for (std::size_t off : diag) s += p.data[o * inner + off];
        out.data[o] = s;
    }
    b.t = std::move(out);
    b.legs = std::move(legs);
}

std::vector<int> shared_legs(const Block& x, const Block& y) {
    std::vector<int> s;
    for (int l : x.legs)
        if (std::find(y.legs.begin(), y.legs.end(), l) != y.legs.end()) s.push_back(l);
    return s;
}

std::size_t result_size(const Block& x, const Block& y) {
    const auto s = shared_legs(x, y);
    std::size_t n = 1;
    for (std::size_t i = 0; i < x.legs.size(); ++i)
        if (std::find(s.begin(), s.end(), x.legs[i]) == s.end()) n *= x.t.dims[i];
    for (std::size_t i = 0; i < y.legs.size(); ++i)
        if (std::find(s.begin(), s.end(), y.legs[i]) == s.end()) n *= y.t.dims[i];
    return n;
}

Block contract_pair(const Block& x, const Block& y, bool parallel) {
    const auto s = shared_legs(x, y);
    auto is_shared = [&](int l) { return std::find(s.begin(), s.end(), l) != s.end(); };
    std::vector<int> px, py;
    Block out;
    out.id = std::min(x.id, y.id);
    std::size_t m = 1, k = 1, n = 1;
    for (int i = 0; i < static_cast<int>(x.legs.size()); ++i)
        if (!is_shared(x.legs[i])) {
            px.push_back(i);
            out.legs.push_back(x.legs[i]);
            out.t.dims.push_back(x.t.dims[i]);
            m *= x.t.dims[i];
        }
    for (int l : s) {
        const int i = static_cast<int>(std::find(x.legs.begin(), x.legs.end(), l) - x.legs.begin());
        const int j = static_cast<int>(std::find(y.legs.begin(), y.legs.end(), l) - y.legs.begin());
        px.push_back(i);
        py.push_back(j);
        k *= x.t.dims[i];
    }
    for (int j = 0; j < static_cast<int>(y.legs.size()); ++j)
        if (!is_shared(y.legs[j])) {
            py.push_back(j);
            out.legs.push_back(y.legs[j]);
            out.t.dims.push_back(y.t.dims[j]);
            n *= y.t.dims[j];
        }
    const Tensor a = permute(x.t, px);
    const Tensor b = permute(y.t, py);
    out.t.data.assign(m * n, Complex{});
    if (parallel)
        kernels::matmul_parallel(a.data.data(), b.data.data(), out.t.data.data(), m, k, n);
    else
        kernels::matmul_serial(a.data.data(), b.data.data(), out.t.data.data(), m, k, n);
    return out;
}

void check_budget(std::size_t size, std::size_t budget) {
    if (size > budget)
        throw CapExceeded("contraction intermediate of " + std::to_string(size) + " entries exceeds the budget of " +
                          std::to_string(budget));
}

}  // namespace

void NetworkGraph::validate() const {
    std::map<PortRef, int> seen;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const auto& n = nodes[i];
        if (n.id != i) throw InputError("node ids must be 0..n-1 in order");
        if (n.dirs.size() != n.dims.size()) throw InputError("node " + std::to_string(i) + ": dirs/ports size mismatch");
        for (int d : n.dims)
            if (d < 1 || d > kMaxPortDimension)
                throw InputError("node " + std::to_string(i) + ": port dimension must be in 1.." +
                                 std::to_string(kMaxPortDimension));
        if (n.entries.size() != product(n.dims))
            throw InputError("node " + std::to_string(i) + ": entry count does not match its shape");
        for (const auto& z : n.entries)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InputError("node " + std::to_string(i) + ": non-finite entry");
        for (int p = 0; p < n.port_count(); ++p) seen[{i, p}] = 0;
    }
    auto mark = [&](PortRef p) {
        auto it = seen.find(p);
        if (it == seen.end())
            throw InputError("reference to missing port " + std::to_string(p.node) + "." + std::to_string(p.port));
        ++it->second;
    };
    for (const auto& e : edges) {
        mark(e.a);
        mark(e.b);
        if (nodes[e.a.node].dims[e.a.port] != nodes[e.b.node].dims[e.b.port])
            throw InputError("edge joins ports of different dimension");
    }
    for (const auto& f : free_ends) mark(f);
    for (const auto& [p, count] : seen)
        if (count != 1)
            throw InputError("port " + std::to_string(p.node) + "." + std::to_string(p.port) +
                             (count == 0 ? " is unattached" : " is used more than once"));
}

int NetworkGraph::add_node(TensorNode n) {
    n.id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    return nodes.back().id;
}

Tensor contract(const NetworkGraph& g, const ContractOptions& opts) {
    g.validate();
    if (static_cast<int>(g.nodes.size()) > opts.node_cap)
        throw CapExceeded(std::to_string(g.nodes.size()) + " nodes exceed the cap of " + std::to_string(opts.node_cap));
    std::map<PortRef, int> label;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        label[g.edges[e].a] = e;
        label[g.edges[e].b] = e;
    }
    for (int k = 0; k < static_cast<int>(g.free_ends.size()); ++k) label[g.free_ends[k]] = -(k + 1);

    std::vector<Block> blocks;
    for (const auto& n : g.nodes) {
        Block b;
        b.id = n.id;
        b.t.dims = n.dims;
        b.t.data = n.entries;
        for (int p = 0; p < n.port_count(); ++p) b.legs.push_back(label.at({n.id, p}));
        self_trace(b);
        blocks.push_back(std::move(b));
    }
    if (blocks.empty()) return Tensor{{}, {Complex{1.0, 0.0}}};

    while (blocks.size() > 1) {
        std::size_t bi = 0, bj = 1;
        if (opts.order == ContractionOrder::greedy) {
            std::size_t best = std::numeric_limits<std::size_t>::max();
            bool best_shares = false;
            // Prefer pairs that share an edge; outer products only when nothing is connected.
            for (std::size_t i = 0; i < blocks.size(); ++i)
                for (std::size_t j = i + 1; j < blocks.size(); ++j) {
                    const bool shares = !shared_legs(blocks[i], blocks[j]).empty();
                    const std::size_t cost = result_size(blocks[i], blocks[j]);
                    if ((shares && !best_shares) || (shares == best_shares && cost < best)) {
                        best = cost;
                        best_shares = shares;
                        bi = i;
                        bj = j;
                    }
                }
        }
        check_budget(result_size(blocks[bi], blocks[bj]), opts.budget);
        Block merged = contract_pair(blocks[bi], blocks[bj], opts.parallel);
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(bj));
        blocks[bi] = std::move(merged);
    }
    Block& last = blocks.front();
    std::vector<int> perm(last.legs.size());
    for (int i = 0; i < static_cast<int>(last.legs.size()); ++i) perm[-last.legs[i] - 1] = i;
    return permute(last.t, perm);
}

Complex contract_scalar(const NetworkGraph& g, const ContractOptions& opts) {
    if (!g.free_ends.empty()) throw PreconditionError("network has free ends; its contraction is not a scalar");
    return contract(g, opts).data.front();
}

TensorNode matrix_node(int rows, int cols, std::vector<Complex> entries) {
    if (entries.size() != static_cast<std::size_t>(rows) * cols)
        throw PreconditionError("matrix entry count does not match its shape");
    TensorNode n;
    n.dims = {rows, cols};
    n.dirs = {PortDir::out, PortDir::in};
    n.entries = std::move(entries);
    return n;
}

NetworkGraph matrix_chain_network(const std::vector<DenseMatrix>& ms) {
    if (ms.empty()) throw PreconditionError("matrix chain is empty");
    NetworkGraph g;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (i > 0 && ms[i - 1].cols != ms[i].rows)
            throw PreconditionError("matrix " + std::to_string(i - 1) + " has " + std::to_string(ms[i - 1].cols) +
                                    " columns but matrix " + std::to_string(i) + " has " +
                                    std::to_string(ms[i].rows) + " rows");
        const int id = g.add_node(matrix_node(ms[i].rows, ms[i].cols, ms[i].entries));
        if (i > 0) g.edges.push_back(make_edge({id - 1, 1}, {id, 0}));
    }
    g.free_ends = {{0, 0}, {static_cast<int>(ms.size()) - 1, 1}};
    return g;
}

NetworkGraph trace_network(const DenseMatrix& m) {
    if (m.rows != m.cols) throw PreconditionError("trace needs a square matrix");
    NetworkGraph g;
    g.add_node(matrix_node(m.rows, m.cols, m.entries));
    g.edges.push_back({{0, 0}, {0, 1}});
    return g;
}

NetworkGraph cut_edge(const NetworkGraph& g, int edge) {
    if (edge < 0 || edge >= static_cast<int>(g.edges.size()))
        throw PreconditionError("unknown edge " + std::to_string(edge));
    NetworkGraph out = g;
    const Edge e = out.edges[edge];
    out.edges.erase(out.edges.begin() + edge);
    out.free_ends.push_back(e.a);
    out.free_ends.push_back(e.b);
    return out;
}

NetworkGraph connect_ends(const NetworkGraph& g, int end_a, int end_b) {
    const int n = static_cast<int>(g.free_ends.size());
    if (end_a < 0 || end_b < 0 || end_a >= n || end_b >= n || end_a == end_b)
        throw PreconditionError("connect_ends needs two distinct free ends");
    const PortRef a = g.free_ends[end_a], b = g.free_ends[end_b];
    if (port_dim(g, a) != port_dim(g, b)) throw PreconditionError("free ends have different dimensions");
    NetworkGraph out = g;
    out.free_ends.erase(out.free_ends.begin() + std::max(end_a, end_b));
    out.free_ends.erase(out.free_ends.begin() + std::min(end_a, end_b));
    out.edges.push_back(make_edge(a, b));
    return out;
}

namespace {

NetworkGraph insert_vector(const NetworkGraph& g, int end, const std::vector<Complex>& v, bool ket) {
    if (end < 0 || end >= static_cast<int>(g.free_ends.size()))
        throw PreconditionError("unknown free end " + std::to_string(end));
    const PortRef p = g.free_ends[end];
    const int d = port_dim(g, p);
    if (static_cast<int>(v.size()) != d)
        throw PreconditionError(std::string(ket ? "ket" : "bra") + " of dimension " + std::to_string(v.size()) +
                                " does not fit a free end of dimension " + std::to_string(d));
    NetworkGraph out = g;
    TensorNode n;
    n.kind = ket ? "ket" : "bra";
    n.dims = {d};
    n.dirs = {ket ? PortDir::out : PortDir::in};
    n.entries = v;
    const int id = out.add_node(std::move(n));
    out.free_ends.erase(out.free_ends.begin() + end);
    out.edges.push_back(make_edge(p, {id, 0}));
    return out;
}

}  // namespace

NetworkGraph insert_ket(const NetworkGraph& g, int end, const std::vector<Complex>& v) {
    return insert_vector(g, end, v, true);
}

NetworkGraph insert_bra(const NetworkGraph& g, int end, const std::vector<Complex>& w) {
    return insert_vector(g, end, w, false);
}

DensityInsertion DensityInsertion::amplitude(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    DensityInsertion r;
    r.ket = b;
    for (const auto& z : a) r.bra.push_back(std::conj(z));
    return r;
}

DensityInsertion DensityInsertion::basis(int d, int a, int b) {
    if (a < 0 || b < 0 || a >= d || b >= d) throw PreconditionError("basis index out of range");
    DensityInsertion r;
    r.ket.assign(d, Complex{});
    r.bra.assign(d, Complex{});
    r.ket[b] = 1.0;
    r.bra[a] = 1.0;
    return r;
}

NetworkGraph insert_ketbra(const NetworkGraph& g, int edge, const DensityInsertion& rho) {
    NetworkGraph cut = cut_edge(g, edge);
    const int n = static_cast<int>(cut.free_ends.size());
    const PortRef first = cut.free_ends[n - 2], second = cut.free_ends[n - 1];
    const PortDir d1 = cut.nodes[first.node].dirs[first.port];
    const PortDir d2 = cut.nodes[second.node].dirs[second.port];
    if (d1 == d2) throw PreconditionError("edge does not join an output port to an input port");
    const int ket_end = d1 == PortDir::in ? n - 2 : n - 1;
    const int bra_end = ket_end == n - 2 ? n - 1 : n - 2;
    // Insert at the later position first so the earlier index stays valid.
    if (ket_end > bra_end) {
        cut = insert_ket(cut, ket_end, rho.ket);
        return insert_bra(cut, bra_end, rho.bra);
    }
    cut = insert_bra(cut, bra_end, rho.bra);
    return insert_ket(cut, ket_end, rho.ket);
}

NetworkGraph double_network(const NetworkGraph& g) {
    g.validate();
    if (!g.free_ends.empty()) throw PreconditionError("doubling needs a closed network");
    int ket = -1, bra = -1;
    for (const auto& n : g.nodes) {
        if (n.kind == "ket") {
            if (ket >= 0) throw PreconditionError("doubling supports a single measurement site (two kets found)");
            ket = n.id;
        } else if (n.kind == "bra") {
            if (bra >= 0) throw PreconditionError("doubling supports a single measurement site (two bras found)");
            bra = n.id;
        } else if (n.kind == "density") {
            throw PreconditionError("network is already doubled");
        }
    }
    if (ket < 0 || bra < 0) throw PreconditionError("doubling needs one ket node and one bra node");

    NetworkGraph out;
    std::vector<int> map0(g.nodes.size(), -1), map1(g.nodes.size(), -1);
    for (const auto& n : g.nodes)
        if (n.id != ket && n.id != bra) map0[n.id] = out.add_node(n);
    for (const auto& n : g.nodes)
        if (n.id != ket && n.id != bra) {
            TensorNode c = n;
            for (auto& z : c.entries) z = std::conj(z);
            for (auto& d : c.dirs) d = d == PortDir::in ? PortDir::out : PortDir::in;
            map1[n.id] = out.add_node(std::move(c));
        }
    auto density = [&](const TensorNode& v, PortDir first) {
        TensorNode rho;
        rho.kind = "density";
        const int d = v.dims[0];
        rho.dims = {d, d};
        rho.dirs = {first, first == PortDir::in ? PortDir::out : PortDir::in};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) rho.entries.push_back(v.entries[i] * std::conj(v.entries[j]));
        return out.add_node(std::move(rho));
    };
    const int rk = density(g.nodes[ket], PortDir::out);
    const int rb = density(g.nodes[bra], PortDir::in);
    auto mapped = [&](PortRef p, int copy) -> PortRef {
        if (p.node == ket) return {rk, copy};
        if (p.node == bra) return {rb, copy};
        return {copy == 0 ? map0[p.node] : map1[p.node], p.port};
    };
    for (int copy = 0; copy < 2; ++copy)
        for (const auto& e : g.edges) out.edges.push_back(make_edge(mapped(e.a, copy), mapped(e.b, copy)));
    out.validate();
    return out;
}

void to_json(nlohmann::json& j, const NetworkGraph& g) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : g.nodes) {
        std::string dirs;
        for (auto d : n.dirs) dirs += d == PortDir::out ? 'o' : 'i';
        auto entries = nlohmann::json::array();
        for (const auto& z : n.entries) entries.push_back({z.real(), z.imag()});
        nodes.push_back({{"id", n.id}, {"kind", n.kind}, {"shape", n.dims}, {"dirs", dirs}, {"entries", entries}});
    }
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges) edges.push_back({{e.a.node, e.a.port}, {e.b.node, e.b.port}});
    auto ends = nlohmann::json::array();
    for (const auto& f : g.free_ends) ends.push_back({f.node, f.port});
    j = nlohmann::json{{"nodes", nodes}, {"edges", edges}, {"free_ends", ends}};
}

void from_json(const nlohmann::json& j, NetworkGraph& g) {
    g = NetworkGraph{};
    auto port = [](const nlohmann::json& p) {
        if (!p.is_array() || p.size() != 2) throw InputError("port reference must be [node, port]");
        return PortRef{p[0].get<int>(), p[1].get<int>()};
    };
    for (const auto& jn : j.at("nodes")) {
        TensorNode n;
        n.id = jn.at("id").get<int>();
        n.kind = jn.value("kind", std::string("tensor"));
        n.dims = jn.at("shape").get<std::vector<int>>();
        if (jn.contains("dirs")) {
            const auto s = jn.at("dirs").get<std::string>();
            for (char c : s) {
                if (c != 'o' && c != 'i') throw InputError("dirs must be a string of 'o' and 'i'");
                n.dirs.push_back(c == 'o' ? PortDir::out : PortDir::in);
            }
        } else {
            // First half outputs, second half inputs; a lone bra port is an input.
            const int k = static_cast<int>(n.dims.size());
            for (int p = 0; p < k; ++p)
                n.dirs.push_back(n.kind == "bra" || p >= (k + 1) / 2 ? PortDir::in : PortDir::out);
        }
        for (const auto& z : jn.at("entries")) {
            if (!z.is_array() || z.size() != 2) throw InputError("entries must be [re, im] pairs");
            n.entries.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
        g.nodes.push_back(std::move(n));
    }
    for (const auto& je : j.at("edges")) {
        if (!je.is_array() || je.size() != 2) throw InputError("edge must be [[node, port], [node, port]]");
        g.edges.push_back(make_edge(port(je[0]), port(je[1])));
    }
    if (j.contains("free_ends"))
        for (const auto& jf : j.at("free_ends")) g.free_ends.push_back(port(jf));
    g.validate();
}

void to_json(nlohmann::json& j, const Tensor& t) {
    auto entries = nlohmann::json::array();
    for (const auto& z : t.data) entries.push_back({z.real(), z.imag()});
    j = nlohmann::json{{"shape", t.dims}, {"entries", entries}};
}

}  // namespace qknots
