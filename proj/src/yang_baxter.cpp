#include "qknots/yang_baxter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

void check_shape(const CrossingTensor& r) {
    if (r.d < 1 || r.d > kMaxPortDimension) throw PreconditionError("crossing dimension out of range");
    if (r.r.rows() != r.d * r.d || r.r.cols() != r.d * r.d)
        throw PreconditionError("crossing tensor must be d^2 x d^2");
}

Eigen::MatrixXcd letter_operator(const CrossingTensor& r, int n, int pos, int exponent) {
    const Eigen::MatrixXcd m = exponent > 0 ? r.r : Eigen::MatrixXcd(r.r.adjoint());
    auto ident = [&](int k) {
        return Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(std::pow(r.d, k)),
                                          static_cast<Eigen::Index>(std::pow(r.d, k)));
    };
    return kron(kron(ident(pos), m), ident(n - pos - 2));
}

std::vector<std::vector<int>> braid_cycles(const BraidWord& b) {
    const auto perm = b.permutation();
    std::vector<bool> seen(perm.size(), false);
    std::vector<std::vector<int>> out;
    for (int p = 0; p < b.strand_count; ++p) {
        if (seen[p]) continue;
        std::vector<int> cyc;
        for (int q = p; !seen[q]; q = perm[q]) {
            seen[q] = true;
            cyc.push_back(q);
        }
        std::sort(cyc.begin(), cyc.end());
        out.push_back(cyc);
    }
    return out;
}

}  // namespace

bool is_unitary(const CrossingTensor& r, double tol) {
    check_shape(r);
    const Eigen::MatrixXcd e = r.r.adjoint() * r.r - Eigen::MatrixXcd::Identity(r.r.rows(), r.r.cols());
    return e.cwiseAbs().maxCoeff() <= tol;
}

bool check_yang_baxter(const CrossingTensor& r, double tol) {
    check_shape(r);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r.d, r.d);
    const Eigen::MatrixXcd r12 = kron(r.r, id), r23 = kron(id, r.r);
    return ((r12 * r23 * r12) - (r23 * r12 * r23)).cwiseAbs().maxCoeff() <= tol;
}

CrossingTensor default_crossing_tensor() {
    CrossingTensor r;
    r.d = 2;
    r.r.resize(4, 4);
    r.r << 1, 0, 0, 1,  //
        0, 1, -1, 0,    //
        0, 1, 1, 0,     //
        -1, 0, 0, 1;
    r.r /= std::sqrt(2.0);
    if (!is_unitary(r, 1e-12) || !check_yang_baxter(r, 1e-12))
        throw std::logic_error("built-in crossing tensor failed its unitarity or Yang-Baxter check");
    return r;
}

CrossingTensor identity_crossing(int d) {
    return CrossingTensor{d, Eigen::MatrixXcd::Identity(d * d, d * d)};
}

CrossingTensor swap_crossing(int d) {
    CrossingTensor r{d, Eigen::MatrixXcd::Zero(d * d, d * d)};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r.r(j * d + i, i * d + j) = 1.0;
    return r;
}

CrossingTensor load_crossing_tensor(const std::string& spec) {
    if (spec == "default") return default_crossing_tensor();
    if (spec == "identity") return identity_crossing(2);
    if (spec == "swap") return swap_crossing(2);
    std::ifstream in(spec);
    if (!in) throw InputError("cannot open crossing tensor file '" + spec + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("crossing tensor file '" + spec + "': " + e.what());
    }
    CrossingTensor r;
    r.d = j.at("d").get<int>();
    if (r.d < 1 || r.d > kMaxPortDimension) throw InputError("crossing dimension out of range");
    const int n = r.d * r.d;
    const auto& e = j.at("entries");
    if (static_cast<int>(e.size()) != n * n) throw InputError("crossing tensor needs d^4 entries");
    r.r.resize(n, n);
    for (int k = 0; k < n * n; ++k) r.r(k / n, k % n) = Complex(e[k].at(0).get<double>(), e[k].at(1).get<double>());
    return r;
}

BraidNetwork link_to_network(const BraidWord& b, const CrossingTensor& r) {
    b.validate();
    check_shape(r);
    if (!is_unitary(r, 1e-9)) throw PreconditionError("crossing tensor is not unitary within 1e-9");
    if (!check_yang_baxter(r, 1e-9)) throw PreconditionError("crossing tensor fails the Yang-Baxter check at 1e-9");
    const int d = r.d, n = b.strand_count;
    BraidNetwork out;
    out.braid = b;
    out.crossing = r;
    NetworkGraph& g = out.graph;
    const Eigen::MatrixXcd rinv = r.r.adjoint();
    std::vector<std::optional<PortRef>> top(n), current(n);
    for (const auto& l : b.letters) {
        const int p = l.generator - 1;
        const Eigen::MatrixXcd& m = l.exponent > 0 ? r.r : rinv;
        TensorNode node;
        node.kind = l.exponent > 0 ? "R" : "Rinv";
        node.dims = {d, d, d, d};
        node.dirs = {PortDir::out, PortDir::out, PortDir::in, PortDir::in};
        for (int i = 0; i < d * d; ++i)
            for (int j = 0; j < d * d; ++j) node.entries.push_back(m(i, j));
        const int id = g.add_node(std::move(node));
        for (int k = 0; k < 2; ++k) {
            const PortRef in{id, 2 + k};
            if (current[p + k])
                g.edges.push_back(*current[p + k] < in ? Edge{*current[p + k], in} : Edge{in, *current[p + k]});
            else
                top[p + k] = in;
            current[p + k] = PortRef{id, k};
        }
    }
    out.closure_edges.assign(n, -1);
    for (int q = 0; q < n; ++q) {
        if (!current[q]) {
            std::vector<Complex> delta;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) delta.push_back(i == j ? 1.0 : 0.0);
            TensorNode id_node = matrix_node(d, d, std::move(delta));
            id_node.kind = "identity";
            const int id = g.add_node(std::move(id_node));
            top[q] = PortRef{id, 1};
            current[q] = PortRef{id, 0};
        }
        const PortRef a = *current[q], c = *top[q];
        out.closure_edges[q] = static_cast<int>(g.edges.size());
        g.edges.push_back(a < c ? Edge{a, c} : Edge{c, a});
    }
    g.validate();
    return out;
}

Complex braid_trace_dense(const BraidWord& b, const CrossingTensor& r) {
    b.validate();
    check_shape(r);
    const auto dim = static_cast<Eigen::Index>(std::pow(r.d, b.strand_count));
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& l : b.letters) op = letter_operator(r, b.strand_count, l.generator - 1, l.exponent) * op;
    return op.trace();
}

ComponentMeasurement measure_component(const BraidNetwork& net, int component, const DensityInsertion& rho,
                                       const ContractOptions& opts) {
    const auto cycles = braid_cycles(net.braid);
    if (component < 0 || component >= static_cast<int>(cycles.size()))
        throw PreconditionError("unknown component " + std::to_string(component));
    if (static_cast<int>(rho.ket.size()) != net.crossing.d || static_cast<int>(rho.bra.size()) != net.crossing.d)
        throw PreconditionError("insertion dimension does not match the network");
    const int pos = cycles[component].front();
    ComponentMeasurement m;
    m.component = component;
    m.edge = net.closure_edges.at(pos);
    m.value = contract_scalar(insert_ketbra(net.graph, m.edge, rho), opts);
    m.uncut = contract_scalar(net.graph, opts);
    if (cycles[component].size() == 1 && net.braid.strand_count > 1) {
        m.deleted = contract_scalar(link_to_network(net.braid.without_strand(pos), net.crossing).graph, opts);
    }
    return m;
}

void to_json(nlohmann::json& j, const ComponentMeasurement& m) {
    auto c = [](Complex z) { return nlohmann::json{{"re", z.real()}, {"im", z.imag()}}; };
    j = nlohmann::json{{"component", m.component}, {"edge", m.edge}, {"value", c(m.value)}, {"uncut", c(m.uncut)}};
    j["deleted"] = m.deleted ? c(*m.deleted) : nlohmann::json(nullptr);
    j["note"] = "invariant only under movements that keep strands off the inserted ket and bra";
}

}  // namespace qknots
