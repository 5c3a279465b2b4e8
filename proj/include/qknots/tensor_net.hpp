#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace qknots {

using Complex = std::complex<double>;

inline constexpr int kMaxPortDimension = 8;
inline constexpr int kDefaultNodeCap = 64;
inline constexpr std::size_t kDefaultContractionBudget = std::size_t{1} << 22;

/// Dense tensor, row-major over its index order.
struct Tensor {
    std::vector<int> dims;
    std::vector<Complex> data;

    std::size_t size() const;
    Complex at(const std::vector<int>& index) const;
};

enum class PortDir { out, in };

/// "tensor" for ordinary nodes; "ket" / "bra" for one-port insertions; "density"
/// for the two-port ket-bra nodes that doubling produces.
struct TensorNode {
    int id = 0;
    std::string kind = "tensor";
    std::vector<int> dims;
    std::vector<PortDir> dirs;
    std::vector<Complex> entries;

    int port_count() const noexcept { return static_cast<int>(dims.size()); }
};

struct PortRef {
    int node = 0;
    int port = 0;
    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

/// Stored with a < b.
struct Edge {
    PortRef a;
    PortRef b;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct NetworkGraph {
    std::vector<TensorNode> nodes;
    std::vector<Edge> edges;
    std::vector<PortRef> free_ends;

    /// Every port in exactly one edge or free-end slot, matching dimensions, finite entries.
    /// Throws InputError otherwise.
    void validate() const;
    int add_node(TensorNode n);
};

enum class ContractionOrder {
    greedy,      ///< smallest intermediate first, lowest node ids on ties
    sequential,  ///< fold nodes in id order; a second order for cross-checks
};

struct ContractOptions {
    ContractionOrder order = ContractionOrder::greedy;
    std::size_t budget = kDefaultContractionBudget;  ///< max entries of any intermediate
    int node_cap = kDefaultNodeCap;
    bool parallel = true;
};

/// Sum over all internal edge labels of the products of node entries. Result
/// indices follow free_ends order; a closed network gives a 0-index tensor.
Tensor contract(const NetworkGraph& g, const ContractOptions& opts = {});
Complex contract_scalar(const NetworkGraph& g, const ContractOptions& opts = {});

/// Row-major matrix as a two-port node: port 0 = row (out), port 1 = column (in).
TensorNode matrix_node(int rows, int cols, std::vector<Complex> entries);

/// Matrices m_0 .. m_k given as (rows, cols, entries). Contraction = m_0 m_1 ... m_k.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> entries;
};
NetworkGraph matrix_chain_network(const std::vector<DenseMatrix>& ms);
NetworkGraph trace_network(const DenseMatrix& m);

/// Removes edge e; its ports are appended to free_ends, smaller (node, port) first.
NetworkGraph cut_edge(const NetworkGraph& g, int edge);
/// Rejoins two free ends (by position in free_ends).
NetworkGraph connect_ends(const NetworkGraph& g, int end_a, int end_b);

/// Attaches a one-port node to free end `end`. Bra entries are used as given
/// (pass conj(a) for the bra of a).
NetworkGraph insert_ket(const NetworkGraph& g, int end, const std::vector<Complex>& v);
NetworkGraph insert_bra(const NetworkGraph& g, int end, const std::vector<Complex>& w);

/// rho_ij = ket_i * bra_j.
struct DensityInsertion {
    std::vector<Complex> ket;
    std::vector<Complex> bra;

    /// ket = |b>, bra = <a| (conjugated a); the insertion then evaluates <a| rest |b>.
    static DensityInsertion amplitude(const std::vector<Complex>& a, const std::vector<Complex>& b);
    static DensityInsertion basis(int d, int a, int b);
};

/// Cut edge e, ket on the end whose port is an input, bra on the output end.
NetworkGraph insert_ketbra(const NetworkGraph& g, int edge, const DensityInsertion& rho);

/// N together with its conjugate copy; the ket node and its copy merge into one
/// density node (same for the bra), so the scalar is |amplitude of N|^2. Requires a
/// closed network with exactly one ket and one bra node.
NetworkGraph double_network(const NetworkGraph& g);

void to_json(nlohmann::json& j, const NetworkGraph& g);
void from_json(const nlohmann::json& j, NetworkGraph& g);
void to_json(nlohmann::json& j, const Tensor& t);

}  // namespace qknots
