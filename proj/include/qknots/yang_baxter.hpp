#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qknots/braid.hpp"
#include "qknots/tensor_net.hpp"

namespace qknots {

/// d^2 x d^2 operator on two adjacent strands, rows/columns indexed i*d + j.
struct CrossingTensor {
    int d = 2;
    Eigen::MatrixXcd r;
};

bool is_unitary(const CrossingTensor& r, double tol);
/// (R x I)(I x R)(R x I) == (I x R)(R x I)(I x R) entrywise within tol.
bool check_yang_baxter(const CrossingTensor& r, double tol);

/// Bell-basis change: (1/sqrt 2)[[1,0,0,1],[0,1,-1,0],[0,1,1,0],[-1,0,0,1]].
/// Verified for unitarity and Yang-Baxter at 1e-12 on every call; throws
/// std::logic_error if either check fails.
CrossingTensor default_crossing_tensor();
CrossingTensor identity_crossing(int d);
CrossingTensor swap_crossing(int d);
/// Parses "default" or a JSON file path holding {"d": k, "entries": [[re, im], ...]}.
CrossingTensor load_crossing_tensor(const std::string& spec);

/// Network of a braid closure plus, per strand position, the closure edge that
/// joins the bottom of that position back to the top.
struct BraidNetwork {
    NetworkGraph graph;
    std::vector<int> closure_edges;
    BraidWord braid;
    CrossingTensor crossing;
};

/// One node per letter (R for positive, R^-1 = R^dagger for negative), ports
/// (out_p, out_p+1, in_p, in_p+1). Untouched positions get an identity node.
/// Requires R unitary and Yang-Baxter at 1e-9.
BraidNetwork link_to_network(const BraidWord& b, const CrossingTensor& r);

/// Dense oracle: trace of R_k ... R_1 on (C^d)^n, letter 1 acting first.
Complex braid_trace_dense(const BraidWord& b, const CrossingTensor& r);

struct ComponentMeasurement {
    int component = 0;
    int edge = 0;
    Complex value;
    Complex uncut;
    /// Evaluation of the braid with the component's strand removed; only for
    /// components that are a single strand of the braid.
    std::optional<Complex> deleted;
};

/// Inserts rho on the closure edge of the component's lowest strand position.
ComponentMeasurement measure_component(const BraidNetwork& net, int component, const DensityInsertion& rho,
                                       const ContractOptions& opts = {});

void to_json(nlohmann::json& j, const ComponentMeasurement& m);

}  // namespace qknots
