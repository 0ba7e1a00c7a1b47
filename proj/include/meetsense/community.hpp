#ifndef MEETSENSE_COMMUNITY_HPP
#define MEETSENSE_COMMUNITY_HPP

#include <string>
#include <vector>

#include "meetsense/types.hpp"

namespace meetsense::community {

/// Complete weighted graph over subjects. Weights are symmetric and
/// non-negative; negative inputs (anti-correlated audio) are clamped to 0
/// because a negative correlation already signals "no tie".
class SimilarityGraph {
public:
    SimilarityGraph() = default;
    explicit SimilarityGraph(std::vector<std::string> nodes);

    void set_weight(std::size_t i, std::size_t j, double w);
    void set_weight(const std::string& a, const std::string& b, double w);
    double weight(std::size_t i, std::size_t j) const;

    std::size_t size() const { return nodes_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    std::size_t index_of(const std::string& id) const;

    /// Weighted degree of node i (sum of incident edge weights).
    double degree(std::size_t i) const;
    /// Total edge weight W (each undirected edge counted once).
    double total_weight() const;
    /// Mean weight over all node pairs (i < j).
    double mean_pair_weight() const;

private:
    std::vector<std::string> nodes_;
    std::vector<double> w_;  // dense n*n, symmetric, zero diagonal
};

enum class Algorithm { walktrap, louvain };

struct DetectOptions {
    int walk_length = 4;         // random-walk steps for Walktrap
    double tie_epsilon = 0.01;   // modularity slack treated as a tie
};

/// Detected partition. Community indices are renumbered 0..m-1 in order of
/// first appearance over the node list.
struct Partition {
    std::vector<int> assignment;  // node index -> community index
    double modularity = 0.0;

    int community_count() const;
    std::vector<std::vector<std::size_t>> communities() const;
};

/// Newman weighted modularity Q = (1/2W) sum_ij (w_ij - d_i d_j / 2W)
/// delta(c_i, c_j). Zero total weight -> DegenerateGraphError.
double modularity(const SimilarityGraph& graph, const std::vector<int>& assignment);

/// Community detection: Walktrap (default) or Louvain. A graph with no
/// positive edge yields every node in its own community with modularity 0.
Partition detect_communities(const SimilarityGraph& graph,
                             Algorithm algorithm = Algorithm::walktrap,
                             const DetectOptions& options = {});

}  // namespace meetsense::community

#endif
