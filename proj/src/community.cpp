#include "meetsense/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace meetsense::community {

SimilarityGraph::SimilarityGraph(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), w_(nodes_.size() * nodes_.size(), 0.0) {}

void SimilarityGraph::set_weight(std::size_t i, std::size_t j, double w) {
    if (i >= size() || j >= size()) throw ParameterError("set_weight: node index out of range");
    if (i == j) throw ParameterError("set_weight: self-loops are not allowed");
    w = std::max(w, 0.0);
    w_[i * size() + j] = w;
    w_[j * size() + i] = w;
}

void SimilarityGraph::set_weight(const std::string& a, const std::string& b, double w) {
    set_weight(index_of(a), index_of(b), w);
}

double SimilarityGraph::weight(std::size_t i, std::size_t j) const {
    return w_[i * size() + j];
}

std::size_t SimilarityGraph::index_of(const std::string& id) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end()) throw ParameterError("graph: unknown node " + id);
    return static_cast<std::size_t>(it - nodes_.begin());
}

double SimilarityGraph::degree(std::size_t i) const {
    double d = 0.0;
    for (std::size_t j = 0; j < size(); ++j) d += weight(i, j);
    return d;
}

double SimilarityGraph::total_weight() const {
    double w = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) w += weight(i, j);
    return w;
}

double SimilarityGraph::mean_pair_weight() const {
    const std::size_t n = size();
    if (n < 2) return 0.0;
    return total_weight() / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

int Partition::community_count() const {
    int m = 0;
    for (int c : assignment) m = std::max(m, c + 1);
    return m;
}

std::vector<std::vector<std::size_t>> Partition::communities() const {
    std::vector<std::vector<std::size_t>> out(community_count());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        out[assignment[i]].push_back(i);
    }
    return out;
}

double modularity(const SimilarityGraph& graph, const std::vector<int>& assignment) {
    const std::size_t n = graph.size();
    if (assignment.size() != n) throw ParameterError("modularity: assignment does not cover all nodes");
    const double total = graph.total_weight();
    if (total <= 0.0) throw DegenerateGraphError("modularity: graph has no positive edge weight");

    const double two_w = 2.0 * total;
    std::vector<double> deg(n);
    for (std::size_t i = 0; i < n; ++i) deg[i] = graph.degree(i);

    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (assignment[i] != assignment[j]) continue;
            q += graph.weight(i, j) - deg[i] * deg[j] / two_w;
        }
    }
    return q / two_w;
}

namespace {

std::vector<int> renumber(std::vector<int> assignment) {
    std::vector<int> remap(assignment.size(), -1);
    int next = 0;
    for (int& c : assignment) {
        if (remap[c] == -1) remap[c] = next++;
        c = remap[c];
    }
    return assignment;
}

Partition singleton_partition(std::size_t n) {
    Partition p;
    p.assignment.resize(n);
    std::iota(p.assignment.begin(), p.assignment.end(), 0);
    p.modularity = 0.0;
    return p;
}

// Pick the best dendrogram level by modularity; levels within tie_epsilon of
// the maximum count as tied and the one with fewest communities wins.
std::size_t best_level(const std::vector<double>& level_q, double tie_epsilon) {
    double q_max = -std::numeric_limits<double>::infinity();
    for (double q : level_q) q_max = std::max(q_max, q);
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < level_q.size(); ++i) {
        if (level_q[i] >= q_max - tie_epsilon) chosen = i;  // later level = fewer communities
    }
    return chosen;
}

Partition walktrap(const SimilarityGraph& graph, const DetectOptions& opt) {
    const std::size_t n = graph.size();

    std::vector<double> deg(n);
    for (std::size_t i = 0; i < n; ++i) deg[i] = graph.degree(i);

    // t-step lazy random-walk distributions, rows of ((I + D^-1 A)/2)^t.
    // The lazy step suppresses the period-2 oscillation a tight pair sets
    // up, which would otherwise make its two members look distant.
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (deg[i] > 0.0) {
            for (std::size_t j = 0; j < n; ++j) p[i][j] = 0.5 * graph.weight(i, j) / deg[i];
            p[i][i] += 0.5;
        } else {
            p[i][i] = 1.0;  // isolated node: walker stays put
        }
    }
    std::vector<std::vector<double>> pt = p;
    for (int step = 1; step < opt.walk_length; ++step) {
        std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const double v = pt[i][k];
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) next[i][j] += v * p[k][j];
            }
        }
        pt = std::move(next);
    }

    struct Cluster {
        std::vector<std::size_t> members;
        std::vector<double> dist;  // mean walk distribution of members
        bool alive = true;
    };
    std::vector<Cluster> clusters(n);
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i].members = {i};
        clusters[i].dist = pt[i];
    }
    std::vector<int> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);

    auto adjacent = [&](const Cluster& a, const Cluster& b) {
        for (std::size_t i : a.members)
            for (std::size_t j : b.members)
                if (graph.weight(i, j) > 0.0) return true;
        return false;
    };
    auto merge_cost = [&](const Cluster& a, const Cluster& b) {
        // Ward-style: (|A||B| / (|A|+|B|)) * r^2(A,B) / n, with the walk
        // distance r^2 = sum_k (pa_k - pb_k)^2 / d_k over non-isolated k.
        double r2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (deg[k] <= 0.0) continue;
            const double d = a.dist[k] - b.dist[k];
            r2 += d * d / deg[k];
        }
        const double na = static_cast<double>(a.members.size());
        const double nb = static_cast<double>(b.members.size());
        return na * nb / (na + nb) * r2 / static_cast<double>(n);
    };

    std::vector<std::vector<int>> levels;
    std::vector<double> level_q;
    const bool has_edges = graph.total_weight() > 0.0;
    auto record_level = [&](const std::vector<int>& a) {
        levels.push_back(a);
        level_q.push_back(has_edges ? modularity(graph, a) : 0.0);
    };
    record_level(assignment);

    while (true) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        bool found = false;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            if (!clusters[a].alive) continue;
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                if (!clusters[b].alive) continue;
                if (!adjacent(clusters[a], clusters[b])) continue;
                const double cost = merge_cost(clusters[a], clusters[b]);
                if (cost < best_cost - 1e-15) {
                    best_cost = cost;
                    ba = a;
                    bb = b;
                    found = true;
                }
            }
        }
        if (!found) break;  // only disconnected components remain

        Cluster merged;
        merged.members = clusters[ba].members;
        merged.members.insert(merged.members.end(), clusters[bb].members.begin(),
                              clusters[bb].members.end());
        const double na = static_cast<double>(clusters[ba].members.size());
        const double nb = static_cast<double>(clusters[bb].members.size());
        merged.dist.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            merged.dist[k] = (na * clusters[ba].dist[k] + nb * clusters[bb].dist[k]) / (na + nb);
        }
        clusters[ba] = std::move(merged);
        clusters[bb].alive = false;

        for (std::size_t i : clusters[ba].members) assignment[i] = static_cast<int>(ba);
        record_level(assignment);
    }

    const std::size_t pick = best_level(level_q, opt.tie_epsilon);
    Partition part;
    part.assignment = renumber(levels[pick]);
    part.modularity = level_q[pick];
    return part;
}

Partition louvain(const SimilarityGraph& graph) {
    const std::size_t n = graph.size();

    // Aggregated working graph: node weights fold previously merged nodes.
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    std::vector<double> self_loop(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = graph.weight(i, j);
    std::vector<std::vector<std::size_t>> carried(n);
    for (std::size_t i = 0; i < n; ++i) carried[i] = {i};

    const double two_w = 2.0 * graph.total_weight();
    std::vector<int> final_assignment(n, 0);

    while (true) {
        const std::size_t m = w.size();
        std::vector<int> comm(m);
        std::iota(comm.begin(), comm.end(), 0);
        std::vector<double> deg(m, 0.0), comm_tot(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) deg[i] += w[i][j];
            deg[i] += self_loop[i];
            comm_tot[i] = deg[i];
        }

        bool moved_any = false;
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < m; ++i) {
                const int old_c = comm[i];
                std::vector<double> link(m, 0.0);
                for (std::size_t j = 0; j < m; ++j) {
                    if (j != i) link[comm[j]] += w[i][j];
                }
                comm_tot[old_c] -= deg[i];

                int best_c = old_c;
                double best_gain = link[old_c] - comm_tot[old_c] * deg[i] / two_w;
                for (std::size_t j = 0; j < m; ++j) {
                    const int c = comm[j];
                    if (c == best_c) continue;
                    const double gain = link[c] - comm_tot[c] * deg[i] / two_w;
                    if (gain > best_gain + 1e-12) {
                        best_gain = gain;
                        best_c = c;
                    }
                }
                comm_tot[best_c] += deg[i];
                if (best_c != old_c) {
                    comm[i] = best_c;
                    improved = true;
                    moved_any = true;
                }
            }
        }

        comm = renumber(comm);
        // Translate onto original nodes.
        std::vector<int> translated(n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t orig : carried[i]) translated[orig] = comm[i];
        }
        final_assignment = translated;
        if (!moved_any) break;

        // Aggregate communities into the next level's nodes.
        const int mc = 1 + *std::max_element(comm.begin(), comm.end());
        std::vector<std::vector<double>> nw(mc, std::vector<double>(mc, 0.0));
        std::vector<double> nself(mc, 0.0);
        std::vector<std::vector<std::size_t>> ncarried(mc);
        for (std::size_t i = 0; i < m; ++i) {
            nself[comm[i]] += self_loop[i];
            ncarried[comm[i]].insert(ncarried[comm[i]].end(), carried[i].begin(), carried[i].end());
            for (std::size_t j = 0; j < m; ++j) {
                if (comm[i] == comm[j]) {
                    if (i < j) nself[comm[i]] += 2.0 * w[i][j];
                } else {
                    nw[comm[i]][comm[j]] += w[i][j];
                }
            }
        }
        if (static_cast<std::size_t>(mc) == m) break;  // no aggregation happened
        w = std::move(nw);
        self_loop = std::move(nself);
        carried = std::move(ncarried);
    }

    Partition part;
    part.assignment = renumber(final_assignment);
    part.modularity = modularity(graph, part.assignment);
    return part;
}

}  // namespace

Partition detect_communities(const SimilarityGraph& graph, Algorithm algorithm,
                             const DetectOptions& options) {
    const std::size_t n = graph.size();
    if (n < 2) throw ParameterError("detect_communities: need at least 2 nodes");
    if (graph.total_weight() <= 0.0) return singleton_partition(n);

    switch (algorithm) {
        case Algorithm::louvain:
            return louvain(graph);
        case Algorithm::walktrap:
        default:
            return walktrap(graph, options);
    }
}

}  // namespace meetsense::community
