#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "herdsim/errors.hpp"
#include "herdsim/linalg.hpp"

namespace herdsim {

// Undirected simple graph over follower indices, for the consensus coupling.
// Edges are stored normalized (i < j), sorted, deduplicated.
struct InteractionGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    InteractionGraph() = default;
    InteractionGraph(int n, std::vector<std::pair<int, int>> raw_edges) : n(n) {
        for (auto [i, j] : raw_edges) {
            if (i > j) std::swap(i, j);
            edges.emplace_back(i, j);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        auto v = violations();
        if (!v.empty()) throw ValidationError(std::move(v));
    }

    static InteractionGraph edgeless(int n) { return InteractionGraph(n, {}); }

    static InteractionGraph complete(int n) {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
        return InteractionGraph(n, std::move(e));
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (n < 0) v.push_back("graph: node count must be >= 0");
        for (auto [i, j] : edges) {
            if (i == j) v.push_back("graph: self-loop at node " + std::to_string(i));
            if (i < 0 || j < 0 || i >= n || j >= n)
                v.push_back("graph: edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range");
        }
        return v;
    }

    std::vector<std::vector<int>> adjacency_lists() const {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (auto [i, j] : edges) {
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
        return adj;
    }

    friend bool operator==(const InteractionGraph&, const InteractionGraph&) = default;
};

// Graph Laplacian, degree matrix minus adjacency. Symmetric PSD.
inline Matrix laplacian(const InteractionGraph& g) {
    const auto n = static_cast<std::size_t>(g.n);
    Matrix L(n, n);
    for (auto [i, j] : g.edges) {
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
        L(a, a) += 1.0;
        L(b, b) += 1.0;
        L(a, b) -= 1.0;
        L(b, a) -= 1.0;
    }
    return L;
}

}  // namespace herdsim
