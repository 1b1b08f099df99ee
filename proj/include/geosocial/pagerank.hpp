#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "geosocial/error.hpp"

namespace geosocial {

/// Undirected weighted edge between node indices.
struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;
};

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10;  // on the L1 change between iterates
    int max_iter = 200;
};

struct PageRankResult {
    std::vector<double> scores;  // indexed by node, sums to 1
    int iterations = 0;
    bool converged = false;
};

/**
 * Power iteration over an undirected weighted graph. Every edge is walked in
 * both directions; from node u the walk moves to neighbour v with probability
 * w(u,v) / strength(u). Nodes without edges teleport uniformly.
 *
 * Starts from the uniform vector and stops once the L1 change drops below
 * `tolerance`, or after `max_iter` iterations with `converged == false`.
 */
inline PageRankResult pagerank(std::size_t node_count, std::span<const WeightedEdge> edges,
                               const PageRankOptions& opts = {}) {
    if (node_count == 0) throw DomainError("pagerank: empty graph");
    if (!(opts.damping >= 0.0 && opts.damping < 1.0)) throw DomainError("pagerank: damping must be in [0, 1)");

    const double n = static_cast<double>(node_count);
    std::vector<double> strength(node_count, 0.0);
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count) throw DomainError("pagerank: edge endpoint out of range");
        if (!(e.weight > 0.0)) throw DomainError("pagerank: edge weights must be positive");
        strength[e.u] += e.weight;
        if (e.v != e.u) strength[e.v] += e.weight;
    }

    PageRankResult result;
    std::vector<double> current(node_count, 1.0 / n);
    std::vector<double> next(node_count);
    while (result.iterations < opts.max_iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < node_count; ++i)
            if (strength[i] == 0.0) dangling += current[i];

        const double base = (1.0 - opts.damping) / n + opts.damping * dangling / n;
        std::fill(next.begin(), next.end(), base);
        for (const auto& e : edges) {
            next[e.v] += opts.damping * current[e.u] * e.weight / strength[e.u];
            if (e.v != e.u) next[e.u] += opts.damping * current[e.v] * e.weight / strength[e.v];
        }
        ++result.iterations;

        double delta = 0.0;
        for (std::size_t i = 0; i < node_count; ++i) delta += std::abs(next[i] - current[i]);
        current.swap(next);
        if (delta < opts.tolerance) {
            result.converged = true;
            break;
        }
    }

    double total = 0.0;
    for (const double s : current) total += s;
    for (double& s : current) s /= total;
    result.scores = std::move(current);
    return result;
}

}  // namespace geosocial
