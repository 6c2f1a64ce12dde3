#include "chainnet/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

namespace chainnet {

namespace {

// Recursive contraction on a dense matrix. Node 0 is the root and never has
// an incoming edge, so it is never part of a cycle.
std::vector<int> edmonds(const ScoreMatrix& s) {
    const auto n = static_cast<int>(s.rows());
    std::vector<int> best(static_cast<std::size_t>(n), -1);
    for (int v = 1; v < n; ++v) {
        double top = kForbidden;
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            if (s(u, v) > top) {
                top = s(u, v);
                best[static_cast<std::size_t>(v)] = u;
            }
        }
        if (best[static_cast<std::size_t>(v)] < 0) {
            throw UsageError("node " + std::to_string(v) + " has no usable incoming edge");
        }
    }

    std::vector<int> cycle;
    {
        std::vector<int> mark(static_cast<std::size_t>(n), -1);
        for (int start = 1; start < n && cycle.empty(); ++start) {
            int v = start;
            while (v > 0 && mark[static_cast<std::size_t>(v)] == -1) {
                mark[static_cast<std::size_t>(v)] = start;
                v = best[static_cast<std::size_t>(v)];
            }
            if (v > 0 && mark[static_cast<std::size_t>(v)] == start) {
                int u = v;
                do {
                    cycle.push_back(u);
                    u = best[static_cast<std::size_t>(u)];
                } while (u != v);
            }
        }
    }
    if (cycle.empty()) return best;

    std::vector<bool> in_cycle(static_cast<std::size_t>(n), false);
    for (int v : cycle) in_cycle[static_cast<std::size_t>(v)] = true;
    std::vector<int> to_new(static_cast<std::size_t>(n), -1);
    std::vector<int> to_old;
    for (int v = 0; v < n; ++v) {
        if (in_cycle[static_cast<std::size_t>(v)]) continue;
        to_new[static_cast<std::size_t>(v)] = static_cast<int>(to_old.size());
        to_old.push_back(v);
    }
    const int c = static_cast<int>(to_old.size());
    const int m = c + 1;
    ScoreMatrix t = ScoreMatrix::Constant(m, m, kForbidden);
    std::vector<int> enter_at(static_cast<std::size_t>(m), -1);  // for u outside: cycle node entered
    std::vector<int> leave_from(static_cast<std::size_t>(m), -1);  // for v outside: cycle node leaving
    for (int u : to_old) {
        for (int v : to_old) {
            if (u != v) t(to_new[static_cast<std::size_t>(u)], to_new[static_cast<std::size_t>(v)]) = s(u, v);
        }
    }
    for (int u : to_old) {
        const int nu = to_new[static_cast<std::size_t>(u)];
        for (int v : cycle) {
            const double gain = s(u, v) - s(best[static_cast<std::size_t>(v)], v);
            if (gain > t(nu, c)) {
                t(nu, c) = gain;
                enter_at[static_cast<std::size_t>(nu)] = v;
            }
        }
    }
    for (int v : to_old) {
        if (v == 0) continue;
        const int nv = to_new[static_cast<std::size_t>(v)];
        for (int u : cycle) {
            if (s(u, v) > t(c, nv)) {
                t(c, nv) = s(u, v);
                leave_from[static_cast<std::size_t>(nv)] = u;
            }
        }
    }

    const auto sub = edmonds(t);
    std::vector<int> head = best;
    for (int nv = 1; nv < c; ++nv) {
        const int h = sub[static_cast<std::size_t>(nv)];
        head[static_cast<std::size_t>(to_old[static_cast<std::size_t>(nv)])] =
            h == c ? leave_from[static_cast<std::size_t>(nv)] : to_old[static_cast<std::size_t>(h)];
    }
    const int entering_head = sub[static_cast<std::size_t>(c)];
    const int entered = enter_at[static_cast<std::size_t>(entering_head)];
    head[static_cast<std::size_t>(entered)] = to_old[static_cast<std::size_t>(entering_head)];
    return head;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

Arborescence max_arborescence(const ScoreMatrix& scores) {
    if (scores.rows() != scores.cols() || scores.rows() < 1) throw UsageError("score matrix must be square and non-empty");
    Arborescence out;
    if (scores.rows() == 1) {
        out.head = {-1};
        return out;
    }
    out.head = edmonds(scores);
    out.head[0] = -1;
    out.total = arborescence_score(scores, out.head);
    if (!std::isfinite(out.total)) throw UsageError("no arborescence with finite score exists");
    return out;
}

double arborescence_score(const ScoreMatrix& scores, const std::vector<int>& head) {
    double total = 0;
    for (std::size_t d = 1; d < head.size(); ++d) total += scores(head[d], static_cast<Eigen::Index>(d));
    return total;
}

Eigen::MatrixXd distance_matrix(const std::vector<Eigen::VectorXd>& points, Distance metric) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (points[static_cast<std::size_t>(i)].size() != points.front().size()) {
            throw UsageError("points have different dimensions");
        }
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& a = points[static_cast<std::size_t>(i)];
            const auto& b = points[static_cast<std::size_t>(j)];
            double value;
            if (metric == Distance::Euclidean) {
                value = (a - b).norm();
            } else {
                const double denom = a.norm() * b.norm();
                value = denom == 0 ? 1.0 : 1.0 - a.dot(b) / denom;
            }
            d(i, j) = d(j, i) = value;
        }
    }
    return d;
}

std::optional<std::vector<UndirectedEdge>> minimum_spanning_tree(const Eigen::MatrixXd& weights) {
    const auto n = static_cast<std::size_t>(weights.rows());
    std::vector<UndirectedEdge> edges;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double w = weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (w != std::numeric_limits<double>::infinity()) edges.push_back({a, b, w});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const UndirectedEdge& x, const UndirectedEdge& y) {
        return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
    });
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<UndirectedEdge> tree;
    for (const auto& e : edges) {
        const auto ra = find_root(parent, e.a);
        const auto rb = find_root(parent, e.b);
        if (ra == rb) continue;
        parent[ra] = rb;
        tree.push_back(e);
    }
    if (n > 0 && tree.size() != n - 1) return std::nullopt;
    std::sort(tree.begin(), tree.end(), [](const auto& x, const auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    return tree;
}

std::vector<UndirectedEdge> undirected_mst(const std::vector<Eigen::VectorXd>& points, Distance metric) {
    if (points.empty()) throw UsageError("minimum spanning tree needs at least one point");
    return *minimum_spanning_tree(distance_matrix(points, metric));
}

Parse orient_and_label(const std::string& word, const std::vector<SenseIndex>& senses,
                       const std::vector<UndirectedEdge>& tree, const std::vector<LabelKind>& labels,
                       const std::vector<std::array<double, kLabelCount>>& probabilities) {
    const auto n = senses.size();
    if (labels.size() != n) throw UsageError("one label per sense is required");
    if (!probabilities.empty() && probabilities.size() != n) throw UsageError("one probability row per sense is required");
    const auto proto = std::find(labels.begin(), labels.end(), LabelKind::Prototype);
    if (proto == labels.end()) throw UsageError("orientation needs a prototype");
    if (tree.size() + 1 != n) throw UsageError("edge list is not a spanning tree");

    std::vector<std::vector<std::size_t>> adjacent(n);
    for (const auto& e : tree) {
        if (e.a >= n || e.b >= n || e.a == e.b) throw UsageError("edge out of range");
        adjacent[e.a].push_back(e.b);
        adjacent[e.b].push_back(e.a);
    }
    for (auto& list : adjacent) std::sort(list.begin(), list.end());

    Parse out;
    out.word = word;
    out.senses = senses;
    out.labels = labels;
    out.heads.assign(n, std::nullopt);
    const auto root = static_cast<std::size_t>(proto - labels.begin());
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (auto v : adjacent[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            out.heads[v] = u;
            queue.push_back(v);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw UsageError("edge list is not a spanning tree");
    for (std::size_t i = 0; i < n; ++i) {
        if (i == root || out.labels[i] != LabelKind::Prototype) continue;
        const bool metonym = !probabilities.empty() &&
                             probabilities[i][static_cast<std::size_t>(LabelKind::Metonymy)] >
                                 probabilities[i][static_cast<std::size_t>(LabelKind::Metaphor)];
        out.labels[i] = metonym ? LabelKind::Metonymy : LabelKind::Metaphor;
    }
    return out;
}

std::vector<Parse> n_best_variants(const Parse& parse, std::size_t n, const Redecoder& redecode,
                                   bool include_root_edges, std::vector<std::string>* warnings) {
    std::vector<Parse> out{parse};
    for (std::size_t d = 0; d < parse.size() && out.size() < n; ++d) {
        if (!parse.heads[d] && !include_root_edges) continue;
        const ParseEdge edge{parse.heads[d], d};
        auto variant = redecode(edge);
        if (!variant) {
            if (warnings) {
                const auto from = edge.head ? parse.senses[*edge.head].to_string() : std::string("root");
                warnings->push_back(parse.word + ": no tree avoids " + from + "->" + parse.senses[d].to_string() +
                                    ", variant skipped");
            }
            continue;
        }
        if (std::find(out.begin(), out.end(), *variant) == out.end()) out.push_back(std::move(*variant));
    }
    return out;
}

}  // namespace chainnet
