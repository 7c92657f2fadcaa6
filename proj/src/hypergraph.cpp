#include "rearr/hypergraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace rearr {

std::vector<int> Hypergraph::nodes_of_rpg(int rpg_id) const {
    std::vector<int> out_ids;
    for (const Hypernode& n : nodes) {
        if (n.rpg_id == rpg_id) {
            out_ids.push_back(n.id);
        }
    }
    return out_ids;
}

namespace {

// Integral transportation feasibility: ship sig_v[i] units out of each row,
// sig_u[j] into each column, cell capacity = number of shared poses lying in
// component i of one RPG and component j of the other. Returns the cell
// flows when total flow k is achievable.
std::optional<std::vector<std::vector<int>>> solve_transport(
    const std::vector<int>& row_supply, const std::vector<int>& col_demand,
    const std::vector<std::vector<int>>& capacity, int k) {
    const int rows = static_cast<int>(row_supply.size());
    const int cols = static_cast<int>(col_demand.size());
    // Node ids: 0 = source, 1..rows, rows+1..rows+cols, rows+cols+1 = sink.
    const int source = 0;
    const int sink = rows + cols + 1;
    const int n = sink + 1;
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (int i = 0; i < rows; ++i) {
        cap[source][1 + i] = row_supply[i];
        for (int j = 0; j < cols; ++j) {
            cap[1 + i][1 + rows + j] = capacity[i][j];
        }
    }
    for (int j = 0; j < cols; ++j) {
        cap[1 + rows + j][sink] = col_demand[j];
    }
    int flow = 0;
    while (true) {
        std::vector<int> prev(n, -1);
        prev[source] = source;
        std::deque<int> queue{source};
        while (!queue.empty() && prev[sink] < 0) {
            const int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < n; ++v) {
                if (prev[v] < 0 && cap[u][v] > 0) {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if (prev[sink] < 0) {
            break;
        }
        for (int v = sink; v != source; v = prev[v]) {
            cap[prev[v]][v] -= 1;
            cap[v][prev[v]] += 1;
        }
        ++flow;
    }
    if (flow != k) {
        return std::nullopt;
    }
    std::vector<std::vector<int>> used(rows, std::vector<int>(cols, 0));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            used[i][j] = capacity[i][j] - cap[1 + i][1 + rows + j];
        }
    }
    return used;
}

}  // namespace

std::optional<CrossRpgEdge> connect_node(const Hypergraph& h,
                                         const Hypernode& v,
                                         const Hypernode& u, int k) {
    if (v.rpg_id == u.rpg_id) {
        return std::nullopt;
    }
    const Rpg& rv = h.rpgs[v.rpg_id];
    const Rpg& ru = h.rpgs[u.rpg_id];
    std::vector<PoseId> shared;
    std::set_intersection(rv.nodes.poses.begin(), rv.nodes.poses.end(),
                          ru.nodes.poses.begin(), ru.nodes.poses.end(),
                          std::back_inserter(shared));
    if (static_cast<int>(shared.size()) < k) {
        return std::nullopt;
    }
    const int rows = rv.component_count;
    const int cols = ru.component_count;
    std::vector<std::vector<int>> capacity(rows, std::vector<int>(cols, 0));
    std::vector<std::vector<std::vector<PoseId>>> cell_poses(
        rows, std::vector<std::vector<PoseId>>(cols));
    for (PoseId p : shared) {
        const int i = rv.component_of.at(p);
        const int j = ru.component_of.at(p);
        ++capacity[i][j];
        cell_poses[i][j].push_back(p);
    }
    auto flows = solve_transport(v.signature, u.signature, capacity, k);
    if (!flows) {
        return std::nullopt;
    }
    CrossRpgEdge edge;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            for (int c = 0; c < (*flows)[i][j]; ++c) {
                edge.handoff.insert(cell_poses[i][j][c]);  // ascending ids
            }
        }
    }
    // The handoff must satisfy both signatures by construction.
    if (signature_of(rv, edge.handoff) != v.signature ||
        signature_of(ru, edge.handoff) != u.signature) {
        throw RpgError("transport witness violates a signature");
    }
    return edge;
}

void connect_siblings(Hypergraph& h, const std::vector<int>& sibling_ids,
                      int rpg_id) {
    const Rpg& rpg = h.rpgs[rpg_id];
    const std::vector<ConstrainedEdge>& constrained = h.constrained[rpg_id];
    const std::vector<int> sizes = rpg.component_sizes();
    const std::vector<std::set<PoseId>> comps = rpg.components();

    for (std::size_t ci = 0; ci < constrained.size(); ++ci) {
        const ConstrainedEdge& ce = constrained[ci];
        const int comp_a = rpg.component_of.at(ce.poses.first);
        const int comp_b = rpg.component_of.at(ce.poses.second);
        if (comp_a == comp_b) {
            continue;  // only component-linking edges change signatures
        }
        for (const auto& [src, dst] :
             {std::pair{ce.poses.first, ce.poses.second},
              std::pair{ce.poses.second, ce.poses.first}}) {
            const int comp_src = rpg.component_of.at(src);
            const int comp_dst = rpg.component_of.at(dst);
            // Poses that must be empty during the traversal.
            std::map<int, std::set<PoseId>> forbidden;
            forbidden[comp_dst].insert(dst);
            for (PoseId c : ce.constraints) {
                forbidden[rpg.component_of.at(c)].insert(c);
            }
            for (int vid : sibling_ids) {
                const Hypernode& v = h.nodes[vid];
                if (v.signature[comp_src] < 1) {
                    continue;
                }
                bool feasible = true;
                for (const auto& [comp, poses] : forbidden) {
                    if (v.signature[comp] >
                        sizes[comp] - static_cast<int>(poses.size())) {
                        feasible = false;
                        break;
                    }
                }
                if (!feasible) {
                    continue;
                }
                Signature post_sig = v.signature;
                --post_sig[comp_src];
                ++post_sig[comp_dst];
                int wid = -1;
                for (int cand : sibling_ids) {
                    if (h.nodes[cand].signature == post_sig) {
                        wid = cand;
                        break;
                    }
                }
                if (wid < 0) {
                    continue;  // post signature exceeds a component capacity
                }

                // Deterministic witness arrangement: per component, the
                // source first, then smallest admissible ids.
                Arrangement pre;
                bool witness_ok = true;
                for (int comp = 0; comp < rpg.component_count && witness_ok;
                     ++comp) {
                    int need = v.signature[comp];
                    if (comp == comp_src && need > 0) {
                        pre.insert(src);
                        --need;
                    }
                    for (PoseId p : comps[comp]) {
                        if (need == 0) break;
                        if (pre.count(p)) continue;
                        const auto fit = forbidden.find(comp);
                        if (fit != forbidden.end() && fit->second.count(p)) {
                            continue;
                        }
                        pre.insert(p);
                        --need;
                    }
                    if (need != 0) {
                        witness_ok = false;
                    }
                }
                if (!witness_ok || !pre.count(src)) {
                    continue;
                }
                Arrangement post = pre;
                post.erase(src);
                post.insert(dst);
                if (signature_of(rpg, pre) != v.signature ||
                    signature_of(rpg, post) != post_sig) {
                    throw RpgError("sibling witness violates a signature");
                }
                // The witness must be reachable within the signature class;
                // exercised here against the pebble solver before the edge
                // is committed.
                Arrangement canonical;
                for (int comp = 0; comp < rpg.component_count; ++comp) {
                    int need = v.signature[comp];
                    for (PoseId p : comps[comp]) {
                        if (need == 0) break;
                        canonical.insert(p);
                        --need;
                    }
                }
                if (!solve_pebble_problem(rpg, canonical, pre)) {
                    continue;
                }

                Hyperedge e;
                e.from = vid;
                e.to = wid;
                e.kind = Hyperedge::Kind::Sibling;
                e.sibling.source = src;
                e.sibling.target = dst;
                e.sibling.constraints = ce.constraints;
                e.sibling.constrained_index = static_cast<int>(ci);
                e.sibling.path_reversed = (src != ce.poses.first);
                e.sibling.pre = pre;
                e.sibling.post = post;
                h.edges.push_back(e);
                h.out[vid].push_back(static_cast<int>(h.edges.size()) - 1);
            }
        }
    }
}

std::vector<int> create_hypernodes(Hypergraph& h, const Roadmap& roadmap,
                                   const SceneSpec& scene, int k, int b,
                                   const std::optional<Arrangement>& seed,
                                   std::mt19937_64& rng) {
    // Resample on pumped arrangements that include unreachable poses; those
    // cannot host an RPG.
    PumpedArrangement pumped;
    bool ok = false;
    for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
        pumped = sample_pumped_arrangement(scene, k, b, seed, rng());
        ok = std::all_of(pumped.poses.begin(), pumped.poses.end(),
                         [&](PoseId p) { return roadmap.pose_reachable(p); });
    }
    if (!ok) {
        throw RpgError("could not sample a reachable pumped arrangement");
    }

    auto [rpg, constrained] = create_rpg(roadmap, pumped);
    rpg.id = static_cast<int>(h.rpgs.size());
    const int rpg_id = rpg.id;
    h.rpgs.push_back(std::move(rpg));
    h.constrained.push_back(std::move(constrained));

    std::vector<int> new_ids;
    for (const Signature& sig : enumerate_signatures(h.rpgs[rpg_id], k)) {
        Hypernode node;
        node.id = static_cast<int>(h.nodes.size());
        node.rpg_id = rpg_id;
        node.signature = sig;
        h.nodes.push_back(node);
        h.out.push_back({});
        new_ids.push_back(node.id);
    }
    for (int vid : new_ids) {
        for (const Hypernode& other : h.nodes) {
            if (other.rpg_id == rpg_id) {
                continue;
            }
            if (auto cross = connect_node(h, h.nodes[vid], other, k)) {
                for (const auto& [from, to] :
                     {std::pair{vid, other.id}, std::pair{other.id, vid}}) {
                    Hyperedge e;
                    e.from = from;
                    e.to = to;
                    e.kind = Hyperedge::Kind::CrossRpg;
                    e.cross = *cross;
                    h.edges.push_back(e);
                    h.out[from].push_back(static_cast<int>(h.edges.size()) - 1);
                }
            }
        }
    }
    connect_siblings(h, new_ids, rpg_id);
    return new_ids;
}

std::optional<std::vector<int>> find_query_path(const Hypergraph& h) {
    if (h.start_node < 0 || h.goal_node < 0) {
        return std::nullopt;
    }
    std::vector<int> prev(h.nodes.size(), -1);
    std::deque<int> queue{h.start_node};
    prev[h.start_node] = h.start_node;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == h.goal_node) {
            std::vector<int> path;
            for (int v = u;; v = prev[v]) {
                path.push_back(v);
                if (v == h.start_node) break;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int ei : h.out[u]) {
            const int v = h.edges[ei].to;
            if (prev[v] < 0) {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    return std::nullopt;
}

namespace {

std::vector<int> reachable_forward(const Hypergraph& h, int root) {
    std::vector<char> seen(h.nodes.size(), 0);
    std::deque<int> queue{root};
    seen[root] = 1;
    std::vector<int> out{root};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int ei : h.out[u]) {
            const int v = h.edges[ei].to;
            if (!seen[v]) {
                seen[v] = 1;
                out.push_back(v);
                queue.push_back(v);
            }
        }
    }
    return out;
}

std::vector<int> reachable_backward(const Hypergraph& h, int root) {
    std::vector<char> seen(h.nodes.size(), 0);
    seen[root] = 1;
    std::vector<int> out{root};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Hyperedge& e : h.edges) {
            if (seen[e.to] && !seen[e.from]) {
                seen[e.from] = 1;
                out.push_back(e.from);
                changed = true;
            }
        }
    }
    return out;
}

// k poses drawn from a hypernode's RPG with component quotas matching its
// signature; guarantees the child RPG shares >= k poses with the parent.
Arrangement draw_seed(const Hypergraph& h, const Hypernode& node,
                      std::mt19937_64& rng) {
    const Rpg& rpg = h.rpgs[node.rpg_id];
    Arrangement seed;
    const auto comps = rpg.components();
    for (int comp = 0; comp < rpg.component_count; ++comp) {
        std::vector<PoseId> pool(comps[comp].begin(), comps[comp].end());
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int c = 0; c < node.signature[comp]; ++c) {
            seed.insert(pool[c]);
        }
    }
    return seed;
}

int node_with_signature(const Hypergraph& h, const std::vector<int>& ids,
                        const Signature& sig) {
    for (int id : ids) {
        if (h.nodes[id].signature == sig) {
            return id;
        }
    }
    throw RpgError("hypernode for an attained signature is missing");
}

}  // namespace

GrowResult grow_hypergraph(const SceneSpec& scene, const Roadmap& roadmap,
                           int b, std::chrono::duration<double> time_budget,
                           std::uint64_t seed) {
    const auto deadline = std::chrono::steady_clock::now() + time_budget;
    std::mt19937_64 rng(seed);
    GrowResult result;
    Hypergraph& h = result.hypergraph;
    const int k = scene.k;

    // An endpoint pose with no grasp placement can never be vacated or
    // filled; growth cannot change that.
    for (const Arrangement* a : {&scene.start, &scene.goal}) {
        for (PoseId p : *a) {
            if (!roadmap.pose_reachable(p)) {
                result.status = GrowStatus::Timeout;
                return result;
            }
        }
    }

    // Endpoint hypernodes, seeded with the query arrangements. The start
    // and goal RPGs are pumped with b blanks like every other RPG.
    while (h.start_node < 0 || h.goal_node < 0) {
        if (std::chrono::steady_clock::now() >= deadline) {
            result.status = GrowStatus::Timeout;
            return result;
        }
        const bool seeding_start = h.start_node < 0;
        const Arrangement& endpoint =
            seeding_start ? scene.start : scene.goal;
        try {
            const auto ids =
                create_hypernodes(h, roadmap, scene, k, b, endpoint, rng);
            const int node = node_with_signature(
                h, ids,
                signature_of(h.rpgs[h.nodes[ids.front()].rpg_id], endpoint));
            if (seeding_start) {
                h.start_node = node;
                if (scene.start == scene.goal) {
                    h.goal_node = node;
                }
            } else {
                h.goal_node = node;
            }
        } catch (const RpgError&) {
            // Pumped-arrangement sampling exhaustion; retry within budget.
        }
    }

    bool expand_start_side = true;
    while (!find_query_path(h)) {
        if (std::chrono::steady_clock::now() >= deadline) {
            result.status = GrowStatus::Timeout;
            return result;
        }
        const std::vector<int> side =
            expand_start_side ? reachable_forward(h, h.start_node)
                              : reachable_backward(h, h.goal_node);
        expand_start_side = !expand_start_side;
        std::uniform_int_distribution<std::size_t> pick(0, side.size() - 1);
        const Hypernode& chosen = h.nodes[side[pick(rng)]];
        try {
            create_hypernodes(h, roadmap, scene, k, b, draw_seed(h, chosen, rng),
                              rng);
        } catch (const RpgError&) {
            // Sampling exhaustion around a crowded seed; try another node.
        }
        ++result.iterations;
    }
    result.status = GrowStatus::Solved;
    return result;
}

void append_move_segments(ManipulationPlan& plan, const Roadmap& roadmap,
                          const SegmentedPath& path, bool reversed,
                          PoseId from, PoseId to) {
    auto configs = [&](const std::vector<int>& ids, bool flip) {
        std::vector<Point> pts;
        pts.reserve(ids.size());
        for (int id : ids) {
            pts.push_back(roadmap.nodes[id].config);
        }
        if (flip) {
            std::reverse(pts.begin(), pts.end());
        }
        return pts;
    };
    PlanSegment reach, carry, retract;
    reach.mode = Mode::Transit;
    reach.action = Action::Reach;
    carry.mode = Mode::Transfer;
    carry.action = Action::Carry;
    carry.moved = {{from, to}};
    retract.mode = Mode::Transit;
    retract.action = Action::Retract;
    if (!reversed) {
        reach.waypoints = configs(path.reach, false);
        carry.waypoints = configs(path.transfer, false);
        retract.waypoints = configs(path.retract, false);
    } else {
        reach.waypoints = configs(path.retract, true);
        carry.waypoints = configs(path.transfer, true);
        retract.waypoints = configs(path.reach, true);
    }
    plan.segments.push_back(std::move(reach));
    plan.segments.push_back(std::move(carry));
    plan.segments.push_back(std::move(retract));
}

namespace {

void append_pebble_moves(ManipulationPlan& plan, const Hypergraph& h,
                         const Roadmap& roadmap, const Rpg& rpg,
                         Arrangement& current, const Arrangement& target) {
    auto moves = solve_pebble_problem(rpg, current, target);
    if (!moves) {
        throw RpgError(
            "pebble problem infeasible along a certified hypergraph path");
    }
    for (const Move& m : *moves) {
        const RpgEdge* e = rpg.find_edge(m.from, m.to);
        append_move_segments(plan, roadmap, e->path,
                             /*reversed=*/m.from != e->poses.first, m.from,
                             m.to);
    }
    current = target;
}

}  // namespace

ManipulationPlan answer_query(const Hypergraph& h, const Roadmap& roadmap,
                              const SceneSpec& scene,
                              const std::vector<int>& path) {
    ManipulationPlan plan;
    Arrangement current = scene.start;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        // Locate the hyperedge used between consecutive path nodes.
        const Hyperedge* edge = nullptr;
        for (int ei : h.out[path[i]]) {
            if (h.edges[ei].to == path[i + 1]) {
                edge = &h.edges[ei];
                break;
            }
        }
        if (!edge) {
            throw RpgError("query path uses a nonexistent hyperedge");
        }
        const Rpg& rpg = h.rpgs[h.nodes[path[i]].rpg_id];
        if (edge->kind == Hyperedge::Kind::CrossRpg) {
            append_pebble_moves(plan, h, roadmap, rpg, current,
                                edge->cross.handoff);
        } else {
            append_pebble_moves(plan, h, roadmap, rpg, current,
                                edge->sibling.pre);
            const ConstrainedEdge& ce =
                h.constrained[h.nodes[path[i]].rpg_id]
                             [edge->sibling.constrained_index];
            append_move_segments(plan, roadmap, ce.path,
                                 edge->sibling.path_reversed,
                                 edge->sibling.source, edge->sibling.target);
            current = edge->sibling.post;
        }
    }
    const Rpg& last_rpg = h.rpgs[h.nodes[path.back()].rpg_id];
    append_pebble_moves(plan, h, roadmap, last_rpg, current, scene.goal);
    return plan;
}

}  // namespace rearr
