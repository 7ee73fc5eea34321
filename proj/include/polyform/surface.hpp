#pragma once

// Surface combinatorics: closed triangulated surfaces and ideally
// triangulated bordered surfaces (hexagon decompositions), metrics, circle
// packings, edge cycles and the document format.
//
// Face convention: corner i of a cell sits at vertices[i] and faces
// edges[i]; it is adjacent to the other two edge slots.  Non-simplicial
// complexes are first-class: a face may repeat vertices or edges.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "polyform/common.hpp"
#include "polyform/jsonio.hpp"
#include "polyform/trig.hpp"

namespace polyform {

struct Face {
    std::array<int, 3> edges;
    std::array<int, 3> vertices;
};

struct Occurrence {
    int cell = -1;
    int slot = -1;
    bool operator==(const Occurrence&) const = default;
};

namespace detail {

// Edge -> its two (cell, slot) occurrences; throws when any edge does not
// appear exactly twice.
inline std::vector<std::array<Occurrence, 2>> edge_occurrences(int num_edges,
                                                               const std::vector<std::array<int, 3>>& cells) {
    std::vector<std::vector<Occurrence>> occ(num_edges);
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
        for (int s = 0; s < 3; ++s) {
            const int e = cells[c][s];
            if (e < 0 || e >= num_edges)
                throw InvalidCombinatorics("edge index " + std::to_string(e) + " out of range in cell " +
                                           std::to_string(c));
            occ[e].push_back({c, s});
        }
    std::vector<std::array<Occurrence, 2>> out(num_edges);
    for (int e = 0; e < num_edges; ++e) {
        if (occ[e].size() != 2)
            throw InvalidCombinatorics("edge multiplicity: edge " + std::to_string(e) + " appears " +
                                       std::to_string(occ[e].size()) + " times, expected 2");
        out[e] = {occ[e][0], occ[e][1]};
    }
    return out;
}

inline void require_connected(int num_cells, const std::vector<std::array<Occurrence, 2>>& occ) {
    if (num_cells == 0) throw InvalidCombinatorics("surface has no 2-cells");
    std::vector<int> seen(num_cells, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        for (const auto& pair : occ)
            for (int w = 0; w < 2; ++w)
                if (pair[w].cell == c && !seen[pair[1 - w].cell]) {
                    seen[pair[1 - w].cell] = 1;
                    stack.push_back(pair[1 - w].cell);
                }
    }
    for (int c = 0; c < num_cells; ++c)
        if (!seen[c]) throw InvalidCombinatorics("surface is disconnected (cell " + std::to_string(c) + ")");
}

}  // namespace detail

struct ClosedSurface {
    int num_vertices = 0;
    int num_edges = 0;
    std::vector<Face> faces;

    std::vector<std::array<int, 3>> edge_triples() const {
        std::vector<std::array<int, 3>> out;
        out.reserve(faces.size());
        for (const Face& f : faces) out.push_back(f.edges);
        return out;
    }

    // Unordered endpoint pair of each edge, derived from the corner
    // convention: edge at slot i of a face joins vertices[j], vertices[k].
    std::vector<std::array<int, 2>> edge_endpoints() const {
        const auto occ = detail::edge_occurrences(num_edges, edge_triples());
        std::vector<std::array<int, 2>> out(num_edges);
        for (int e = 0; e < num_edges; ++e) {
            const Occurrence& o = occ[e][0];
            const int j = (o.slot + 1) % 3, k = (o.slot + 2) % 3;
            int a = faces[o.cell].vertices[j], b = faces[o.cell].vertices[k];
            if (a > b) std::swap(a, b);
            out[e] = {a, b};
        }
        return out;
    }

    void validate() const {
        if (num_vertices <= 0) throw InvalidCombinatorics("num_vertices must be positive");
        for (const Face& f : faces)
            for (int v : f.vertices)
                if (v < 0 || v >= num_vertices)
                    throw InvalidCombinatorics("vertex index " + std::to_string(v) + " out of range");
        if (3 * faces.size() != 2 * static_cast<std::size_t>(num_edges))
            throw InvalidCombinatorics("3|F| = 2|E| violated: F = " + std::to_string(faces.size()) +
                                       ", E = " + std::to_string(num_edges));
        const auto occ = detail::edge_occurrences(num_edges, edge_triples());
        // Endpoint consistency across the two occurrences of each edge.
        for (int e = 0; e < num_edges; ++e) {
            std::array<std::array<int, 2>, 2> ends;
            for (int w = 0; w < 2; ++w) {
                const Occurrence& o = occ[e][w];
                const int j = (o.slot + 1) % 3, k = (o.slot + 2) % 3;
                int a = faces[o.cell].vertices[j], b = faces[o.cell].vertices[k];
                if (a > b) std::swap(a, b);
                ends[w] = {a, b};
            }
            if (ends[0] != ends[1])
                throw InvalidCombinatorics("endpoint mismatch on edge " + std::to_string(e));
        }
        detail::require_connected(static_cast<int>(faces.size()), occ);
    }

    int euler_characteristic() const {
        return num_vertices - num_edges + static_cast<int>(faces.size());
    }

    // Corner count at each vertex, with multiplicity.
    std::vector<int> vertex_degrees() const {
        std::vector<int> deg(num_vertices, 0);
        for (const Face& f : faces)
            for (int v : f.vertices) ++deg[v];
        return deg;
    }
};

struct IdealSurface {
    int num_edges = 0;
    std::vector<std::array<int, 3>> hexagons;

    const std::vector<std::array<int, 3>>& edge_triples() const { return hexagons; }

    void validate() const {
        const auto occ = detail::edge_occurrences(num_edges, hexagons);
        detail::require_connected(static_cast<int>(hexagons.size()), occ);
    }

    int euler_characteristic() const {
        // chi of the bordered surface: hexagons contribute F - E of the
        // underlying closed model minus the removed vertex disks.
        return -num_edges + static_cast<int>(hexagons.size());
    }
};

struct Metric {
    GeometryKind geometry = GeometryKind::Euclidean;
    std::vector<double> lengths;
};

struct CirclePacking {
    GeometryKind geometry = GeometryKind::Euclidean;
    std::vector<double> radii;
};

// l(vv') = r(v) + r(v').
inline Metric induced_metric(const ClosedSurface& s, const CirclePacking& cp) {
    if (static_cast<int>(cp.radii.size()) != s.num_vertices)
        throw IndexMismatch("packing radii count != num_vertices");
    Metric m;
    m.geometry = cp.geometry;
    m.lengths.assign(s.num_edges, 0.0);
    const auto ends = s.edge_endpoints();
    for (int e = 0; e < s.num_edges; ++e) m.lengths[e] = cp.radii[ends[e][0]] + cp.radii[ends[e][1]];
    return m;
}

struct MetricVerdict {
    bool valid = true;
    struct FaceViolation {
        int cell;
        std::vector<std::string> constraints;
    };
    std::vector<FaceViolation> violations;
    explicit operator bool() const { return valid; }
};

template <class S>
MetricVerdict validate_metric(const S& surf, const Metric& m) {
    if (static_cast<int>(m.lengths.size()) != surf.num_edges)
        throw IndexMismatch("metric length count != num_edges");
    MetricVerdict verdict;
    const auto cells = surf.edge_triples();
    const GeometryKind g = std::is_same_v<S, IdealSurface> ? GeometryKind::HexagonRightAngled : m.geometry;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
        const Triple l{m.lengths[cells[c][0]], m.lengths[cells[c][1]], m.lengths[cells[c][2]]};
        MembershipVerdict mv = moduli_membership(g, l, Parameterization::Lengths);
        if (!mv.inside) {
            verdict.valid = false;
            verdict.violations.push_back({c, mv.violated});
        }
    }
    return verdict;
}

inline MetricVerdict validate_packing(const ClosedSurface& surf, const CirclePacking& cp) {
    MetricVerdict verdict;
    for (int v = 0; v < surf.num_vertices; ++v)
        if (!(cp.radii[v] > 0.0)) {
            verdict.valid = false;
            verdict.violations.push_back({-1, {"radius " + std::to_string(v) + " > 0"}});
        }
    if (!verdict.valid) return verdict;
    MetricVerdict mv = validate_metric(surf, induced_metric(surf, cp));
    if (!mv.valid) return mv;
    return verdict;
}

// ---------------------------------------------------------------------------
// Edge cycles: closed loops in the 1-skeleton of the dual decomposition,
// recorded as (edge, cell) steps where consecutive edges share a corner of
// the listed cell.

struct EdgeCycle {
    std::vector<int> edges;    // edge crossed entering step s
    std::vector<int> cells;    // 2-cell of step s
    std::vector<int> corners;  // corner slot inside cells[s] joining edges[s] and edges[s+1]
    bool fundamental = true;   // every edge appears at most twice

    std::size_t size() const { return edges.size(); }

    double sum(const std::vector<double>& z) const {
        double s = 0.0;
        for (int e : edges) s += z[e];
        return s;
    }

    void refresh_fundamental_flag() {
        std::vector<int> counts;
        for (int e : edges) {
            if (e >= static_cast<int>(counts.size())) counts.resize(e + 1, 0);
            ++counts[e];
        }
        fundamental = std::all_of(counts.begin(), counts.end(), [](int c) { return c <= 2; });
    }
};

struct CycleEnumeration {
    std::vector<EdgeCycle> cycles;
    bool truncated = false;
};

namespace detail {

// Canonical encoding of a cyclic (edge, cell, corner) sequence up to
// rotation and reversal.
inline std::vector<int> cycle_canonical_key(const EdgeCycle& c) {
    const int r = static_cast<int>(c.size());
    auto encode = [&](bool reversed) {
        std::vector<int> seq;
        seq.reserve(3 * r);
        for (int s = 0; s < r; ++s) {
            if (!reversed) {
                seq.push_back(c.edges[s]);
                seq.push_back(c.cells[s]);
                seq.push_back(c.corners[s]);
            } else {
                // Reverse traversal: step s of the reversed cycle crosses
                // edge_{r-s} and turns at corner_{r-1-s} of cell_{r-1-s}.
                const int t = r - 1 - s;
                seq.push_back(c.edges[(t + 1) % r]);
                seq.push_back(c.cells[t]);
                seq.push_back(c.corners[t]);
            }
        }
        return seq;
    };
    std::vector<int> best;
    for (int rev = 0; rev < 2; ++rev) {
        std::vector<int> seq = encode(rev != 0);
        for (int shift = 0; shift < r; ++shift) {
            std::vector<int> rot;
            rot.reserve(seq.size());
            for (int s = 0; s < r; ++s)
                for (int k = 0; k < 3; ++k) rot.push_back(seq[3 * ((s + shift) % r) + k]);
            if (best.empty() || rot < best) best = rot;
        }
    }
    return best;
}

}  // namespace detail

// Exhaustive enumeration of the cell-simple fundamental edge cycles: each
// 2-cell is visited at most once, so every edge appears at most twice.
// Deduplicated up to rotation and reversal; enumeration stops (with the
// truncated flag) once max_count distinct cycles have been found.
inline CycleEnumeration enumerate_fundamental_edge_cycles(const std::vector<std::array<int, 3>>& cells,
                                                          int num_edges, std::size_t max_count) {
    CycleEnumeration result;
    if (max_count == 0) {
        result.truncated = true;
        return result;
    }
    const auto occ = detail::edge_occurrences(num_edges, cells);
    std::set<std::vector<int>> seen;
    std::vector<char> cell_used(cells.size(), 0);

    struct Step {
        int edge, cell, slot_in, corner;
    };
    std::vector<Step> path;

    // Arrival states are (edge, which occurrence); the walk enters
    // occ[e][w].cell through occ[e][w].slot.
    std::function<void(int, int, int, int)> dfs = [&](int start_e, int start_w, int cur_e, int cur_w) {
        if (result.truncated) return;
        const Occurrence in = occ[cur_e][cur_w];
        if (cell_used[in.cell]) return;
        cell_used[in.cell] = 1;
        for (int corner = 0; corner < 3; ++corner) {
            if (corner == in.slot) continue;
            const int out_slot = 3 - in.slot - corner;
            const int out_e = cells[in.cell][out_slot];
            // Cross to the other occurrence of out_e.
            const int out_w = (occ[out_e][0] == Occurrence{in.cell, out_slot}) ? 1 : 0;
            path.push_back({cur_e, in.cell, in.slot, corner});
            if (out_e == start_e && out_w == start_w) {
                EdgeCycle cyc;
                for (const Step& st : path) {
                    cyc.edges.push_back(st.edge);
                    cyc.cells.push_back(st.cell);
                    cyc.corners.push_back(st.corner);
                }
                cyc.refresh_fundamental_flag();
                auto key = detail::cycle_canonical_key(cyc);
                if (seen.insert(std::move(key)).second) {
                    if (result.cycles.size() < max_count)
                        result.cycles.push_back(std::move(cyc));
                    else
                        result.truncated = true;
                }
            } else {
                dfs(start_e, start_w, out_e, out_w);
            }
            path.pop_back();
            if (result.truncated) break;
        }
        cell_used[in.cell] = 0;
    };

    for (int e = 0; e < num_edges && !result.truncated; ++e)
        for (int w = 0; w < 2 && !result.truncated; ++w) dfs(e, w, e, w);
    return result;
}

template <class S>
CycleEnumeration enumerate_fundamental_edge_cycles(const S& surf, std::size_t max_count) {
    const auto triples = surf.edge_triples();
    const std::vector<std::array<int, 3>> cells(triples.begin(), triples.end());
    return enumerate_fundamental_edge_cycles(cells, surf.num_edges, max_count);
}

// Exact search for an edge cycle whose z-sum is <= tol, via Bellman-Ford
// negative-cycle detection on the arrival-state digraph.  Covers all edge
// cycles, not only cell-simple ones, so verdicts do not depend on any
// enumeration cap.  Resolution near the boundary is ~ 2|E| * tol.
inline std::optional<EdgeCycle> find_nonpositive_cycle(const std::vector<std::array<int, 3>>& cells, int num_edges,
                                                       const std::vector<double>& z, double tol = 1e-12) {
    const auto occ = detail::edge_occurrences(num_edges, cells);
    const int n = 2 * num_edges;  // states: (edge, which occurrence)
    struct Arc {
        int from, to, edge, cell, corner;
        double w;
    };
    std::vector<Arc> arcs;
    for (int e = 0; e < num_edges; ++e)
        for (int w = 0; w < 2; ++w) {
            const Occurrence in = occ[e][w];
            for (int corner = 0; corner < 3; ++corner) {
                if (corner == in.slot) continue;
                const int out_slot = 3 - in.slot - corner;
                const int out_e = cells[in.cell][out_slot];
                const int out_w = (occ[out_e][0] == Occurrence{in.cell, out_slot}) ? 1 : 0;
                arcs.push_back({2 * e + w, 2 * out_e + out_w, out_e, in.cell, corner, z[out_e] - tol});
            }
        }
    std::vector<double> dist(n, 0.0);
    std::vector<int> pred(n, -1);  // arc index that last improved the node
    int flagged = -1;
    for (int round = 0; round < n && flagged < 0; ++round) {
        bool improved = false;
        for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
            if (dist[arcs[a].from] + arcs[a].w < dist[arcs[a].to] - 1e-18) {
                dist[arcs[a].to] = dist[arcs[a].from] + arcs[a].w;
                pred[arcs[a].to] = a;
                improved = true;
                if (round == n - 1) flagged = arcs[a].to;
            }
        }
        if (!improved) return std::nullopt;
        if (round == n - 1 && flagged < 0) return std::nullopt;
    }
    if (flagged < 0) {
        // Ran all rounds with improvements but nothing flagged; one extra
        // sweep to find a node still improving.
        for (int a = 0; a < static_cast<int>(arcs.size()) && flagged < 0; ++a)
            if (dist[arcs[a].from] + arcs[a].w < dist[arcs[a].to] - 1e-18) flagged = arcs[a].to;
        if (flagged < 0) return std::nullopt;
    }
    // Walk predecessors n steps to land on the cycle, then extract it.
    int node = flagged;
    for (int i = 0; i < n; ++i) node = arcs[pred[node]].from;
    EdgeCycle cyc;
    int cur = node;
    std::vector<int> arc_seq;
    do {
        const int a = pred[cur];
        arc_seq.push_back(a);
        cur = arcs[a].from;
    } while (cur != node && static_cast<int>(arc_seq.size()) <= n);
    std::reverse(arc_seq.begin(), arc_seq.end());
    for (int a : arc_seq) {
        cyc.edges.push_back(arcs[a].edge);
        cyc.cells.push_back(arcs[a].cell);
        cyc.corners.push_back(arcs[a].corner);
    }
    cyc.refresh_fundamental_flag();
    return cyc;
}

// ---------------------------------------------------------------------------
// Document format (UTF-8 JSON).

struct SurfaceDocument {
    std::variant<ClosedSurface, IdealSurface> surface;
    GeometryKind geometry = GeometryKind::Euclidean;
    std::optional<std::vector<double>> lengths;
    std::optional<std::vector<double>> radii;

    bool is_closed() const { return std::holds_alternative<ClosedSurface>(surface); }
    const ClosedSurface& closed() const { return std::get<ClosedSurface>(surface); }
    const IdealSurface& ideal() const { return std::get<IdealSurface>(surface); }

    std::optional<Metric> metric() const {
        if (!lengths) return std::nullopt;
        Metric m;
        m.geometry = geometry;
        m.lengths = *lengths;
        return m;
    }
    std::optional<CirclePacking> packing() const {
        if (!radii) return std::nullopt;
        CirclePacking cp;
        cp.geometry = geometry;
        cp.radii = *radii;
        return cp;
    }
};

inline GeometryKind geometry_from_name(const std::string& s) {
    if (s == "euclidean") return GeometryKind::Euclidean;
    if (s == "spherical") return GeometryKind::Spherical;
    if (s == "hyperbolic") return GeometryKind::Hyperbolic;
    throw ParseError("unknown geometry '" + s + "'");
}

inline SurfaceDocument parse_surface(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("surface document: ") + e.what());
    }
    SurfaceDocument doc;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        doc.geometry = geometry_from_name(j.at("geometry").get<std::string>());
        const int num_edges = j.at("num_edges").get<int>();
        if (kind == "closed") {
            ClosedSurface s;
            s.num_edges = num_edges;
            s.num_vertices = j.at("num_vertices").get<int>();
            for (const auto& jf : j.at("faces")) {
                Face f{};
                const auto& es = jf.at("edges");
                const auto& vs = jf.at("vertices");
                if (es.size() != 3 || vs.size() != 3) throw ParseError("face needs 3 edges and 3 vertices");
                for (int i = 0; i < 3; ++i) {
                    f.edges[i] = es[i].get<int>();
                    f.vertices[i] = vs[i].get<int>();
                }
                s.faces.push_back(f);
            }
            doc.surface = std::move(s);
        } else if (kind == "ideal") {
            IdealSurface s;
            s.num_edges = num_edges;
            for (const auto& jf : j.at("faces")) {
                const auto& es = jf.at("edges");
                if (es.size() != 3) throw ParseError("hexagon needs 3 edges");
                s.hexagons.push_back({es[0].get<int>(), es[1].get<int>(), es[2].get<int>()});
            }
            doc.surface = std::move(s);
        } else {
            throw ParseError("kind must be 'closed' or 'ideal', got '" + kind + "'");
        }
        if (j.contains("lengths")) doc.lengths = j["lengths"].get<std::vector<double>>();
        if (j.contains("radii")) doc.radii = j["radii"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("surface document: ") + e.what());
    }
    // Combinatorial validation happens on parse.
    if (doc.is_closed())
        doc.closed().validate();
    else
        doc.ideal().validate();
    if (doc.lengths && static_cast<int>(doc.lengths->size()) !=
                           (doc.is_closed() ? doc.closed().num_edges : doc.ideal().num_edges))
        throw ParseError("lengths array does not match num_edges");
    if (doc.radii) {
        if (!doc.is_closed()) throw ParseError("radii only apply to closed surfaces");
        if (static_cast<int>(doc.radii->size()) != doc.closed().num_vertices)
            throw ParseError("radii array does not match num_vertices");
        if (doc.lengths) {
            const Metric induced = induced_metric(doc.closed(), *doc.packing());
            for (int e = 0; e < doc.closed().num_edges; ++e)
                if (std::abs(induced.lengths[e] - (*doc.lengths)[e]) > 1e-12 * (1.0 + induced.lengths[e]))
                    throw InvalidMetric("lengths inconsistent with radii at edge " + std::to_string(e));
        }
    }
    return doc;
}

inline std::string serialize_surface(const SurfaceDocument& doc) {
    JsonValue root = JsonValue::object();
    root.set("kind", doc.is_closed() ? "closed" : "ideal");
    root.set("geometry", geometry_name(doc.geometry));
    if (doc.is_closed()) root.set("num_vertices", doc.closed().num_vertices);
    root.set("num_edges", doc.is_closed() ? doc.closed().num_edges : doc.ideal().num_edges);
    JsonValue faces = JsonValue::array();
    if (doc.is_closed()) {
        for (const Face& f : doc.closed().faces) {
            JsonValue jf = JsonValue::object();
            jf.set("edges", json_int_array(f.edges));
            jf.set("vertices", json_int_array(f.vertices));
            faces.push(std::move(jf));
        }
    } else {
        for (const auto& h : doc.ideal().hexagons) {
            JsonValue jf = JsonValue::object();
            jf.set("edges", json_int_array(h));
            faces.push(std::move(jf));
        }
    }
    root.set("faces", std::move(faces));
    if (doc.lengths) root.set("lengths", json_number_array(*doc.lengths));
    if (doc.radii) root.set("radii", json_number_array(*doc.radii));
    return root.dump() + "\n";
}

}  // namespace polyform
