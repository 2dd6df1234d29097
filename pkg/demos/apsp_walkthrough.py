"""A small tour of the dynamic shortest-path engine.

We start from a four-vertex graph, knock out a vertex, open and close a
negative cycle, and watch what the engine reports along the way.
"""
from dynapsp import DynamicAPSP, DynamicGraph, Params, QueryForbiddenError

# 0 -> 1 -> 2 -> 3 costs 3 over three hops; the direct edge costs 5.
g = DynamicGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 5)])
eng = DynamicAPSP(g, Params(h=3, delta=4))
print("phase parameters:", eng.phases[-1])
print("dist(0,3) =", eng.distance(0, 3), "via", eng.shortest_path(0, 3))

# A vertex update replaces every edge touching the vertex.  Emptying both
# lists deletes vertex 1 from the graph in all but name.
stats = eng.vertex_update(1, [], [])
print("\nafter clearing vertex 1:")
print("dist(0,3) =", eng.distance(0, 3), "via", eng.shortest_path(0, 3))
print("work counters:", {k: stats[k] for k in ("dijkstra_pops", "edges_relaxed", "qs_degree_mass", "alpha_D")})

# Negative weights are fine as long as no cycle is negative.
eng.vertex_update(1, [(2, -1)], [(0, 1)])
print("\nwith a negative edge 1->2:")
print("dist(0,3) =", eng.distance(0, 3), "via", eng.shortest_path(0, 3))

# 3 -> 0 with weight -10 closes 0 -> 1 -> 2 -> 3 -> 0 at total -9.
eng.vertex_update(3, [(0, -10)], [(2, 1)])
print("\nnegative cycle present:", eng.negative_cycle)
try:
    eng.distance(0, 3)
except QueryForbiddenError as exc:
    print("query refused:", exc)

# Giving vertex 3 a harmless out-edge ends the cycle and starts a new phase.
eng.vertex_update(3, [(0, 2)], [(2, 1)])
print("\ncycle gone, phases so far:", len(eng.phases))
for s in range(4):
    print(" ", [(w.length, w.hops) for w in (eng.distance(s, t) for t in range(4))])
