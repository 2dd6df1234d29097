"""Reachability in a changing DAG by counting paths modulo a prime.

The inverse of I - A holds, for a DAG, the number of paths between every
pair.  Each edge change is a single-entry change to that matrix, so the
engine keeps the inverse from the last phase and patches queries with a
small capacitance matrix until the phase fills up.
"""
from dynapsp import DagReach, DynamicGraph, NotADagError, dag_path_counts

diamond = DynamicGraph(4, [(u, v, 1) for u, v in [(0, 1), (0, 2), (1, 3), (2, 3)]])
print("path counts for the diamond:")
print(dag_path_counts(diamond))

r = DagReach(diamond.copy(), t=3)
print("\n0 reaches 3:", r.reach_query(0, 3), " paths:", r.entry(0, 3))

r.delete(1, 3)
print("after deleting 1->3, paths 0->3:", r.entry(0, 3), " pending updates:", r.phase.k)
r.delete(2, 3)
print("after deleting 2->3, 0 reaches 3:", r.reach_query(0, 3))

try:
    r.insert(3, 0)
    r.insert(0, 3)
except NotADagError as exc:
    print("rejected:", exc)

r.delete(3, 0)
r.insert(1, 3)
print("re-inserted 1->3; phases started so far:", r.phases, " pending updates:", r.phase.k)
