"""Crafted formula/graph families for scaling tests and benchmarks."""

from __future__ import annotations

from .cnf import CnfFormula
from .ddnnf import AND, OR, TRUE, DdnnfGraph, _infer_decision


def sharing_chain(m: int) -> tuple:
    """``m`` nested or-nodes, each reached from both branches of its parent.

    The formula is ``x_j <-> a_j`` for ``j = 1..m`` (variables ``2j-1`` and
    ``2j``).  Node ``j`` branches on ``x_j`` and both arcs lead to node
    ``j+1``, so the graph has size linear in ``m`` while its tree expansion
    doubles with every level.
    """
    if m < 1:
        raise ValueError("chain needs at least one level")
    clauses = []
    for j in range(1, m + 1):
        x, a = 2 * j - 1, 2 * j
        clauses += [(-x, a), (x, -a)]
    cnf = CnfFormula.from_clauses(2 * m, clauses)
    g = DdnnfGraph()
    for j in range(1, m + 1):
        g.add_node(j, OR)
    g.add_node(m + 1, TRUE)
    for j in range(1, m + 1):
        x, a = 2 * j - 1, 2 * j
        g.add_arc(j, j + 1, (x, a))
        g.add_arc(j, j + 1, (-x, -a))
    for nid in g.order:
        _infer_decision(g, nid)
    return cnf, g


def equivalence_blocks(k: int) -> tuple:
    """``k`` independent blocks ``x_i <-> y_i`` under one and-node.

    No sharing, so the tree ratio stays near 1 while the tree size grows as
    ``10k + 1``.
    """
    clauses = []
    for i in range(1, k + 1):
        x, y = 2 * i - 1, 2 * i
        clauses += [(-x, y), (x, -y)]
    cnf = CnfFormula.from_clauses(2 * k, clauses)
    g = DdnnfGraph()
    g.add_node(1, AND)
    g.add_node(2, TRUE)
    for i in range(1, k + 1):
        x, y = 2 * i - 1, 2 * i
        nid = i + 2
        g.add_node(nid, OR)
        g.add_arc(1, nid)
        g.add_arc(nid, 2, (x, y))
        g.add_arc(nid, 2, (-x, -y))
    for nid in g.order:
        _infer_decision(g, nid)
    return cnf, g


def synthetic_proof(k: int) -> tuple:
    """DIMACS and CPOG text for ``k`` equivalence blocks, built from a template.

    Each block contributes 2 input, 9 defining, 1 root-defining and 2
    asserted clauses, so the proof holds about ``14k`` clauses.  The text
    is produced directly (no generator run) for throughput measurements.
    """
    n, m = 2 * k, 2 * k
    cnf = [f"p cnf {n} {m}"]
    for i in range(1, k + 1):
        x, y = 2 * i - 1, 2 * i
        cnf += [f"{-x} {y} 0", f"{x} {-y} 0"]
    decl, fwd, rev, dele = [], [], [], []
    sums = []
    cid, var = m + 1, n + 1
    for i in range(1, k + 1):
        x, y = 2 * i - 1, 2 * i
        p, q, s = var, var + 1, var + 2
        d = cid
        decl += [f"{d} p {p} {x} {y} 0", f"{d + 3} p {q} {-x} {-y} 0",
                 f"{d + 6} s {s} {p} {q} {d + 1} {d + 4} 0"]
        sums.append((s, d))
        cid += 9
        var += 3
    root, r0 = var, cid
    decl.append(f"{r0} p {root} " + " ".join(str(s) for s, _ in sums) + " 0")
    cid += k + 1
    units = []
    for i, (s, d) in enumerate(sums, 1):
        x, y = 2 * i - 1, 2 * i
        a = cid
        fwd.append(f"{a} a {s} {-x} 0 {d + 7} {2 * i - 1} {d} 0")
        fwd.append(f"{a + 1} a {s} 0 {a} {2 * i} {d + 8} {d + 3} 0")
        rev.append((a, f"{d + 7} {2 * i - 1} {d}"))
        rev.append((a + 1, f"{a} {2 * i} {d + 8} {d + 3}"))
        units.append(a + 1)
        cid += 2
    top = cid
    fwd.append(f"{top} a {root} 0 " + " ".join(map(str, units)) + f" {r0} 0")
    for a, hint in reversed(rev):
        dele.append(f"d {a} {hint} 0")
    for i, (s, d) in enumerate(sums, 1):
        dele.append(f"d {2 * i - 1} {top} {r0 + i} {d + 2} {d + 4} {d + 6} 0")
        dele.append(f"d {2 * i} {top} {r0 + i} {d + 1} {d + 5} {d + 6} 0")
    cpog = decl + [f"r {root}"] + fwd + dele
    return "\n".join(cnf) + "\n", "\n".join(cpog) + "\n"
