"""Decision-DNNF graphs in the knowledge compiler's ``.nnf`` text convention.

Node lines declare ``o <id> 0`` (or-node), ``a <id> 0`` (and-node),
``t <id> 0`` (true) and ``f <id> 0`` (false).  Arc lines ``<src> <dst> <lits> 0``
connect nodes and carry literals that hold along the arc.  The first node
declared is the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cpog import DeclareProduct, DeclareSum
from .pog import Pog

OR, AND, TRUE, FALSE = "o", "a", "t", "f"


class DdnnfError(ValueError):
    pass


@dataclass
class DdnnfGraph:
    kinds: dict = field(default_factory=dict)  # id -> kind
    order: list = field(default_factory=list)  # declaration order
    arcs: dict = field(default_factory=dict)  # id -> [(dst, lits)]
    decisions: dict = field(default_factory=dict)  # or-node id -> literal on its first arc

    @property
    def root(self):
        if not self.order:
            raise DdnnfError("empty graph")
        return self.order[0]

    def add_node(self, nid: int, kind: str) -> None:
        if nid in self.kinds:
            raise DdnnfError(f"node {nid} declared twice")
        self.kinds[nid] = kind
        self.order.append(nid)
        self.arcs[nid] = []

    def add_arc(self, src: int, dst: int, lits=()) -> None:
        self.arcs[src].append((dst, tuple(lits)))

    def indegree(self) -> dict:
        deg = {nid: 0 for nid in self.order}
        for nid in self.order:
            for dst, _ in self.arcs[nid]:
                deg[dst] += 1
        return deg

    def postorder(self) -> list:
        """Nodes reachable from the root, children first; raises on a cycle."""
        out, state = [], {}
        stack = [(self.root, 0)]
        state[self.root] = 1
        while stack:
            nid, k = stack.pop()
            arcs = self.arcs[nid]
            if k < len(arcs):
                stack.append((nid, k + 1))
                dst = arcs[k][0]
                s = state.get(dst, 0)
                if s == 1:
                    raise DdnnfError(f"cycle through node {dst}")
                if s == 0:
                    state[dst] = 1
                    stack.append((dst, 0))
            else:
                state[nid] = 2
                out.append(nid)
        return out

    def to_text(self) -> str:
        lines = [f"{self.kinds[nid]} {nid} 0" for nid in self.order]
        for nid in self.order:
            for dst, lits in self.arcs[nid]:
                lines.append(" ".join(map(str, (nid, dst, *lits, 0))))
        return "\n".join(lines) + "\n"


def _infer_decision(g: DdnnfGraph, nid: int) -> None:
    arcs = g.arcs[nid]
    if g.kinds[nid] != OR:
        if g.kinds[nid] in (TRUE, FALSE) and arcs:
            raise DdnnfError(f"terminal node {nid} has outgoing arcs")
        return
    if len(arcs) > 2:
        raise DdnnfError(f"or-node {nid} has {len(arcs)} children")
    if len(arcs) == 2:
        second = set(arcs[1][1])
        for lit in arcs[0][1]:
            if -lit in second:
                g.decisions[nid] = lit
                return
        raise DdnnfError(f"or-node {nid} has no opposing decision literals")


def parse_d4(text) -> DdnnfGraph:
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii", errors="replace")
    g = DdnnfGraph()
    pending = []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] in ("c", "nnf"):
            continue
        if toks[0] in (OR, AND, TRUE, FALSE):
            if len(toks) != 3 or toks[2] != "0":
                raise DdnnfError(f"line {lineno}: expected '{toks[0]} <id> 0'")
            try:
                nid = int(toks[1])
            except ValueError:
                raise DdnnfError(f"line {lineno}: bad node id {toks[1]!r}") from None
            try:
                g.add_node(nid, toks[0])
            except DdnnfError as exc:
                raise DdnnfError(f"line {lineno}: {exc}") from None
            continue
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise DdnnfError(f"line {lineno}: unexpected token in arc line") from None
        if len(nums) < 3 or nums[-1] != 0 or 0 in nums[:-1]:
            raise DdnnfError(f"line {lineno}: arc must be '<src> <dst> <lits> 0'")
        pending.append((lineno, nums[0], nums[1], nums[2:-1]))
    for lineno, src, dst, lits in pending:
        if src not in g.kinds or dst not in g.kinds:
            raise DdnnfError(f"line {lineno}: arc {src} -> {dst} references an undeclared node")
        g.add_arc(src, dst, lits)
    if not g.order:
        raise DdnnfError("no nodes declared")
    for nid in g.order:
        _infer_decision(g, nid)
    g.postorder()
    return g


# translation to a graph of product and sum nodes

_T, _F = "TRUE", "FALSE"


@dataclass
class Translation:
    pog: Pog
    declarations: list  # DeclareProduct / DeclareSum steps
    decl_id: dict  # extension var -> first clause ID
    next_id: int
    next_var: int


def prove_mutex(pog: Pog, decl_id: dict, left: int, right: int, decision: int) -> list:
    """Defining clauses showing ``left`` and ``right`` cannot both hold."""
    hint = []
    for lit, want in ((left, decision), (right, -decision)):
        if lit == want:
            continue
        if lit < 0 or pog.is_input(lit):
            raise DdnnfError(f"sum argument {lit} does not expose decision literal {want}")
        nd = pog.node(lit)
        try:
            j = nd.args.index(want)
        except ValueError:
            raise DdnnfError(f"node {lit} does not contain decision literal {want}") from None
        hint.append(decl_id[lit] + 1 + j)
    if not hint:
        # both arguments are bare literals; they are complementary by construction
        raise DdnnfError("sum over two complementary literals should have been simplified")
    return hint


def ddnnf_to_pog(g: DdnnfGraph, n: int, first_id: int) -> Translation:
    """Translate *g* into declarations starting at clause ID *first_id*.

    Constants are propagated away, single-parent and-nodes are merged into
    their parent product, and ``x OR NOT x`` becomes true.  A constant root is
    represented by an empty product (negated for false).
    """
    pog = Pog(n)
    decls, decl_id = [], {}
    state = {"id": first_id, "var": n + 1}
    indeg = g.indegree()
    value = {}  # node -> _T | _F | int literal | ("P", args)
    material = {}

    def declare(kind, args):
        v = state["var"]
        state["var"] += 1
        cid = state["id"]
        if kind == "p":
            pog.add_product(v, args)
            decls.append(DeclareProduct(cid, v, tuple(args)))
            state["id"] += len(args) + 1
        else:
            left, right, decision = args
            pog.add_sum(v, left, right)
            decls.append(DeclareSum(cid, v, left, right,
                                    tuple(prove_mutex(pog, decl_id, left, right, decision))))
            state["id"] += 3
        decl_id[v] = cid
        return v

    def product_ref(args):
        seen, out = set(), []
        for a in args:
            if -a in seen:
                return _F
            if a not in seen:
                seen.add(a)
                out.append(a)
        lits = [a for a in out if pog.is_input(abs(a))]
        nodes = [a for a in out if not pog.is_input(abs(a))]
        return ("P", lits + nodes)

    def materialize(ref):
        if isinstance(ref, tuple):
            args = ref[1]
            if not args:
                return _T
            if len(args) == 1:
                return args[0]
            key = tuple(args)
            if key not in material:
                material[key] = declare("p", args)
            return material[key]
        return ref

    def materialize_node(nid):
        ref = value[nid]
        if isinstance(ref, tuple):
            ref = materialize(ref)
            value[nid] = ref
        return ref

    def gather(lits, children, flatten):
        args = list(lits)
        for dst in children:
            ref = value[dst]
            if ref == _F:
                return _F
            if ref == _T:
                continue
            if isinstance(ref, tuple) and flatten and indeg[dst] == 1:
                args.extend(ref[1])
            else:
                ref = materialize_node(dst)
                if ref == _F:
                    return _F
                if ref != _T:
                    args.append(ref)
        return product_ref(args)

    for nid in g.postorder():
        kind = g.kinds[nid]
        if kind == TRUE:
            value[nid] = _T
        elif kind == FALSE:
            value[nid] = _F
        elif kind == AND:
            lits = [l for _, ls in g.arcs[nid] for l in ls]
            value[nid] = gather(lits, [d for d, _ in g.arcs[nid]], True)
        else:
            arcs = [gather(ls, [d], True) for d, ls in g.arcs[nid]]
            arcs = [a for a in arcs if a != _F]
            if not arcs:
                value[nid] = _F
            elif len(arcs) == 1:
                value[nid] = arcs[0]
            else:
                left, right = materialize(arcs[0]), materialize(arcs[1])
                if _T in (left, right) or (left == -right and pog.is_input(abs(left))):
                    value[nid] = _T
                else:
                    dec = g.decisions[nid]
                    value[nid] = declare("s", (left, right, dec))
    root = materialize_node(g.root)
    if root in (_T, _F):
        v = declare("p", ())
        root = v if root == _T else -v
    pog.set_root(root)
    return Translation(pog, decls, decl_id, state["id"], state["var"])
