"""The invariant engine: memoized skein recursion over crossing switches and
oriented smoothings.

Base cases: a twin that simplifies to two bare arcs counts 1, a configuration
with a detached loop cluster counts 0, and in 2-knot mode a crossingless arc
with no loops counts 1.  At a positive crossing the value is
``switched + multiplier * smoothed``; at a negative one the smoothed branch
is subtracted.  Pairwise (arc-arc) crossings cannot be resolved; when only
those remain the engine reports a structured unresolved outcome rather than
guessing.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .diagram import (
    ARC_LOOP,
    ARC_SELF,
    Component,
    DEFAULT_SURGERY,
    Diagram,
    DiagramError,
    TWIN,
    classify_crossing,
    connected_blocks,
    validate,
)
from .laurent import LaurentPoly, SKEIN_MULTIPLIER
from .moves import canonicalize, simplify

DESCENDING = "descending"
FIRST_ELIGIBLE = "first_eligible"

STANDARD = "standard"
UNKNOTTED = "unknotted"
SPLIT = "split"
MEMO = "memo"
UNRESOLVED = "unresolved"

#: Depth at which parallel evaluation stops forking branch threads.
_PARALLEL_FORK_DEPTH = 2


class UnsupportedRibbonIntersection(DiagramError):
    """Smoothing a crossing between the two twin arcs is outside the calculus."""


class UnsupportedLoopSmoothing(DiagramError):
    """Smoothing a loop-loop or loop-self crossing is outside the calculus."""


class NoEligibleCrossing(DiagramError):
    """No arc-self or arc-loop crossing is available to resolve."""


class SurgeryLabelError(DiagramError):
    """A loop carries a non-default surgery label; the relations do not apply."""


@dataclass
class SkeinConfig:
    multiplier: LaurentPoly = field(default_factory=lambda: SKEIN_MULTIPLIER)
    depth_budget: int = 64
    strategy: str = DESCENDING
    emit_trace: bool = False
    use_memo: bool = True
    parallel: bool = False

    def __post_init__(self) -> None:
        if self.depth_budget < 1:
            raise ValueError("depth_budget must be at least 1")
        if self.multiplier.is_zero():
            raise ValueError("multiplier must be nonzero")
        if self.strategy not in (DESCENDING, FIRST_ELIGIBLE):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class SkeinStats:
    nodes_expanded: int = 0
    memo_hits: int = 0
    max_depth: int = 0


@dataclass(frozen=True)
class TraceNode:
    """One node of the resolution tree (diagrams named by canonical key)."""

    key: str
    sign: int
    terminal: str | None = None
    crossing: int | None = None
    crossing_sign: int | None = None
    value: LaurentPoly | None = None
    reason: str | None = None
    children: tuple[tuple[str, "TraceNode"], ...] = ()

    def leaves(self) -> list["TraceNode"]:
        if not self.children:
            return [self]
        out: list[TraceNode] = []
        for _, child in self.children:
            out.extend(child.leaves())
        return out


@dataclass
class SkeinResult:
    value: LaurentPoly | None
    unresolved_reason: str | None
    trace: TraceNode | None
    stats: SkeinStats
    multiplier: LaurentPoly

    @property
    def resolved(self) -> bool:
        return self.value is not None


# ---------------------------------------------------------------------------
# local skein operations
# ---------------------------------------------------------------------------


def switch_crossing(d: Diagram, crossing: int) -> Diagram:
    """Swap the over/under roles of the crossing's passages and flip its sign."""
    if crossing not in d.crossings:
        raise DiagramError(f"unknown crossing id {crossing}")
    comps = tuple(
        Component(c.kind, c.label,
                  tuple(p.flipped() if p.crossing == crossing else p
                        for p in c.passages),
                  c.surgery)
        for c in d.components)
    signs = dict(d.crossings)
    signs[crossing] = -signs[crossing]
    return Diagram(d.mode, comps, signs)


def _fresh_loop_label(d: Diagram) -> str:
    used = {c.label for c in d.components}
    k = 1
    while f"T{k}" in used:
        k += 1
    return f"T{k}"


def smooth_crossing(d: Diagram, crossing: int) -> Diagram:
    """Oriented smoothing.

    At an arc self-crossing the passage segment strictly between the two
    passages splits off as a new loop (default surgery label); at an
    arc-loop crossing the loop is spliced into the arc, rotated to start
    just after its own passage of the crossing.
    """
    kind = classify_crossing(d, crossing)
    if kind == "arc_arc":
        raise UnsupportedRibbonIntersection(
            f"crossing {crossing} joins the two twin arcs; pairwise ribbon "
            f"intersections cannot be smoothed")
    if kind not in (ARC_SELF, ARC_LOOP):
        raise UnsupportedLoopSmoothing(
            f"crossing {crossing} is {kind}; only arc-self and arc-loop "
            f"crossings can be smoothed")
    slots = d.passage_slots(crossing)

    if kind == ARC_SELF:
        (ci, i), (_, j) = slots
        if i > j:
            i, j = j, i
        arc = d.components[ci]
        between = arc.passages[i + 1:j]
        remainder = arc.passages[:i] + arc.passages[j + 1:]
        new_arc = Component(arc.kind, arc.label, remainder, arc.surgery)
        new_loop = Component("loop", _fresh_loop_label(d), between,
                             DEFAULT_SURGERY)
        comps = (d.components[:ci] + (new_arc,) + d.components[ci + 1:]
                 + (new_loop,))
        signs = {c: s for c, s in d.crossings.items() if c != crossing}
        return Diagram(d.mode, comps, signs)

    (c1, p1), (c2, p2) = slots
    if d.components[c1].is_arc:
        (aci, ai), (lci, li) = (c1, p1), (c2, p2)
    else:
        (aci, ai), (lci, li) = (c2, p2), (c1, p1)
    arc = d.components[aci]
    loop = d.components[lci]
    rotated = loop.passages[li + 1:] + loop.passages[:li]
    new_arc = Component(arc.kind, arc.label,
                        arc.passages[:ai] + rotated + arc.passages[ai + 1:],
                        arc.surgery)
    comps = tuple(
        new_arc if idx == aci else c
        for idx, c in enumerate(d.components) if idx != lci)
    signs = {c: s for c, s in d.crossings.items() if c != crossing}
    return Diagram(d.mode, comps, signs)


# ---------------------------------------------------------------------------
# crossing selection
# ---------------------------------------------------------------------------


def eligible_crossings(d: Diagram) -> list[int]:
    return [cid for cid in d.crossings
            if classify_crossing(d, cid) in (ARC_SELF, ARC_LOOP)]


def _walk_order(d: Diagram) -> list[Component]:
    arcs = sorted((c for c in d.components if c.is_arc), key=lambda c: c.label)
    loops = sorted((c for c in d.components if c.is_loop), key=lambda c: c.label)
    return arcs + loops


def choose_crossing(d: Diagram, strategy: str = DESCENDING) -> int:
    """Pick the crossing to resolve.

    descending: walking the arcs then the loops, return the first eligible
    crossing first met at an under-passage (switching it moves the diagram
    toward descending); fall back to the first eligible crossing met.
    first_eligible: the first eligible crossing in walk order.
    """
    eligible = set(eligible_crossings(d))
    if not eligible:
        raise NoEligibleCrossing(
            "no arc-self or arc-loop crossing remains (only pairwise or "
            "loop-internal crossings)")
    first_role: dict[int, str] = {}
    order: list[int] = []
    for comp in _walk_order(d):
        for p in comp.passages:
            if p.crossing not in first_role:
                first_role[p.crossing] = p.role
                order.append(p.crossing)
    eligible_in_order = [cid for cid in order if cid in eligible]
    if strategy == FIRST_ELIGIBLE:
        return eligible_in_order[0]
    for cid in eligible_in_order:
        if first_role[cid] == "U":
            return cid
    return eligible_in_order[0]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _check_surgery_labels(d: Diagram) -> None:
    for c in d.components:
        if c.is_loop and c.surgery is not None and c.surgery != DEFAULT_SURGERY:
            g, b, a = c.surgery
            raise SurgeryLabelError(
                f"loop {c.label!r} carries surgery label ({g}, {b}/{a}); the "
                f"skein relations are derived only for the default "
                f"(0, 0/1) label")


def _is_split_fixed(fixed: Diagram) -> bool:
    labels = {c.label: c for c in fixed.components}
    return any(
        not any(labels[lab].is_arc for lab in block)
        for block in connected_blocks(fixed))


def _is_unit_fixed(fixed: Diagram) -> bool:
    return not fixed.crossings and not fixed.loops()


class _Engine:
    def __init__(self, cfg: SkeinConfig):
        self.cfg = cfg
        self.memo: dict[str, LaurentPoly] = {}
        self.stats = SkeinStats()
        self.lock = threading.Lock() if cfg.parallel else None
        self.executor = (ThreadPoolExecutor(max_workers=2)
                         if cfg.parallel else None)

    def close(self) -> None:
        if self.executor is not None:
            self.executor.shutdown(wait=True)

    def _bump(self, depth: int) -> None:
        if self.lock:
            with self.lock:
                self.stats.nodes_expanded += 1
                self.stats.max_depth = max(self.stats.max_depth, depth)
        else:
            self.stats.nodes_expanded += 1
            self.stats.max_depth = max(self.stats.max_depth, depth)

    def _memo_get(self, key: str) -> LaurentPoly | None:
        if self.lock:
            with self.lock:
                return self.memo.get(key)
        return self.memo.get(key)

    def _memo_put(self, key: str, value: LaurentPoly) -> None:
        if self.lock:
            with self.lock:
                self.memo.setdefault(key, value)
        else:
            self.memo.setdefault(key, value)

    def run(self, d: Diagram, depth: int
            ) -> tuple[LaurentPoly | None, str | None, TraceNode]:
        fixed, _ = simplify(d)
        self._bump(depth)
        cf = canonicalize(fixed)

        if _is_split_fixed(fixed):
            zero = LaurentPoly.zero()
            return zero, None, TraceNode(cf.key, cf.sign, terminal=SPLIT,
                                         value=zero)
        if _is_unit_fixed(fixed):
            tag = STANDARD if fixed.mode == TWIN else UNKNOTTED
            one = LaurentPoly.one()
            return one, None, TraceNode(cf.key, cf.sign, terminal=tag,
                                        value=one)
        if self.cfg.use_memo:
            stored = self._memo_get(cf.key)
            if stored is not None:
                if self.lock:
                    with self.lock:
                        self.stats.memo_hits += 1
                else:
                    self.stats.memo_hits += 1
                value = stored if cf.sign > 0 else -stored
                return value, None, TraceNode(cf.key, cf.sign, terminal=MEMO,
                                              value=value)
        if depth >= self.cfg.depth_budget:
            return None, "depth-budget-exceeded", TraceNode(
                cf.key, cf.sign, terminal=UNRESOLVED,
                reason="depth-budget-exceeded")
        try:
            cid = choose_crossing(fixed, self.cfg.strategy)
        except NoEligibleCrossing as exc:
            return None, f"no-eligible-crossing: {exc}", TraceNode(
                cf.key, cf.sign, terminal=UNRESOLVED,
                reason="no-eligible-crossing")

        s = fixed.crossings[cid]
        switched = switch_crossing(fixed, cid)
        smoothed = smooth_crossing(fixed, cid)

        if self.executor is not None and depth < _PARALLEL_FORK_DEPTH:
            fut = self.executor.submit(self.run, switched, depth + 1)
            v2, r2, n2 = self.run(smoothed, depth + 1)
            v1, r1, n1 = fut.result()
        else:
            v1, r1, n1 = self.run(switched, depth + 1)
            if r1 is not None:
                # No value can come out of this node; skip the smooth branch.
                return None, r1, TraceNode(cf.key, cf.sign, crossing=cid,
                                           crossing_sign=s,
                                           children=(("switch", n1),))
            v2, r2, n2 = self.run(smoothed, depth + 1)

        children = (("switch", n1), ("smooth", n2))
        node = TraceNode(cf.key, cf.sign, crossing=cid, crossing_sign=s,
                         children=children)
        if r1 is not None or r2 is not None:
            return None, r1 if r1 is not None else r2, node
        assert v1 is not None and v2 is not None
        contrib = self.cfg.multiplier * v2
        value = v1 + contrib if s > 0 else v1 - contrib
        if self.cfg.use_memo:
            self._memo_put(cf.key, value if cf.sign > 0 else -value)
        node = TraceNode(cf.key, cf.sign, crossing=cid, crossing_sign=s,
                         value=value, children=children)
        return value, None, node


def evaluate(d: Diagram, cfg: SkeinConfig | None = None) -> SkeinResult:
    """Evaluate the twin invariant (twin mode) or the 2-knot skein polynomial
    (two_knot mode) of a valid diagram."""
    cfg = cfg if cfg is not None else SkeinConfig()
    report = validate(d)
    if not report.ok:
        raise DiagramError(
            "invalid diagram: " + "; ".join(v.code for v in report.violations))
    _check_surgery_labels(d)
    engine = _Engine(cfg)
    try:
        value, reason, node = engine.run(d, 0)
    finally:
        engine.close()
    trace = node if cfg.emit_trace else None
    return SkeinResult(value, reason, trace, engine.stats, cfg.multiplier)


# ---------------------------------------------------------------------------
# trace export
# ---------------------------------------------------------------------------


def _trace_to_dict(node: TraceNode) -> dict:
    out: dict = {"key": node.key, "sign": node.sign}
    if node.terminal is not None:
        out["terminal"] = node.terminal
        if node.reason is not None:
            out["reason"] = node.reason
    else:
        out["crossing"] = node.crossing
        out["crossing_sign"] = node.crossing_sign
    if node.value is not None:
        out["value"] = node.value.render()
    out["children"] = [
        {"edge": edge, "node": _trace_to_dict(child)}
        for edge, child in node.children
    ]
    return out


def export_trace(result: SkeinResult, fmt: str) -> str:
    """Serialize the resolution tree as JSON or DOT."""
    if result.trace is None:
        raise DiagramError("result carries no trace (emit_trace was off)")
    if fmt == "json":
        return json.dumps(_trace_to_dict(result.trace), indent=2)
    if fmt != "dot":
        raise ValueError(f"unknown trace format {fmt!r}")

    mult = result.multiplier.render()
    lines = ["digraph skein {", '  node [shape=box, fontname="monospace"];']
    counter = [0]

    def visit(node: TraceNode) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        if node.terminal is not None:
            label = node.terminal
            if node.value is not None:
                label += f" = {node.value.render()}"
        else:
            sgn = "+" if (node.crossing_sign or 1) > 0 else "-"
            label = f"skein at c{node.crossing}{sgn}"
            if node.value is not None:
                label += f" = {node.value.render()}"
        if node.sign < 0:
            label += " (sign -1)"
        lines.append(f'  {name} [label="{label}"];')
        for edge, child in node.children:
            child_name = visit(child)
            elabel = "switch" if edge == "switch" else f"smooth x({mult})"
            lines.append(f'  {name} -> {child_name} [label="{elabel}"];')
        return name

    visit(result.trace)
    lines.append("}")
    return "\n".join(lines)
