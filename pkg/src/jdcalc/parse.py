"""Text form of diagram expressions.

Grammar (whitespace-insensitive)::

    Expr    := ["-"] STerm (("+"|"-") STerm)*  |  "0"
    STerm   := [INT "*"] Diagram
    Diagram := "T(" Labels ")" | "O(" Labels ")" | Generic
    Generic := "G{" "t=" INT ";" "legs=[" Labels "];" "edges=[" Pairs "];" "cyc={" Cycs "}" "}"

Vertices are named v1..vt, legs l1..lm and edges e1..ek in listed order.
"""

from __future__ import annotations

import re

from .diagram import (
    Diagram,
    DiagramError,
    DiagramExpr,
    canonicalize,
    decode,
    label_str,
    make_label,
    tree_diagram,
    wheel_diagram,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(G\{|T\(|O\(|[-+*(){}\[\];:,=])|([A-Za-z]\w*))")


class _Lexer:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("int", m.group(1), start))
            elif m.group(2):
                self.toks.append(("sym", m.group(2), start))
            else:
                self.toks.append(("name", m.group(3), start))
            pos = m.end()
        self.i = 0
        self.end = len(text)

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def pos(self) -> int:
        t = self.peek()
        return t[2] if t else self.end

    def take(self, kind: str | None = None, value: str | None = None) -> str:
        t = self.peek()
        if t is None or (kind and t[0] != kind) or (value and t[1] != value):
            want = value or kind or "token"
            got = t[1] if t else "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", self.pos())
        self.i += 1
        return t[1]

    def accept(self, value: str) -> bool:
        t = self.peek()
        if t and t[1] == value:
            self.i += 1
            return True
        return False


class _Parser:
    def __init__(self, text: str, genus: int | None):
        self.lx = _Lexer(text)
        self.genus = genus

    def label(self) -> int:
        pos = self.lx.pos()
        idx = int(self.lx.take("int"))
        sign = self.lx.take("sym")
        if sign not in "+-":
            raise ParseError("label needs a sign", pos)
        if idx < 1 or (self.genus is not None and idx > self.genus):
            raise ParseError(f"unknown label {idx}{sign} for genus {self.genus}", pos)
        return make_label(idx, sign == "+")

    def labels(self, close: str) -> list[int]:
        out = []
        if self.lx.accept(close):
            return out
        out.append(self.label())
        while self.lx.accept(","):
            out.append(self.label())
        self.lx.take("sym", close)
        return out

    def ref(self) -> tuple[str, int]:
        pos = self.lx.pos()
        name = self.lx.take("name")
        m = re.fullmatch(r"([vle])(\d+)", name)
        if not m or int(m.group(2)) < 1:
            raise ParseError(f"bad reference {name!r}", pos)
        return m.group(1), int(m.group(2)) - 1

    def generic(self, start: int) -> Diagram:
        lx = self.lx
        lx.take("name", "t")
        lx.take("sym", "=")
        t = int(lx.take("int"))
        lx.take("sym", ";")
        lx.take("name", "legs")
        lx.take("sym", "=")
        lx.take("sym", "[")
        legs = self.labels("]")
        lx.take("sym", ";")
        lx.take("name", "edges")
        lx.take("sym", "=")
        lx.take("sym", "[")
        edges: list[tuple[tuple[str, int], tuple[str, int]]] = []
        if not lx.accept("]"):
            while True:
                lx.take("sym", "(")
                a = self.ref()
                lx.take("sym", ",")
                b = self.ref()
                lx.take("sym", ")")
                edges.append((a, b))
                if not lx.accept(","):
                    break
            lx.take("sym", "]")
        lx.take("sym", ";")
        lx.take("name", "cyc")
        lx.take("sym", "=")
        lx.take("sym", "{")
        cyc: dict[int, list[int]] = {}
        if not lx.accept("}"):
            while True:
                pos = lx.pos()
                kind, v = self.ref()
                if kind != "v":
                    raise ParseError("cyclic orders are given per vertex", pos)
                lx.take("sym", ":")
                lx.take("sym", "[")
                es = []
                if not lx.accept("]"):
                    while True:
                        p2 = lx.pos()
                        k2, e = self.ref()
                        if k2 != "e":
                            raise ParseError("cyclic orders list edges", p2)
                        es.append(e)
                        if not lx.accept(","):
                            break
                    lx.take("sym", "]")
                cyc[v] = es
                if not lx.accept(","):
                    break
            lx.take("sym", "}")
        lx.take("sym", "}")
        try:
            return build_generic(t, legs, edges, cyc)
        except (DiagramError, ValueError) as exc:
            raise ParseError(f"invalid diagram literal: {exc}", start) from None

    def diagram(self) -> Diagram:
        pos = self.lx.pos()
        head = self.lx.take("sym")
        if head == "T(":
            labs = self.labels(")")
            if len(labs) < 3:
                raise ParseError("T requires at least 3 labels", pos)
            return tree_diagram(labs)
        if head == "O(":
            labs = self.labels(")")
            if not labs:
                raise ParseError("O requires at least 1 label", pos)
            return wheel_diagram(labs)
        if head == "G{":
            return self.generic(pos)
        raise ParseError(f"expected a diagram, found {head!r}", pos)

    def expr(self) -> DiagramExpr:
        lx = self.lx
        out = DiagramExpr()
        t = lx.peek()
        if t and t[0] == "int" and t[1] == "0" and lx.i + 1 == len(lx.toks):
            lx.take()
            return out
        sign = -1 if lx.accept("-") else 1
        while True:
            coeff = 1
            t = lx.peek()
            if t and t[0] == "int":
                coeff = int(lx.take("int"))
                lx.take("sym", "*")
            out.add_diagram(self.diagram(), sign * coeff)
            if lx.accept("+"):
                sign = 1
            elif lx.accept("-"):
                sign = -1
            else:
                break
        if lx.peek() is not None:
            raise ParseError(f"unexpected {lx.peek()[1]!r}", lx.pos())
        return out


def build_generic(t: int, legs: list[int], edges: list, cyc: dict[int, list[int]]) -> Diagram:
    """Diagram from the generic literal's vertex, leg, edge and cyclic-order data."""
    m = len(legs)
    if set(cyc) != set(range(t)):
        raise DiagramError("every vertex needs exactly one cyclic order")
    # occurrences of each edge at each vertex, in the order given by cyc
    slots: dict[tuple[int, int], list[int]] = {}
    for v, es in cyc.items():
        if len(es) != 3:
            raise DiagramError(f"vertex v{v + 1} must list 3 edges")
        for s, e in enumerate(es):
            if not 0 <= e < len(edges):
                raise DiagramError(f"unknown edge e{e + 1}")
            slots.setdefault((v, e), []).append(3 * v + s)
    mate = [-1] * (3 * t + m)
    used = set()
    for e, ends in enumerate(edges):
        halves = []
        for kind, i in ends:
            if kind == "v":
                if not 0 <= i < t:
                    raise DiagramError(f"unknown vertex v{i + 1}")
                avail = slots.get((i, e), [])
                if not avail:
                    raise DiagramError(f"edge e{e + 1} missing from the cyclic order of v{i + 1}")
                halves.append(avail.pop(0))
            elif kind == "l":
                if not 0 <= i < m:
                    raise DiagramError(f"unknown leg l{i + 1}")
                halves.append(3 * t + i)
            else:
                raise DiagramError("edge endpoints are vertices or legs")
        a, b = halves
        if a in used or b in used:
            raise DiagramError(f"edge e{e + 1} reuses an endpoint")
        used.update((a, b))
        mate[a], mate[b] = b, a
    if any(x for x in slots.values()):
        raise DiagramError("cyclic order mentions an edge not incident to the vertex")
    if -1 in mate:
        raise DiagramError("some vertex or leg has the wrong number of edges")
    return Diagram(t, mate, legs)


def parse_expr(text: str, genus: int | None = None) -> DiagramExpr:
    return _Parser(text, genus).expr()


def parse_diagram(text: str, genus: int | None = None) -> Diagram:
    p = _Parser(text, genus)
    d = p.diagram()
    if p.lx.peek() is not None:
        raise ParseError(f"unexpected {p.lx.peek()[1]!r}", p.lx.pos())
    return d


# ---------------------------------------------------------------- rendering


def _caterpillar_word(d: Diagram) -> list[int] | None:
    n3 = 3 * d.t
    legs_at = [[h for h in range(3 * v, 3 * v + 3) if d.mate[h] >= n3] for v in range(d.t)]
    if d.t == 1:
        return [d.labels[d.mate[h] - n3] for h in range(3)]
    ends = [v for v in range(d.t) if len(legs_at[v]) == 2]
    if len(ends) != 2 or any(len(legs_at[v]) not in (1, 2) for v in range(d.t)):
        return None
    word = [d.labels[d.mate[legs_at[ends[0]][0]] - n3]]
    prev, v = None, ends[0]
    while True:
        inner = [d.mate[h] // 3 for h in range(3 * v, 3 * v + 3) if d.mate[h] < n3]
        nxt = [u for u in inner if u != prev]
        mids = legs_at[v] if v != ends[0] else legs_at[v][1:]
        if v == ends[1] and prev is not None:
            word.extend(d.labels[d.mate[h] - n3] for h in legs_at[v])
            return word
        word.extend(d.labels[d.mate[h] - n3] for h in mids)
        if len(nxt) != 1:
            return None
        prev, v = v, nxt[0]


def _wheel_word(d: Diagram) -> list[int] | None:
    n3 = 3 * d.t
    if d.legs != d.t:
        return None
    nbrs = []
    leg = []
    for v in range(d.t):
        hs = range(3 * v, 3 * v + 3)
        ls = [h for h in hs if d.mate[h] >= n3]
        if len(ls) != 1:
            return None
        leg.append(d.labels[d.mate[ls[0]] - n3])
        nbrs.append([d.mate[h] // 3 for h in hs if d.mate[h] < n3])
    word, prev, v = [], None, 0
    for _ in range(d.t):
        word.append(leg[v])
        nxt = nbrs[v][0] if nbrs[v][0] != prev or d.t <= 2 else nbrs[v][1]
        prev, v = v, nxt
    return word if v == 0 else None


def _generic_text(d: Diagram) -> str:
    n3 = 3 * d.t
    edge_of: dict[int, int] = {}
    pairs = []
    for h in range(d.n_half):
        k = d.mate[h]
        if h < k:
            edge_of[h] = edge_of[k] = len(pairs)
            pairs.append((h, k))

    def name(h: int) -> str:
        return f"v{h // 3 + 1}" if h < n3 else f"l{h - n3 + 1}"

    edges = ",".join(f"({name(a)},{name(b)})" for a, b in pairs)
    cyc = ",".join(f"v{v + 1}:[" + ",".join(f"e{edge_of[h] + 1}" for h in range(3 * v, 3 * v + 3)) + "]" for v in range(d.t))
    legs = ",".join(label_str(x) for x in d.labels)
    return f"G{{t={d.t}; legs=[{legs}]; edges=[{edges}]; cyc={{{cyc}}}}}"


def render_class(key: tuple) -> tuple[str, int]:
    """Text for a class key and the sign relating the text to the key's representative."""
    if len(key) == 1 and len(key[0]) != 2:
        d = decode(key)
        info_loops = (3 * d.t - d.legs) // 2 - d.t + 1 if d.t else 0
        cands = []
        if info_loops == 0 and d.t >= 1:
            w = _caterpillar_word(d)
            if w is not None:
                cands.append(("T", w, tree_diagram))
        if info_loops == 1:
            w = _wheel_word(d)
            if w is not None:
                cands.append(("O", w, wheel_diagram))
        for head, w, build in cands:
            sc = canonicalize(build(w))
            if sc.key == key and sc.sign:
                return f"{head}({','.join(label_str(x) for x in w)})", sc.sign
    return _generic_text(decode(key)), 1


def render(expr: DiagramExpr) -> str:
    """Deterministic text; ``parse_expr(render(e))`` gives back ``e`` (as a ℤ-combination)."""
    parts = []
    for key, c in expr.items():
        text, s = render_class(key)
        c = c * s
        if expr.ring == "Z2":
            c = 1
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = text if mag == 1 else f"{mag}*{text}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
