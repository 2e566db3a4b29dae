"""Definition files and the expression syntax.

A file is a sequence of blocks::

    field { p = 2, e = 1 }
    tmodule carlitz { d = 1, phi_t = [["theta + s"]] }
    motif m { rank = 1, A = [["t - theta"]] }
    point x { module = carlitz, coords = ["theta^2 + 1"] }
    extension c { module = carlitz, B = ["theta"] }
    analytic { P = 30 }

Expressions are polynomials in ``theta``, ``t`` and ``s`` (= sigma, with
s*a = a^q*s) with integer coefficients, ``/`` by nonzero elements of K, and
``^`` for powers.  ``#`` starts a comment.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field

from .anderson import TModule
from .errors import ParseError
from .motif import SigmaModule
from .ratfunc import FunctionField, RatFunc, function_field
from .skew import SkewMatrix, SkewPoly
from .tpoly import TPoly

_BLOCK = re.compile(r"\s*([A-Za-z_]\w*)(?:\s+([A-Za-z_][\w\-]*))?\s*\{")


# ---------------------------------------------------------------------------
# expressions


class _Eval:
    def __init__(self, K: FunctionField, src: str):
        self.K = K
        self.src = src

    def fail(self, node, msg):
        col = getattr(node, "col_offset", 0)
        raise ParseError(f"{msg} at column {col + 1} in {self.src!r}")

    def __call__(self, node):
        K = self.K
        if isinstance(node, ast.Expression):
            return self(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return K(node.value)
        if isinstance(node, ast.Constant) and isinstance(node.value, str):
            # quoted subexpressions, as in ("theta^2+1")/("theta^3")
            return parse_expr(node.value, K)
        if isinstance(node, ast.Name):
            if node.id == "theta":
                return K.theta
            if node.id == "t":
                return TPoly.monomial(K, K.one, 1)
            if node.id == "s":
                return SkewPoly.sigma(K)
            self.fail(node, f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            v = self(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp):
            a, b = self(node.left), self(node.right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int):
                    self.fail(node, "exponent must be a nonnegative integer literal")
                if node.right.value < 0 and not isinstance(a, RatFunc):
                    self.fail(node, "negative powers only for elements of K")
                return a**node.right.value
            if isinstance(node.op, ast.Div):
                if not isinstance(b, RatFunc):
                    self.fail(node, "can only divide by elements of K")
                if b.is_zero():
                    self.fail(node, "division by zero")
                inv = b.inverse()
                return a * inv if isinstance(a, RatFunc) else _scale(a, inv)
            a, b = _unify(self, node, a, b)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        self.fail(node, "unsupported syntax")


def _scale(a, inv):
    if isinstance(a, TPoly):
        return TPoly(a.D, [c * inv for c in a.c])
    return SkewPoly(a.D, [c * inv for c in a.c])


def _unify(ev, node, a, b):
    if type(a) is type(b):
        return a, b
    kinds = {type(a), type(b)}
    if TPoly in kinds and SkewPoly in kinds:
        ev.fail(node, "cannot mix t and s in one expression")
    if isinstance(a, RatFunc):
        a = TPoly(ev.K, [a]) if isinstance(b, TPoly) else SkewPoly(ev.K, [a])
    else:
        b = TPoly(ev.K, [b]) if isinstance(a, TPoly) else SkewPoly(ev.K, [b])
    return a, b


def parse_expr(src: str, K: FunctionField):
    """RatFunc, TPoly or SkewPoly."""
    text = str(src).replace("^", "**")
    try:
        tree = ast.parse(text.strip() or "0", mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error at column {exc.offset} in {src!r}") from None
    return _Eval(K, src)(tree)


def parse_scalar(src: str, K: FunctionField) -> RatFunc:
    v = parse_expr(src, K)
    if not isinstance(v, RatFunc):
        raise ParseError(f"expected an element of K, got {src!r}")
    return v


def parse_tpoly(src: str, K) -> TPoly:
    v = parse_expr(src, K)
    if isinstance(v, SkewPoly):
        raise ParseError(f"expected a polynomial in t, got {src!r}")
    return v if isinstance(v, TPoly) else TPoly(K, [v])


def parse_skew(src: str, K) -> SkewPoly:
    v = parse_expr(src, K)
    if isinstance(v, TPoly):
        raise ParseError(f"expected a polynomial in s, got {src!r}")
    return v if isinstance(v, SkewPoly) else SkewPoly(K, [v])


# ---------------------------------------------------------------------------
# blocks


@dataclass
class Block:
    kind: str
    name: str | None
    fields: dict
    line: int


@dataclass
class Definitions:
    K: FunctionField | None = None
    tmodules: dict = field(default_factory=dict)
    motifs: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    analytic: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def pick(self, kind: str, name: str | None = None):
        table = getattr(self, kind)
        if name is not None:
            if name not in table:
                raise ParseError(f"no {kind[:-1]} named {name!r}")
            return table[name]
        if not table:
            raise ParseError(f"no {kind[:-1]} defined")
        return table[next(k for t, k in self.order if t == kind)]


def _strip_comments(text: str) -> str:
    out = []
    for line in text.splitlines():
        buf, inq = [], False
        for ch in line:
            if ch == '"':
                inq = not inq
            if ch == "#" and not inq:
                break
            buf.append(ch)
        out.append("".join(buf))
    return "\n".join(out)


def split_blocks(text: str):
    text = _strip_comments(text)
    pos, blocks = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return blocks
        m = _BLOCK.match(text, pos)
        line = text.count("\n", 0, pos) + 1
        if not m:
            tok = text[pos:].split()[0] if text[pos:].split() else text[pos:]
            raise ParseError(f"line {line}: expected a block header, found {tok!r}")
        depth, i, inq = 1, m.end(), False
        while i < len(text) and depth:
            ch = text[i]
            if ch == '"':
                inq = not inq
            elif not inq and ch == "{":
                depth += 1
            elif not inq and ch == "}":
                depth -= 1
            i += 1
        if depth:
            raise ParseError(f"line {line}: unterminated block {m.group(1)!r}")
        blocks.append(Block(m.group(1), m.group(2), _fields(text[m.end():i - 1], line), line))
        pos = i


def _fields(body: str, line: int) -> dict:
    parts, depth, inq, cur = [], 0, False, []
    for ch in body:
        if ch == '"':
            inq = not inq
        if not inq:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
                continue
        cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur))
    out = {}
    for part in parts:
        if "=" not in part:
            raise ParseError(f"line {line}: expected key = value, found {part.strip()!r}")
        k, v = part.split("=", 1)
        k, v = k.strip(), v.strip()
        if not re.fullmatch(r"[A-Za-z_]\w*", k):
            raise ParseError(f"line {line}: bad key {k!r}")
        out[k] = _value(v, line)
    return out


def _value(v: str, line: int):
    if v.startswith("[") or v.startswith('"'):
        try:
            return json.loads(v)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {line}: bad literal {v!r} ({exc.msg})") from None
    if re.fullmatch(r"-?\d+", v):
        return int(v)
    if re.fullmatch(r"[A-Za-z_][\w\-]*", v):
        return v
    raise ParseError(f"line {line}: bad value {v!r}")


def _need(b: Block, key: str):
    if key not in b.fields:
        raise ParseError(f"line {b.line}: {b.kind} block needs {key!r}")
    return b.fields[key]


def _matrix(b, key, K, conv):
    rows = _need(b, key)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"line {b.line}: {key} must be a list of rows")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ParseError(f"line {b.line}: ragged matrix {key}")
    return [[conv(str(x), K) for x in r] for r in rows]


def parse_definitions(text: str) -> Definitions:
    defs = Definitions()
    for b in split_blocks(text):
        if b.kind == "field":
            if defs.K is not None:
                raise ParseError(f"line {b.line}: field declared twice")
            p = _need(b, "p")
            e = b.fields.get("e", 1)
            try:
                defs.K = function_field(int(p), int(e))
            except Exception as exc:
                raise ParseError(f"line {b.line}: {exc}") from None
            continue
        if b.kind == "analytic":
            defs.analytic.update(b.fields)
            continue
        if defs.K is None:
            raise ParseError(f"line {b.line}: a field block must come first")
        K = defs.K
        if b.name is None:
            raise ParseError(f"line {b.line}: {b.kind} block needs a name")
        if b.kind == "tmodule":
            phi = _matrix(b, "phi_t", K, parse_skew)
            d = b.fields.get("d", len(phi))
            if d != len(phi) or any(len(r) != d for r in phi):
                raise ParseError(f"line {b.line}: phi_t must be {d} x {d}")
            defs.tmodules[b.name] = TModule(SkewMatrix(K, phi), K, b.name)
        elif b.kind == "motif":
            A = _matrix(b, "A", K, parse_tpoly)
            r = b.fields.get("rank", len(A))
            if r != len(A) or any(len(row) != r for row in A):
                raise ParseError(f"line {b.line}: A must be {r} x {r}")
            defs.motifs[b.name] = SigmaModule(A, K)
        elif b.kind == "point":
            mod = _need(b, "module")
            if mod not in defs.tmodules:
                raise ParseError(f"line {b.line}: unknown module {mod!r}")
            coords = [parse_scalar(str(c), K) for c in _need(b, "coords")]
            if len(coords) != defs.tmodules[mod].dim:
                raise ParseError(f"line {b.line}: point needs {defs.tmodules[mod].dim} coordinates")
            defs.points[b.name] = (mod, coords)
        elif b.kind == "extension":
            mod = _need(b, "module")
            if mod not in defs.tmodules:
                raise ParseError(f"line {b.line}: unknown module {mod!r}")
            B = [parse_tpoly(str(c), K) for c in _need(b, "B")]
            defs.extensions[b.name] = (mod, B)
        else:
            raise ParseError(f"line {b.line}: unknown block kind {b.kind!r}")
        defs.order.append((b.kind + "s" if not b.kind.endswith("s") else b.kind, b.name))
    if defs.K is None:
        raise ParseError("no field block")
    return defs


def format_extension(name: str, module: str, B) -> str:
    return f'extension {name} {{ module = {module}, B = [{", ".join(json.dumps(str(b)) for b in B)}] }}\n'
