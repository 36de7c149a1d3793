"""Reading and writing graphs, bindings and evaluated elements as text.

Graphs::

    graph g {
      inputs 2; outputs 1;
      vertex a, b;
      edge a -> b;          # optional ports: edge a:2 -> b:1;
      in 1 -> a; in 2 -> b;
      out b -> 1;
      io 3 -> 2;            # an input-output edge
      loops 1;
      decorate a = "A";
    }

Bindings, one per ``bind`` line (later lines that do not start a new
statement continue the previous one)::

    bind A = tensor 1 1 2: 1 2 3 4
    bind K = kernel-expr 1 1 64: cos(x1 - y1)
    bind S = kernel 0 1 4: 0 1 0 -1

Tensor entries are listed with output indices slowest; integers and
fractions give exact tensors, anything else floats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decorated import DecoratedGraph, PlanarGraph
from .errors import BindingError, ValidationError
from .free_eval import CompletedElement
from .graph import Graph, validate

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<punct>[{};:,=])
  | (?P<word>[A-Za-z_0-9][A-Za-z_0-9.']*)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int


def tokenize(text: str) -> list:
    tokens, line = [], 1
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind in ("ws", "comment"):
            continue
        elif kind == "bad":
            raise ValidationError(f"line {line}: unexpected character {m.group()!r}", line=line)
        else:
            tokens.append(Token(kind, m.group(), line))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def line(self):
        t = self.peek()
        return t.line if t else (self.tokens[-1].line if self.tokens else 1)

    def error(self, message, line=None):
        line = self.line() if line is None else line
        return ValidationError(f"line {line}: {message}", line=line)

    def take(self, text=None, kind=None):
        t = self.peek()
        if t is None:
            raise self.error(f"unexpected end of input, expected {text or kind}")
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            raise self.error(f"expected {text or kind}, got {t.text!r}")
        self.pos += 1
        return t

    def integer(self):
        t = self.take(kind="word")
        if not t.text.isdigit():
            raise self.error(f"expected a non-negative integer, got {t.text!r}", t.line)
        return int(t.text)

    def end(self):
        """``name`` or ``name:port``."""
        name = self.take(kind="word").text
        if self.peek() is not None and self.peek().text == ":":
            self.pos += 1
            return name, self.integer()
        return name, None

    def graphs(self):
        out = []
        while self.peek() is not None:
            out.append(self.graph())
        return out

    def graph(self):
        start = self.take("graph").line
        name = self.take(kind="word").text
        self.take("{")
        declared_in = declared_out = None
        vertices, edges, inputs, outputs, io = [], [], [], [], []
        loops, decorations, planar = 0, {}, False
        seen_in, seen_out = {}, {}

        def claim(table, index, label, line):
            if index in table:
                raise self.error(f"{label} not injective (index {index} already used on line {table[index]})", line)
            table[index] = line

        while self.peek() is not None and self.peek().text != "}":
            t = self.take(kind="word")
            kw, line = t.text, t.line
            if kw == "inputs":
                declared_in = self.integer()
            elif kw == "outputs":
                declared_out = self.integer()
            elif kw == "vertex":
                vertices.append(self.take(kind="word").text)
                while self.peek() is not None and self.peek().text == ",":
                    self.pos += 1
                    vertices.append(self.take(kind="word").text)
            elif kw == "edge":
                src = self.end()
                self.take("->")
                dst = self.end()
                edges.append((src, dst, line))
            elif kw == "in":
                a = self.integer()
                self.take("->")
                claim(seen_in, a, "α", line)
                inputs.append((a, self.end(), line))
            elif kw == "out":
                src = self.end()
                self.take("->")
                b = self.integer()
                claim(seen_out, b, "β", line)
                outputs.append((src, b, line))
            elif kw == "io":
                a = self.integer()
                self.take("->")
                b = self.integer()
                claim(seen_in, a, "α", line)
                claim(seen_out, b, "β", line)
                io.append((a, b))
            elif kw == "loops":
                loops = self.integer()
            elif kw == "decorate":
                v = self.take(kind="word").text
                self.take("=")
                decorations[v] = self.take(kind="string").text[1:-1]
            elif kw == "planar":
                planar = True
            else:
                raise self.error(f"unknown statement {kw!r}", line)
            self.take(";")
        self.take("}")

        known = set(vertices)
        if len(known) != len(vertices):
            raise self.error("vertex declared twice", start)
        for v in list(decorations):
            if v not in known:
                raise self.error(f"decorated vertex {v!r} is not declared", start)

        def check_vertex(v, line):
            if v not in known:
                raise self.error(f"unknown vertex {v!r}", line)

        built_edges = []
        for (s, sp), (t, tp), line in edges:
            check_vertex(s, line)
            check_vertex(t, line)
            built_edges.append((s, t, sp, tp) if sp is not None and tp is not None else (s, t))
            if (sp is None) != (tp is None):
                raise self.error("give ports on both ends of an edge or on neither", line)
        built_inputs = []
        for a, (v, p), line in inputs:
            check_vertex(v, line)
            built_inputs.append((a, v, p) if p is not None else (a, v))
        built_outputs = []
        for (v, p), b, line in outputs:
            check_vertex(v, line)
            built_outputs.append((v, b, p) if p is not None else (v, b))
        g = Graph.build(vertices, built_edges, built_inputs, built_outputs, io, loops)

        problems = validate(g)
        if declared_in is not None and declared_in != g.n_inputs:
            problems.append(f"α not onto [1..{declared_in}]: {g.n_inputs} inputs given")
        if declared_out is not None and declared_out != g.n_outputs:
            problems.append(f"β not onto [1..{declared_out}]: {g.n_outputs} outputs given")
        if problems:
            raise ValidationError(f"graph {name!r} (line {start}): " + "; ".join(problems), problems, start)
        if decorations or planar:
            kind = PlanarGraph if planar else DecoratedGraph
            return name, kind.from_mapping(g, decorations)
        return name, g


def parse_graphs(text: str) -> list:
    """All ``(name, graph)`` pairs in ``text``, in order."""
    return _Parser(text).graphs()


def parse_graph(text: str, name: str | None = None):
    found = parse_graphs(text)
    if not found:
        raise ValidationError("no graph block found")
    if name is None:
        return found[0][1]
    for n, g in found:
        if n == name:
            return g
    raise ValidationError(f"no graph named {name!r}")


# -- emitting graphs ---------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9.']*$")


def _vertex_names(g: Graph) -> dict:
    names = {}
    for pos, v in enumerate(g.vertices):
        s = str(v)
        names[v] = s if isinstance(v, str) and _IDENT.match(s) else f"v{pos}"
    if len(set(names.values())) != len(names):
        names = {v: f"v{pos}" for pos, v in enumerate(g.vertices)}
    return names


def _ports_are_default(g: Graph) -> bool:
    rebuilt = Graph.build(
        g.vertices,
        [(e.source, e.target) for e in g.edges],
        [(e.index, e.target) for e in g.inputs],
        [(f.source, f.index) for f in g.outputs],
        [(e.input_index, e.output_index) for e in g.io],
        g.loops,
    )
    return rebuilt == g


def emit_graph(g, name: str = "g") -> str:
    """The text block for a graph or decorated graph."""
    decorated = g if isinstance(g, DecoratedGraph) else None
    G = decorated.graph if decorated else g
    names = _vertex_names(G)
    ports = not _ports_are_default(G)

    def end(v, p):
        return f"{names[v]}:{p}" if ports else names[v]

    lines = [f"graph {name} {{", f"  inputs {G.n_inputs}; outputs {G.n_outputs};"]
    if decorated is not None and decorated.planar:
        lines.append("  planar;")
    if G.vertices:
        lines.append("  vertex " + ", ".join(names[v] for v in G.vertices) + ";")
    for e in G.edges:
        lines.append(f"  edge {end(e.source, e.source_port)} -> {end(e.target, e.target_port)};")
    for e in sorted(G.inputs, key=lambda e: e.index):
        lines.append(f"  in {e.index} -> {end(e.target, e.port)};")
    for f in sorted(G.outputs, key=lambda f: f.index):
        lines.append(f"  out {end(f.source, f.port)} -> {f.index};")
    for e in sorted(G.io):
        lines.append(f"  io {e.input_index} -> {e.output_index};")
    if G.loops:
        lines.append(f"  loops {G.loops};")
    if decorated is not None:
        for v, x in zip(G.vertices, decorated.decorations):
            if x is not None:
                lines.append(f'  decorate {names[v]} = "{x}";')
    lines.append("}")
    return "\n".join(lines)


# -- bindings -------------------------------------------------------------------------


@dataclass(frozen=True)
class Binding:
    key: str
    kind: str  # "tensor" | "kernel" | "kernel-expr"
    k: int
    l: int
    size: int  # d for tensors, N for kernels
    payload: object  # list of numbers, or an expression string
    line: int


_BIND = re.compile(r"bind\s+(\S+)\s*=\s*(tensor|kernel-expr|kernel)\s+(\d+)\s+(\d+)\s+(\d+)\s*:(.*)$", re.S)


def _number(text: str, line: int):
    try:
        if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"line {line}: {text!r} is not a number", line=line) from None


def parse_bindings(text: str) -> dict:
    statements = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("bind "):
            statements.append([n, body])
        elif statements:
            statements[-1][1] += " " + body
        else:
            raise ValidationError(f"line {n}: expected 'bind'", line=n)
    out = {}
    for line, stmt in statements:
        m = _BIND.match(stmt)
        if not m:
            raise ValidationError(f"line {line}: cannot read binding {stmt!r}", line=line)
        key, kind, k, l, size, rest = m.groups()
        key = key.strip('"')
        if key in out:
            raise ValidationError(f"line {line}: {key!r} bound twice", line=line)
        k, l, size = int(k), int(l), int(size)
        payload = rest.strip() if kind == "kernel-expr" else [_number(t, line) for t in rest.split()]
        out[key] = Binding(key, kind, k, l, size, payload, line)
    return out


def materialize(bindings: dict, target) -> dict:
    """Turn parsed bindings into elements of ``target``."""
    from .kernel_trap import KernelTrap
    from .tensor_trap import TensorTrap

    out = {}
    for key, b in bindings.items():
        if isinstance(target, TensorTrap):
            if b.kind != "tensor":
                raise BindingError(f"{key!r} is a {b.kind} binding; the tensor target needs tensors")
            if b.size != target.d:
                raise BindingError(f"{key!r} has d={b.size}; the target has d={target.d}")
            values = b.payload if target.exact else [float(v) for v in b.payload]
            out[key] = target.tensor(b.k, b.l, values)
        elif isinstance(target, KernelTrap):
            if b.kind == "tensor":
                raise BindingError(f"{key!r} is a tensor binding; the kernel target needs kernels")
            if b.size != target.N:
                raise BindingError(f"{key!r} has N={b.size}; the target has N={target.N}")
            if b.kind == "kernel":
                out[key] = target.from_samples(b.k, b.l, [float(v) for v in b.payload])
            else:
                out[key] = target.from_expr(b.k, b.l, b.payload)
        else:
            raise BindingError(f"bindings cannot be materialised for {target.name}")
    return out


# -- emitting elements ---------------------------------------------------------------


def format_number(v) -> str:
    """Shortest text that reads back to the same value."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def _rows(data: np.ndarray, k: int, width: int) -> list:
    flat = [format_number(v) for v in data.reshape(-1)]
    row = width**k if k else 1
    return ["  " + " ".join(flat[s : s + row]) for s in range(0, len(flat), row)]


def emit_element(x) -> str:
    """Text for a tensor, kernel, completed element or graph."""
    from .kernel_trap import GridKernel
    from .tensor_trap import DenseTensor

    if isinstance(x, CompletedElement):
        if not x.terms:
            return "0"
        parts = []
        for d, a in x.terms:
            body = emit_element(a)
            parts.append(f"O^{d} * {body}")
        return "\n+ ".join(parts)
    if isinstance(x, DenseTensor):
        if x.arity == (0, 0):
            return f"scalar {format_number(x.data[()])}"
        return "\n".join([f"tensor {x.k} {x.l} {x.d}:"] + _rows(x.data, x.k, x.d))
    if isinstance(x, GridKernel):
        samples = x.samples  # refuses formal delta factors
        if x.arity == (0, 0):
            return f"scalar {format_number(samples[()])}"
        return "\n".join([f"kernel {x.k} {x.l} {x.N}:"] + _rows(samples, x.k, x.N))
    if isinstance(x, (Graph, DecoratedGraph)):
        return emit_graph(x)
    raise ValidationError(f"cannot print {type(x).__name__}")
